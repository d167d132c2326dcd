#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "scatfp/errors.hpp"
#include "scatfp/image.hpp"
#include "scatfp/manifest.hpp"
#include "test_util.hpp"

using namespace scatfp;

namespace {

GrayImage gradient(int w, int h) {
  RealGrid px(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) px(y, x) = static_cast<double>((x * 7 + y * 13) % 256) / 255.0;
  return GrayImage(std::move(px));
}

std::vector<LabeledPath> entries(int subjects, int per_subject) {
  std::vector<LabeledPath> out;
  for (int s = 0; s < subjects; ++s)
    for (int i = 0; i < per_subject; ++i)
      out.push_back({"s" + std::to_string(s) + "_" + std::to_string(i) + ".pgm", 100 + s});
  return out;
}

}  // namespace

TEST(GrayImage, RejectsOutOfRangeIntensities) {
  EXPECT_THROW(GrayImage(RealGrid(2, 2, 1.5)), ArgumentError);
  EXPECT_THROW(GrayImage(RealGrid(2, 2, -0.1)), ArgumentError);
  EXPECT_NO_THROW(GrayImage(RealGrid(2, 2, 1.0)));
}

TEST(LoadImage, DownsizesToTarget) {
  testutil::TempDir dir;
  write_pgm(dir / "big.pgm", gradient(320, 240));
  const GrayImage img = load_image(dir / "big.pgm", 80, 60);
  EXPECT_EQ(img.width(), 80);
  EXPECT_EQ(img.height(), 60);
}

TEST(LoadImage, SameSizeIsIdentity) {
  testutil::TempDir dir;
  const GrayImage src = gradient(80, 60);
  write_pgm(dir / "same.pgm", src);
  EXPECT_EQ(load_image(dir / "same.pgm", 80, 60), src);
}

TEST(LoadImage, ConstantWhiteStaysWhite) {
  testutil::TempDir dir;
  write_pgm(dir / "white.pgm", GrayImage(37, 23, 1.0));
  const GrayImage img = load_image(dir / "white.pgm", 80, 60);
  for (double v : img.pixels().values()) EXPECT_EQ(v, 1.0);
}

TEST(LoadImage, AsciiPgmHonoursMaxval) {
  testutil::TempDir dir;
  testutil::spit(dir / "a.pgm", "P2\n# comment\n3 1\n10\n0 5 10\n");
  const GrayImage img = read_image(dir / "a.pgm");
  ASSERT_EQ(img.width(), 3);
  EXPECT_DOUBLE_EQ(img(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(img(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(img(0, 2), 1.0);
}

TEST(LoadImage, SixteenBitPgm) {
  testutil::TempDir dir;
  std::string bytes = "P5\n2 1\n65535\n";
  bytes += std::string("\x00\x00\xff\xff", 4);
  testutil::spit(dir / "b.pgm", bytes);
  const GrayImage img = read_image(dir / "b.pgm");
  EXPECT_DOUBLE_EQ(img(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(img(0, 1), 1.0);
}

TEST(LoadImage, ColourPngUsesLuma) {
  testutil::TempDir dir;
  cv::Mat bgr(4, 6, CV_8UC3, cv::Scalar(30, 200, 90));  // B, G, R
  ASSERT_TRUE(cv::imwrite((dir / "c.png").string(), bgr));
  const GrayImage img = load_image(dir / "c.png", 6, 4);
  const double expected = (kLumaR * 90 + kLumaG * 200 + kLumaB * 30) / 255.0;
  for (double v : img.pixels().values()) EXPECT_NEAR(v, expected, 1e-12);
}

TEST(LoadImage, GrayscaleBmp) {
  testutil::TempDir dir;
  cv::Mat gray(5, 5, CV_8UC1, cv::Scalar(51));
  ASSERT_TRUE(cv::imwrite((dir / "g.bmp").string(), gray));
  const GrayImage img = load_image(dir / "g.bmp", 5, 5);
  for (double v : img.pixels().values()) EXPECT_NEAR(v, 0.2, 1e-12);
}

TEST(LoadImage, Errors) {
  testutil::TempDir dir;
  EXPECT_THROW(load_image(dir / "missing.png", 80, 60), IoError);
  testutil::spit(dir / "junk.png", "not an image");
  EXPECT_THROW(load_image(dir / "junk.png", 80, 60), IoError);
  write_pgm(dir / "ok.pgm", gradient(8, 8));
  EXPECT_THROW(load_image(dir / "ok.pgm", 0, 60), ArgumentError);
  EXPECT_THROW(load_image(dir / "ok.pgm", 80, 0), ArgumentError);
}

TEST(Resize, IdempotentAtTarget) {
  const GrayImage once = resize_bilinear(gradient(123, 77), 80, 60);
  EXPECT_EQ(resize_bilinear(once, 80, 60), once);
}

TEST(Resize, ConstantMeanIsExact) {
  for (double c : {0.0, 0.25, 0.3, 0.7, 1.0}) {
    const GrayImage out = resize_bilinear(GrayImage(97, 41, c), 80, 60);
    long double sum = 0.0L;
    for (double v : out.pixels().values()) {
      EXPECT_EQ(v, c);
      sum += v;
    }
    EXPECT_NEAR(static_cast<double>(sum / out.pixels().size()), c, 1e-15);
  }
}

TEST(Resize, BilinearPixelCentres) {
  // 2x1 -> 4x1: centres at -0.25, 0.25, 0.75, 1.25 in source coordinates.
  const GrayImage src(RealGrid(2, 1, std::vector<double>{0.0, 1.0}));
  const GrayImage out = resize_bilinear(src, 4, 1);
  EXPECT_DOUBLE_EQ(out(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(out(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(out(0, 2), 0.75);
  EXPECT_DOUBLE_EQ(out(0, 3), 1.0);
}

TEST(Pgm, RoundTripAtEightBits) {
  testutil::TempDir dir;
  const GrayImage src = gradient(17, 9);
  write_pgm(dir / "r.pgm", src);
  EXPECT_EQ(read_image(dir / "r.pgm"), src);
}

TEST(CircularShift, WrapsAround) {
  const GrayImage src = gradient(5, 4);
  const GrayImage moved = circular_shift(src, 2, -1);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 5; ++x) EXPECT_EQ(moved((y - 1 + 4) % 4, (x + 2) % 5), src(y, x));
}

TEST(Manifest, ParsesTwoSubjects) {
  testutil::TempDir dir;
  std::string text = "# two subjects\n";
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < 10; ++i)
      text += "img" + std::to_string(s) + std::to_string(i) + ".png\t" + std::to_string(7 - s) + "\t" +
              (i < 5 ? "train" : "test") + "\n";
  testutil::spit(dir / "m.tsv", text);
  const DatasetManifest m = load_manifest(dir / "m.tsv");
  EXPECT_EQ(m.subject_count(), 2);
  EXPECT_EQ(m.subject_ids, (std::vector<std::int64_t>{7, 6}));
  EXPECT_EQ(m.train().size(), 10u);
  EXPECT_EQ(m.test().size(), 10u);
  EXPECT_EQ(m.entries.front().path, dir.path() / "img00.png");
  EXPECT_EQ(m.entries.back().label, 1);
}

TEST(Manifest, PaperScaleLabelCount) {
  testutil::TempDir dir;
  std::string text;
  for (int s = 0; s < 148; ++s)
    for (int i = 0; i < 10; ++i)
      text += "f" + std::to_string(s) + "_" + std::to_string(i) + ".bmp\t" + std::to_string(1000 + s) + "\t" +
              (i % 2 ? "test" : "train") + "\n";
  testutil::spit(dir / "m.tsv", text);
  const DatasetManifest m = load_manifest(dir / "m.tsv");
  EXPECT_EQ(m.entries.size(), 1480u);
  EXPECT_EQ(m.subject_count(), 148);
}

TEST(Manifest, TestOnlySubjectIsRejected) {
  testutil::TempDir dir;
  testutil::spit(dir / "m.tsv", "a.png\t1\ttrain\nb.png\t1\ttest\nc.png\t2\ttest\n");
  EXPECT_THROW(load_manifest(dir / "m.tsv"), ValidationError);
}

TEST(Manifest, MalformedLineReportsLineNumber) {
  testutil::TempDir dir;
  testutil::spit(dir / "m.tsv", "# header\na.png\t1\ttrain\nb.png\tone\ttrain\n");
  try {
    load_manifest(dir / "m.tsv");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  testutil::spit(dir / "m2.tsv", "a.png\t1\tvalidation\n");
  EXPECT_THROW(load_manifest(dir / "m2.tsv"), ParseError);
  testutil::spit(dir / "m3.tsv", "a.png\t1\ttrain\nb.png\t1\n");
  EXPECT_THROW(read_manifest(dir / "m3.tsv"), ParseError);
}

TEST(Manifest, UnsplitFileNeedsSplitHalf) {
  testutil::TempDir dir;
  testutil::spit(dir / "m.tsv", "a.png\t1\nb.png\t1\n");
  const ManifestFile f = read_manifest(dir / "m.tsv");
  EXPECT_FALSE(f.manifest.has_value());
  EXPECT_EQ(f.unsplit.size(), 2u);
  EXPECT_THROW(load_manifest(dir / "m.tsv"), ValidationError);
  EXPECT_THROW(read_manifest(dir / "absent.tsv"), IoError);
}

TEST(Manifest, WriteReadRoundTrip) {
  testutil::TempDir dir;
  const DatasetManifest m = split_half(entries(3, 4), 9);
  DatasetManifest absolute = m;
  for (auto& e : absolute.entries) e.path = dir.path() / e.path;
  write_manifest(dir / "m.tsv", absolute);
  EXPECT_EQ(load_manifest(dir / "m.tsv"), absolute);
}

TEST(SplitHalf, EvenAndOddCounts) {
  const DatasetManifest ten = split_half(entries(1, 10), 1);
  EXPECT_EQ(ten.train().size(), 5u);
  EXPECT_EQ(ten.test().size(), 5u);
  const DatasetManifest three = split_half(entries(1, 3), 1);
  EXPECT_EQ(three.train().size(), 2u);
  EXPECT_EQ(three.test().size(), 1u);
  EXPECT_THROW(split_half(entries(1, 1), 1), ValidationError);
}

TEST(SplitHalf, DeterministicPerSeed) {
  const auto e = entries(5, 10);
  EXPECT_EQ(split_half(e, 42), split_half(e, 42));
  bool differs = false;
  for (std::uint64_t s = 0; s < 8 && !differs; ++s) differs = !(split_half(e, s) == split_half(e, 42));
  EXPECT_TRUE(differs);
}

TEST(SplitHalf, PartitionProperty) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LabeledPath> e;
    const int subjects = 1 + static_cast<int>(rng() % 6);
    for (int s = 0; s < subjects; ++s) {
      const int n = 2 + static_cast<int>(rng() % 7);
      const std::int64_t id = static_cast<std::int64_t>(rng() % 1000) * 10 + s;
      for (int i = 0; i < n; ++i) e.push_back({std::to_string(trial) + "_" + std::to_string(s) + "_" + std::to_string(i), id});
    }
    const DatasetManifest m = split_half(e, rng());
    std::set<std::string> train, test, all;
    for (const auto& x : m.train()) train.insert(x.path.string());
    for (const auto& x : m.test()) test.insert(x.path.string());
    for (const auto& x : e) all.insert(x.path.string());
    for (const auto& p : test) EXPECT_EQ(train.count(p), 0u);
    std::set<std::string> uni = train;
    uni.insert(test.begin(), test.end());
    EXPECT_EQ(uni, all);
    std::set<int> train_labels;
    for (const auto& x : m.train()) train_labels.insert(x.label);
    for (const auto& x : m.test()) EXPECT_EQ(train_labels.count(x.label), 1u);
    EXPECT_EQ(static_cast<int>(train_labels.size()), m.subject_count());
  }
}

TEST(Manifest, HoldoutDropsLeadingSubjects) {
  const DatasetManifest m = split_half(entries(4, 4), 3);
  const DatasetManifest kept = drop_subjects(m, 1);
  EXPECT_EQ(kept.subject_count(), 3);
  EXPECT_EQ(kept.subject_ids.front(), 101);
  EXPECT_EQ(kept.entries.size(), 12u);
  EXPECT_EQ(kept.entries.front().label, 0);
  EXPECT_THROW(drop_subjects(m, 4), ValidationError);
}
