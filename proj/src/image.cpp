#include "scatfp/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace scatfp {

GrayImage::GrayImage(RealGrid pixels) : pixels_(std::move(pixels)) {
  if (pixels_.empty()) throw ArgumentError("image must not be empty");
  for (double v : pixels_.values()) {
    if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("image intensity outside [0, 1]");
  }
}

GrayImage::GrayImage(int width, int height, double fill)
    : GrayImage(RealGrid(width, height, fill)) {}

GrayImage resize_bilinear(const GrayImage& image, int target_width, int target_height) {
  if (target_width <= 0 || target_height <= 0)
    throw ArgumentError("resize target dimensions must be positive");
  const int sw = image.width();
  const int sh = image.height();
  if (sw == target_width && sh == target_height) return image;

  const double sx = static_cast<double>(sw) / target_width;
  const double sy = static_cast<double>(sh) / target_height;

  // Source coordinate of each target column / row, split into (index, fraction).
  auto sample_axis = [](int target, double scale, int source) {
    std::vector<std::pair<int, double>> taps(target);
    for (int i = 0; i < target; ++i) {
      double s = (i + 0.5) * scale - 0.5;
      s = std::clamp(s, 0.0, static_cast<double>(source - 1));
      int i0 = static_cast<int>(std::floor(s));
      taps[i] = {i0, s - i0};
    }
    return taps;
  };
  const auto xs = sample_axis(target_width, sx, sw);
  const auto ys = sample_axis(target_height, sy, sh);

  RealGrid out(target_width, target_height);
  for (int y = 0; y < target_height; ++y) {
    const auto [y0, fy] = ys[y];
    const int y1 = std::min(y0 + 1, sh - 1);
    for (int x = 0; x < target_width; ++x) {
      const auto [x0, fx] = xs[x];
      const int x1 = std::min(x0 + 1, sw - 1);
      const double top = std::lerp(image(y0, x0), image(y0, x1), fx);
      const double bottom = std::lerp(image(y1, x0), image(y1, x1), fx);
      out(y, x) = std::clamp(std::lerp(top, bottom, fy), 0.0, 1.0);
    }
  }
  return GrayImage(std::move(out));
}

namespace {

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading image: " + path.string());
  return bytes;
}

// Netpbm header token reader that skips whitespace and '#' comments.
class PnmTokens {
 public:
  PnmTokens(const std::string& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  long next_int() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) throw IoError("malformed PGM header: " + path_.string());
    return std::stol(bytes_.substr(start, pos_ - start));
  }
  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 2;
};

GrayImage decode_pgm(const std::string& bytes, const std::filesystem::path& path) {
  const bool binary = bytes[1] == '5';
  PnmTokens tok(bytes, path);
  const long width = tok.next_int();
  const long height = tok.next_int();
  const long maxval = tok.next_int();
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535)
    throw IoError("invalid PGM dimensions or maxval: " + path.string());

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> values(count);
  const double top = static_cast<double>(maxval);
  if (binary) {
    tok.advance(1);  // single whitespace byte after maxval
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (bytes.size() < tok.pos() + count * bpp) throw IoError("truncated PGM data: " + path.string());
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + tok.pos());
    for (std::size_t i = 0; i < count; ++i) {
      unsigned v = bpp == 1 ? p[i] : (unsigned{p[2 * i]} << 8) | p[2 * i + 1];  // big-endian
      values[i] = std::min(1.0, v / top);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      values[i] = std::min(1.0, static_cast<double>(tok.next_int()) / top);
    }
  }
  return GrayImage(RealGrid(static_cast<int>(width), static_cast<int>(height), std::move(values)));
}

GrayImage decode_with_opencv(const std::string& bytes, const std::filesystem::path& path) {
  std::vector<unsigned char> buf(bytes.begin(), bytes.end());
  cv::Mat mat = cv::imdecode(buf, cv::IMREAD_UNCHANGED);
  if (mat.empty()) throw IoError("unsupported or corrupt image: " + path.string());

  double maxval = 1.0;
  switch (mat.depth()) {
    case CV_8U: maxval = 255.0; break;
    case CV_16U: maxval = 65535.0; break;
    case CV_32F:
    case CV_64F: maxval = 1.0; break;
    default: throw IoError("unsupported pixel depth: " + path.string());
  }
  cv::Mat m64;
  mat.convertTo(m64, CV_64F);
  const int channels = m64.channels();
  RealGrid out(m64.cols, m64.rows);
  for (int y = 0; y < m64.rows; ++y) {
    const double* row = m64.ptr<double>(y);
    for (int x = 0; x < m64.cols; ++x) {
      const double* px = row + static_cast<std::ptrdiff_t>(x) * channels;
      double v = 0.0;
      if (channels == 1 || channels == 2) {
        v = px[0];
      } else {
        // OpenCV stores colour as BGR(A).
        v = kLumaR * px[2] + kLumaG * px[1] + kLumaB * px[0];
      }
      out(y, x) = std::clamp(v / maxval, 0.0, 1.0);
    }
  }
  return GrayImage(std::move(out));
}

}  // namespace

GrayImage read_image(const std::filesystem::path& path) {
  const std::string bytes = read_file_bytes(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5'))
    return decode_pgm(bytes, path);
  return decode_with_opencv(bytes, path);
}

GrayImage load_image(const std::filesystem::path& path, int target_width, int target_height) {
  if (target_width <= 0 || target_height <= 0)
    throw ArgumentError("target image dimensions must be positive");
  return resize_bilinear(read_image(path), target_width, target_height);
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image: " + path.string());
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  std::string data(image.pixels().size(), '\0');
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = static_cast<char>(static_cast<unsigned char>(std::lround(image.pixels()[i] * 255.0)));
  }
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("error writing image: " + path.string());
}

GrayImage circular_shift(const GrayImage& image, int dx, int dy) {
  const int w = image.width();
  const int h = image.height();
  RealGrid out(w, h);
  for (int y = 0; y < h; ++y) {
    const int sy = ((y - dy) % h + h) % h;
    for (int x = 0; x < w; ++x) {
      const int sx = ((x - dx) % w + w) % w;
      out(y, x) = image(sy, sx);
    }
  }
  return GrayImage(std::move(out));
}

}  // namespace scatfp
