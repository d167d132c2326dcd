#include "scatfp/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

#include "scatfp/errors.hpp"

namespace scatfp {

std::string format_number(double v) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) return "nan";
  return {buf.data(), end};
}

namespace {

std::ofstream open_text(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("error writing " + path.string());
}

void write_curve_rows(std::ostream& out, std::span<const CurvePoint> curve) {
  out << "threshold,far,frr\n";
  for (const auto& p : curve)
    out << format_number(p.threshold) << ',' << format_number(p.far) << ',' << format_number(p.frr) << '\n';
}

}  // namespace

void write_report_csv(const std::filesystem::path& path, const EvalReport& report) {
  auto out = open_text(path);
  write_curve_rows(out, report.curve);
  out << "\nmetric,value\n"
      << "accuracy," << format_number(report.accuracy) << '\n'
      << "eer," << format_number(report.eer) << '\n'
      << "eer_threshold," << format_number(report.eer_threshold) << '\n';
  finish(out, path);
}

void write_confusion_csv(const std::filesystem::path& path, const ConfusionMatrix& confusion) {
  auto out = open_text(path);
  out << "true\\predicted";
  for (int c : confusion.classes) out << ',' << c;
  out << '\n';
  for (std::size_t r = 0; r < confusion.classes.size(); ++r) {
    out << confusion.classes[r];
    for (int n : confusion.counts[r]) out << ',' << n;
    out << '\n';
  }
  finish(out, path);
}

void write_curve_csv(const std::filesystem::path& path, std::span<const CurvePoint> curve, const EerPoint& eer) {
  auto out = open_text(path);
  write_curve_rows(out, curve);
  out << "\nmetric,value\n"
      << "eer," << format_number(eer.eer) << '\n'
      << "eer_threshold," << format_number(eer.threshold) << '\n';
  finish(out, path);
}

void write_accuracy_csv(const std::filesystem::path& path, std::span<const ComponentAccuracy> points) {
  auto out = open_text(path);
  out << "components,accuracy\n";
  for (const auto& p : points) out << p.components << ',' << format_number(p.accuracy) << '\n';
  finish(out, path);
}

namespace {

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool markers = false;
};

// Round step so an axis gets roughly `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

std::string tick_label(double v, double step) {
  const int digits = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step)));
  return fixed(v, digits);
}

void write_line_plot(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, std::span<const Series> series, double ymin, double ymax,
                     const std::string& annotation) {
  constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;

  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0.0;
    xmax = 1.0;
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  auto out = open_text(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";

  const double xstep = nice_step(xmax - xmin, 6);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9 * xstep; t += xstep) {
    out << "<line x1=\"" << fixed(sx(t)) << "\" y1=\"" << kTop << "\" x2=\"" << fixed(sx(t)) << "\" y2=\""
        << kTop + ph << "\" stroke=\"#e0e0e0\"/>\n"
        << "<text x=\"" << fixed(sx(t)) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
        << tick_label(t, xstep) << "</text>\n";
  }
  const double ystep = nice_step(ymax - ymin, 5);
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-9 * ystep; t += ystep) {
    out << "<line x1=\"" << kLeft << "\" y1=\"" << fixed(sy(t)) << "\" x2=\"" << kLeft + pw << "\" y2=\""
        << fixed(sy(t)) << "\" stroke=\"#e0e0e0\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << fixed(sy(t) + 4) << "\" text-anchor=\"end\">"
        << tick_label(t, ystep) << "</text>\n";
  }
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n"
      << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << ylabel << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : s.points) out << fixed(sx(x)) << ',' << fixed(sy(y)) << ' ';
    out << "\"/>\n";
    if (s.markers) {
      for (const auto& [x, y] : s.points)
        out << "<circle cx=\"" << fixed(sx(x)) << "\" cy=\"" << fixed(sy(y)) << "\" r=\"3\" fill=\"" << s.color
            << "\"/>\n";
    }
    const double ly = kTop + 16 + 16 * static_cast<double>(i);
    out << "<line x1=\"" << kLeft + pw - 110 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kLeft + pw - 90
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kLeft + pw - 84 << "\" y=\"" << ly << "\">" << s.name << "</text>\n";
  }
  if (!annotation.empty()) out << annotation;
  out << "</svg>\n";
  finish(out, path);
}

}  // namespace

void write_far_frr_svg(const std::filesystem::path& path, std::span<const CurvePoint> curve, const EerPoint& eer) {
  Series far{"FAR", "#d62728", {}, false};
  Series frr{"FRR", "#1f77b4", {}, false};
  for (const auto& p : curve) {
    far.points.emplace_back(p.threshold, p.far);
    frr.points.emplace_back(p.threshold, p.frr);
  }
  double xmin = curve.empty() ? 0.0 : curve.front().threshold;
  double xmax = curve.empty() ? 1.0 : curve.back().threshold;
  if (xmax <= xmin) xmax = xmin + 1.0;
  constexpr double kLeft = 70, kTop = 40, kPw = 550, kPh = 320;
  const double ex = kLeft + (eer.threshold - xmin) / (xmax - xmin) * kPw;
  const double ey = kTop + (1.0 - eer.eer) * kPh;
  std::string mark;
  if (eer.threshold >= xmin && eer.threshold <= xmax) {
    mark = "<circle cx=\"" + fixed(ex) + "\" cy=\"" + fixed(ey) + "\" r=\"4\" fill=\"black\"/>\n" +
           "<text x=\"" + fixed(ex + 8) + "\" y=\"" + fixed(ey - 8) + "\">EER " + fixed(100.0 * eer.eer) +
           "%</text>\n";
  }
  const std::array<Series, 2> series{far, frr};
  write_line_plot(path, "FAR and FRR versus distance threshold", "distance threshold", "error rate", series, 0.0,
                  1.0, mark);
}

void write_accuracy_svg(const std::filesystem::path& path, std::span<const ComponentAccuracy> points) {
  Series acc{"accuracy", "#2ca02c", {}, true};
  double ymin = 1.0;
  for (const auto& p : points) {
    acc.points.emplace_back(p.components, p.accuracy);
    ymin = std::min(ymin, p.accuracy);
  }
  ymin = std::max(0.0, std::floor(ymin * 10.0) / 10.0 - 0.1);
  const std::array<Series, 1> series{acc};
  write_line_plot(path, "Recognition accuracy versus PCA components", "number of PCA components",
                  "accuracy", series, ymin, 1.0, "");
}

}  // namespace scatfp
