#include "scatfp/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scatfp/image.hpp"

namespace scatfp {

namespace {

using cplx = std::complex<double>;

// Signed offset of pixel index p on a periodic axis of length n, in (-n/2, n/2].
int centred(int p, int n) { return p > n / 2 ? p - n : p; }

// Number of periods to sum on each side so that a Gaussian of the given
// width has decayed to nothing at the truncation boundary.
int period_reach(double width, int n) { return static_cast<int>(std::ceil(6.0 * width / n)) + 1; }

struct Gabor {
  double sigma;
  double slant;
  double xi;
  double theta;
};

// Periodised anisotropic Gabor and its envelope sampled on the grid.
void sample_gabor(const Gabor& g, int width, int height, ComplexGrid& wave, RealGrid& envelope) {
  const double c = std::cos(g.theta);
  const double s = std::sin(g.theta);
  const double inv2s2 = 1.0 / (2.0 * g.sigma * g.sigma);
  const double norm = g.slant / (2.0 * std::numbers::pi * g.sigma * g.sigma);
  const double reach_width = g.sigma / std::min(g.slant, 1.0);
  const int kx = period_reach(reach_width, width);
  const int ky = period_reach(reach_width, height);
  const double slant2 = g.slant * g.slant;

  for (int py = 0; py < height; ++py) {
    for (int px = 0; px < width; ++px) {
      cplx acc = 0.0;
      double env = 0.0;
      for (int b = -ky; b <= ky; ++b) {
        const double y = centred(py, height) + static_cast<double>(b) * height;
        for (int a = -kx; a <= kx; ++a) {
          const double x = centred(px, width) + static_cast<double>(a) * width;
          const double u = c * x + s * y;
          const double v = -s * x + c * y;
          const double e = (u * u + slant2 * v * v) * inv2s2;
          if (e > 700.0) continue;
          const double gauss = norm * std::exp(-e);
          env += gauss;
          acc += gauss * cplx(std::cos(g.xi * u), std::sin(g.xi * u));
        }
      }
      wave(py, px) = acc;
      envelope(py, px) = env;
    }
  }
}

ComplexGrid forward(const Fft2d& fft, const ComplexGrid& spatial) {
  ComplexGrid out(spatial.width(), spatial.height());
  fft.forward(spatial.values(), out.values());
  return out;
}

}  // namespace

const ComplexGrid& FilterBank::bandpass(int scale, int orientation) const {
  if (scale < 0 || scale >= scales_ || orientation < 0 || orientation >= orientations_)
    throw ArgumentError("band-pass filter index out of range");
  return bandpass_[static_cast<std::size_t>(scale) * orientations_ + orientation];
}

FilterBank build_filter_bank(int scales, int orientations, int width, int height,
                             const MorletConfig& config) {
  if (scales < 1 || orientations < 1) throw ArgumentError("filter bank needs J >= 1 and L >= 1");
  if (scales > 30) throw ArgumentError("scale count too large");
  const int support = 1 << scales;
  if (width < support || height < support)
    throw ArgumentError("image " + std::to_string(width) + "x" + std::to_string(height) +
                        " is smaller than the coarsest filter support " + std::to_string(support));
  if (!(config.slant > 0.0 && config.sigma > 0.0 && config.xi > 0.0 && config.lowpass_sigma > 0.0))
    throw ArgumentError("Morlet parameters must be positive");

  FilterBank bank;
  bank.scales_ = scales;
  bank.orientations_ = orientations;
  bank.width_ = width;
  bank.height_ = height;
  bank.config_ = config;
  bank.fft_ = Fft2d::for_geometry(width, height);

  ComplexGrid wave(width, height);
  RealGrid envelope(width, height);
  for (int j = 0; j < scales; ++j) {
    const double dilation = std::ldexp(1.0, j);
    for (int l = 0; l < orientations; ++l) {
      sample_gabor({config.sigma * dilation, config.slant, config.xi / dilation, bank.angle(l)}, width,
                   height, wave, envelope);
      // Subtract the scaled envelope so the filter sums to zero.
      cplx wave_sum = 0.0;
      double env_sum = 0.0;
      for (std::size_t i = 0; i < wave.size(); ++i) {
        wave_sum += wave[i];
        env_sum += envelope[i];
      }
      const cplx beta = wave_sum / env_sum;
      ComplexGrid morlet(width, height);
      for (std::size_t i = 0; i < wave.size(); ++i) morlet[i] = wave[i] - beta * envelope[i];
      bank.bandpass_.push_back(forward(*bank.fft_, morlet));
    }
  }

  sample_gabor({config.lowpass_sigma * support, 1.0, 0.0, 0.0}, width, height, wave, envelope);
  double total = 0.0;
  for (double v : envelope.values()) total += v;
  ComplexGrid phi(width, height);
  for (std::size_t i = 0; i < envelope.size(); ++i) phi[i] = envelope[i] / total;
  const ComplexGrid phi_hat = forward(*bank.fft_, phi);
  bank.lowpass_ = RealGrid(width, height);
  for (std::size_t i = 0; i < phi_hat.size(); ++i) bank.lowpass_[i] = phi_hat[i].real();
  return bank;
}

namespace {

template <class Filter>
ComplexGrid convolve_impl(const RealGrid& signal, const Filter& filter_hat) {
  if (!signal.same_shape(filter_hat)) throw ArgumentError("signal and filter dimensions differ");
  const auto fft = Fft2d::for_geometry(signal.width(), signal.height());
  ComplexGrid buf(signal.width(), signal.height());
  for (std::size_t i = 0; i < signal.size(); ++i) buf[i] = signal[i];
  fft->forward(buf.values(), buf.values());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= filter_hat[i];
  fft->inverse(buf.values(), buf.values());
  return buf;
}

}  // namespace

ComplexGrid convolve(const RealGrid& signal, const ComplexGrid& filter_hat) {
  return convolve_impl(signal, filter_hat);
}

ComplexGrid convolve(const RealGrid& signal, const RealGrid& filter_hat) {
  return convolve_impl(signal, filter_hat);
}

ComplexGrid to_spatial(const ComplexGrid& filter_hat) {
  const auto fft = Fft2d::for_geometry(filter_hat.width(), filter_hat.height());
  ComplexGrid out(filter_hat.width(), filter_hat.height());
  fft->inverse(filter_hat.values(), out.values());
  return out;
}

namespace {

void dump_magnitude(const ComplexGrid& spatial, const std::filesystem::path& file) {
  const int w = spatial.width();
  const int h = spatial.height();
  double peak = 0.0;
  for (const auto& v : spatial.values()) peak = std::max(peak, std::abs(v));
  RealGrid img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // fftshift so the filter centre sits mid-image
      const int sy = (y + h / 2) % h;
      const int sx = (x + w / 2) % w;
      img(y, x) = peak > 0.0 ? std::abs(spatial(sy, sx)) / peak : 0.0;
    }
  }
  write_pgm(file, GrayImage(std::move(img)));
}

}  // namespace

void dump_filters(const FilterBank& bank, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create filter dump directory: " + dir.string());
  for (int j = 0; j < bank.scales(); ++j) {
    for (int l = 0; l < bank.orientations(); ++l) {
      dump_magnitude(to_spatial(bank.bandpass(j, l)),
                     dir / ("psi_j" + std::to_string(j) + "_l" + std::to_string(l) + ".pgm"));
    }
  }
  ComplexGrid phi_hat(bank.width(), bank.height());
  for (std::size_t i = 0; i < phi_hat.size(); ++i) phi_hat[i] = bank.lowpass()[i];
  dump_magnitude(to_spatial(phi_hat), dir / "phi.pgm");
}

}  // namespace scatfp
