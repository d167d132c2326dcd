#include "scatfp/fft.hpp"

#include <map>
#include <mutex>

#include <fftw3.h>

#include "scatfp/errors.hpp"

namespace scatfp {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Fft2d::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  fftw_plan forward_inplace = nullptr;
  fftw_plan inverse_inplace = nullptr;
};

Fft2d::Fft2d(int width, int height) : width_(width), height_(height), plans_(std::make_unique<Plans>()) {
  if (width <= 0 || height <= 0) throw ArgumentError("FFT dimensions must be positive");
  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::lock_guard lock(planner_mutex());
  auto* a = fftw_alloc_complex(n);
  auto* b = fftw_alloc_complex(n);
  // ESTIMATE keeps plan selection deterministic; UNALIGNED lets callers pass
  // std::vector storage to the new-array execute functions.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->forward = fftw_plan_dft_2d(height, width, a, b, FFTW_FORWARD, flags);
  plans_->inverse = fftw_plan_dft_2d(height, width, a, b, FFTW_BACKWARD, flags);
  plans_->forward_inplace = fftw_plan_dft_2d(height, width, a, a, FFTW_FORWARD, flags);
  plans_->inverse_inplace = fftw_plan_dft_2d(height, width, a, a, FFTW_BACKWARD, flags);
  fftw_free(a);
  fftw_free(b);
  if (!plans_->forward || !plans_->inverse || !plans_->forward_inplace || !plans_->inverse_inplace)
    throw ArgumentError("FFTW could not create a plan");
}

Fft2d::~Fft2d() {
  std::lock_guard lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->inverse) fftw_destroy_plan(plans_->inverse);
  if (plans_->forward_inplace) fftw_destroy_plan(plans_->forward_inplace);
  if (plans_->inverse_inplace) fftw_destroy_plan(plans_->inverse_inplace);
}

std::shared_ptr<const Fft2d> Fft2d::for_geometry(int width, int height) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const Fft2d>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{width, height}];
  if (!slot) slot = std::make_shared<const Fft2d>(width, height);
  return slot;
}

namespace {
void check_size(std::size_t got, int w, int h) {
  if (got != static_cast<std::size_t>(w) * h) throw ArgumentError("FFT buffer size does not match geometry");
}
}  // namespace

void Fft2d::forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  check_size(in.size(), width_, height_);
  check_size(out.size(), width_, height_);
  // fftw_complex is layout-compatible with std::complex<double>.
  const bool inplace = in.data() == out.data();
  fftw_execute_dft(inplace ? plans_->forward_inplace : plans_->forward, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void Fft2d::inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  check_size(in.size(), width_, height_);
  check_size(out.size(), width_, height_);
  const bool inplace = in.data() == out.data();
  fftw_execute_dft(inplace ? plans_->inverse_inplace : plans_->inverse, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
}

}  // namespace scatfp
