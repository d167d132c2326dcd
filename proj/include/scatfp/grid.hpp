#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "scatfp/errors.hpp"

namespace scatfp {

/// Row-major 2-D array. Index as (row, col) == (y, x).
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw ArgumentError("grid dimensions must be positive");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Grid(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width <= 0 || height <= 0) throw ArgumentError("grid dimensions must be positive");
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      throw ArgumentError("grid data size does not match width x height");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int y, int x) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  const T& operator()(int y, int x) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  bool same_shape(int width, int height) const noexcept {
    return width_ == width && height_ == height;
  }
  template <class U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return same_shape(other.width(), other.height());
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using RealGrid = Grid<double>;
using ComplexGrid = Grid<std::complex<double>>;

}  // namespace scatfp
