#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gridadapt {

/// Largest dimensionality supported by the interpolating sampler.
inline constexpr std::size_t kMaxSampleDims = 8;

struct IntensityRange {
  double min = 0.0;
  double max = 0.0;

  double extent() const { return max - min; }
};

/// Scalar image on a d-dimensional grid.
///
/// Extents are listed fastest-varying axis first, so a 2-D image has
/// dims = {width, height} and pixel (x, y) lives at data[x + width * y].
/// Positions use the same axis order. Images are immutable once built.
class Image {
 public:
  Image() = default;
  Image(std::vector<std::size_t> dims, std::vector<double> data);

  /// 2-D image filled with a constant value.
  static Image filled(std::size_t width, std::size_t height, double value);

  std::size_t dimension() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t width() const { return dims_.empty() ? 0 : dims_[0]; }
  std::size_t height() const { return dims_.size() < 2 ? 1 : dims_[1]; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<const double> data() const { return data_; }
  const IntensityRange& intensityRange() const { return range_; }

  double at(std::size_t x, std::size_t y) const { return data_[x + dims_[0] * y]; }
  double operator[](std::size_t linear) const { return data_[linear]; }

  /// True when every coordinate lies in [0, dims_i - 1].
  bool contains(std::span<const double> x) const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> data_;
  IntensityRange range_;
};

/// Multilinear interpolation of the 2^d grid samples around x.
///
/// Exact at integer grid points and on constant neighbourhoods. Throws
/// RangeError naming the axis when a coordinate is outside [0, dims_i - 1].
double sampleLinear(const Image& img, std::span<const double> x);

}  // namespace gridadapt
