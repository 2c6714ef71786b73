#include "gridadapt/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "gridadapt/errors.hpp"

namespace gridadapt {

Image::Image(std::vector<std::size_t> dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  if (dims_.empty()) throw ParameterError("image must have at least one axis");
  for (std::size_t axis = 0; axis < dims_.size(); ++axis) {
    if (dims_[axis] == 0) {
      throw ParameterError("image axis " + std::to_string(axis) + " has zero extent");
    }
  }
  const std::size_t expected =
      std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
  if (expected != data_.size()) {
    throw ParameterError("image data length " + std::to_string(data_.size()) +
                         " does not match extents product " + std::to_string(expected));
  }
  const auto [lo, hi] = std::minmax_element(data_.begin(), data_.end());
  range_ = {*lo, *hi};
}

Image Image::filled(std::size_t width, std::size_t height, double value) {
  return Image({width, height}, std::vector<double>(width * height, value));
}

bool Image::contains(std::span<const double> x) const {
  if (x.size() != dims_.size()) return false;
  for (std::size_t axis = 0; axis < x.size(); ++axis) {
    if (!(x[axis] >= 0.0 && x[axis] <= static_cast<double>(dims_[axis] - 1))) return false;
  }
  return true;
}

double sampleLinear(const Image& img, std::span<const double> x) {
  const auto& dims = img.dims();
  const std::size_t d = dims.size();
  if (x.size() != d) {
    throw ParameterError("coordinate has " + std::to_string(x.size()) +
                         " components, image has " + std::to_string(d) + " axes");
  }
  if (d > kMaxSampleDims) throw ParameterError("image dimensionality exceeds sampler limit");

  std::array<std::size_t, kMaxSampleDims> lower{};
  std::array<std::size_t, kMaxSampleDims> upper{};
  std::array<double, kMaxSampleDims> frac{};
  for (std::size_t axis = 0; axis < d; ++axis) {
    const double hi = static_cast<double>(dims[axis] - 1);
    if (!(x[axis] >= 0.0 && x[axis] <= hi)) {
      throw RangeError("coordinate " + std::to_string(x[axis]) + " on axis " +
                       std::to_string(axis) + " outside [0, " + std::to_string(dims[axis] - 1) +
                       "]");
    }
    const double fl = std::floor(x[axis]);
    lower[axis] = static_cast<std::size_t>(fl);
    if (lower[axis] + 1 >= dims[axis]) {
      upper[axis] = lower[axis];
      frac[axis] = 0.0;
    } else {
      upper[axis] = lower[axis] + 1;
      frac[axis] = x[axis] - fl;
    }
  }

  // Gather the 2^d corners; bit i of the corner index selects the upper
  // neighbour on axis i.
  std::array<double, std::size_t{1} << kMaxSampleDims> corner{};
  const std::size_t corners = std::size_t{1} << d;
  const auto data = img.data();
  for (std::size_t c = 0; c < corners; ++c) {
    std::size_t offset = 0;
    std::size_t stride = 1;
    for (std::size_t axis = 0; axis < d; ++axis) {
      offset += ((c >> axis) & 1U ? upper[axis] : lower[axis]) * stride;
      stride *= dims[axis];
    }
    corner[c] = data[offset];
  }

  // Reduce one axis at a time with a + f * (b - a) so equal neighbours stay exact.
  std::size_t live = corners;
  for (std::size_t axis = 0; axis < d; ++axis) {
    live /= 2;
    const double f = frac[axis];
    for (std::size_t c = 0; c < live; ++c) {
      const double a = corner[2 * c];
      const double b = corner[2 * c + 1];
      corner[c] = f == 0.0 ? a : a + f * (b - a);
    }
  }
  return corner[0];
}

}  // namespace gridadapt
