#include "gridadapt/synthetic.hpp"

#include <array>
#include <cmath>
#include <random>

#include "gridadapt/errors.hpp"

namespace gridadapt {
namespace {

constexpr std::array<std::pair<ShapeKind, std::string_view>, 6> kShapeNames{{
    {ShapeKind::Diag, "diag"},
    {ShapeKind::Flat, "flat"},
    {ShapeKind::Corner, "corner"},
    {ShapeKind::Circle, "circle"},
    {ShapeKind::Vertical, "vertical"},
    {ShapeKind::Donut, "donut"},
}};

bool inShape(ShapeKind kind, std::size_t size, std::size_t x, std::size_t y) {
  const double n = static_cast<double>(size);
  const double c = (n - 1.0) / 2.0;
  const double r = std::hypot(static_cast<double>(x) - c, static_cast<double>(y) - c);
  const std::size_t half = size / 2;
  switch (kind) {
    case ShapeKind::Diag: return x > y;
    case ShapeKind::Flat: return y >= half;
    case ShapeKind::Vertical: return x >= half;
    case ShapeKind::Corner: return x >= half && y >= half;
    case ShapeKind::Circle: return r <= 0.3 * n;
    case ShapeKind::Donut: return r >= 0.15 * n && r <= 0.35 * n;
  }
  return false;
}

Image cleanShape(const SyntheticShape& shape) {
  if (shape.size < 16) throw ParameterError("synthetic shape size must be at least 16 pixels");
  std::vector<double> data(shape.size * shape.size);
  for (std::size_t y = 0; y < shape.size; ++y) {
    for (std::size_t x = 0; x < shape.size; ++x) {
      data[x + shape.size * y] =
          inShape(shape.kind, shape.size, x, y) ? kForegroundIntensity : kBackgroundIntensity;
    }
  }
  return Image({shape.size, shape.size}, std::move(data));
}

}  // namespace

const std::vector<ShapeKind>& allShapes() {
  static const std::vector<ShapeKind> shapes{ShapeKind::Diag,   ShapeKind::Flat,
                                             ShapeKind::Corner, ShapeKind::Circle,
                                             ShapeKind::Vertical, ShapeKind::Donut};
  return shapes;
}

std::string_view shapeName(ShapeKind kind) {
  for (const auto& [k, name] : kShapeNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ShapeKind> parseShape(std::string_view name) {
  for (const auto& [k, n] : kShapeNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

Image addGaussianNoise(const Image& img, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("noise sigma must be finite and nonnegative");
  }
  std::vector<double> data(img.data().begin(), img.data().end());
  if (sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& v : data) v += noise(rng);
  }
  return Image(img.dims(), std::move(data));
}

Image generateSynthetic(const SyntheticShape& shape, double noiseSigmaFraction,
                        std::uint64_t seed) {
  if (!(noiseSigmaFraction >= 0.0 && noiseSigmaFraction <= 1.0)) {
    throw ParameterError("noise sigma fraction must lie in [0, 1]");
  }
  Image clean = cleanShape(shape);
  return addGaussianNoise(clean, noiseSigmaFraction * kForegroundIntensity, seed);
}

Image contourMask(const Image& labels, double foreground) {
  if (labels.dimension() != 2) throw ParameterError("contour mask requires a 2-D image");
  const std::size_t w = labels.width();
  const std::size_t h = labels.height();
  std::vector<double> mask(w * h, 0.0);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double v = labels.at(x, y);
      if (v != foreground) continue;
      const bool edge = (x > 0 && labels.at(x - 1, y) != v) ||
                        (x + 1 < w && labels.at(x + 1, y) != v) ||
                        (y > 0 && labels.at(x, y - 1) != v) ||
                        (y + 1 < h && labels.at(x, y + 1) != v);
      if (edge) mask[x + w * y] = 1.0;
    }
  }
  return Image({w, h}, std::move(mask));
}

Image groundTruthContour(const SyntheticShape& shape) {
  return contourMask(cleanShape(shape), kForegroundIntensity);
}

}  // namespace gridadapt
