#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridadapt/image.hpp"

namespace gridadapt {

enum class ShapeKind { Diag, Flat, Corner, Circle, Vertical, Donut };

/// All six shapes, in the order they are usually reported.
const std::vector<ShapeKind>& allShapes();

std::string_view shapeName(ShapeKind kind);
std::optional<ShapeKind> parseShape(std::string_view name);

/// Square binary test image of `size` x `size` pixels.
///
/// Canonical geometry (pixel coordinates, c = (size - 1) / 2):
///   Diag      foreground where x > y
///   Flat      foreground where y >= size / 2
///   Vertical  foreground where x >= size / 2
///   Corner    foreground where x >= size / 2 and y >= size / 2
///   Circle    foreground where |p - (c, c)| <= 0.3 * size
///   Donut     foreground where 0.15 * size <= |p - (c, c)| <= 0.35 * size
struct SyntheticShape {
  ShapeKind kind = ShapeKind::Circle;
  std::size_t size = 128;
};

inline constexpr double kBackgroundIntensity = 0.0;
inline constexpr double kForegroundIntensity = 255.0;

/// Clean shape plus i.i.d. N(0, (sigmaFraction * 255)^2) noise, unclamped.
Image generateSynthetic(const SyntheticShape& shape, double noiseSigmaFraction,
                        std::uint64_t seed);

/// Foreground pixels that have a 4-neighbour of differing value (1) or not (0).
Image groundTruthContour(const SyntheticShape& shape);

/// Adds unclamped Gaussian noise with standard deviation sigma.
Image addGaussianNoise(const Image& img, double sigma, std::uint64_t seed);

/// Pixels that differ from at least one in-image 4-neighbour, restricted to
/// pixels with value `foreground`. Works for any 2-D label image.
Image contourMask(const Image& labels, double foreground);

}  // namespace gridadapt
