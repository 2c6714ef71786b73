#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gridadapt/dual.hpp"
#include "gridadapt/graph.hpp"
#include "gridadapt/image.hpp"

namespace gridadapt {

enum class Colormap {
  GrayLog2,         ///< black at logLo, white at logHi
  FixedColorRange,  ///< black -> red -> yellow over the same range
};

enum class Background { Image, White };

struct RenderSpec {
  Colormap colormap = Colormap::GrayLog2;
  double logLo = -15.0;  ///< log2 saliency mapped to the dark end
  double logHi = 0.0;    ///< log2 saliency mapped to the bright end
  double strokeWidth = 1.0;
  Background background = Background::Image;

  void validate() const;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Position of log2(s) in [logLo, logHi], clamped to [0, 1]. Zero and
/// negative saliencies clamp to 0.
double saliencyLevel(double saliency, const RenderSpec& spec);

Rgb strokeColor(double saliency, const RenderSpec& spec);

/// Segments to draw; saliency absent means an uncoded (mid-gray) edge.
struct EdgeSet {
  std::vector<std::array<double, 4>> segments;  ///< x1, y1, x2, y2
  std::vector<std::optional<double>> saliency;
};

/// Primal edges; coloured by the per-edge salient point saliency when given.
EdgeSet edgeSet(const Graph& g, const std::vector<SalientPoint>* salientPoints = nullptr);
EdgeSet edgeSet(const DualGraph& dual);

/// SVG 1.1 document with one <line> per edge. No timestamps; identical
/// inputs give identical bytes.
std::string renderSvg(const Image& img, const EdgeSet& edges, const RenderSpec& spec);

/// RGB raster at `scale` output pixels per image pixel.
std::vector<std::uint8_t> rasterize(const Image& img, const EdgeSet& edges, const RenderSpec& spec,
                                    double scale, std::size_t& width, std::size_t& height);

/// Writes SVG to svgPath and, when pngPath is set, a PNG at `dpi` (96 = 1:1).
void renderGraph(const Image& img, const EdgeSet& edges, const RenderSpec& spec,
                 const std::filesystem::path& svgPath,
                 const std::optional<std::filesystem::path>& pngPath = std::nullopt,
                 double dpi = 96.0);

}  // namespace gridadapt
