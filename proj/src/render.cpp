#include "gridadapt/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "gridadapt/errors.hpp"
#include "gridadapt/image_io.hpp"

namespace gridadapt {
namespace {

constexpr Rgb kUncoded{128, 128, 128};

std::uint8_t channel(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L));
}

Rgb colorFor(const std::optional<double>& s, const RenderSpec& spec) {
  return s ? strokeColor(*s, spec) : kUncoded;
}

// Background pixels stretched so the image intensity range spans 0..255.
std::vector<std::uint8_t> backgroundGray(const Image& img, const RenderSpec& spec) {
  std::vector<std::uint8_t> gray(img.size(), 255);
  if (spec.background == Background::White) return gray;
  const auto range = img.intensityRange();
  const double extent = range.extent() > 0.0 ? range.extent() : 1.0;
  for (std::size_t i = 0; i < img.size(); ++i) gray[i] = channel((img[i] - range.min) / extent);
  return gray;
}

std::string base64(const std::vector<unsigned char>& bytes) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    const std::uint32_t a = bytes[i];
    const std::uint32_t b = i + 1 < bytes.size() ? bytes[i + 1] : 0;
    const std::uint32_t c = i + 2 < bytes.size() ? bytes[i + 2] : 0;
    const std::uint32_t triple = (a << 16) | (b << 8) | c;
    out.push_back(kAlphabet[(triple >> 18) & 63]);
    out.push_back(kAlphabet[(triple >> 12) & 63]);
    out.push_back(i + 1 < bytes.size() ? kAlphabet[(triple >> 6) & 63] : '=');
    out.push_back(i + 2 < bytes.size() ? kAlphabet[triple & 63] : '=');
  }
  return out;
}

}  // namespace

void RenderSpec::validate() const {
  if (!(logLo < logHi)) throw ParameterError("render log range needs lo < hi");
  if (!(strokeWidth > 0.0)) throw ParameterError("stroke width must be positive");
}

double saliencyLevel(double saliency, const RenderSpec& spec) {
  if (!(saliency > 0.0)) return 0.0;
  const double level = (std::log2(saliency) - spec.logLo) / (spec.logHi - spec.logLo);
  return std::clamp(level, 0.0, 1.0);
}

Rgb strokeColor(double saliency, const RenderSpec& spec) {
  const double v = saliencyLevel(saliency, spec);
  if (spec.colormap == Colormap::GrayLog2) {
    const auto g = channel(v);
    return {g, g, g};
  }
  // black -> red over the lower half, red -> yellow over the upper half
  if (v <= 0.5) return {channel(2.0 * v), 0, 0};
  return {255, channel(2.0 * v - 1.0), 0};
}

EdgeSet edgeSet(const Graph& g, const std::vector<SalientPoint>* salientPoints) {
  if (g.dimension() != 2) throw ParameterError("only 2-D graphs can be rendered");
  if (salientPoints && salientPoints->size() != g.edgeCount()) {
    throw IntegrityError("render needs one salient point per edge");
  }
  EdgeSet set;
  for (std::size_t e = 0; e < g.edgeCount(); ++e) {
    const auto a = g.position(g.edges()[e].first);
    const auto b = g.position(g.edges()[e].second);
    set.segments.push_back({a[0], a[1], b[0], b[1]});
    set.saliency.push_back(salientPoints ? std::optional((*salientPoints)[e].saliency)
                                         : std::nullopt);
  }
  return set;
}

EdgeSet edgeSet(const DualGraph& dual) {
  EdgeSet set;
  for (std::size_t e = 0; e < dual.edges.size(); ++e) {
    const auto& a = dual.nodes[dual.edges[e].first].position;
    const auto& b = dual.nodes[dual.edges[e].second].position;
    if (a.size() != 2 || b.size() != 2) throw ParameterError("only 2-D graphs can be rendered");
    set.segments.push_back({a[0], a[1], b[0], b[1]});
    set.saliency.push_back(dual.edgeSaliency[e]);
  }
  return set;
}

std::string renderSvg(const Image& img, const EdgeSet& edges, const RenderSpec& spec) {
  spec.validate();
  if (img.dimension() != 2) throw ParameterError("only 2-D images can be rendered");
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  for (const auto& s : edges.segments) {
    for (int i = 0; i < 4; ++i) {
      const double limit = double(i % 2 == 0 ? w : h) - 1.0;
      if (!(s[i] >= 0.0 && s[i] <= limit)) {
        throw RangeError("graph coordinate outside the image extent");
      }
    }
  }

  std::string svg;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
                "<svg xmlns=\"http://www.w3.org/2000/svg\" "
                "xmlns:xlink=\"http://www.w3.org/1999/xlink\" version=\"1.1\" "
                "width=\"%zu\" height=\"%zu\" viewBox=\"-0.5 -0.5 %zu %zu\">\n",
                w, h, w, h);
  svg += buf;
  if (spec.background == Background::White) {
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"-0.5\" y=\"-0.5\" width=\"%zu\" height=\"%zu\" fill=\"#ffffff\"/>\n", w,
                  h);
    svg += buf;
  } else {
    const auto gray = backgroundGray(img, spec);
    std::snprintf(buf, sizeof buf,
                  "<image x=\"-0.5\" y=\"-0.5\" width=\"%zu\" height=\"%zu\" "
                  "style=\"image-rendering:pixelated\" xlink:href=\"data:image/png;base64,",
                  w, h);
    svg += buf;
    svg += base64(encodePng(gray, w, h, 1));
    svg += "\"/>\n";
  }
  std::snprintf(buf, sizeof buf, "<g fill=\"none\" stroke-linecap=\"round\" stroke-width=\"%.3f\">\n",
                spec.strokeWidth);
  svg += buf;
  for (std::size_t e = 0; e < edges.segments.size(); ++e) {
    const auto& s = edges.segments[e];
    const Rgb c = colorFor(edges.saliency[e], spec);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"#%02x%02x%02x\"/>\n",
                  s[0], s[1], s[2], s[3], c.r, c.g, c.b);
    svg += buf;
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

std::vector<std::uint8_t> rasterize(const Image& img, const EdgeSet& edges, const RenderSpec& spec,
                                    double scale, std::size_t& width, std::size_t& height) {
  spec.validate();
  if (!(scale > 0.0)) throw ParameterError("raster scale must be positive");
  width = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(double(img.width()) * scale)));
  height =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(double(img.height()) * scale)));
  const auto gray = backgroundGray(img, spec);
  std::vector<std::uint8_t> rgb(width * height * 3);
  for (std::size_t y = 0; y < height; ++y) {
    const auto sy = std::min(img.height() - 1, static_cast<std::size_t>(double(y) / scale));
    for (std::size_t x = 0; x < width; ++x) {
      const auto sx = std::min(img.width() - 1, static_cast<std::size_t>(double(x) / scale));
      const std::uint8_t g = gray[sx + img.width() * sy];
      std::fill_n(&rgb[3 * (x + width * y)], 3, g);
    }
  }
  // Output pixel (x, y) has its centre at image coordinate (x + 0.5) / scale - 0.5.
  const double half = 0.5 * spec.strokeWidth;
  for (std::size_t e = 0; e < edges.segments.size(); ++e) {
    const auto& s = edges.segments[e];
    const Rgb c = colorFor(edges.saliency[e], spec);
    const double x0 = std::min(s[0], s[2]) - half;
    const double x1 = std::max(s[0], s[2]) + half;
    const double y0 = std::min(s[1], s[3]) - half;
    const double y1 = std::max(s[1], s[3]) + half;
    const auto toOut = [scale](double v) { return (v + 0.5) * scale - 0.5; };
    const long px0 = std::max(0L, static_cast<long>(std::floor(toOut(x0))));
    const long px1 = std::min(long(width) - 1, static_cast<long>(std::ceil(toOut(x1))));
    const long py0 = std::max(0L, static_cast<long>(std::floor(toOut(y0))));
    const long py1 = std::min(long(height) - 1, static_cast<long>(std::ceil(toOut(y1))));
    const double dx = s[2] - s[0];
    const double dy = s[3] - s[1];
    const double len2 = dx * dx + dy * dy;
    for (long py = py0; py <= py1; ++py) {
      for (long px = px0; px <= px1; ++px) {
        const double ix = (double(px) + 0.5) / scale - 0.5;
        const double iy = (double(py) + 0.5) / scale - 0.5;
        double t = len2 > 0.0 ? ((ix - s[0]) * dx + (iy - s[1]) * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double ex = s[0] + t * dx - ix;
        const double ey = s[1] + t * dy - iy;
        // at least one output pixel wide at any scale
        const double reach = std::max(half, 0.5 / scale);
        if (ex * ex + ey * ey <= reach * reach) {
          std::uint8_t* p = &rgb[3 * (std::size_t(px) + width * std::size_t(py))];
          p[0] = c.r;
          p[1] = c.g;
          p[2] = c.b;
        }
      }
    }
  }
  return rgb;
}

void renderGraph(const Image& img, const EdgeSet& edges, const RenderSpec& spec,
                 const std::filesystem::path& svgPath,
                 const std::optional<std::filesystem::path>& pngPath, double dpi) {
  const std::string svg = renderSvg(img, edges, spec);
  {
    std::ofstream out(svgPath, std::ios::binary);
    if (!out) throw IoError("cannot open '" + svgPath.string() + "' for writing");
    out << svg;
    if (!out) throw IoError("failed writing '" + svgPath.string() + "'");
  }
  if (pngPath) {
    if (!(dpi > 0.0)) throw ParameterError("dpi must be positive");
    std::size_t w = 0;
    std::size_t h = 0;
    const auto rgb = rasterize(img, edges, spec, dpi / 96.0, w, h);
    const auto bytes = encodePng(rgb, w, h, 3);
    std::ofstream out(*pngPath, std::ios::binary);
    if (!out) throw IoError("cannot open '" + pngPath->string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw IoError("failed writing '" + pngPath->string() + "'");
  }
}

}  // namespace gridadapt
