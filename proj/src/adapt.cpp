#include "gridadapt/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gridadapt/errors.hpp"
#include "gridadapt/parallel.hpp"

namespace gridadapt {

void AdaptConfig::validate() const {
  if (maxIterations < 1) throw ParameterError("maxIterations must be at least 1");
  if (!(residualThreshold > 0.0)) throw ParameterError("residual threshold must be positive");
  detector.validate();
}

double residual(std::span<const double> before, std::span<const double> after, std::size_t dim) {
  if (before.size() != after.size()) {
    throw ParameterError("residual: position lists differ in length (" +
                         std::to_string(before.size()) + " vs " + std::to_string(after.size()) +
                         ")");
  }
  if (dim == 0 || before.size() % dim != 0) throw ParameterError("residual: bad dimension");
  const std::size_t n = before.size() / dim;
  if (n == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double delta = after[i * dim + k] - before[i * dim + k];
      sq += delta * delta;
    }
    total += std::sqrt(sq);
  }
  return total / static_cast<double>(n);
}

std::vector<SalientPoint> detectAll(const Image& img, const Graph& g, const DetectorConfig& cfg,
                                    std::size_t threads) {
  DetectorConfig resolved = cfg;
  resolved.intensityNorm = resolveIntensityNorm(cfg, img);
  std::vector<SalientPoint> points(g.edgeCount());
  parallelFor(g.edgeCount(), threads,
              [&](std::size_t e) { points[e] = detectEdge(img, g, e, resolved); });
  return points;
}

std::vector<double> centroidUpdate(const Graph& g, std::span<const SalientPoint> points,
                                   std::size_t threads) {
  if (points.size() != g.edgeCount()) {
    throw IntegrityError("expected one salient point per edge");
  }
  const std::size_t dim = g.dimension();
  std::vector<double> coords(g.nodeCount() * dim, 0.0);
  parallelFor(g.nodeCount(), threads, [&](std::size_t v) {
    const auto& incident = g.incidentEdges(v);
    for (std::size_t e : incident) {
      for (std::size_t k = 0; k < dim; ++k) coords[v * dim + k] += points[e].position[k];
    }
    for (std::size_t k = 0; k < dim; ++k) coords[v * dim + k] /= double(incident.size());
  });
  return coords;
}

AdaptResult adaptGraph(const Image& img, const Graph& initial, const AdaptConfig& cfg) {
  cfg.validate();
  if (initial.dimension() != img.dimension()) {
    throw ParameterError("graph and image dimensionality differ");
  }
  for (std::size_t v = 0; v < initial.nodeCount(); ++v) {
    if (!img.contains(initial.position(v))) {
      throw RangeError("initial node " + std::to_string(v) + " lies outside the image");
    }
  }
  const std::size_t threads = resolveThreadCount(cfg.threads);
  DetectorConfig detector = cfg.detector;
  detector.intensityNorm = resolveIntensityNorm(cfg.detector, img);

  AdaptResult result;
  result.graph = initial;
  result.intensityNorm = *detector.intensityNorm;
  const std::size_t dim = initial.dimension();

  for (std::size_t iter = 0; iter < cfg.maxIterations; ++iter) {
    const auto points = detectAll(img, result.graph, detector, threads);
    std::vector<double> next = centroidUpdate(result.graph, points, threads);
    if (cfg.clampToExtent) {
      for (std::size_t i = 0; i < next.size(); ++i) {
        const double hi = static_cast<double>(img.dims()[i % dim] - 1);
        next[i] = std::clamp(next[i], 0.0, hi);
      }
    }
    const double r = residual(result.graph.coords(), next, dim);
    result.graph.setCoords(std::move(next));
    result.residualHistory.push_back(r);
    ++result.iterations;
    if (r < cfg.residualThreshold) break;
  }
  result.salientPoints = detectAll(img, result.graph, detector, threads);
  return result;
}

}  // namespace gridadapt
