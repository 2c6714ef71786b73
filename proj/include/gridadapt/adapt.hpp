#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gridadapt/graph.hpp"
#include "gridadapt/image.hpp"
#include "gridadapt/salient.hpp"

namespace gridadapt {

struct AdaptConfig {
  std::size_t maxIterations = 10;
  double residualThreshold = 0.1;  ///< pixels
  DetectorConfig detector;
  bool clampToExtent = true;
  std::size_t threads = 0;  ///< 0: hardware concurrency (capped by GRIDADAPT_THREADS)

  void validate() const;
};

struct AdaptResult {
  Graph graph;                               ///< adapted positions, original topology
  std::vector<SalientPoint> salientPoints;   ///< one per edge, on the final positions
  std::vector<double> residualHistory;       ///< R per iteration
  std::size_t iterations = 0;
  double intensityNorm = 1.0;                ///< resolved normalisation used
};

/// Mean Euclidean displacement between two flat position lists of dimension dim.
double residual(std::span<const double> before, std::span<const double> after,
                std::size_t dim = 2);

/// Salient point on every edge of g (parallel over edges, gathered by index).
std::vector<SalientPoint> detectAll(const Image& img, const Graph& g, const DetectorConfig& cfg,
                                    std::size_t threads = 1);

/// Each node at the unweighted mean of its incident edges' salient points.
std::vector<double> centroidUpdate(const Graph& g, std::span<const SalientPoint> points,
                                   std::size_t threads = 1);

/// Iterative adaptation: detect on all edges, move nodes to the centroid of
/// incident salient points, stop once R < threshold or after maxIterations.
/// Salient points in the result are re-detected on the final positions.
AdaptResult adaptGraph(const Image& img, const Graph& initial, const AdaptConfig& cfg);

}  // namespace gridadapt
