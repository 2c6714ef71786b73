#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "gridadapt/adapt.hpp"
#include "gridadapt/graph.hpp"
#include "gridadapt/salient.hpp"

namespace gridadapt {

/// Which primal edge pairs become dual edges.
enum class DualPairing {
  SharedFace,  ///< edges of a common triangle (3 dual edges per face)
  SharedNode,  ///< any two edges meeting at a node
};

std::string_view pairingName(DualPairing pairing);
std::optional<DualPairing> parsePairing(std::string_view name);

/// Oversegmenting graph: one node per primal edge (its salient point), edges
/// weighted by the product of endpoint saliencies. Nodes are ordered by
/// primal edge index; nodes[i].edgeIndex names the primal edge.
struct DualGraph {
  std::vector<SalientPoint> nodes;
  std::vector<Edge> edges;
  std::vector<double> edgeSaliency;

  std::size_t nodeCount() const { return nodes.size(); }
  std::size_t edgeCount() const { return edges.size(); }
};

DualGraph buildDual(const Graph& primal, const std::vector<SalientPoint>& salientPoints,
                    DualPairing pairing = DualPairing::SharedFace);

inline DualGraph buildDual(const AdaptResult& adapted,
                           DualPairing pairing = DualPairing::SharedFace) {
  return buildDual(adapted.graph, adapted.salientPoints, pairing);
}

/// Keeps nodes with saliency > sMin and the edges between survivors.
DualGraph filterBySaliency(const DualGraph& dual, double sMin);

}  // namespace gridadapt
