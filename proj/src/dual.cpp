#include "gridadapt/dual.hpp"

#include <algorithm>
#include <string>

#include "gridadapt/errors.hpp"

namespace gridadapt {

std::string_view pairingName(DualPairing pairing) {
  return pairing == DualPairing::SharedFace ? "shared_face" : "shared_node";
}

std::optional<DualPairing> parsePairing(std::string_view name) {
  if (name == "shared_face" || name == "face") return DualPairing::SharedFace;
  if (name == "shared_node" || name == "node") return DualPairing::SharedNode;
  return std::nullopt;
}

DualGraph buildDual(const Graph& primal, const std::vector<SalientPoint>& salientPoints,
                    DualPairing pairing) {
  const std::size_t edgeCount = primal.edgeCount();
  std::vector<const SalientPoint*> byEdge(edgeCount, nullptr);
  for (const auto& sp : salientPoints) {
    if (sp.edgeIndex >= edgeCount) {
      throw IntegrityError("salient point refers to missing edge " + std::to_string(sp.edgeIndex));
    }
    byEdge[sp.edgeIndex] = &sp;
  }
  DualGraph dual;
  dual.nodes.reserve(edgeCount);
  for (std::size_t e = 0; e < edgeCount; ++e) {
    if (!byEdge[e]) throw IntegrityError("no salient point for primal edge " + std::to_string(e));
    dual.nodes.push_back(*byEdge[e]);
  }

  std::vector<Edge> pairs;
  auto addPair = [&pairs](std::size_t a, std::size_t b) {
    pairs.push_back(a < b ? Edge{a, b} : Edge{b, a});
  };
  if (pairing == DualPairing::SharedFace) {
    if (primal.faceCount() == 0 && edgeCount > 0) {
      throw IntegrityError("shared-face pairing needs the primal face list");
    }
    for (const Face& f : primal.faces()) {
      addPair(f.edges[0], f.edges[1]);
      addPair(f.edges[1], f.edges[2]);
      addPair(f.edges[0], f.edges[2]);
    }
  } else {
    for (std::size_t v = 0; v < primal.nodeCount(); ++v) {
      const auto& incident = primal.incidentEdges(v);
      for (std::size_t i = 0; i < incident.size(); ++i) {
        for (std::size_t j = i + 1; j < incident.size(); ++j) addPair(incident[i], incident[j]);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Edge& x, const Edge& y) {
    return x.first != y.first ? x.first < y.first : x.second < y.second;
  });
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  dual.edges = std::move(pairs);
  dual.edgeSaliency.reserve(dual.edges.size());
  for (const Edge& e : dual.edges) {
    dual.edgeSaliency.push_back(dual.nodes[e.first].saliency * dual.nodes[e.second].saliency);
  }
  return dual;
}

DualGraph filterBySaliency(const DualGraph& dual, double sMin) {
  if (!(sMin >= 0.0)) throw ParameterError("sMin must be nonnegative");
  constexpr std::size_t kDropped = static_cast<std::size_t>(-1);
  std::vector<std::size_t> remap(dual.nodes.size(), kDropped);
  DualGraph out;
  for (std::size_t i = 0; i < dual.nodes.size(); ++i) {
    if (dual.nodes[i].saliency > sMin) {
      remap[i] = out.nodes.size();
      out.nodes.push_back(dual.nodes[i]);
    }
  }
  for (std::size_t e = 0; e < dual.edges.size(); ++e) {
    const std::size_t a = remap[dual.edges[e].first];
    const std::size_t b = remap[dual.edges[e].second];
    if (a == kDropped || b == kDropped) continue;
    out.edges.push_back({a, b});
    out.edgeSaliency.push_back(dual.edgeSaliency[e]);
  }
  return out;
}

}  // namespace gridadapt
