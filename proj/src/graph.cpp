#include "gridadapt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "gridadapt/errors.hpp"

namespace gridadapt {

Graph::Graph(std::size_t dim, std::vector<double> coords, std::vector<Edge> edges,
             std::vector<Face> faces)
    : dim_(dim), coords_(std::move(coords)), edges_(std::move(edges)), faces_(std::move(faces)) {
  if (dim_ == 0) throw ParameterError("graph dimension must be positive");
  if (coords_.size() % dim_ != 0) throw ParameterError("coordinate count not a multiple of dim");
  const std::size_t n = nodeCount();
  adjacency_.assign(n, {});
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    Edge& edge = edges_[e];
    if (edge.first == edge.second) {
      throw ParameterError("edge " + std::to_string(e) + " is a self-loop");
    }
    if (edge.first >= n || edge.second >= n) {
      throw ParameterError("edge " + std::to_string(e) + " references a missing node");
    }
    if (edge.first > edge.second) std::swap(edge.first, edge.second);
    if (!seen.emplace(edge.first, edge.second).second) {
      throw ParameterError("duplicate edge " + std::to_string(e));
    }
    adjacency_[edge.first].push_back(e);
    adjacency_[edge.second].push_back(e);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (adjacency_[v].empty()) {
      throw ParameterError("node " + std::to_string(v) + " has no incident edges");
    }
  }
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    for (std::size_t e : faces_[f].edges) {
      if (e >= edges_.size()) {
        throw ParameterError("face " + std::to_string(f) + " references a missing edge");
      }
    }
  }
}

double Graph::edgeLength(std::size_t edge) const {
  const auto a = position(edges_[edge].first);
  const auto b = position(edges_[edge].second);
  double sq = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) sq += (b[i] - a[i]) * (b[i] - a[i]);
  return std::sqrt(sq);
}

void Graph::setCoords(std::vector<double> coords) {
  if (coords.size() != coords_.size()) {
    throw ParameterError("replacement coordinates have the wrong length");
  }
  coords_ = std::move(coords);
}

std::size_t realizedNodeCount(std::size_t requested) {
  const auto side = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(requested)))));
  return side * side;
}

Graph uniformTriangulation(const TriangulationSpec& spec) {
  const auto [width, height] = spec.imageDims;
  if (width < 3 || height < 3) {
    throw ParameterError("image must be at least 3 pixels per axis to triangulate");
  }
  if (spec.nodeCount < 4) {
    throw ParameterError("at least 4 nodes are needed for a triangulation, got " +
                         std::to_string(spec.nodeCount));
  }
  const std::size_t n =
      static_cast<std::size_t>(std::llround(std::sqrt(double(realizedNodeCount(spec.nodeCount)))));
  const double hx = static_cast<double>(width - 1) / static_cast<double>(n - 1);
  const double hy = static_cast<double>(height - 1) / static_cast<double>(n - 1);

  auto node = [n](std::size_t col, std::size_t row) { return col + n * row; };

  std::vector<double> coords;
  coords.reserve(2 * n * n);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < n; ++col) {
      // Last row/column pinned to the extent so rounding cannot push it outside.
      coords.push_back(col + 1 == n ? static_cast<double>(width - 1) : hx * double(col));
      coords.push_back(row + 1 == n ? static_cast<double>(height - 1) : hy * double(row));
    }
  }

  std::vector<Edge> edges;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edgeIndex;
  auto addEdge = [&](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    const auto [it, inserted] = edgeIndex.emplace(std::make_pair(a, b), edges.size());
    if (inserted) edges.push_back({a, b});
    return it->second;
  };

  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col + 1 < n; ++col) addEdge(node(col, row), node(col + 1, row));
  }
  for (std::size_t row = 0; row + 1 < n; ++row) {
    for (std::size_t col = 0; col < n; ++col) addEdge(node(col, row), node(col, row + 1));
  }

  // Positive orientation: cross(b - a, c - a) > 0 in (x, y) coordinates.
  std::vector<Face> faces;
  auto addFace = [&](std::size_t a, std::size_t b, std::size_t c) {
    Face f;
    f.nodes = {a, b, c};
    f.edges = {addEdge(a, b), addEdge(b, c), addEdge(c, a)};
    faces.push_back(f);
  };
  for (std::size_t row = 0; row + 1 < n; ++row) {
    for (std::size_t col = 0; col + 1 < n; ++col) {
      const std::size_t tl = node(col, row);
      const std::size_t tr = node(col + 1, row);
      const std::size_t bl = node(col, row + 1);
      const std::size_t br = node(col + 1, row + 1);
      if (row % 2 == 0) {
        // diagonal tl-br
        addFace(tl, tr, br);
        addFace(tl, br, bl);
      } else {
        // diagonal tr-bl
        addFace(tl, tr, bl);
        addFace(tr, br, bl);
      }
    }
  }
  return Graph(2, std::move(coords), std::move(edges), std::move(faces));
}

GraphStats graphStats(const Graph& g) {
  GraphStats stats;
  stats.nodeCount = g.nodeCount();
  stats.edgeCount = g.edgeCount();
  for (std::size_t v = 0; v < g.nodeCount(); ++v) ++stats.degreeHistogram[g.incidentEdges(v).size()];
  return stats;
}

}  // namespace gridadapt
