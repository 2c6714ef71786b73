#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace gridadapt {

/// Undirected edge; endpoints are stored with first < second.
struct Edge {
  std::size_t first = 0;
  std::size_t second = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Triangle of the initial mesh: its three edges and three nodes, with the
/// nodes listed counter-clockwise in (x, y).
struct Face {
  std::array<std::size_t, 3> edges{};
  std::array<std::size_t, 3> nodes{};

  friend bool operator==(const Face&, const Face&) = default;
};

/// Node positions plus fixed topology.
///
/// Positions are stored flat (node i occupies coords[i*dim .. i*dim+dim)).
/// Edges, faces and adjacency never change after construction; positions
/// may be replaced wholesale.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t dim, std::vector<double> coords, std::vector<Edge> edges,
        std::vector<Face> faces = {});

  std::size_t dimension() const { return dim_; }
  std::size_t nodeCount() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t edgeCount() const { return edges_.size(); }
  std::size_t faceCount() const { return faces_.size(); }

  std::span<const double> position(std::size_t node) const {
    return {coords_.data() + node * dim_, dim_};
  }
  std::span<const double> coords() const { return coords_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Face>& faces() const { return faces_; }

  /// Incident edge indices of a node, in increasing order.
  const std::vector<std::size_t>& incidentEdges(std::size_t node) const {
    return adjacency_[node];
  }

  double edgeLength(std::size_t edge) const;

  /// Replaces every node position; topology is untouched.
  void setCoords(std::vector<double> coords);

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

struct TriangulationSpec {
  std::size_t nodeCount = 100;           ///< requested K
  std::array<std::size_t, 2> imageDims{};  ///< width, height in pixels
};

/// Realized node count for a request: nearest n*n with n >= 2.
std::size_t realizedNodeCount(std::size_t requested);

/// n x n lattice of nodes spanning [0, width-1] x [0, height-1]. Every cell is
/// split by one diagonal whose direction alternates between rows, giving a
/// triangular lattice of offset rows where interior nodes have degree 6.
/// Edge count is (n-1)(3n-1), face count 2(n-1)^2.
Graph uniformTriangulation(const TriangulationSpec& spec);

struct GraphStats {
  std::size_t nodeCount = 0;
  std::size_t edgeCount = 0;
  std::map<std::size_t, std::size_t> degreeHistogram;  ///< degree -> node count
};

GraphStats graphStats(const Graph& g);

}  // namespace gridadapt
