#include <doctest.h>

#include <algorithm>
#include <set>

#include "gridadapt/adapt.hpp"
#include "gridadapt/dual.hpp"
#include "gridadapt/errors.hpp"
#include "gridadapt/synthetic.hpp"

using namespace gridadapt;

namespace {

std::vector<SalientPoint> pointsFor(const Graph& g, const std::vector<double>& saliency) {
  std::vector<SalientPoint> pts;
  for (std::size_t e = 0; e < g.edgeCount(); ++e) {
    const auto a = g.position(g.edges()[e].first);
    const auto b = g.position(g.edges()[e].second);
    pts.push_back({e, 0.5, {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])}, saliency[e]});
  }
  return pts;
}

// Every unordered pair of primal edges that share an endpoint.
std::set<std::pair<std::size_t, std::size_t>> sharedNodeOracle(const Graph& g) {
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < g.edgeCount(); ++a) {
    for (std::size_t b = a + 1; b < g.edgeCount(); ++b) {
      const Edge& x = g.edges()[a];
      const Edge& y = g.edges()[b];
      if (x.first == y.first || x.first == y.second || x.second == y.first ||
          x.second == y.second) {
        pairs.insert({a, b});
      }
    }
  }
  return pairs;
}

}  // namespace

TEST_CASE("single triangle: both pairings give the inner triangle") {
  const Graph tri(2, {0, 0, 4, 0, 0, 4}, {{0, 1}, {1, 2}, {0, 2}}, {Face{{0, 1, 2}, {0, 1, 2}}});
  const auto pts = pointsFor(tri, {1, 2, 3});
  CHECK(buildDual(tri, pts, DualPairing::SharedFace).edgeCount() == 3);
  CHECK(buildDual(tri, pts, DualPairing::SharedNode).edgeCount() == 3);
}

TEST_CASE("two triangles sharing an edge") {
  const Graph g = uniformTriangulation({4, {8, 8}});
  REQUIRE(g.edgeCount() == 5);
  const auto pts = pointsFor(g, {1, 1, 1, 1, 1});
  CHECK(buildDual(g, pts, DualPairing::SharedFace).edgeCount() == 6);
  // Hand count: 1 + 3 + 3 + 1 pairs at the four corners.
  const DualGraph node = buildDual(g, pts, DualPairing::SharedNode);
  CHECK(node.edgeCount() == 8);
  CHECK(sharedNodeOracle(g).size() == 8);
}

TEST_CASE("shared-node pairing matches the brute-force oracle on a lattice") {
  const Graph g = uniformTriangulation({49, {30, 30}});
  const auto pts = pointsFor(g, std::vector<double>(g.edgeCount(), 1.0));
  const DualGraph d = buildDual(g, pts, DualPairing::SharedNode);
  std::set<std::pair<std::size_t, std::size_t>> got;
  for (const Edge& e : d.edges) got.insert({e.first, e.second});
  CHECK(got == sharedNodeOracle(g));
}

TEST_CASE("dual invariants on an adapted lattice") {
  const Image img = generateSynthetic({ShapeKind::Donut, 64}, 0.2, 5);
  const AdaptResult r = adaptGraph(img, uniformTriangulation({64, {64, 64}}), {});
  const DualGraph d = buildDual(r);
  CHECK(d.nodeCount() == r.graph.edgeCount());
  CHECK(d.edgeCount() == 3 * r.graph.faceCount());
  for (std::size_t i = 0; i < d.nodeCount(); ++i) CHECK(d.nodes[i].edgeIndex == i);
  for (std::size_t e = 0; e < d.edgeCount(); ++e) {
    const double a = d.nodes[d.edges[e].first].saliency;
    const double b = d.nodes[d.edges[e].second].saliency;
    CHECK(d.edgeSaliency[e] == a * b);
    CHECK(d.edgeSaliency[e] == b * a);
    CHECK(d.edgeSaliency[e] >= 0.0);
  }

  // Filtering is monotone in sMin.
  std::vector<double> sal;
  for (const auto& n : d.nodes) sal.push_back(n.saliency);
  std::sort(sal.begin(), sal.end());
  std::set<std::size_t> prev;
  for (std::size_t i = 0; i < d.nodeCount(); ++i) prev.insert(i);
  for (double sMin : {0.0, sal[sal.size() / 4], sal[sal.size() / 2], sal[sal.size() * 9 / 10]}) {
    const DualGraph f = filterBySaliency(d, sMin);
    std::set<std::size_t> kept;
    for (const auto& n : f.nodes) {
      kept.insert(n.edgeIndex);
      CHECK(n.saliency > sMin);
    }
    CHECK(std::includes(prev.begin(), prev.end(), kept.begin(), kept.end()));
    for (const Edge& e : f.edges) {
      CHECK(e.first < f.nodeCount());
      CHECK(e.second < f.nodeCount());
    }
    prev = kept;
  }
}

TEST_CASE("filter examples") {
  const Graph g = uniformTriangulation({9, {20, 20}});
  std::vector<double> sal(g.edgeCount());
  for (std::size_t i = 0; i < sal.size(); ++i) sal[i] = 0.1 + double(i);
  const DualGraph d = buildDual(g, pointsFor(g, sal));
  const DualGraph same = filterBySaliency(d, 0.0);
  CHECK(same.nodeCount() == d.nodeCount());
  CHECK(same.edgeCount() == d.edgeCount());
  CHECK(same.edgeSaliency == d.edgeSaliency);
  CHECK(filterBySaliency(d, 1e6).nodeCount() == 0);
  CHECK(filterBySaliency(d, 1e6).edgeCount() == 0);

  const Image flat = Image::filled(20, 20, 3.0);
  const DualGraph zero = buildDual(adaptGraph(flat, g, {}));
  CHECK(filterBySaliency(zero, 1e-300).nodeCount() == 0);
  CHECK_THROWS_AS(filterBySaliency(d, -1.0), ParameterError);
}

TEST_CASE("missing salient points are integrity errors") {
  const Graph g = uniformTriangulation({4, {8, 8}});
  auto pts = pointsFor(g, {1, 1, 1, 1, 1});
  pts.pop_back();
  CHECK_THROWS_AS(buildDual(g, pts), IntegrityError);
  const Graph noFaces(2, {0, 0, 1, 0, 0, 1}, {{0, 1}, {1, 2}, {0, 2}});
  CHECK_THROWS_AS(buildDual(noFaces, pointsFor(noFaces, {1, 1, 1}), DualPairing::SharedFace),
                  IntegrityError);
  CHECK(parsePairing("shared_node") == DualPairing::SharedNode);
  CHECK(parsePairing("face") == DualPairing::SharedFace);
  CHECK_FALSE(parsePairing("vertex").has_value());
}
