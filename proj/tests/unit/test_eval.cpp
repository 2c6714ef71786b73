#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "gridadapt/distance_transform.hpp"
#include "gridadapt/errors.hpp"
#include "gridadapt/eval.hpp"
#include "gridadapt/graph.hpp"

using namespace gridadapt;

namespace {

DualGraph dualAt(const std::vector<std::array<double, 3>>& pts) {
  DualGraph d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d.nodes.push_back({i, 0.5, {pts[i][0], pts[i][1]}, pts[i][2]});
  }
  return d;
}

Image rowMask(std::size_t size, std::size_t row) {
  std::vector<double> m(size * size, 0.0);
  for (std::size_t x = 0; x < size; ++x) m[x + size * row] = 1.0;
  return Image({size, size}, m);
}

}  // namespace

TEST_CASE("threshold grid") {
  const auto grid = logSpacedThresholds();
  CHECK(grid.size() == 32);
  CHECK(grid.front() == std::exp2(-15.0));
  CHECK(grid.back() == 1.0);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("recall examples") {
  const Image contour = rowMask(20, 10);
  RecallConfig cfg;
  cfg.sMinGrid = {0.0, 0.25, 0.5, 0.75};

  SUBCASE("all points on the contour") {
    const auto d = dualAt({{3, 10, 0.9}, {7, 10, 0.3}, {15, 10, 0.6}});
    for (const auto& p : boundaryRecall(d, contour, cfg).points) {
      if (p.totalCount > 0) CHECK(p.recall == 1.0);
    }
  }
  SUBCASE("no point near the contour") {
    const auto d = dualAt({{3, 2, 0.9}, {7, 17, 0.3}});
    const auto curve = boundaryRecall(d, contour, cfg);
    CHECK(curve.points[0].recall == 0.0);
  }
  SUBCASE("mixed, hand-counted") {
    // distances 0, 1, 3, 5 ; dMin = 2
    const auto d = dualAt({{1, 10, 0.8}, {2, 11, 0.2}, {3, 13, 0.6}, {4, 5, 0.9}});
    const auto curve = boundaryRecall(d, contour, cfg);
    CHECK(curve.points[0].totalCount == 4);
    CHECK(curve.points[0].positiveCount == 2);
    CHECK(*curve.points[0].recall == 0.5);
    CHECK(curve.points[1].totalCount == 3);
    CHECK(*curve.points[1].recall == doctest::Approx(1.0 / 3.0));
    CHECK(curve.points[3].totalCount == 2);
    CHECK(*curve.points[3].recall == 0.5);
    const auto none = recallAt(d, distanceTransform(contour), 0.95, 2.0);
    CHECK(none.totalCount == 0);
    CHECK_FALSE(none.recall.has_value());
  }
  SUBCASE("|T| is nonincreasing and recall within [0, 1]") {
    std::vector<std::array<double, 3>> pts;
    for (int i = 0; i < 60; ++i) pts.push_back({double(i % 19), double((i * 7) % 19), (i % 13) / 13.0});
    cfg.sMinGrid = logSpacedThresholds(-6, 0, 16);
    const auto curve = boundaryRecall(dualAt(pts), contour, cfg);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
      CHECK(curve.points[i].totalCount <= curve.points[i - 1].totalCount);
    }
    for (const auto& p : curve.points) {
      if (p.recall) {
        CHECK(*p.recall >= 0.0);
        CHECK(*p.recall <= 1.0);
      }
    }
  }
}

TEST_CASE("EDT lookup modes") {
  const Image contour = rowMask(20, 10);
  const Image edt = distanceTransform(contour);
  const auto d = dualAt({{4, 11.6, 1.0}});
  CHECK(contourDistances(d, edt, EdtLookup::Bilinear)[0] == doctest::Approx(1.6));
  CHECK(contourDistances(d, edt, EdtLookup::Nearest)[0] == 2.0);
}

TEST_CASE("recall errors") {
  const auto d = dualAt({{1, 1, 1.0}});
  RecallConfig cfg;
  CHECK_THROWS_AS(boundaryRecall(d, Image::filled(5, 5, 0.0), cfg), EvaluationError);
  CHECK_THROWS_AS(boundaryRecall(dualAt({{9, 1, 1.0}}), rowMask(5, 2), cfg), EvaluationError);
  cfg.sMinGrid = {0.5, 0.5};
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = {};
  cfg.dMin = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("saliency percentile interpolates linearly") {
  const auto d = dualAt({{0, 0, 4}, {0, 0, 1}, {0, 0, 3}, {0, 0, 2}});
  CHECK(saliencyPercentile(d, 0) == 1.0);
  CHECK(saliencyPercentile(d, 100) == 4.0);
  CHECK(saliencyPercentile(d, 50) == 2.5);
  CHECK(saliencyPercentile(d, 90) == doctest::Approx(3.7));
  CHECK_THROWS_AS(saliencyPercentile(DualGraph{}, 50), EvaluationError);
}

TEST_CASE("unfiltered recall equals |P| over the primal edge count") {
  const Image img = generateSynthetic({ShapeKind::Corner, 64}, 0.0, 1);
  const AdaptResult r = adaptGraph(img, uniformTriangulation({49, {64, 64}}), {});
  const DualGraph d = buildDual(r);
  const Image edt = distanceTransform(groundTruthContour({ShapeKind::Corner, 64}));
  const RecallPoint p = recallAt(d, edt, -1.0, 2.0);
  CHECK(p.totalCount == r.graph.edgeCount());
  std::size_t near = 0;
  for (double dist : contourDistances(d, edt, EdtLookup::Bilinear)) near += dist < 2.0 ? 1 : 0;
  CHECK(p.positiveCount == near);
  CHECK(*p.recall == double(near) / double(r.graph.edgeCount()));
}

TEST_CASE("sweep cardinality, determinism and CSV") {
  SweepSpec spec;
  spec.shapes = {ShapeKind::Circle};
  spec.shapeSize = 64;
  spec.recall.nodeCounts = {64};
  spec.recall.noiseSigmas = {0.0};
  spec.recall.sMinGrid = logSpacedThresholds(-15, 0, 8);
  const SweepResult a = recallSweep(spec, 2);
  CHECK(a.cells.size() == 2);
  std::set<std::string> methods;
  for (const auto& c : a.cells) methods.insert(c.metadata.method);
  CHECK(methods == std::set<std::string>{"robust", "slic"});
  const SweepResult b = recallSweep(spec, 1);
  std::ostringstream ca, cb;
  writeRecallCsv(ca, a.cells);
  writeRecallCsv(cb, b.cells);
  CHECK(ca.str() == cb.str());
  std::istringstream lines(ca.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "source,nodes,sigma,seed,method,k_averaged,s_min,log2_s_min,recall,total,positive");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 2 * 8);
}

TEST_CASE("K averaging and a noisy donut ordering") {
  SweepSpec spec;
  spec.shapes = {ShapeKind::Donut};
  spec.recall.nodeCounts = {64, 100, 144};
  spec.recall.noiseSigmas = {0.6};
  spec.recall.seeds = {1, 2, 3};
  spec.recall.sMinGrid = logSpacedThresholds(-15, 0, 16);
  const SweepResult r = recallSweep(spec);
  CHECK(r.cells.size() == 3 * 3 * 2);
  CHECK(r.kAveraged.size() == 3 * 2);
  for (const auto& c : r.kAveraged) {
    CHECK(c.metadata.kAveraged);
    CHECK(c.metadata.nodes == 0);
  }
  // Manual mean for one (seed, method) group.
  double manual = 0.0;
  int n = 0;
  for (const auto& c : r.cells) {
    if (c.metadata.seed == 2 && c.metadata.method == "robust" && c.points[3].recall) {
      manual += *c.points[3].recall;
      ++n;
    }
  }
  for (const auto& c : r.kAveraged) {
    if (c.metadata.seed == 2 && c.metadata.method == "robust") {
      CHECK(*c.points[3].recall == doctest::Approx(manual / n));
    }
  }

  // Robust beats SLIC on the noisy donut at matched top-quartile thresholds.
  double robust = 0.0, slic = 0.0;
  for (std::uint64_t seed : {1, 2, 3}) {
    for (std::size_t k : {64, 100, 144}) {
      for (auto m : {DetectorMethod::Robust, DetectorMethod::SlicDistance}) {
        const Image img = generateSynthetic({ShapeKind::Donut, 128}, 0.6, seed);
        AdaptConfig cfg;
        cfg.detector.method = m;
        const DualGraph d = buildDual(adaptGraph(img, uniformTriangulation({k, {128, 128}}), cfg));
        const Image edt = distanceTransform(groundTruthContour({ShapeKind::Donut, 128}));
        const double r = *recallAt(d, edt, saliencyPercentile(d, 75), 2.0).recall;
        (m == DetectorMethod::Robust ? robust : slic) += r;
      }
    }
  }
  CHECK(robust > slic);
}

TEST_CASE("sweep errors identify the cell") {
  SweepSpec spec;
  LabeledImage li;
  li.id = "blank";
  li.image = Image::filled(32, 32, 1.0);
  li.contour = Image::filled(32, 32, 0.0);  // no boundary
  spec.images.push_back(li);
  spec.recall.nodeCounts = {16};
  spec.recall.noiseSigmas = {0.0};
  spec.methods = {DetectorMethod::Robust};
  try {
    recallSweep(spec, 1);
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(std::string(e.what()).find("source=blank") != std::string::npos);
  }
}
