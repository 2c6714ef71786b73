#include "gridadapt/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <tuple>

#include "gridadapt/distance_transform.hpp"
#include "gridadapt/errors.hpp"
#include "gridadapt/graph.hpp"
#include "gridadapt/parallel.hpp"

namespace gridadapt {

std::vector<double> logSpacedThresholds(double log2Lo, double log2Hi, std::size_t count) {
  if (count == 0 || !(log2Hi >= log2Lo)) throw ParameterError("bad threshold grid");
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : double(i) / double(count - 1);
    grid[i] = std::exp2(log2Lo + f * (log2Hi - log2Lo));
  }
  return grid;
}

void RecallConfig::validate() const {
  if (!(dMin > 0.0)) throw ParameterError("dMin must be positive");
  for (std::size_t i = 1; i < sMinGrid.size(); ++i) {
    if (!(sMinGrid[i] > sMinGrid[i - 1])) {
      throw ParameterError("sMin grid must be strictly increasing");
    }
  }
  for (double s : sMinGrid) {
    if (!(s >= 0.0)) throw ParameterError("sMin values must be nonnegative");
  }
}

std::vector<double> contourDistances(const DualGraph& dual, const Image& edt, EdtLookup lookup) {
  std::vector<double> out(dual.nodes.size());
  for (std::size_t i = 0; i < dual.nodes.size(); ++i) {
    const auto& pos = dual.nodes[i].position;
    if (lookup == EdtLookup::Bilinear) {
      out[i] = sampleLinear(edt, pos);
    } else {
      const std::size_t x = static_cast<std::size_t>(std::lround(pos.at(0)));
      const std::size_t y = static_cast<std::size_t>(std::lround(pos.at(1)));
      if (!edt.contains(pos)) throw RangeError("salient point outside the contour mask");
      out[i] = edt.at(x, y);
    }
  }
  return out;
}

namespace {

RecallPoint countAt(const DualGraph& dual, const std::vector<double>& dist, double sMin,
                    double dMin) {
  RecallPoint p;
  p.sMin = sMin;
  for (std::size_t i = 0; i < dual.nodes.size(); ++i) {
    if (!(dual.nodes[i].saliency > sMin)) continue;
    ++p.totalCount;
    if (dist[i] < dMin) ++p.positiveCount;
  }
  if (p.totalCount > 0) p.recall = double(p.positiveCount) / double(p.totalCount);
  return p;
}

void checkMask(const DualGraph& dual, const Image& contour) {
  if (contour.dimension() != 2) throw EvaluationError("contour mask must be 2-D");
  for (const auto& n : dual.nodes) {
    if (!contour.contains(n.position)) {
      throw EvaluationError("dual node outside the contour mask extent");
    }
  }
}

}  // namespace

RecallPoint recallAt(const DualGraph& dual, const Image& edt, double sMin, double dMin,
                     EdtLookup lookup) {
  return countAt(dual, contourDistances(dual, edt, lookup), sMin, dMin);
}

RecallCurve boundaryRecall(const DualGraph& dual, const Image& contour, const RecallConfig& cfg) {
  cfg.validate();
  checkMask(dual, contour);
  const Image edt = distanceTransform(contour);
  const auto dist = contourDistances(dual, edt, cfg.lookup);
  RecallCurve curve;
  curve.points.reserve(cfg.sMinGrid.size());
  for (double s : cfg.sMinGrid) curve.points.push_back(countAt(dual, dist, s, cfg.dMin));
  return curve;
}

double saliencyPercentile(const DualGraph& dual, double q) {
  if (dual.nodes.empty()) throw EvaluationError("percentile of an empty dual graph");
  if (!(q >= 0.0 && q <= 100.0)) throw ParameterError("percentile must lie in [0, 100]");
  std::vector<double> s;
  s.reserve(dual.nodes.size());
  for (const auto& n : dual.nodes) s.push_back(n.saliency);
  std::sort(s.begin(), s.end());
  const double rank = q / 100.0 * double(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (rank - double(lo)) * (s[hi] - s[lo]);
}

std::vector<RecallCurve> averageOverNodeCounts(const std::vector<RecallCurve>& cells) {
  using Key = std::tuple<std::string, double, std::uint64_t, std::string>;
  std::map<Key, std::vector<const RecallCurve*>> groups;
  std::vector<Key> order;
  for (const auto& c : cells) {
    Key key{c.metadata.source, c.metadata.sigma, c.metadata.seed, c.metadata.method};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&c);
  }
  std::vector<RecallCurve> out;
  for (const auto& key : order) {
    const auto& members = groups[key];
    RecallCurve avg;
    avg.metadata = members.front()->metadata;
    avg.metadata.nodes = 0;
    avg.metadata.kAveraged = true;
    const std::size_t n = members.front()->points.size();
    for (std::size_t i = 0; i < n; ++i) {
      RecallPoint p;
      p.sMin = members.front()->points[i].sMin;
      double sum = 0.0;
      std::size_t defined = 0;
      for (const auto* m : members) {
        const auto& q = m->points.at(i);
        p.totalCount += q.totalCount;
        p.positiveCount += q.positiveCount;
        if (q.recall) {
          sum += *q.recall;
          ++defined;
        }
      }
      if (defined > 0) p.recall = sum / double(defined);
      avg.points.push_back(p);
    }
    out.push_back(std::move(avg));
  }
  return out;
}

SweepResult recallSweep(const SweepSpec& spec, std::size_t threads,
                        const std::function<void(std::size_t, std::size_t)>& progress) {
  spec.recall.validate();
  spec.adapt.validate();
  if (spec.methods.empty()) throw ParameterError("sweep needs at least one method");
  if (spec.recall.nodeCounts.empty() || spec.recall.noiseSigmas.empty() ||
      spec.recall.seeds.empty()) {
    throw ParameterError("sweep grids must be nonempty");
  }

  struct Source {
    std::string id;
    std::optional<ShapeKind> shape;
    const LabeledImage* labeled = nullptr;
  };
  std::vector<Source> sources;
  for (ShapeKind s : spec.shapes) sources.push_back({std::string(shapeName(s)), s, nullptr});
  for (const auto& li : spec.images) sources.push_back({li.id, std::nullopt, &li});
  if (sources.empty()) throw ParameterError("sweep has no shapes or images");

  struct Cell {
    std::size_t source;
    std::size_t nodes;
    double sigma;
    std::uint64_t seed;
    DetectorMethod method;
  };
  std::vector<Cell> cells;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (std::size_t k : spec.recall.nodeCounts) {
      for (double sigma : spec.recall.noiseSigmas) {
        for (std::uint64_t seed : spec.recall.seeds) {
          for (DetectorMethod m : spec.methods) cells.push_back({s, k, sigma, seed, m});
        }
      }
    }
  }

  // Contours depend only on the source.
  std::vector<Image> contours(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    contours[s] = sources[s].shape
                      ? groundTruthContour({*sources[s].shape, spec.shapeSize})
                      : sources[s].labeled->contour;
  }

  SweepResult result;
  result.cells.resize(cells.size());
  std::size_t done = 0;
  std::mutex progressMutex;
  parallelFor(cells.size(), resolveThreadCount(threads), [&](std::size_t i) {
    const Cell& cell = cells[i];
    const Source& src = sources[cell.source];
    try {
      Image img;
      if (src.shape) {
        img = generateSynthetic({*src.shape, spec.shapeSize}, cell.sigma, cell.seed);
      } else {
        const double maxI = src.labeled->image.intensityRange().max;
        img = addGaussianNoise(src.labeled->image, cell.sigma * maxI, cell.seed);
      }
      const Graph initial =
          uniformTriangulation({cell.nodes, {img.width(), img.height()}});
      AdaptConfig acfg = spec.adapt;
      acfg.detector.method = cell.method;
      acfg.threads = 1;
      const AdaptResult adapted = adaptGraph(img, initial, acfg);
      const DualGraph dual = buildDual(adapted, spec.pairing);
      RecallCurve curve = boundaryRecall(dual, contours[cell.source], spec.recall);
      curve.metadata = {src.id, initial.nodeCount(), cell.sigma, cell.seed,
                        std::string(methodName(cell.method)), false};
      result.cells[i] = std::move(curve);
    } catch (const std::exception& e) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "sweep cell source=%s K=%zu sigma=%g seed=%llu method=%s: ",
                    src.id.c_str(), cell.nodes, cell.sigma,
                    static_cast<unsigned long long>(cell.seed),
                    std::string(methodName(cell.method)).c_str());
      throw EvaluationError(buf + std::string(e.what()));
    }
    if (progress) {
      std::lock_guard lock(progressMutex);
      progress(++done, cells.size());
    }
  });
  result.kAveraged = averageOverNodeCounts(result.cells);
  return result;
}

void writeRecallCsv(std::ostream& out, const std::vector<RecallCurve>& curves) {
  out << "source,nodes,sigma,seed,method,k_averaged,s_min,log2_s_min,recall,total,positive\n";
  char buf[512];
  for (const auto& c : curves) {
    const auto& m = c.metadata;
    for (const auto& p : c.points) {
      char recall[32] = "";
      if (p.recall) std::snprintf(recall, sizeof recall, "%.6f", *p.recall);
      std::snprintf(buf, sizeof buf, "%s,%zu,%.4f,%llu,%s,%d,%.9g,%.6f,%s,%zu,%zu\n",
                    m.source.c_str(), m.nodes, m.sigma, static_cast<unsigned long long>(m.seed),
                    m.method.c_str(), m.kAveraged ? 1 : 0, p.sMin,
                    p.sMin > 0.0 ? std::log2(p.sMin) : -INFINITY, recall, p.totalCount,
                    p.positiveCount);
      out << buf;
    }
  }
}

void writeRecallCsv(const std::filesystem::path& path, const std::vector<RecallCurve>& curves) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  writeRecallCsv(out, curves);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace gridadapt
