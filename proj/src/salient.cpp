#include "gridadapt/salient.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gridadapt/errors.hpp"

namespace gridadapt {
namespace {

void checkProfile(const EdgeProfile& profile) {
  if (!(profile.length > 0.0)) throw ParameterError("degenerate zero-length edge");
  if (profile.ts.size() < 3) throw ParameterError("an edge profile needs at least 3 samples");
  if (profile.intensities.size() != profile.ts.size()) {
    throw ParameterError("edge profile sample and intensity counts differ");
  }
}

double requireNorm(const DetectorConfig& cfg) {
  if (!cfg.intensityNorm) throw ParameterError("intensity norm must be resolved before detection");
  return *cfg.intensityNorm;
}

// Integer numerators of t_m and 1 - t_m over the common denominator 2N, so
// mirrored samples produce bit-identical values.
double leftParam(std::size_t m, std::size_t n) { return double(2 * m + 1) / double(2 * n); }
double rightParam(std::size_t m, std::size_t n) { return double(2 * (n - m) - 1) / double(2 * n); }

// 4 t (1 - t) at the split t = k / N, exactly symmetric in k <-> N - k.
double regularizerAtSplit(std::size_t k, std::size_t n) {
  return double(4 * k * (n - k)) / double(n * n);
}

}  // namespace

std::string_view methodName(DetectorMethod method) {
  return method == DetectorMethod::Robust ? "robust" : "slic";
}

std::optional<DetectorMethod> parseMethod(std::string_view name) {
  if (name == "robust") return DetectorMethod::Robust;
  if (name == "slic") return DetectorMethod::SlicDistance;
  return std::nullopt;
}

void DetectorConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be >= 0");
  if (samplesPerEdge != 0 && samplesPerEdge < 3) {
    throw ParameterError("samples per edge must be at least 3 (or 0 for automatic)");
  }
  if (intensityNorm && !(*intensityNorm > 0.0 && std::isfinite(*intensityNorm))) {
    throw ParameterError("intensity norm must be positive");
  }
}

SalientEstimate detectSlic(const EdgeProfile& profile, const DetectorConfig& cfg) {
  checkProfile(profile);
  const double norm = requireNorm(cfg);
  const std::size_t n = profile.sampleCount();
  const auto& intensity = profile.intensities;

  std::vector<double> dcStart(n);
  std::vector<double> dcEnd(n);
  std::vector<double> diff(n);
  for (std::size_t m = 0; m < n; ++m) {
    dcStart[m] = std::abs(profile.startIntensity - intensity[m]);
    dcEnd[m] = std::abs(profile.endIntensity - intensity[m]);
    const double tj = leftParam(m, n);
    const double tk = rightParam(m, n);
    const double cj = dcStart[m] / norm;
    const double ck = dcEnd[m] / norm;
    diff[m] = std::sqrt(cj * cj + cfg.lambda * tj * tj) - std::sqrt(ck * ck + cfg.lambda * tk * tk);
  }

  // Sign changes of diff; zero samples between opposite signs are bridged and
  // the crossing is placed in the middle of the zero run.
  SalientEstimate best;
  bool found = false;
  std::optional<std::size_t> prev;
  for (std::size_t m = 0; m < n; ++m) {
    if (diff[m] == 0.0) continue;
    if (prev && std::signbit(diff[*prev]) != std::signbit(diff[m])) {
      const std::size_t a = *prev;
      const std::size_t b = m;
      const double u = b == a + 1 ? double(a) + diff[a] / (diff[a] - diff[b])
                                  : 0.5 * double(a + b);
      const double scale = double(n) / double(b - a);
      const double slope = std::max(std::abs(dcStart[b] - dcStart[a]) * scale,
                                    std::abs(dcEnd[b] - dcEnd[a]) * scale) /
                           norm;
      if (!found || slope > best.saliency) {
        best.tHat = (2.0 * u + 1.0) / (2.0 * double(n));
        best.saliency = slope;
        found = true;
      }
    }
    prev = m;
  }
  if (!found) return {};
  best.tHat = std::clamp(best.tHat, 0.0, 1.0);
  return best;
}

RobustCurve robustCurve(const EdgeProfile& profile, const DetectorConfig& cfg) {
  checkProfile(profile);
  const double norm = requireNorm(cfg);
  const std::size_t n = profile.sampleCount();
  const auto& intensity = profile.intensities;
  // Offsets from a reference sample keep flat profiles exactly flat.
  const double ref = intensity[0];

  // Sided weights 1/|x(t) - x_j| and 1/|x(t) - x_k|; the edge length cancels
  // once each side is normalised to a weighted mean.
  std::vector<double> leftSum(n + 1, 0.0);
  std::vector<double> leftWeight(n + 1, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    const double w = 1.0 / leftParam(m, n);
    leftSum[m + 1] = leftSum[m] + w * (intensity[m] - ref);
    leftWeight[m + 1] = leftWeight[m] + w;
  }
  std::vector<double> rightSum(n + 1, 0.0);
  std::vector<double> rightWeight(n + 1, 0.0);
  for (std::size_t m = n; m-- > 0;) {
    const double w = 1.0 / rightParam(m, n);
    rightSum[m] = rightSum[m + 1] + w * (intensity[m] - ref);
    rightWeight[m] = rightWeight[m + 1] + w;
  }

  // Split k puts samples [0, k) on the x_j side and [k, N) on the x_k side.
  RobustCurve curve;
  for (std::size_t k = 1; k < n; ++k) {
    const double left = leftSum[k] / leftWeight[k];
    const double right = rightSum[k] / rightWeight[k];
    const double s = (left - right) / norm;
    curve.ts.push_back(double(k) / double(n));
    curve.saliency.push_back(s * s);
    curve.objective.push_back(s * s + cfg.lambda * regularizerAtSplit(k, n));
  }
  return curve;
}

SalientEstimate detectRobust(const EdgeProfile& profile, const DetectorConfig& cfg) {
  const RobustCurve curve = robustCurve(profile, cfg);
  const std::size_t n = profile.sampleCount();
  const double best = *std::max_element(curve.objective.begin(), curve.objective.end());

  // Ties go to the split nearest the centre; a mirrored pair resolves to 0.5.
  std::size_t pick = curve.objective.size();
  std::size_t pickDistance = 0;
  bool mirroredTie = false;
  for (std::size_t i = 0; i < curve.objective.size(); ++i) {
    if (curve.objective[i] != best) continue;
    const std::size_t twice = 2 * (i + 1);
    const std::size_t distance = twice > n ? twice - n : n - twice;
    if (pick == curve.objective.size() || distance < pickDistance) {
      pick = i;
      pickDistance = distance;
      mirroredTie = false;
    } else if (distance == pickDistance) {
      mirroredTie = true;
    }
  }
  SalientEstimate out;
  out.tHat = mirroredTie ? 0.5 : curve.ts[pick];
  out.saliency = curve.saliency[pick];
  return out;
}

SalientEstimate detectProfile(const EdgeProfile& profile, const DetectorConfig& cfg) {
  return cfg.method == DetectorMethod::Robust ? detectRobust(profile, cfg)
                                              : detectSlic(profile, cfg);
}

std::size_t samplesForLength(const DetectorConfig& cfg, double length) {
  if (cfg.samplesPerEdge > 0) return cfg.samplesPerEdge;
  const double rounded = std::round(length);
  return static_cast<std::size_t>(
      std::clamp(rounded, double(kMinAutoSamples), double(kMaxAutoSamples)));
}

double resolveIntensityNorm(const DetectorConfig& cfg, const Image& img) {
  if (cfg.intensityNorm) return *cfg.intensityNorm;
  const double range = img.intensityRange().extent();
  return range > 0.0 ? range : 1.0;
}

EdgeProfile sampleEdge(const Image& img, std::span<const double> from, std::span<const double> to,
                       std::size_t samples) {
  const std::size_t d = from.size();
  if (to.size() != d) throw ParameterError("edge endpoints differ in dimension");
  if (d > kMaxSampleDims) throw ParameterError("edge dimensionality exceeds sampler limit");
  EdgeProfile p;
  double sq = 0.0;
  for (std::size_t i = 0; i < d; ++i) sq += (to[i] - from[i]) * (to[i] - from[i]);
  p.length = std::sqrt(sq);
  if (!(p.length > 0.0)) throw ParameterError("degenerate zero-length edge");
  if (samples < 3) throw ParameterError("an edge profile needs at least 3 samples");
  p.startIntensity = sampleLinear(img, from);
  p.endIntensity = sampleLinear(img, to);
  p.ts.resize(samples);
  p.intensities.resize(samples);
  std::array<double, kMaxSampleDims> x{};
  for (std::size_t m = 0; m < samples; ++m) {
    const double t = sampleParameter(m, samples);
    for (std::size_t i = 0; i < d; ++i) {
      const double lo = std::min(from[i], to[i]);
      const double hi = std::max(from[i], to[i]);
      x[i] = std::clamp(from[i] + t * (to[i] - from[i]), lo, hi);
    }
    p.ts[m] = t;
    p.intensities[m] = sampleLinear(img, std::span<const double>(x.data(), d));
  }
  return p;
}

SalientPoint detectEdge(const Image& img, const Graph& g, std::size_t edgeIndex,
                        const DetectorConfig& cfg) {
  if (edgeIndex >= g.edgeCount()) {
    throw RangeError("edge index " + std::to_string(edgeIndex) + " out of range");
  }
  const Edge& edge = g.edges()[edgeIndex];
  const auto from = g.position(edge.first);
  const auto to = g.position(edge.second);
  if (!img.contains(from) || !img.contains(to)) {
    throw RangeError("edge " + std::to_string(edgeIndex) + " has an endpoint outside the image");
  }
  DetectorConfig resolved = cfg;
  resolved.intensityNorm = resolveIntensityNorm(cfg, img);

  // Nodes that collapsed onto each other during adaptation carry no profile.
  const double length = g.edgeLength(edgeIndex);
  SalientEstimate est;
  if (length > 0.0) {
    const EdgeProfile profile = sampleEdge(img, from, to, samplesForLength(cfg, length));
    est = detectProfile(profile, resolved);
  }

  SalientPoint sp;
  sp.edgeIndex = edgeIndex;
  sp.tHat = est.tHat;
  sp.saliency = est.saliency;
  sp.position.resize(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    sp.position[i] = from[i] + est.tHat * (to[i] - from[i]);
  }
  return sp;
}

}  // namespace gridadapt
