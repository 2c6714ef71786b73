#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gridadapt/graph.hpp"
#include "gridadapt/image.hpp"

namespace gridadapt {

enum class DetectorMethod { SlicDistance, Robust };

std::string_view methodName(DetectorMethod method);
std::optional<DetectorMethod> parseMethod(std::string_view name);

inline constexpr std::size_t kMinAutoSamples = 10;
inline constexpr std::size_t kMaxAutoSamples = 30;

struct DetectorConfig {
  DetectorMethod method = DetectorMethod::Robust;
  /// Trade-off weight: spatial term in the SLIC distance, centre
  /// regulariser in the robust measure.
  double lambda = 0.4;
  /// Samples per edge; 0 picks round(edge length in pixels) clamped to [10, 30].
  std::size_t samplesPerEdge = 0;
  /// Intensity normalisation; unset means the image intensity range.
  std::optional<double> intensityNorm;

  void validate() const;
};

/// Intensities sampled along an edge at the cell midpoints t_m = (m + 1/2) / N.
///
/// Endpoint intensities are kept separately for the SLIC intensity distance;
/// no sample sits on an endpoint.
struct EdgeProfile {
  std::vector<double> ts;
  std::vector<double> intensities;
  double startIntensity = 0.0;  ///< I(x_j)
  double endIntensity = 0.0;    ///< I(x_k)
  double length = 0.0;          ///< |x_k - x_j| in pixels

  std::size_t sampleCount() const { return ts.size(); }
};

/// Midpoint sample parameter (2m + 1) / (2N), computed from integers.
inline double sampleParameter(std::size_t m, std::size_t count) {
  return static_cast<double>(2 * m + 1) / static_cast<double>(2 * count);
}

/// Builds a profile from an intensity function of t (used by tests and the
/// synthetic oracles); `length` must be positive.
template <typename Fn>
EdgeProfile profileFromFunction(Fn&& intensityAt, std::size_t samples, double length = 1.0) {
  EdgeProfile p;
  p.length = length;
  p.startIntensity = intensityAt(0.0);
  p.endIntensity = intensityAt(1.0);
  p.ts.resize(samples);
  p.intensities.resize(samples);
  for (std::size_t m = 0; m < samples; ++m) {
    p.ts[m] = sampleParameter(m, samples);
    p.intensities[m] = intensityAt(p.ts[m]);
  }
  return p;
}

/// Location and strength of the feature crossing along one edge profile.
struct SalientEstimate {
  double tHat = 0.5;
  double saliency = 0.0;
};

struct SalientPoint {
  std::size_t edgeIndex = 0;
  double tHat = 0.5;
  std::vector<double> position;
  double saliency = 0.0;
};

/// Centre regulariser r(t) = -4 (t^2 - t).
inline double centerRegularizer(double t) { return -4.0 * (t * t - t); }

/// Crossing of the two combined space/intensity distance curves.
/// cfg.intensityNorm must be set. Saliency is the larger |d_c slope| at the
/// crossing divided by the norm; no crossing gives t = 0.5, saliency 0.
SalientEstimate detectSlic(const EdgeProfile& profile, const DetectorConfig& cfg);

/// Exhaustive argmax of m(t) = s(t) + lambda r(t), where s is the squared
/// normalised difference of the two sided, distance-weighted mean
/// intensities. Candidates are the N - 1 splits t = k / N between adjacent
/// samples, so a step between two samples is located to half a sample.
/// Saliency is s at the argmax. cfg.intensityNorm must be set.
SalientEstimate detectRobust(const EdgeProfile& profile, const DetectorConfig& cfg);

/// Robust objective terms at every candidate split (for plotting and tests).
struct RobustCurve {
  std::vector<double> ts;         ///< k / N for k = 1 .. N-1
  std::vector<double> saliency;   ///< s(t)
  std::vector<double> objective;  ///< m(t)
};
RobustCurve robustCurve(const EdgeProfile& profile, const DetectorConfig& cfg);

/// Dispatches on cfg.method.
SalientEstimate detectProfile(const EdgeProfile& profile, const DetectorConfig& cfg);

/// Sample count used for an edge of the given length.
std::size_t samplesForLength(const DetectorConfig& cfg, double length);

/// Resolved intensity normalisation (image range when unset; 1 on flat images).
double resolveIntensityNorm(const DetectorConfig& cfg, const Image& img);

/// Samples img between two points.
EdgeProfile sampleEdge(const Image& img, std::span<const double> from, std::span<const double> to,
                       std::size_t samples);

/// Samples one graph edge and runs the configured detector. A config with an
/// unset norm is resolved against img.
SalientPoint detectEdge(const Image& img, const Graph& g, std::size_t edgeIndex,
                        const DetectorConfig& cfg);

}  // namespace gridadapt
