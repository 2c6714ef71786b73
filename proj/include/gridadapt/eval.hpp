#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gridadapt/adapt.hpp"
#include "gridadapt/dual.hpp"
#include "gridadapt/image.hpp"
#include "gridadapt/synthetic.hpp"

namespace gridadapt {

enum class EdtLookup { Bilinear, Nearest };

/// sMin values with log2 evenly spaced over [log2Lo, log2Hi].
std::vector<double> logSpacedThresholds(double log2Lo = -15.0, double log2Hi = 0.0,
                                        std::size_t count = 32);

struct RecallConfig {
  double dMin = 2.0;  ///< pixels
  std::vector<double> sMinGrid = logSpacedThresholds();
  std::vector<std::size_t> nodeCounts{64, 100, 144, 196, 256, 324, 400};
  std::vector<double> noiseSigmas{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<std::uint64_t> seeds{1};
  EdtLookup lookup = EdtLookup::Bilinear;

  void validate() const;
};

struct RecallPoint {
  double sMin = 0.0;
  std::optional<double> recall;  ///< absent when no point exceeds sMin
  std::size_t totalCount = 0;     ///< |T(sMin)|
  std::size_t positiveCount = 0;  ///< |P(sMin)|
};

struct CurveMetadata {
  std::string source;  ///< shape name or image id
  std::size_t nodes = 0;  ///< realized K
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string method;
  bool kAveraged = false;
};

struct RecallCurve {
  std::vector<RecallPoint> points;
  CurveMetadata metadata;
};

/// Distance of every dual node to the contour, read from a precomputed EDT.
std::vector<double> contourDistances(const DualGraph& dual, const Image& edt, EdtLookup lookup);

/// Recall at each threshold of a grid, using a contour distance transform
/// computed once.
RecallCurve boundaryRecall(const DualGraph& dual, const Image& contour, const RecallConfig& cfg);

/// Recall at one threshold; a negative sMin counts every node.
RecallPoint recallAt(const DualGraph& dual, const Image& edt, double sMin, double dMin,
                     EdtLookup lookup = EdtLookup::Bilinear);

/// Linear-interpolated percentile (q in [0, 100]) of the dual node saliencies.
double saliencyPercentile(const DualGraph& dual, double q);

/// One labelled input for the sweep: image plus binary contour mask.
struct LabeledImage {
  std::string id;
  Image image;
  Image contour;
};

struct SweepSpec {
  std::vector<ShapeKind> shapes;        ///< synthetic cells
  std::size_t shapeSize = 128;
  std::vector<LabeledImage> images;     ///< user-supplied cells (noise added per sigma)
  std::vector<DetectorMethod> methods{DetectorMethod::SlicDistance, DetectorMethod::Robust};
  RecallConfig recall;
  AdaptConfig adapt;                    ///< detector.method is overridden per cell
  DualPairing pairing = DualPairing::SharedFace;
};

struct SweepResult {
  std::vector<RecallCurve> cells;       ///< one per (source, K, sigma, seed, method)
  std::vector<RecallCurve> kAveraged;   ///< mean over K per (source, sigma, seed, method)
};

/// Full factorial sweep; deterministic for fixed seeds. Cells run in
/// parallel on `threads` workers (0: auto); output order is fixed.
SweepResult recallSweep(const SweepSpec& spec, std::size_t threads = 0,
                        const std::function<void(std::size_t, std::size_t)>& progress = {});

/// Mean of defined recalls over curves sharing all metadata except K.
std::vector<RecallCurve> averageOverNodeCounts(const std::vector<RecallCurve>& cells);

/// Long-format CSV: one row per (curve, sMin).
void writeRecallCsv(std::ostream& out, const std::vector<RecallCurve>& curves);
void writeRecallCsv(const std::filesystem::path& path, const std::vector<RecallCurve>& curves);

}  // namespace gridadapt
