#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gridadapt/adapt.hpp"
#include "gridadapt/image.hpp"

namespace gridadapt {

enum class NodeFeatures { Intensity, Saliency, Both };

std::string_view featuresName(NodeFeatures f);
std::optional<NodeFeatures> parseFeatures(std::string_view name);

inline constexpr int kGdlSchemaVersion = 1;

/// One graph sample for a graph classifier.
///
/// Serialised as a single JSON line:
///   {"schema":"gridadapt.gdl","schema_version":1,"id":...,"label":int|null,
///    "features":"intensity|saliency|both","feature_dim":1|2,
///    "nodes":[[x,y],...],"edges":[[i,j],...],"x":[[f...],...],
///    "edge_attr":[[s],...]}
/// edge_attr holds the per-edge saliency and is present whenever the graph
/// carries salient points.
struct GdlRecord {
  std::string id;
  std::optional<int> label;
  NodeFeatures features = NodeFeatures::Both;
  std::size_t dim = 2;
  std::vector<double> nodes;                 ///< flat, dim per node
  std::vector<Edge> edges;
  std::vector<std::vector<double>> x;        ///< per-node features
  std::vector<double> edgeSaliency;          ///< empty when not exported

  std::size_t featureDim() const { return features == NodeFeatures::Both ? 2 : 1; }
};

/// Mean saliency over the edges incident to each node.
std::vector<double> nodeSaliency(const Graph& g, const std::vector<SalientPoint>& points);

/// Builds the record: intensity is sampleLinear at the node position,
/// saliency is the mean incident-edge saliency. Saliency features without
/// one salient point per edge raise IntegrityError.
GdlRecord makeGdlRecord(const AdaptResult& adapted, const Image& img, NodeFeatures features,
                        std::string id = {}, std::optional<int> label = std::nullopt);

nlohmann::json gdlToJson(const GdlRecord& rec);
GdlRecord gdlFromJson(const nlohmann::json& doc);

/// Appends one line to a JSONL stream.
void writeGdlLine(std::ostream& out, const GdlRecord& rec);

/// Writes (or appends to) a JSONL file.
void exportGdl(const AdaptResult& adapted, const Image& img, NodeFeatures features,
               const std::filesystem::path& path, bool append = false, std::string id = {},
               std::optional<int> label = std::nullopt);

/// Reads every record; errors name the 1-based line number.
std::vector<GdlRecord> readGdl(const std::filesystem::path& path);

/// Images and labels from the IDX files MNIST ships in (uncompressed).
struct IdxDataset {
  std::vector<Image> images;
  std::vector<int> labels;
};

IdxDataset readIdx(const std::filesystem::path& imagesPath,
                   const std::optional<std::filesystem::path>& labelsPath,
                   std::size_t limit = 0);

}  // namespace gridadapt
