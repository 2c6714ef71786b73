#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gridadapt/adapt.hpp"
#include "gridadapt/dual.hpp"
#include "gridadapt/graph.hpp"

namespace gridadapt {

/// Version written into every graph document's "schema_version" field.
inline constexpr int kGraphSchemaVersion = 1;

/// {schema, schema_version, kind: "graph", dim, nodes, edges, faces}.
nlohmann::json graphToJson(const Graph& g);
Graph graphFromJson(const nlohmann::json& doc);

/// Graph document with kind "adapted" plus per-edge attributes
/// (t_hat, saliency, salient_position), residual_history, iterations and the
/// detector configuration.
nlohmann::json adaptedToJson(const AdaptResult& result, const AdaptConfig& cfg);
AdaptResult adaptedFromJson(const nlohmann::json& doc);

/// Graph document with kind "dual": nodes are salient positions, plus
/// node_saliency, primal_edge, edge_saliency and pairing. faces is empty.
nlohmann::json dualToJson(const DualGraph& dual, DualPairing pairing);
DualGraph dualFromJson(const nlohmann::json& doc);

nlohmann::json detectorToJson(const DetectorConfig& cfg);

nlohmann::json readJsonFile(const std::filesystem::path& path);
void writeJsonFile(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace gridadapt
