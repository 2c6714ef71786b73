#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "gridadapt/eval.hpp"

namespace gridadapt {

/// A sweep as read from a TOML file, with every default filled in.
struct SweepConfig {
  SweepSpec spec;
  std::size_t threads = 0;
  std::optional<std::filesystem::path> csvPath;  ///< relative to the config file
};

/// Parses a TOML sweep description. Unknown keys and bad values raise
/// ParameterError naming the key. See configs/sweep.toml for the layout.
SweepConfig parseSweepConfig(const std::string& text,
                             const std::filesystem::path& baseDir = ".");
SweepConfig loadSweepConfig(const std::filesystem::path& path);

/// Fully resolved configuration, for run manifests.
nlohmann::json sweepConfigToJson(const SweepConfig& cfg);

}  // namespace gridadapt
