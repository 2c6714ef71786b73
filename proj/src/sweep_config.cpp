#include "gridadapt/sweep_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "gridadapt/errors.hpp"
#include "gridadapt/image_io.hpp"
#include "gridadapt/serialize.hpp"

namespace gridadapt {
namespace {

void rejectUnknown(const toml::table& table, const std::string& where,
                   const std::set<std::string>& allowed) {
  for (const auto& [key, value] : table) {
    if (!allowed.contains(std::string(key.str()))) {
      throw ParameterError("unknown key '" + where + std::string(key.str()) + "'");
    }
  }
}

template <typename T>
T scalar(const toml::table& table, const std::string& key, const std::string& where, T fallback) {
  const toml::node* node = table.get(key);
  if (!node) return fallback;
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = node->value<double>()) return *v;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (auto v = node->value_exact<bool>()) return *v;
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (auto v = node->value_exact<std::string>()) return *v;
  } else {
    if (auto v = node->value_exact<std::int64_t>()) {
      if (*v < 0) throw ParameterError("'" + where + key + "' must be nonnegative");
      return static_cast<T>(*v);
    }
  }
  throw ParameterError("'" + where + key + "' has the wrong type");
}

template <typename T>
std::vector<T> list(const toml::table& table, const std::string& key, const std::string& where,
                    std::vector<T> fallback) {
  const toml::node* node = table.get(key);
  if (!node) return fallback;
  const toml::array* arr = node->as_array();
  if (!arr) throw ParameterError("'" + where + key + "' must be an array");
  std::vector<T> out;
  for (const auto& item : *arr) {
    if constexpr (std::is_same_v<T, double>) {
      auto v = item.value<double>();
      if (!v) throw ParameterError("'" + where + key + "' must hold numbers");
      out.push_back(*v);
    } else if constexpr (std::is_same_v<T, std::string>) {
      auto v = item.value_exact<std::string>();
      if (!v) throw ParameterError("'" + where + key + "' must hold strings");
      out.push_back(*v);
    } else {
      auto v = item.value_exact<std::int64_t>();
      if (!v || *v < 0) throw ParameterError("'" + where + key + "' must hold nonnegative integers");
      out.push_back(static_cast<T>(*v));
    }
  }
  return out;
}

const toml::table& section(const toml::table& root, const char* name) {
  static const toml::table empty;
  const toml::node* node = root.get(name);
  if (!node) return empty;
  if (!node->is_table()) throw ParameterError(std::string("'") + name + "' must be a table");
  return *node->as_table();
}

}  // namespace

SweepConfig parseSweepConfig(const std::string& text, const std::filesystem::path& baseDir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "invalid TOML at line " << e.source().begin.line << ": " << e.description();
    throw ParameterError(msg.str());
  }
  rejectUnknown(root, "", {"sweep", "recall", "adapt", "images", "output"});

  SweepConfig cfg;
  SweepSpec& spec = cfg.spec;

  const auto& sweep = section(root, "sweep");
  rejectUnknown(sweep, "sweep.",
                {"shapes", "size", "methods", "node_counts", "sigmas", "seeds", "pairing",
                 "threads"});
  spec.shapes.clear();
  for (const auto& name : list<std::string>(sweep, "shapes", "sweep.", {})) {
    const auto s = parseShape(name);
    if (!s) throw ParameterError("unknown shape '" + name + "'");
    spec.shapes.push_back(*s);
  }
  spec.shapeSize = scalar<std::size_t>(sweep, "size", "sweep.", spec.shapeSize);
  if (sweep.contains("methods")) {
    spec.methods.clear();
    for (const auto& name : list<std::string>(sweep, "methods", "sweep.", {})) {
      const auto m = parseMethod(name);
      if (!m) throw ParameterError("unknown method '" + name + "'");
      spec.methods.push_back(*m);
    }
  }
  spec.recall.nodeCounts = list(sweep, "node_counts", "sweep.", spec.recall.nodeCounts);
  spec.recall.noiseSigmas = list(sweep, "sigmas", "sweep.", spec.recall.noiseSigmas);
  spec.recall.seeds = list(sweep, "seeds", "sweep.", spec.recall.seeds);
  const auto pairing = scalar<std::string>(sweep, "pairing", "sweep.", "shared_face");
  const auto p = parsePairing(pairing);
  if (!p) throw ParameterError("unknown pairing '" + pairing + "'");
  spec.pairing = *p;
  cfg.threads = scalar<std::size_t>(sweep, "threads", "sweep.", 0);

  const auto& recall = section(root, "recall");
  rejectUnknown(recall, "recall.", {"d_min", "log2_lo", "log2_hi", "thresholds", "lookup"});
  spec.recall.dMin = scalar<double>(recall, "d_min", "recall.", spec.recall.dMin);
  spec.recall.sMinGrid = logSpacedThresholds(scalar<double>(recall, "log2_lo", "recall.", -15.0),
                                             scalar<double>(recall, "log2_hi", "recall.", 0.0),
                                             scalar<std::size_t>(recall, "thresholds", "recall.", 32));
  const auto lookup = scalar<std::string>(recall, "lookup", "recall.", "bilinear");
  if (lookup == "bilinear") {
    spec.recall.lookup = EdtLookup::Bilinear;
  } else if (lookup == "nearest") {
    spec.recall.lookup = EdtLookup::Nearest;
  } else {
    throw ParameterError("unknown EDT lookup '" + lookup + "'");
  }

  const auto& adapt = section(root, "adapt");
  rejectUnknown(adapt, "adapt.",
                {"max_iterations", "residual_threshold", "lambda", "samples_per_edge",
                 "intensity_norm", "clamp_to_extent"});
  AdaptConfig& a = spec.adapt;
  a.maxIterations = scalar<std::size_t>(adapt, "max_iterations", "adapt.", a.maxIterations);
  a.residualThreshold = scalar<double>(adapt, "residual_threshold", "adapt.", a.residualThreshold);
  a.detector.lambda = scalar<double>(adapt, "lambda", "adapt.", a.detector.lambda);
  a.detector.samplesPerEdge =
      scalar<std::size_t>(adapt, "samples_per_edge", "adapt.", a.detector.samplesPerEdge);
  if (adapt.contains("intensity_norm")) {
    a.detector.intensityNorm = scalar<double>(adapt, "intensity_norm", "adapt.", 1.0);
  }
  a.clampToExtent = scalar<bool>(adapt, "clamp_to_extent", "adapt.", a.clampToExtent);

  if (const toml::node* images = root.get("images")) {
    const toml::array* arr = images->as_array();
    if (!arr) throw ParameterError("'images' must be an array of tables");
    for (const auto& item : *arr) {
      const toml::table* t = item.as_table();
      if (!t) throw ParameterError("'images' must be an array of tables");
      rejectUnknown(*t, "images.", {"id", "image", "contour", "foreground"});
      const auto imagePath = baseDir / scalar<std::string>(*t, "image", "images.", "");
      const auto contourPath = baseDir / scalar<std::string>(*t, "contour", "images.", "");
      LabeledImage li;
      li.id = scalar<std::string>(*t, "id", "images.", imagePath.stem().string());
      li.image = loadImage(imagePath);
      const Image labels = loadImage(contourPath);
      // A label image is reduced to its boundary; a binary mask is used as is.
      if (t->contains("foreground")) {
        li.contour = contourMask(labels, scalar<double>(*t, "foreground", "images.", 1.0));
      } else {
        std::vector<double> bin(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) bin[i] = labels[i] > 0.0 ? 1.0 : 0.0;
        li.contour = Image(labels.dims(), std::move(bin));
      }
      spec.images.push_back(std::move(li));
    }
  }

  const auto& output = section(root, "output");
  rejectUnknown(output, "output.", {"csv"});
  if (output.contains("csv")) cfg.csvPath = baseDir / scalar<std::string>(output, "csv", "output.", "");

  spec.recall.validate();
  spec.adapt.validate();
  if (spec.shapes.empty() && spec.images.empty()) {
    throw ParameterError("sweep lists no shapes and no images");
  }
  return cfg;
}

SweepConfig loadSweepConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream text;
  text << in.rdbuf();
  return parseSweepConfig(text.str(), path.parent_path().empty() ? "." : path.parent_path());
}

nlohmann::json sweepConfigToJson(const SweepConfig& cfg) {
  const SweepSpec& s = cfg.spec;
  nlohmann::json shapes = nlohmann::json::array();
  for (ShapeKind k : s.shapes) shapes.push_back(shapeName(k));
  nlohmann::json methods = nlohmann::json::array();
  for (DetectorMethod m : s.methods) methods.push_back(methodName(m));
  nlohmann::json images = nlohmann::json::array();
  for (const auto& li : s.images) images.push_back(li.id);
  return {{"shapes", shapes},
          {"size", s.shapeSize},
          {"methods", methods},
          {"images", images},
          {"node_counts", s.recall.nodeCounts},
          {"sigmas", s.recall.noiseSigmas},
          {"seeds", s.recall.seeds},
          {"pairing", pairingName(s.pairing)},
          {"threads", cfg.threads},
          {"d_min", s.recall.dMin},
          {"s_min_grid", s.recall.sMinGrid},
          {"lookup", s.recall.lookup == EdtLookup::Bilinear ? "bilinear" : "nearest"},
          {"max_iterations", s.adapt.maxIterations},
          {"residual_threshold", s.adapt.residualThreshold},
          {"clamp_to_extent", s.adapt.clampToExtent},
          {"detector", detectorToJson(s.adapt.detector)},
          {"csv", cfg.csvPath ? nlohmann::json(cfg.csvPath->string()) : nlohmann::json(nullptr)}};
}

}  // namespace gridadapt
