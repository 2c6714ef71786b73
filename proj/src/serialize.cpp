#include "gridadapt/serialize.hpp"

#include <fstream>

#include "gridadapt/errors.hpp"

namespace gridadapt {

using nlohmann::json;

namespace {

json pointsToJson(std::span<const double> flat, std::size_t dim) {
  json out = json::array();
  for (std::size_t i = 0; i + dim <= flat.size(); i += dim) {
    out.push_back(std::vector<double>(flat.begin() + std::ptrdiff_t(i),
                                      flat.begin() + std::ptrdiff_t(i + dim)));
  }
  return out;
}

json edgesToJson(const std::vector<Edge>& edges) {
  json out = json::array();
  for (const Edge& e : edges) out.push_back({e.first, e.second});
  return out;
}

void checkHeader(const json& doc, const char* kind) {
  if (!doc.is_object()) throw IntegrityError("graph document is not a JSON object");
  if (doc.value("schema", std::string{}) != "gridadapt.graph") {
    throw IntegrityError("not a gridadapt graph document");
  }
  if (doc.value("schema_version", 0) != kGraphSchemaVersion) {
    throw IntegrityError("unsupported graph schema_version");
  }
  if (kind && doc.value("kind", std::string{}) != kind) {
    throw IntegrityError(std::string("expected a graph document of kind '") + kind + "'");
  }
}

json header(const char* kind, std::size_t dim) {
  return json{{"schema", "gridadapt.graph"},
              {"schema_version", kGraphSchemaVersion},
              {"kind", kind},
              {"dim", dim}};
}

}  // namespace

json detectorToJson(const DetectorConfig& cfg) {
  json d{{"method", methodName(cfg.method)},
         {"lambda", cfg.lambda},
         {"samples_per_edge", cfg.samplesPerEdge}};
  d["intensity_norm"] = cfg.intensityNorm ? json(*cfg.intensityNorm) : json("auto");
  return d;
}

json graphToJson(const Graph& g) {
  json doc = header("graph", g.dimension());
  doc["nodes"] = pointsToJson(g.coords(), g.dimension());
  doc["edges"] = edgesToJson(g.edges());
  json faces = json::array();
  json faceNodes = json::array();
  for (const Face& f : g.faces()) {
    faces.push_back(f.edges);
    faceNodes.push_back(f.nodes);
  }
  doc["faces"] = std::move(faces);
  doc["face_nodes"] = std::move(faceNodes);
  return doc;
}

Graph graphFromJson(const json& doc) {
  checkHeader(doc, nullptr);
  try {
    const std::size_t dim = doc.at("dim").get<std::size_t>();
    std::vector<double> coords;
    for (const auto& p : doc.at("nodes")) {
      const auto v = p.get<std::vector<double>>();
      if (v.size() != dim) throw IntegrityError("node coordinate count differs from dim");
      coords.insert(coords.end(), v.begin(), v.end());
    }
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
    }
    std::vector<Face> faces;
    const json& jf = doc.at("faces");
    const json empty = json::array();
    const json& jn = doc.contains("face_nodes") ? doc.at("face_nodes") : empty;
    for (std::size_t i = 0; i < jf.size(); ++i) {
      Face f;
      f.edges = jf[i].get<std::array<std::size_t, 3>>();
      if (i < jn.size()) {
        f.nodes = jn[i].get<std::array<std::size_t, 3>>();
      }
      faces.push_back(f);
    }
    return Graph(dim, std::move(coords), std::move(edges), std::move(faces));
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("malformed graph document: ") + e.what());
  }
}

json adaptedToJson(const AdaptResult& result, const AdaptConfig& cfg) {
  json doc = graphToJson(result.graph);
  doc["kind"] = "adapted";
  json tHat = json::array();
  json saliency = json::array();
  json positions = json::array();
  for (const auto& sp : result.salientPoints) {
    tHat.push_back(sp.tHat);
    saliency.push_back(sp.saliency);
    positions.push_back(sp.position);
  }
  doc["edge_attributes"] = {{"t_hat", std::move(tHat)},
                            {"saliency", std::move(saliency)},
                            {"salient_position", std::move(positions)}};
  doc["residual_history"] = result.residualHistory;
  doc["iterations"] = result.iterations;
  doc["intensity_norm"] = result.intensityNorm;
  doc["config"] = {{"max_iterations", cfg.maxIterations},
                   {"residual_threshold", cfg.residualThreshold},
                   {"clamp_to_extent", cfg.clampToExtent},
                   {"detector", detectorToJson(cfg.detector)}};
  return doc;
}

AdaptResult adaptedFromJson(const json& doc) {
  checkHeader(doc, "adapted");
  AdaptResult result;
  result.graph = graphFromJson(doc);
  try {
    const auto& attrs = doc.at("edge_attributes");
    const auto tHat = attrs.at("t_hat").get<std::vector<double>>();
    const auto saliency = attrs.at("saliency").get<std::vector<double>>();
    const auto& positions = attrs.at("salient_position");
    const std::size_t n = result.graph.edgeCount();
    if (tHat.size() != n || saliency.size() != n || positions.size() != n) {
      throw IntegrityError("per-edge attribute arrays must have one entry per edge");
    }
    for (std::size_t e = 0; e < n; ++e) {
      result.salientPoints.push_back(
          {e, tHat[e], positions[e].get<std::vector<double>>(), saliency[e]});
    }
    result.residualHistory = doc.at("residual_history").get<std::vector<double>>();
    result.iterations = doc.at("iterations").get<std::size_t>();
    result.intensityNorm = doc.value("intensity_norm", 1.0);
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("malformed adapted graph document: ") + e.what());
  }
  return result;
}

json dualToJson(const DualGraph& dual, DualPairing pairing) {
  const std::size_t dim = dual.nodes.empty() ? 2 : dual.nodes.front().position.size();
  json doc = header("dual", dim);
  json nodes = json::array();
  json saliency = json::array();
  json primal = json::array();
  json tHat = json::array();
  for (const auto& n : dual.nodes) {
    nodes.push_back(n.position);
    saliency.push_back(n.saliency);
    primal.push_back(n.edgeIndex);
    tHat.push_back(n.tHat);
  }
  doc["nodes"] = std::move(nodes);
  doc["edges"] = edgesToJson(dual.edges);
  doc["faces"] = json::array();
  doc["node_saliency"] = std::move(saliency);
  doc["primal_edge"] = std::move(primal);
  doc["t_hat"] = std::move(tHat);
  doc["edge_saliency"] = dual.edgeSaliency;
  doc["pairing"] = pairingName(pairing);
  return doc;
}

DualGraph dualFromJson(const json& doc) {
  checkHeader(doc, "dual");
  DualGraph dual;
  try {
    const auto& nodes = doc.at("nodes");
    const auto saliency = doc.at("node_saliency").get<std::vector<double>>();
    const auto primal = doc.at("primal_edge").get<std::vector<std::size_t>>();
    const auto tHat = doc.value("t_hat", std::vector<double>(nodes.size(), 0.5));
    if (saliency.size() != nodes.size() || primal.size() != nodes.size() ||
        tHat.size() != nodes.size()) {
      throw IntegrityError("dual node attribute arrays must match the node count");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      dual.nodes.push_back({primal[i], tHat[i], nodes[i].get<std::vector<double>>(), saliency[i]});
    }
    for (const auto& e : doc.at("edges")) {
      const Edge edge{e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()};
      if (edge.first >= dual.nodes.size() || edge.second >= dual.nodes.size()) {
        throw IntegrityError("dual edge references a missing node");
      }
      dual.edges.push_back(edge);
    }
    dual.edgeSaliency = doc.at("edge_saliency").get<std::vector<double>>();
    if (dual.edgeSaliency.size() != dual.edges.size()) {
      throw IntegrityError("edge_saliency must have one entry per dual edge");
    }
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("malformed dual graph document: ") + e.what());
  }
  return dual;
}

json readJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void writeJsonFile(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << doc.dump(1) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace gridadapt
