#include "gridadapt/gdl_export.hpp"

#include <fstream>
#include <ostream>

#include "gridadapt/errors.hpp"

namespace gridadapt {

using nlohmann::json;

std::string_view featuresName(NodeFeatures f) {
  switch (f) {
    case NodeFeatures::Intensity: return "intensity";
    case NodeFeatures::Saliency: return "saliency";
    case NodeFeatures::Both: return "both";
  }
  return "both";
}

std::optional<NodeFeatures> parseFeatures(std::string_view name) {
  if (name == "intensity") return NodeFeatures::Intensity;
  if (name == "saliency") return NodeFeatures::Saliency;
  if (name == "both") return NodeFeatures::Both;
  return std::nullopt;
}

std::vector<double> nodeSaliency(const Graph& g, const std::vector<SalientPoint>& points) {
  if (points.size() != g.edgeCount()) {
    throw IntegrityError("saliency features need one salient point per edge");
  }
  std::vector<double> out(g.nodeCount(), 0.0);
  for (std::size_t v = 0; v < g.nodeCount(); ++v) {
    const auto& inc = g.incidentEdges(v);
    if (inc.empty()) continue;
    double sum = 0.0;
    for (std::size_t e : inc) sum += points[e].saliency;
    out[v] = sum / double(inc.size());
  }
  return out;
}

GdlRecord makeGdlRecord(const AdaptResult& adapted, const Image& img, NodeFeatures features,
                        std::string id, std::optional<int> label) {
  const Graph& g = adapted.graph;
  if (g.dimension() != img.dimension()) {
    throw ParameterError("graph and image dimensionality differ");
  }
  GdlRecord rec;
  rec.id = std::move(id);
  rec.label = label;
  rec.features = features;
  rec.dim = g.dimension();
  rec.nodes.assign(g.coords().begin(), g.coords().end());
  rec.edges = g.edges();

  const bool haveSaliency = adapted.salientPoints.size() == g.edgeCount();
  std::vector<double> sal;
  if (features != NodeFeatures::Intensity) sal = nodeSaliency(g, adapted.salientPoints);

  rec.x.resize(g.nodeCount());
  for (std::size_t v = 0; v < g.nodeCount(); ++v) {
    auto& row = rec.x[v];
    if (features != NodeFeatures::Saliency) row.push_back(sampleLinear(img, g.position(v)));
    if (features != NodeFeatures::Intensity) row.push_back(sal[v]);
  }
  if (haveSaliency) {
    for (const auto& sp : adapted.salientPoints) rec.edgeSaliency.push_back(sp.saliency);
  }
  return rec;
}

json gdlToJson(const GdlRecord& rec) {
  json nodes = json::array();
  for (std::size_t i = 0; i + rec.dim <= rec.nodes.size(); i += rec.dim) {
    nodes.push_back(std::vector<double>(rec.nodes.begin() + std::ptrdiff_t(i),
                                        rec.nodes.begin() + std::ptrdiff_t(i + rec.dim)));
  }
  json edges = json::array();
  for (const Edge& e : rec.edges) edges.push_back({e.first, e.second});
  json doc{{"schema", "gridadapt.gdl"},
           {"schema_version", kGdlSchemaVersion},
           {"id", rec.id},
           {"label", rec.label ? json(*rec.label) : json(nullptr)},
           {"features", featuresName(rec.features)},
           {"feature_dim", rec.featureDim()},
           {"nodes", std::move(nodes)},
           {"edges", std::move(edges)},
           {"x", rec.x}};
  if (!rec.edgeSaliency.empty()) {
    json attr = json::array();
    for (double s : rec.edgeSaliency) attr.push_back({s});
    doc["edge_attr"] = std::move(attr);
  }
  return doc;
}

GdlRecord gdlFromJson(const json& doc) {
  if (!doc.is_object() || doc.value("schema", std::string{}) != "gridadapt.gdl") {
    throw IntegrityError("not a gridadapt.gdl record");
  }
  if (doc.value("schema_version", 0) != kGdlSchemaVersion) {
    throw IntegrityError("unsupported gdl schema_version");
  }
  GdlRecord rec;
  try {
    rec.id = doc.value("id", std::string{});
    if (doc.contains("label") && !doc.at("label").is_null()) rec.label = doc.at("label").get<int>();
    const auto f = parseFeatures(doc.at("features").get<std::string>());
    if (!f) throw IntegrityError("unknown feature mode");
    rec.features = *f;
    const auto& nodes = doc.at("nodes");
    rec.dim = nodes.empty() ? 2 : nodes.front().size();
    for (const auto& p : nodes) {
      const auto v = p.get<std::vector<double>>();
      if (v.size() != rec.dim) throw IntegrityError("ragged node coordinates");
      rec.nodes.insert(rec.nodes.end(), v.begin(), v.end());
    }
    const std::size_t n = nodes.size();
    for (const auto& e : doc.at("edges")) {
      const Edge edge{e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()};
      if (edge.first >= n || edge.second >= n) throw IntegrityError("edge references a missing node");
      rec.edges.push_back(edge);
    }
    rec.x = doc.at("x").get<std::vector<std::vector<double>>>();
    if (rec.x.size() != n) throw IntegrityError("feature rows differ from the node count");
    if (doc.at("feature_dim").get<std::size_t>() != rec.featureDim()) {
      throw IntegrityError("feature_dim disagrees with the feature mode");
    }
    for (const auto& row : rec.x) {
      if (row.size() != rec.featureDim()) throw IntegrityError("feature row has the wrong width");
    }
    if (doc.contains("edge_attr")) {
      for (const auto& a : doc.at("edge_attr")) rec.edgeSaliency.push_back(a.at(0).get<double>());
      if (rec.edgeSaliency.size() != rec.edges.size()) {
        throw IntegrityError("edge_attr rows differ from the edge count");
      }
    }
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("malformed gdl record: ") + e.what());
  }
  return rec;
}

void writeGdlLine(std::ostream& out, const GdlRecord& rec) { out << gdlToJson(rec).dump() << '\n'; }

void exportGdl(const AdaptResult& adapted, const Image& img, NodeFeatures features,
               const std::filesystem::path& path, bool append, std::string id,
               std::optional<int> label) {
  const GdlRecord rec = makeGdlRecord(adapted, img, features, std::move(id), label);
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  writeGdlLine(out, rec);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<GdlRecord> readGdl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<GdlRecord> out;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(gdlFromJson(json::parse(line)));
    } catch (const std::exception& e) {
      throw IntegrityError(path.string() + ":" + std::to_string(lineNo) + ": " + e.what());
    }
  }
  return out;
}

namespace {

std::uint32_t readBigEndian(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("truncated IDX header");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
         std::uint32_t(b[3]);
}

}  // namespace

IdxDataset readIdx(const std::filesystem::path& imagesPath,
                   const std::optional<std::filesystem::path>& labelsPath, std::size_t limit) {
  std::ifstream in(imagesPath, std::ios::binary);
  if (!in) throw IoError("cannot open '" + imagesPath.string() + "' for reading");
  if (readBigEndian(in) != 0x00000803) throw IoError("not an IDX ubyte image file");
  std::size_t count = readBigEndian(in);
  const std::size_t rows = readBigEndian(in);
  const std::size_t cols = readBigEndian(in);
  if (limit > 0) count = std::min(count, limit);

  IdxDataset ds;
  std::vector<unsigned char> buf(rows * cols);
  for (std::size_t i = 0; i < count; ++i) {
    if (!in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()))) {
      throw IoError("truncated IDX image data");
    }
    ds.images.emplace_back(std::vector<std::size_t>{cols, rows},
                           std::vector<double>(buf.begin(), buf.end()));
  }
  if (labelsPath) {
    std::ifstream lin(*labelsPath, std::ios::binary);
    if (!lin) throw IoError("cannot open '" + labelsPath->string() + "' for reading");
    if (readBigEndian(lin) != 0x00000801) throw IoError("not an IDX ubyte label file");
    if (readBigEndian(lin) < count) throw IoError("fewer labels than images");
    std::vector<unsigned char> labels(count);
    if (!lin.read(reinterpret_cast<char*>(labels.data()), std::streamsize(count))) {
      throw IoError("truncated IDX label data");
    }
    ds.labels.assign(labels.begin(), labels.end());
  }
  return ds;
}

}  // namespace gridadapt
