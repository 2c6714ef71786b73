#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gridadapt/errors.hpp"
#include "gridadapt/gdl_export.hpp"
#include "gridadapt/synthetic.hpp"

using namespace gridadapt;
namespace fs = std::filesystem;

namespace {

fs::path tempPath(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gridadapt_unit";
  fs::create_directories(dir);
  return dir / name;
}

void writeBigEndian(std::ofstream& out, std::uint32_t v) {
  const char b[] = {char(v >> 24), char(v >> 16), char(v >> 8), char(v)};
  out.write(b, 4);
}

}  // namespace

TEST_CASE("constant image features") {
  const Image img = Image::filled(28, 28, 123.25);
  const AdaptResult r = adaptGraph(img, uniformTriangulation({49, {28, 28}}), {});
  const GdlRecord in = makeGdlRecord(r, img, NodeFeatures::Intensity);
  for (const auto& row : in.x) CHECK(row == std::vector<double>{123.25});
  const GdlRecord sal = makeGdlRecord(r, img, NodeFeatures::Saliency);
  for (const auto& row : sal.x) CHECK(row == std::vector<double>{0.0});
  const GdlRecord both = makeGdlRecord(r, img, NodeFeatures::Both);
  CHECK(both.featureDim() == 2);
  CHECK(both.x.size() == 49);
  CHECK(both.edges.size() == 120);
  CHECK(both.edgeSaliency.size() == 120);
}

TEST_CASE("node saliency is the mean over incident edges") {
  const Image img = generateSynthetic({ShapeKind::Diag, 32}, 0.1, 2);
  const AdaptResult r = adaptGraph(img, uniformTriangulation({25, {32, 32}}), {});
  const auto s = nodeSaliency(r.graph, r.salientPoints);
  for (std::size_t v = 0; v < r.graph.nodeCount(); ++v) {
    double sum = 0.0;
    int n = 0;
    for (const Edge& e : r.graph.edges()) {
      if (e.first == v || e.second == v) {
        sum += r.salientPoints[&e - r.graph.edges().data()].saliency;
        ++n;
      }
    }
    CHECK(s[v] == doctest::Approx(sum / n).epsilon(1e-14));
  }
  const GdlRecord rec = makeGdlRecord(r, img, NodeFeatures::Both);
  for (std::size_t v = 0; v < r.graph.nodeCount(); ++v) {
    CHECK(rec.x[v][0] == sampleLinear(img, r.graph.position(v)));
    CHECK(rec.x[v][1] == s[v]);
  }
}

TEST_CASE("jsonl export round-trips within 1e-9") {
  const fs::path p = tempPath("set.jsonl");
  fs::remove(p);
  std::vector<GdlRecord> written;
  for (int i = 0; i < 5; ++i) {
    const Image img = generateSynthetic({allShapes()[i], 28}, 0.3, std::uint64_t(i));
    const AdaptResult r = adaptGraph(img, uniformTriangulation({49, {28, 28}}), {});
    exportGdl(r, img, NodeFeatures::Both, p, true, "img" + std::to_string(i), i);
    written.push_back(makeGdlRecord(r, img, NodeFeatures::Both, "img" + std::to_string(i), i));
  }
  const auto back = readGdl(p);
  REQUIRE(back.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(back[i].id == written[i].id);
    CHECK(back[i].label == int(i));
    CHECK(back[i].nodes.size() == 2 * 49);
    CHECK(back[i].edges == written[i].edges);
    for (std::size_t v = 0; v < 49; ++v) {
      for (std::size_t k = 0; k < 2; ++k) {
        CHECK(std::abs(back[i].x[v][k] - written[i].x[v][k]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("integrity errors") {
  const Image img = Image::filled(16, 16, 1.0);
  AdaptResult bare;
  bare.graph = uniformTriangulation({9, {16, 16}});
  CHECK_NOTHROW(makeGdlRecord(bare, img, NodeFeatures::Intensity));
  CHECK_THROWS_AS(makeGdlRecord(bare, img, NodeFeatures::Saliency), IntegrityError);
  CHECK_THROWS_AS(makeGdlRecord(bare, img, NodeFeatures::Both), IntegrityError);

  const fs::path p = tempPath("bad.jsonl");
  {
    std::ofstream out(p);
    writeGdlLine(out, makeGdlRecord(bare, img, NodeFeatures::Intensity));
    out << "{\"schema\":\"gridadapt.gdl\",\"schema_version\":1}\n";
  }
  try {
    readGdl(p);
    FAIL("expected IntegrityError");
  } catch (const IntegrityError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK(parseFeatures("both") == NodeFeatures::Both);
  CHECK_FALSE(parseFeatures("rgb").has_value());
}

TEST_CASE("IDX reader") {
  const fs::path images = tempPath("t10k-images-idx3-ubyte");
  const fs::path labels = tempPath("t10k-labels-idx1-ubyte");
  {
    std::ofstream out(images, std::ios::binary);
    writeBigEndian(out, 0x803);
    writeBigEndian(out, 3);
    writeBigEndian(out, 2);
    writeBigEndian(out, 4);
    for (int i = 0; i < 3 * 8; ++i) out.put(char(i * 10));
    std::ofstream lab(labels, std::ios::binary);
    writeBigEndian(lab, 0x801);
    writeBigEndian(lab, 3);
    lab.put(7).put(2).put(1);
  }
  const IdxDataset ds = readIdx(images, labels, 2);
  REQUIRE(ds.images.size() == 2);
  CHECK(ds.images[0].width() == 4);
  CHECK(ds.images[0].height() == 2);
  CHECK(ds.images[1].at(0, 0) == 80);
  CHECK(ds.labels == std::vector<int>{7, 2});
  CHECK_THROWS_AS(readIdx(labels, std::nullopt), IoError);
}
