#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gridadapt/errors.hpp"
#include "gridadapt/image_io.hpp"
#include "gridadapt/synthetic.hpp"

using namespace gridadapt;
namespace fs = std::filesystem;

namespace {

fs::path tempPath(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gridadapt_unit";
  fs::create_directories(dir);
  return dir / name;
}

void writeBytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

}  // namespace

TEST_CASE("8-bit images round-trip through PGM and PNG") {
  const Image img = generateSynthetic({ShapeKind::Donut, 32}, 0.0, 1);
  for (const char* name : {"rt.pgm", "rt.png"}) {
    const fs::path p = tempPath(name);
    saveImage(img, p);
    const Image back = loadImage(p);
    CHECK(back.dims() == img.dims());
    CHECK(std::equal(back.data().begin(), back.data().end(), img.data().begin()));
  }
}

TEST_CASE("ASCII and binary graymaps decode to the same values") {
  const Image img({3, 2}, {0, 17, 255, 128, 64, 1});
  saveImage(img, tempPath("a.pgm"), ImageFormat::PgmAscii);
  saveImage(img, tempPath("b.pgm"), ImageFormat::PgmBinary);
  const Image a = loadImage(tempPath("a.pgm"));
  const Image b = loadImage(tempPath("b.pgm"));
  CHECK(std::equal(a.data().begin(), a.data().end(), b.data().begin()));
  CHECK(std::equal(a.data().begin(), a.data().end(), img.data().begin()));
}

TEST_CASE("hand-written graymaps with comments and 16-bit samples") {
  writeBytes(tempPath("c.pgm"), "P2\n# comment\n2 2\n# another\n1000\n0 1000\n500 7\n");
  const Image a = loadImage(tempPath("c.pgm"));
  CHECK(a.at(1, 0) == 1000);
  CHECK(a.at(0, 1) == 500);

  std::string p5 = "P5 2 1 65535\n";
  p5 += std::string("\x01\x02\xff\xff", 4);
  writeBytes(tempPath("d.pgm"), p5);
  const Image b = loadImage(tempPath("d.pgm"));
  CHECK(b.at(0, 0) == 258);
  CHECK(b.at(1, 0) == 65535);
}

TEST_CASE("gray RGB PNG has luminance equal to the gray value") {
  std::vector<unsigned char> rgb;
  const unsigned char grays[] = {0, 13, 77, 200, 255, 128};
  for (unsigned char g : grays) rgb.insert(rgb.end(), {g, g, g});
  const auto bytes = encodePng(rgb, 3, 2, 3);
  const fs::path p = tempPath("gray_rgb.png");
  std::ofstream(p, std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()),
                                            std::streamsize(bytes.size()));
  const Image img = loadImage(p);
  for (std::size_t i = 0; i < 6; ++i) CHECK(img[i] == grays[i]);
}

TEST_CASE("I/O errors are descriptive") {
  CHECK_THROWS_AS(loadImage(tempPath("does_not_exist.pgm")), IoError);
  writeBytes(tempPath("bad.pgm"), "P7\n1 1\n255\n\x00");
  CHECK_THROWS_AS(loadImage(tempPath("bad.pgm")), IoError);
  writeBytes(tempPath("short.pgm"), "P5\n4 4\n255\nabc");
  CHECK_THROWS_AS(loadImage(tempPath("short.pgm")), IoError);
  writeBytes(tempPath("junk.png"), "not a png at all");
  CHECK_THROWS_AS(loadImage(tempPath("junk.png")), IoError);
  CHECK_THROWS_AS(loadImage(tempPath("x.tiff")), IoError);
}
