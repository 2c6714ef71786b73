#include <doctest.h>

#include <cmath>
#include <random>

#include "gridadapt/errors.hpp"
#include "gridadapt/image.hpp"

using namespace gridadapt;

namespace {

// Textbook bilinear formula, written out independently of the sampler.
double bilinearOracle(const Image& img, double x, double y) {
  const auto x0 = static_cast<std::size_t>(std::floor(x));
  const auto y0 = static_cast<std::size_t>(std::floor(y));
  const std::size_t x1 = std::min(x0 + 1, img.width() - 1);
  const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = x - double(x0);
  const double fy = y - double(y0);
  return img.at(x0, y0) * (1 - fx) * (1 - fy) + img.at(x1, y0) * fx * (1 - fy) +
         img.at(x0, y1) * (1 - fx) * fy + img.at(x1, y1) * fx * fy;
}

Image randomImage(std::size_t w, std::size_t h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-50.0, 300.0);
  std::vector<double> data(w * h);
  for (double& v : data) v = u(rng);
  return Image({w, h}, data);
}

}  // namespace

TEST_CASE("image construction validates extents") {
  CHECK_THROWS_AS(Image({}, {}), ParameterError);
  CHECK_THROWS_AS(Image({3, 0}, {}), ParameterError);
  CHECK_THROWS_AS(Image({2, 2}, {1.0, 2.0, 3.0}), ParameterError);

  const Image img({3, 2}, {1, 2, 3, 4, 5, -6});
  CHECK(img.size() == 3 * 2);
  CHECK(img.width() == 3);
  CHECK(img.height() == 2);
  CHECK(img.at(2, 1) == -6);
  CHECK(img.intensityRange().min == -6);
  CHECK(img.intensityRange().max == 5);
  for (double v : img.data()) {
    CHECK(v >= img.intensityRange().min);
    CHECK(v <= img.intensityRange().max);
  }
}

TEST_CASE("sampleLinear examples") {
  SUBCASE("constant image") {
    const Image img = Image::filled(9, 7, 42.5);
    for (double x : {0.0, 0.3, 4.5, 7.99, 8.0}) {
      for (double y : {0.0, 1.7, 6.0}) {
        const double p[] = {x, y};
        CHECK(sampleLinear(img, p) == 42.5);
      }
    }
  }
  SUBCASE("two-pixel 1-D ramp") {
    const Image img({2}, {0.0, 10.0});
    const double p[] = {0.5};
    CHECK(sampleLinear(img, p) == 5.0);
  }
  SUBCASE("checkerboard centre is the mean of the four neighbours") {
    std::vector<double> data(16);
    for (std::size_t y = 0; y < 4; ++y) {
      for (std::size_t x = 0; x < 4; ++x) data[x + 4 * y] = (x + y) % 2 ? 10.0 : 2.0;
    }
    const Image img({4, 4}, data);
    const double p[] = {1.5, 1.5};
    const double mean = (img.at(1, 1) + img.at(2, 1) + img.at(1, 2) + img.at(2, 2)) / 4.0;
    CHECK(sampleLinear(img, p) == doctest::Approx(mean).epsilon(1e-15));
    CHECK(mean == 6.0);
  }
}

TEST_CASE("sampleLinear matches the bilinear formula and grid values") {
  const Image img = randomImage(13, 9, 5);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(0.0, 12.0);
  std::uniform_real_distribution<double> uy(0.0, 8.0);
  for (int i = 0; i < 500; ++i) {
    const double p[] = {ux(rng), uy(rng)};
    CHECK(sampleLinear(img, p) == doctest::Approx(bilinearOracle(img, p[0], p[1])).epsilon(1e-12));
  }
  for (std::size_t y = 0; y < 9; ++y) {
    for (std::size_t x = 0; x < 13; ++x) {
      const double p[] = {double(x), double(y)};
      CHECK(sampleLinear(img, p) == img.at(x, y));
    }
  }
}

TEST_CASE("sampleLinear is Lipschitz in the adjacent-pixel difference") {
  const Image img = randomImage(16, 16, 21);
  double lip = 0.0;
  for (std::size_t y = 0; y < 16; ++y) {
    for (std::size_t x = 0; x < 16; ++x) {
      if (x + 1 < 16) lip = std::max(lip, std::abs(img.at(x + 1, y) - img.at(x, y)));
      if (y + 1 < 16) lip = std::max(lip, std::abs(img.at(x, y + 1) - img.at(x, y)));
    }
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 14.9);
  std::uniform_real_distribution<double> step(-0.01, 0.01);
  for (int i = 0; i < 1000; ++i) {
    const double a[] = {u(rng), u(rng)};
    const double b[] = {a[0] + step(rng), a[1] + step(rng)};
    const double eps = std::hypot(b[0] - a[0], b[1] - a[1]);
    // Bilinear patches are L-Lipschitz per axis, so sqrt(2) L in Euclidean norm.
    CHECK(std::abs(sampleLinear(img, a) - sampleLinear(img, b)) <= std::sqrt(2.0) * lip * eps + 1e-9);
  }
}

TEST_CASE("sampleLinear in three dimensions is trilinear") {
  std::vector<double> data(3 * 4 * 5);
  for (std::size_t z = 0; z < 5; ++z) {
    for (std::size_t y = 0; y < 4; ++y) {
      for (std::size_t x = 0; x < 3; ++x) data[x + 3 * (y + 4 * z)] = 2.0 * x - 3.0 * y + 0.5 * z;
    }
  }
  const Image vol({3, 4, 5}, data);
  const double p[] = {1.25, 2.5, 3.75};
  // Trilinear interpolation reproduces affine functions.
  CHECK(sampleLinear(vol, p) == doctest::Approx(2.0 * 1.25 - 3.0 * 2.5 + 0.5 * 3.75));
}

TEST_CASE("sampleLinear range errors name the axis") {
  const Image img = Image::filled(4, 3, 1.0);
  const double bad[] = {1.0, 2.5};
  try {
    sampleLinear(img, bad);
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find("axis 1") != std::string::npos);
  }
  const double neg[] = {-0.001, 0.0};
  CHECK_THROWS_AS(sampleLinear(img, neg), RangeError);
  const double wrongDim[] = {1.0};
  CHECK_THROWS_AS(sampleLinear(img, wrongDim), ParameterError);
  const double edge[] = {3.0, 2.0};
  CHECK(sampleLinear(img, edge) == 1.0);
}
