#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "gridadapt/errors.hpp"
#include "gridadapt/synthetic.hpp"

using namespace gridadapt;

TEST_CASE("noise-free shapes are binary") {
  for (ShapeKind s : allShapes()) {
    const Image img = generateSynthetic({s, 64}, 0.0, 99);
    const std::set<double> values(img.data().begin(), img.data().end());
    CHECK(values == std::set<double>{kBackgroundIntensity, kForegroundIntensity});
  }
}

TEST_CASE("generation is deterministic per seed") {
  const Image a = generateSynthetic({ShapeKind::Flat, 128}, 0.4, 7);
  const Image b = generateSynthetic({ShapeKind::Flat, 128}, 0.4, 7);
  const Image c = generateSynthetic({ShapeKind::Flat, 128}, 0.4, 8);
  CHECK(std::equal(a.data().begin(), a.data().end(), b.data().begin()));
  CHECK_FALSE(std::equal(a.data().begin(), a.data().end(), c.data().begin()));
}

TEST_CASE("noise level and centring") {
  const SyntheticShape donut{ShapeKind::Donut, 128};
  const Image noisy = generateSynthetic(donut, 0.6, 1);
  const Image clean = generateSynthetic(donut, 0.0, 1);

  // Background corner patch, well outside the outer radius.
  std::vector<double> patch;
  for (std::size_t y = 0; y < 32; ++y) {
    for (std::size_t x = 0; x < 40; ++x) patch.push_back(noisy.at(x, y));
  }
  REQUIRE(patch.size() >= 1000);
  double mean = 0.0;
  for (double v : patch) mean += v;
  mean /= double(patch.size());
  double var = 0.0;
  for (double v : patch) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / double(patch.size() - 1));
  CHECK(sd == doctest::Approx(0.6 * 255.0).epsilon(0.05));

  double diffMean = 0.0;
  for (std::size_t i = 0; i < noisy.size(); ++i) diffMean += noisy[i] - clean[i];
  diffMean /= double(noisy.size());
  CHECK(std::abs(diffMean) <= 3.0 * 0.6 * 255.0 / std::sqrt(double(noisy.size())));

  // Unclamped: a large sigma pushes values outside [0, 255].
  CHECK(noisy.intensityRange().min < 0.0);
  CHECK(noisy.intensityRange().max > 255.0);
}

TEST_CASE("canonical shape geometry") {
  const Image diag = generateSynthetic({ShapeKind::Diag, 32}, 0.0, 0);
  CHECK(diag.at(5, 4) == kForegroundIntensity);
  CHECK(diag.at(4, 4) == kBackgroundIntensity);
  const Image corner = generateSynthetic({ShapeKind::Corner, 32}, 0.0, 0);
  CHECK(corner.at(16, 16) == kForegroundIntensity);
  CHECK(corner.at(15, 31) == kBackgroundIntensity);
  const Image vertical = generateSynthetic({ShapeKind::Vertical, 32}, 0.0, 0);
  CHECK(vertical.at(16, 0) == kForegroundIntensity);
  CHECK(vertical.at(15, 31) == kBackgroundIntensity);
  const Image donut = generateSynthetic({ShapeKind::Donut, 64}, 0.0, 0);
  CHECK(donut.at(32, 32) == kBackgroundIntensity);  // hole
  CHECK(donut.at(32 + 16, 32) == kForegroundIntensity);
}

TEST_CASE("ground-truth contours") {
  SUBCASE("flat boundary is one or two full-width rows") {
    const Image c = groundTruthContour({ShapeKind::Flat, 128});
    std::size_t fullRows = 0;
    std::size_t onPixels = 0;
    for (std::size_t y = 0; y < 128; ++y) {
      std::size_t row = 0;
      for (std::size_t x = 0; x < 128; ++x) row += c.at(x, y) > 0 ? 1 : 0;
      onPixels += row;
      if (row == 128) ++fullRows;
      CHECK((row == 0 || row == 128));
    }
    CHECK((fullRows == 1 || fullRows == 2));
    CHECK(onPixels == fullRows * 128);
  }
  SUBCASE("circle contour length near 2 pi r") {
    const Image c = groundTruthContour({ShapeKind::Circle, 128});
    std::size_t count = 0;
    for (double v : c.data()) count += v > 0 ? 1 : 0;
    const double expected = 2.0 * std::numbers::pi * 0.3 * 128.0;
    CHECK(std::abs(double(count) - expected) <= 0.15 * expected);
  }
  SUBCASE("diag contour is the band next to the diagonal") {
    const Image c = groundTruthContour({ShapeKind::Diag, 64});
    for (std::size_t y = 0; y < 64; ++y) {
      for (std::size_t x = 0; x < 64; ++x) {
        const bool expected = x == y + 1;
        CHECK((c.at(x, y) > 0) == expected);
      }
    }
  }
  SUBCASE("contours are binary and lie on the foreground") {
    for (ShapeKind s : allShapes()) {
      const Image img = generateSynthetic({s, 48}, 0.0, 0);
      const Image c = groundTruthContour({s, 48});
      std::size_t on = 0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK((c[i] == 0.0 || c[i] == 1.0));
        if (c[i] > 0) {
          ++on;
          CHECK(img[i] == kForegroundIntensity);
        }
      }
      CHECK(on > 0);
    }
  }
}

TEST_CASE("shape names and parameter validation") {
  for (ShapeKind s : allShapes()) CHECK(parseShape(shapeName(s)) == s);
  CHECK_FALSE(parseShape("triangle").has_value());
  CHECK(allShapes().size() == 6);
  CHECK_THROWS_AS(generateSynthetic({ShapeKind::Circle, 8}, 0.0, 1), ParameterError);
  CHECK_THROWS_AS(generateSynthetic({ShapeKind::Circle, 64}, -0.1, 1), ParameterError);
  CHECK_THROWS_AS(generateSynthetic({ShapeKind::Circle, 64}, 1.5, 1), ParameterError);
}
