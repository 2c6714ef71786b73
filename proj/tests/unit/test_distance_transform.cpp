#include <doctest.h>

#include <cmath>
#include <random>

#include "gridadapt/distance_transform.hpp"
#include "gridadapt/errors.hpp"

using namespace gridadapt;

namespace {

Image bruteForce(const Image& mask) {
  std::vector<double> out(mask.size());
  for (std::size_t y = 0; y < mask.height(); ++y) {
    for (std::size_t x = 0; x < mask.width(); ++x) {
      double best = INFINITY;
      for (std::size_t v = 0; v < mask.height(); ++v) {
        for (std::size_t u = 0; u < mask.width(); ++u) {
          if (mask.at(u, v) == 0.0) continue;
          best = std::min(best, std::hypot(double(x) - double(u), double(y) - double(v)));
        }
      }
      out[x + mask.width() * y] = best;
    }
  }
  return Image(mask.dims(), out);
}

}  // namespace

TEST_CASE("distance transform examples") {
  std::vector<double> m(8 * 6, 0.0);
  m[0] = 1.0;
  const Image dt = distanceTransform(Image({8, 6}, m));
  CHECK(dt.at(3, 4) == 5.0);
  CHECK(dt.at(0, 0) == 0.0);

  const Image all = distanceTransform(Image::filled(5, 4, 1.0));
  for (double v : all.data()) CHECK(v == 0.0);

  std::vector<double> line(32 * 32, 0.0);
  for (std::size_t y = 0; y < 32; ++y) line[11 + 32 * y] = 1.0;
  const Image lt = distanceTransform(Image({32, 32}, line));
  for (std::size_t y = 0; y < 32; ++y) {
    for (std::size_t x = 0; x < 32; ++x) CHECK(lt.at(x, y) == std::abs(double(x) - 11.0));
  }
}

TEST_CASE("distance transform matches brute force on random masks") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const double density = 0.005 + 0.02 * (trial % 5);
    std::bernoulli_distribution on(density);
    const std::size_t w = 32 - trial % 3;
    const std::size_t h = 32;
    std::vector<double> m(w * h);
    for (double& v : m) v = on(rng) ? 1.0 : 0.0;
    m[(trial * 131) % m.size()] = 1.0;
    const Image mask({w, h}, m);
    const Image fast = distanceTransform(mask);
    const Image slow = bruteForce(mask);
    for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == slow[i]);
  }
}

TEST_CASE("distance transform errors") {
  CHECK_THROWS_AS(distanceTransform(Image::filled(4, 4, 0.0)), EvaluationError);
  CHECK_THROWS_AS(distanceTransform(Image({4}, {1, 0, 0, 0})), ParameterError);
}
