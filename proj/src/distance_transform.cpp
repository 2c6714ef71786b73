#include "gridadapt/distance_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gridadapt/errors.hpp"

namespace gridadapt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform of f (Felzenszwalb & Huttenlocher). Values are
// integers or infinity, so the arithmetic is exact.
void transform1d(const std::vector<double>& f, std::vector<double>& out,
                 std::vector<std::size_t>& hull, std::vector<double>& bounds) {
  const std::size_t n = f.size();
  std::size_t k = 0;
  bool any = false;
  for (std::size_t q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (!any) {
      hull[0] = q;
      bounds[0] = -kInf;
      bounds[1] = kInf;
      any = true;
      continue;
    }
    auto intersect = [&](std::size_t p) {
      return ((f[q] + double(q) * double(q)) - (f[p] + double(p) * double(p))) /
             (2.0 * double(q) - 2.0 * double(p));
    };
    double s = intersect(hull[k]);
    // bounds[0] is -inf, so this stops at k == 0.
    while (s <= bounds[k]) {
      --k;
      s = intersect(hull[k]);
    }
    ++k;
    hull[k] = q;
    bounds[k] = s;
    bounds[k + 1] = kInf;
  }
  if (!any) {
    std::fill(out.begin(), out.end(), kInf);
    return;
  }
  k = 0;
  for (std::size_t q = 0; q < n; ++q) {
    while (bounds[k + 1] < double(q)) ++k;
    const double dq = double(q) - double(hull[k]);
    out[q] = dq * dq + f[hull[k]];
  }
}

}  // namespace

Image distanceTransform(const Image& mask) {
  if (mask.dimension() != 2) throw ParameterError("distance transform requires a 2-D mask");
  const std::size_t w = mask.width();
  const std::size_t h = mask.height();
  bool any = false;
  for (double v : mask.data()) any = any || v != 0.0;
  if (!any) throw EvaluationError("distance transform of an empty mask (no boundary pixels)");

  std::vector<double> sq(w * h);
  const std::size_t longest = std::max(w, h);
  std::vector<double> line(longest);
  std::vector<double> out(longest);
  std::vector<std::size_t> hull(longest);
  std::vector<double> bounds(longest + 1);

  // Columns.
  line.resize(h);
  out.resize(h);
  for (std::size_t x = 0; x < w; ++x) {
    for (std::size_t y = 0; y < h; ++y) line[y] = mask.at(x, y) != 0.0 ? 0.0 : kInf;
    transform1d(line, out, hull, bounds);
    for (std::size_t y = 0; y < h; ++y) sq[x + w * y] = out[y];
  }
  // Rows.
  line.resize(w);
  out.resize(w);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) line[x] = sq[x + w * y];
    transform1d(line, out, hull, bounds);
    for (std::size_t x = 0; x < w; ++x) sq[x + w * y] = std::sqrt(out[x]);
  }
  return Image({w, h}, std::move(sq));
}

}  // namespace gridadapt
