#include "varcalc/convex.hpp"

#include <algorithm>
#include <cmath>

#include "varcalc/errors.hpp"

namespace varcalc {

SampledFunction1D::SampledFunction1D(std::vector<double> v,
                                     std::vector<double> w,
                                     Interpretation interp)
    : abscissae(std::move(v)), ordinates(std::move(w)), interpretation(interp) {
  if (abscissae.size() != ordinates.size())
    throw DimensionMismatch("sample abscissae and ordinates differ in length");
  if (abscissae.empty()) throw TooFewFinitePoints("empty sample set");
  for (std::size_t i = 0; i + 1 < abscissae.size(); ++i) {
    if (!(abscissae[i] < abscissae[i + 1]))
      throw ConfigError("abscissae must be strictly increasing");
  }
  bool any_finite = false;
  for (double w_i : ordinates) {
    if (std::isnan(w_i)) throw NonFiniteState("NaN ordinate in sample set");
    if (std::isfinite(w_i)) any_finite = true;
  }
  if (!any_finite) throw TooFewFinitePoints("no finite ordinate in sample set");
}

std::pair<std::size_t, std::size_t> SampledFunction1D::finite_range() const {
  std::size_t first = abscissae.size(), last = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < ordinates.size(); ++i) {
    if (std::isfinite(ordinates[i])) {
      if (count == 0) first = i;
      last = i;
      ++count;
    }
  }
  if (count < 2)
    throw TooFewFinitePoints("need at least two finite samples");
  return {first, last};
}

double SampledFunction1D::interpolate(double v) const {
  auto it = std::lower_bound(abscissae.begin(), abscissae.end(), v);
  if (it == abscissae.end()) return kInf;
  std::size_t hi = static_cast<std::size_t>(it - abscissae.begin());
  if (abscissae[hi] == v) return ordinates[hi];
  if (hi == 0) return kInf;
  std::size_t lo = hi - 1;
  if (!std::isfinite(ordinates[lo]) || !std::isfinite(ordinates[hi]))
    return kInf;
  double t = (v - abscissae[lo]) / (abscissae[hi] - abscissae[lo]);
  return ordinates[lo] + t * (ordinates[hi] - ordinates[lo]);
}

SampledFunction1D lower_convex_envelope_1d(const SampledFunction1D& fn) {
  // Collect finite epigraph points in abscissa order.
  std::vector<std::size_t> finite;
  finite.reserve(fn.size());
  for (std::size_t i = 0; i < fn.size(); ++i)
    if (std::isfinite(fn.ordinates[i])) finite.push_back(i);
  if (finite.size() < 2)
    throw TooFewFinitePoints("envelope needs at least two finite samples");

  // Monotone chain: keep only points where the chain turns upward, i.e. the
  // middle point lies strictly below the chord of its neighbours.
  std::vector<std::size_t> hull;
  hull.reserve(finite.size());
  auto cross = [&](std::size_t a, std::size_t b, std::size_t c) {
    double ax = fn.abscissae[a], ay = fn.ordinates[a];
    double bx = fn.abscissae[b], by = fn.ordinates[b];
    double cx = fn.abscissae[c], cy = fn.ordinates[c];
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  };
  for (std::size_t idx : finite) {
    while (hull.size() >= 2 &&
           cross(hull[hull.size() - 2], hull[hull.size() - 1], idx) <= 0.0)
      hull.pop_back();
    hull.push_back(idx);
  }

  // Evaluate the hull at every input abscissa; +inf is preserved outside the
  // hull of the finite abscissae, and interior +inf samples are replaced by
  // the hull value (the envelope of the finite points passes below them).
  SampledFunction1D out = fn;
  out.interpretation = SampledFunction1D::Interpretation::kPiecewiseLinear;
  std::size_t seg = 0;
  for (std::size_t i = finite.front(); i <= finite.back(); ++i) {
    double v = fn.abscissae[i];
    while (seg + 1 < hull.size() && fn.abscissae[hull[seg + 1]] < v) ++seg;
    std::size_t a = hull[seg];
    std::size_t b = hull[std::min(seg + 1, hull.size() - 1)];
    if (a == b || v <= fn.abscissae[a]) {
      out.ordinates[i] = fn.ordinates[a];
    } else {
      double t = (v - fn.abscissae[a]) / (fn.abscissae[b] - fn.abscissae[a]);
      out.ordinates[i] =
          fn.ordinates[a] + t * (fn.ordinates[b] - fn.ordinates[a]);
    }
  }
  return out;
}

Conjugate1D legendre_fenchel(const SampledFunction1D& fn,
                             const std::vector<double>& dual_grid) {
  if (dual_grid.empty()) throw EmptyDualGrid("empty dual grid");
  for (std::size_t j = 0; j + 1 < dual_grid.size(); ++j)
    if (!(dual_grid[j] < dual_grid[j + 1]))
      throw ConfigError("dual grid must be strictly increasing");
  auto [first, last] = fn.finite_range();

  Conjugate1D out;
  out.truncated.resize(dual_grid.size(), false);
  out.argmax.resize(dual_grid.size(), 0);
  std::vector<double> values(dual_grid.size());
  // For each dual point scan all finite samples.  First finite index with
  // the maximal value wins, which keeps results deterministic.
  for (std::size_t j = 0; j < dual_grid.size(); ++j) {
    double p = dual_grid[j];
    double best = -kInf;
    std::size_t best_i = first;
    for (std::size_t i = first; i <= last; ++i) {
      if (!std::isfinite(fn.ordinates[i])) continue;
      double cand = p * fn.abscissae[i] - fn.ordinates[i];
      if (cand > best) {
        best = cand;
        best_i = i;
      }
    }
    values[j] = best;
    out.argmax[j] = best_i;
    out.truncated[j] = (best_i == first || best_i == last);
  }
  out.transform = SampledFunction1D(
      dual_grid, std::move(values),
      SampledFunction1D::Interpretation::kPointwise);
  return out;
}

OneSidedDerivatives one_sided_derivatives(const SampledFunction1D& convex_fn,
                                          double at) {
  auto [first, last] = convex_fn.finite_range();
  const auto& v = convex_fn.abscissae;
  const auto& w = convex_fn.ordinates;
  if (!(v[first] < at && at < v[last]))
    throw PointOutsideFiniteRegion(
        "query point must lie strictly inside the finite sample range");
  // Locate the sample at or just above the query point.
  auto it = std::lower_bound(v.begin() + first, v.begin() + last + 1, at);
  std::size_t hi = static_cast<std::size_t>(it - v.begin());
  if (v[hi] == at) {
    return {(w[hi] - w[hi - 1]) / (v[hi] - v[hi - 1]),
            (w[hi + 1] - w[hi]) / (v[hi + 1] - v[hi])};
  }
  double slope = (w[hi] - w[hi - 1]) / (v[hi] - v[hi - 1]);
  return {slope, slope};
}

double min_norm_in_interval(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  if (lo <= 0.0 && 0.0 <= hi) return 0.0;
  return std::abs(lo) < std::abs(hi) ? lo : hi;
}

}  // namespace varcalc
