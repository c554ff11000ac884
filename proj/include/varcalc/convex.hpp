#pragma once

#include <cstddef>
#include <vector>

#include "varcalc/extreal.hpp"

namespace varcalc {

// A scalar function known through samples.  Abscissae are strictly
// increasing; ordinates live on the extended real line (+inf marks points
// outside the effective domain) and at least one of them is finite.
struct SampledFunction1D {
  enum class Interpretation { kPointwise, kPiecewiseLinear };

  std::vector<double> abscissae;
  std::vector<double> ordinates;  // +inf allowed
  Interpretation interpretation = Interpretation::kPointwise;

  SampledFunction1D() = default;
  SampledFunction1D(std::vector<double> v, std::vector<double> w,
                    Interpretation interp = Interpretation::kPointwise);

  std::size_t size() const { return abscissae.size(); }

  // Piecewise-linear evaluation between finite samples; +inf outside the
  // finite range and on any segment with an infinite end.
  double interpolate(double v) const;

  // Index range [first, last] of the finite ordinates.  Throws
  // TooFewFinitePoints when fewer than two are finite.
  std::pair<std::size_t, std::size_t> finite_range() const;
};

// Greatest convex minorant of the finite epigraph samples, evaluated at the
// input abscissae.  Samples outside the convex hull of the finite abscissae
// keep their +inf ordinate.  Monotone-chain construction, O(size).
SampledFunction1D lower_convex_envelope_1d(const SampledFunction1D& fn);

// Discrete Legendre-Fenchel transform: h(p) = max_i { p*v_i - w_i } over
// finite samples.  `truncated[j]` reports that the maximizer for p_j sat on
// the boundary of the sampled domain, i.e. the true supremum may be larger.
struct Conjugate1D {
  SampledFunction1D transform;
  std::vector<bool> truncated;
  std::vector<std::size_t> argmax;
};
Conjugate1D legendre_fenchel(const SampledFunction1D& fn,
                             const std::vector<double>& dual_grid);

// One-sided slopes of a sampled convex function at an interior point of its
// finite range: the slopes of the hull segments meeting there.
struct OneSidedDerivatives {
  double left;
  double right;
};
OneSidedDerivatives one_sided_derivatives(const SampledFunction1D& convex_fn,
                                          double at);

// Smallest-magnitude element of the closed interval [lo, hi].
double min_norm_in_interval(double lo, double hi);

}  // namespace varcalc
