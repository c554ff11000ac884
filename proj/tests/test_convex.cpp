#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "varcalc/convex.hpp"
#include "varcalc/errors.hpp"

using namespace varcalc;

namespace {

SampledFunction1D sample(double lo, double hi, int n,
                         const std::function<double(double)>& f) {
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * i / (n - 1);
    ys[i] = f(xs[i]);
  }
  return SampledFunction1D(std::move(xs), std::move(ys));
}

double well(double v) {
  double z = v * v - 1.0;
  return z * z;
}

}  // namespace

TEST_CASE("sampled function validation") {
  CHECK_THROWS_AS(SampledFunction1D({0.0, 1.0}, {1.0}), DimensionMismatch);
  CHECK_THROWS_AS(SampledFunction1D({0.0, 0.0}, {1.0, 2.0}), ConfigError);
  CHECK_THROWS_AS(SampledFunction1D({1.0, 0.0}, {1.0, 2.0}), ConfigError);
  CHECK_THROWS_AS(SampledFunction1D({0.0, 1.0}, {1.0, std::nan("")}),
                  NonFiniteState);
  CHECK_THROWS_AS(SampledFunction1D({0.0, 1.0}, {kInf, kInf}),
                  TooFewFinitePoints);
  CHECK_THROWS_AS(SampledFunction1D({}, {}), TooFewFinitePoints);
}

TEST_CASE("interpolation is exact at samples and +inf outside") {
  SampledFunction1D f({0.0, 1.0, 2.0, 3.0}, {4.0, kInf, 1.0, 2.0});
  CHECK(f.interpolate(0.0) == 4.0);
  CHECK(f.interpolate(2.0) == 1.0);
  CHECK(f.interpolate(2.5) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(f.interpolate(0.5) == kInf);   // segment with an infinite end
  CHECK(f.interpolate(-0.1) == kInf);  // outside the abscissae
  CHECK(f.interpolate(3.5) == kInf);
  auto [lo, hi] = f.finite_range();
  CHECK(lo == 0);
  CHECK(hi == 3);
}

TEST_CASE("envelope of the double well has the flat closed form") {
  SampledFunction1D f = sample(-2.0, 2.0, 401, well);
  SampledFunction1D hull = lower_convex_envelope_1d(f);
  for (int i = 0; i < 401; ++i) {
    double v = f.abscissae[i];
    double expect = std::abs(v) <= 1.0 ? 0.0 : well(v);
    CHECK(std::abs(hull.ordinates[i] - expect) <= 1e-9);
  }
}

TEST_CASE("envelope equals the chord-minimum scan on random data") {
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> val(-1.0, 3.0);
  std::uniform_real_distribution<double> gap(0.05, 0.35);
  for (int round = 0; round < 10; ++round) {
    int n = 12 + static_cast<int>(rng() % 30);
    std::vector<double> xs(n), ys(n);
    double x = -2.0;
    for (int i = 0; i < n; ++i) {
      x += gap(rng);
      xs[i] = x;
      ys[i] = rng() % 5 == 0 ? kInf : val(rng);
    }
    ys.front() = val(rng);  // keep at least two finite samples
    ys.back() = val(rng);
    SampledFunction1D f(xs, ys);
    SampledFunction1D hull = lower_convex_envelope_1d(f);
    std::vector<double> expect = oracles::chord_envelope(xs, ys);
    REQUIRE(hull.ordinates.size() == expect.size());
    for (int i = 0; i < n; ++i) {
      if (std::isfinite(expect[i]))
        CHECK(hull.ordinates[i] ==
              doctest::Approx(expect[i]).epsilon(1e-12));
      else
        CHECK(!std::isfinite(hull.ordinates[i]));
    }
  }
}

TEST_CASE("envelope is a convex minorant and idempotent") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> val(0.0, 2.0);
  std::vector<double> xs, ys;
  for (int i = 0; i <= 60; ++i) {
    xs.push_back(-1.5 + 0.05 * i);
    ys.push_back(val(rng));
  }
  SampledFunction1D f(xs, ys);
  SampledFunction1D hull = lower_convex_envelope_1d(f);
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(hull.ordinates[i] <= ys[i] + 1e-12);
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    double left = (hull.ordinates[i] - hull.ordinates[i - 1]) /
                  (xs[i] - xs[i - 1]);
    double right = (hull.ordinates[i + 1] - hull.ordinates[i]) /
                   (xs[i + 1] - xs[i]);
    CHECK(right >= left - 1e-9);
  }
  SampledFunction1D again = lower_convex_envelope_1d(hull);
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(again.ordinates[i] == doctest::Approx(hull.ordinates[i])
                                    .epsilon(1e-12));
}

TEST_CASE("envelope needs two finite samples") {
  CHECK_THROWS_AS(
      lower_convex_envelope_1d(SampledFunction1D({0.0, 1.0, 2.0},
                                                 {kInf, 1.0, kInf})),
      TooFewFinitePoints);
}

TEST_CASE("conjugate of u^2/2 is p^2/2 inside the sampled slopes") {
  SampledFunction1D f =
      sample(-4.0, 4.0, 801, [](double u) { return 0.5 * u * u; });
  std::vector<double> ps(81);
  for (int j = 0; j < 81; ++j) ps[j] = -2.0 + 0.05 * j;
  Conjugate1D h = legendre_fenchel(f, ps);
  REQUIRE(h.transform.size() == 81);
  for (int j = 0; j < 81; ++j) {
    CHECK(std::abs(h.transform.ordinates[j] - 0.5 * ps[j] * ps[j]) <= 5e-3);
    CHECK(!h.truncated[j]);
  }
}

TEST_CASE("conjugate matches the direct scan and flags truncation") {
  SampledFunction1D f = sample(-1.0, 1.0, 201, [](double u) {
    return std::abs(u);
  });
  std::vector<double> ps = {-3.0, 0.0, 0.5, 2.0};
  Conjugate1D h = legendre_fenchel(f, ps);
  for (std::size_t j = 0; j < ps.size(); ++j) {
    oracles::ScanConjugate expect =
        oracles::scan_conjugate(f.abscissae, f.ordinates, ps[j]);
    CHECK(h.transform.ordinates[j] ==
          doctest::Approx(expect.value).epsilon(1e-12));
    CHECK(h.truncated[j] == expect.boundary);
  }
  CHECK(h.transform.ordinates[0] == doctest::Approx(2.0));  // at u = -1
  CHECK(h.truncated[0]);
  CHECK(h.transform.ordinates[2] == 0.0);  // max at u = 0, interior
  CHECK(!h.truncated[2]);
  CHECK(h.transform.ordinates[3] == doctest::Approx(1.0));  // at u = +1
  CHECK(h.truncated[3]);
}

TEST_CASE("conjugate at p = 0 is minus the sampled minimum, exactly") {
  SampledFunction1D f = sample(-2.0, 2.0, 401, well);
  Conjugate1D h = legendre_fenchel(f, {0.0});
  CHECK(h.transform.ordinates[0] == 0.0);
}

TEST_CASE("conjugate wants a dual grid") {
  SampledFunction1D f = sample(-1.0, 1.0, 11, [](double u) { return u * u; });
  CHECK_THROWS_AS(legendre_fenchel(f, {}), EmptyDualGrid);
}

TEST_CASE("biconjugation reproduces a convex function within chord error") {
  SampledFunction1D f =
      sample(-4.0, 4.0, 801, [](double u) { return 0.5 * u * u; });
  std::vector<double> ps(257);
  for (int j = 0; j < 257; ++j) ps[j] = -3.0 + 6.0 * j / 256;
  Conjugate1D star = legendre_fenchel(f, ps);
  std::vector<double> us(401);
  for (int j = 0; j < 401; ++j) us[j] = -2.0 + 0.01 * j;
  Conjugate1D star2 = legendre_fenchel(star.transform, us);
  const double du = 8.0 / 800, dp = 6.0 / 256;
  const double chord_bound = du * du / 8 + dp * dp / 4 + 1e-12;
  for (int j = 0; j < 401; ++j) {
    double exact = 0.5 * us[j] * us[j];
    CHECK(star2.transform.ordinates[j] <= exact + 1e-12);
    CHECK(std::abs(star2.transform.ordinates[j] - exact) <= chord_bound);
  }
}

TEST_CASE("one-sided hull slopes at kinks, smooth points and flats") {
  SampledFunction1D vee =
      sample(-1.0, 3.0, 401, [](double v) { return std::abs(v - 1.0); });
  OneSidedDerivatives d = one_sided_derivatives(vee, 1.0);
  CHECK(d.left == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(d.right == doctest::Approx(1.0).epsilon(1e-9));

  SampledFunction1D sq = sample(-2.0, 2.0, 401, [](double v) { return v * v; });
  d = one_sided_derivatives(sq, 1.0);
  CHECK(d.left == doctest::Approx(1.99).epsilon(1e-9));
  CHECK(d.right == doctest::Approx(2.01).epsilon(1e-9));
  d = one_sided_derivatives(sq, 0.505);  // between samples: one segment
  CHECK(d.left == d.right);

  SampledFunction1D flat =
      lower_convex_envelope_1d(sample(-2.0, 2.0, 401, well));
  d = one_sided_derivatives(flat, 0.0);
  CHECK(d.left == 0.0);
  CHECK(d.right == 0.0);

  CHECK_THROWS_AS(one_sided_derivatives(sq, -2.0), PointOutsideFiniteRegion);
  CHECK_THROWS_AS(one_sided_derivatives(sq, 2.5), PointOutsideFiniteRegion);
}

TEST_CASE("minimum-norm selection in an interval") {
  CHECK(min_norm_in_interval(-1.0, 2.0) == 0.0);
  CHECK(min_norm_in_interval(0.5, 2.0) == 0.5);
  CHECK(min_norm_in_interval(-3.0, -1.0) == -1.0);
  CHECK(min_norm_in_interval(2.0, 0.5) == 0.5);   // order does not matter
  CHECK(min_norm_in_interval(-1.0, -3.0) == -1.0);
  CHECK(min_norm_in_interval(0.0, 0.0) == 0.0);
}
