#include "varcalc/nonsmooth.hpp"

#include <algorithm>
#include <cmath>

#include "varcalc/errors.hpp"

namespace varcalc {

namespace {

std::vector<double> tail_steps(const StepSchedule& sched) {
  if (sched.levels < 1 || sched.tail < 1 || sched.tail > sched.levels ||
      sched.h0 <= 0.0)
    throw ConfigError("invalid step schedule");
  std::vector<double> steps;
  steps.reserve(sched.tail);
  for (int j = sched.levels - sched.tail; j < sched.levels; ++j)
    steps.push_back(sched.h0 * std::ldexp(1.0, -j));
  return steps;  // descending
}

double probe(const FieldFn& f, std::span<const double> base,
             std::span<const double> dir, double h,
             std::vector<double>& scratch) {
  scratch.resize(base.size());
  for (std::size_t k = 0; k < base.size(); ++k)
    scratch[k] = base[k] + h * dir[k];
  return f(scratch);
}

}  // namespace

DerivativeFan probe_fan(const FieldFn& f, std::span<const double> base,
                        const std::vector<std::vector<double>>& directions,
                        const StepSchedule& sched) {
  if (directions.empty()) throw EmptyFan("no directions to probe");
  for (const auto& d : directions)
    if (d.size() != base.size())
      throw DimensionMismatch("direction dimension differs from base point");

  double f0 = f(base);
  if (!std::isfinite(f0))
    throw EvaluatorInfinite("field is not finite at the base point");

  DerivativeFan fan;
  fan.base.assign(base.begin(), base.end());
  fan.directions = directions;
  fan.steps = tail_steps(sched);
  fan.quotients.resize(directions.size());
  fan.liminf = kInf;
  fan.limsup = -kInf;
  std::vector<double> scratch;
  for (std::size_t d = 0; d < directions.size(); ++d) {
    auto& row = fan.quotients[d];
    row.reserve(fan.steps.size());
    for (double h : fan.steps) {
      double q = (probe(f, base, directions[d], h, scratch) - f0) / h;
      row.push_back(q);
      if (q < fan.liminf) fan.liminf = q;
      if (q > fan.limsup) fan.limsup = q;
    }
  }
  return fan;
}

double dini_lower(const FieldFn& f, std::span<const double> base,
                  std::span<const double> direction,
                  const StepSchedule& sched) {
  std::vector<std::vector<double>> dirs{
      std::vector<double>(direction.begin(), direction.end())};
  return probe_fan(f, base, dirs, sched).liminf;
}

ContingentPair contingent_pair(const FieldFn& f, std::span<const double> base,
                               std::span<const double> direction,
                               const StepSchedule& sched, double half_width,
                               int points_per_axis) {
  if (points_per_axis < 1 || points_per_axis % 2 == 0)
    throw ConfigError("points_per_axis must be odd and positive");
  std::vector<std::vector<double>> dirs;
  if (half_width == 0.0 || points_per_axis == 1) {
    dirs.emplace_back(direction.begin(), direction.end());
  } else {
    // Tensor fan of per-axis offsets.  points_per_axis odd keeps offset 0.
    std::size_t m = base.size();
    std::vector<double> offsets(points_per_axis);
    for (int k = 0; k < points_per_axis; ++k)
      offsets[k] = -half_width +
                   2.0 * half_width * k / (points_per_axis - 1);
    std::vector<std::size_t> idx(m, 0);
    for (;;) {
      std::vector<double> d(direction.begin(), direction.end());
      for (std::size_t a = 0; a < m; ++a) d[a] += offsets[idx[a]];
      dirs.push_back(std::move(d));
      std::size_t a = 0;
      while (a < m && ++idx[a] == offsets.size()) idx[a++] = 0;
      if (a == m) break;
    }
  }
  DerivativeFan fan = probe_fan(f, base, dirs, sched);
  return {fan.liminf, fan.limsup};
}

namespace {

// Shared scaffolding for the two gradient lattices: probe the +/- coordinate
// cone directions, derive a candidate box from the observed quotient range,
// and keep the candidates passing `admit`.
std::vector<std::vector<double>> gradient_lattice(
    const FieldFn& f, std::span<const double> base,
    const GradientLatticeConfig& cfg, bool super) {
  std::size_t m = base.size();
  if (m == 0) throw DimensionMismatch("empty base point");
  if (cfg.lattice_points < 3) throw ConfigError("lattice needs >= 3 points");

  // Probe directions: +/- each axis, plus all +/-1 diagonals for m > 1.
  std::vector<std::vector<double>> dirs;
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<double> d(m, 0.0);
    d[a] = 1.0;
    dirs.push_back(d);
    d[a] = -1.0;
    dirs.push_back(d);
  }
  if (m > 1) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      std::vector<double> d(m);
      for (std::size_t a = 0; a < m; ++a)
        d[a] = (mask >> a & 1) ? 1.0 : -1.0;
      dirs.push_back(std::move(d));
    }
  }
  DerivativeFan fan = probe_fan(f, base, dirs, cfg.sched);

  // Extreme directional values per direction.
  std::vector<double> dlower(dirs.size(), kInf), dupper(dirs.size(), -kInf);
  for (std::size_t d = 0; d < dirs.size(); ++d)
    for (double q : fan.quotients[d]) {
      dlower[d] = std::min(dlower[d], q);
      dupper[d] = std::max(dupper[d], q);
    }

  auto admissible = [&](std::span<const double> p) {
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      double ip = 0.0;
      for (std::size_t a = 0; a < m; ++a) ip += p[a] * dirs[d][a];
      if (!super && ip > dlower[d] + cfg.tol) return false;
      if (super && ip < dupper[d] - cfg.tol) return false;
    }
    return true;
  };

  // Candidate box: observed quotient range per axis, padded.
  std::vector<double> lo(m), hi(m);
  for (std::size_t a = 0; a < m; ++a) {
    double qlo = std::min(dlower[2 * a], -dupper[2 * a + 1]);
    double qhi = std::max(dupper[2 * a], -dlower[2 * a + 1]);
    double mid = 0.5 * (qlo + qhi);
    double rad = std::max(0.5 * (qhi - qlo) * cfg.pad, 1e-12);
    lo[a] = mid - rad;
    hi[a] = mid + rad;
  }

  std::vector<std::vector<double>> accepted;
  std::vector<std::size_t> idx(m, 0);
  std::vector<double> p(m);
  for (;;) {
    for (std::size_t a = 0; a < m; ++a)
      p[a] = lo[a] + (hi[a] - lo[a]) * idx[a] / (cfg.lattice_points - 1);
    if (admissible(p)) accepted.push_back(p);
    std::size_t a = 0;
    while (a < m &&
           ++idx[a] == static_cast<std::size_t>(cfg.lattice_points))
      idx[a++] = 0;
    if (a == m) break;
  }

  // The box midpoint doubles as an analytic candidate so smooth points keep
  // a nonempty set even when the admissible region falls between lattice
  // lines.
  std::vector<double> mid(m);
  for (std::size_t a = 0; a < m; ++a) mid[a] = 0.5 * (lo[a] + hi[a]);
  if (admissible(mid)) accepted.push_back(mid);
  return accepted;
}

}  // namespace

std::vector<std::vector<double>> subdifferential(
    const FieldFn& f, std::span<const double> base,
    const GradientLatticeConfig& cfg) {
  return gradient_lattice(f, base, cfg, /*super=*/false);
}

std::vector<std::vector<double>> superdifferential(
    const FieldFn& f, std::span<const double> base,
    const GradientLatticeConfig& cfg) {
  return gradient_lattice(f, base, cfg, /*super=*/true);
}

ClarkeInterval clarke_gradient_1d(const std::function<double(double)>& f,
                                  double at, const StepSchedule& sched,
                                  int neighbourhood_points) {
  if (neighbourhood_points < 1)
    throw ConfigError("need at least one neighbourhood point");
  if (!std::isfinite(f(at)))
    throw EvaluatorInfinite("function not finite at the query point");
  double lo = kInf, hi = -kInf;
  for (double h : tail_steps(sched)) {
    // Differentiability points are sampled from a neighbourhood that shrinks
    // with the step, so the observed slopes approach the limiting ones.
    double radius = 4.0 * h;
    for (int k = 0; k < neighbourhood_points; ++k) {
      double offset =
          neighbourhood_points == 1
              ? 0.0
              : -radius + 2.0 * radius * k / (neighbourhood_points - 1);
      double u = at + offset;
      for (double sign : {1.0, -1.0}) {
        double q = (f(u + sign * h) - f(u)) / (sign * h);
        if (std::isfinite(q)) {
          lo = std::min(lo, q);
          hi = std::max(hi, q);
        }
      }
    }
  }
  if (!(lo <= hi))
    throw EvaluatorInfinite("no finite slope near the query point");
  return {lo, hi};
}

}  // namespace varcalc
