#include "varcalc/grid.hpp"

#include <cmath>

namespace varcalc {

Lattice::Lattice(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw ConfigError("lattice needs at least one axis");
  steps_.reserve(axes_.size());
  strides_.assign(axes_.size(), 1);
  for (const auto& ax : axes_) {
    if (ax.resolution < 2 || !(ax.half_width > 0.0))
      throw ConfigError("axis needs resolution >= 2 and positive half width");
    steps_.push_back(2.0 * ax.half_width / (ax.resolution - 1));
  }
  // Row-major: the last axis varies fastest.
  for (int a = static_cast<int>(axes_.size()) - 2; a >= 0; --a)
    strides_[a] = strides_[a + 1] * axes_[a + 1].resolution;
  for (const auto& ax : axes_) size_ *= ax.resolution;
}

void Lattice::node(std::size_t flat, double* out) const {
  for (int a = 0; a < dim(); ++a) {
    std::size_t idx = (flat / strides_[a]) % axes_[a].resolution;
    out[a] = coord(a, static_cast<int>(idx));
  }
}

std::size_t Lattice::snap(const std::vector<double>& x,
                          double* distance) const {
  if (static_cast<int>(x.size()) != dim())
    throw DimensionMismatch("point dimension differs from lattice");
  std::size_t flat = 0;
  double dist2 = 0.0;
  for (int a = 0; a < dim(); ++a) {
    double lo = axes_[a].center - axes_[a].half_width;
    double hi = axes_[a].center + axes_[a].half_width;
    double slack = 0.5 * steps_[a];
    if (x[a] < lo - slack || x[a] > hi + slack)
      throw EndpointOutsideGrid("coordinate outside the state grid");
    long idx = std::lround((x[a] - lo) / steps_[a]);
    if (idx < 0) idx = 0;
    if (idx >= axes_[a].resolution) idx = axes_[a].resolution - 1;
    double d = x[a] - coord(a, static_cast<int>(idx));
    dist2 += d * d;
    flat += strides_[a] * static_cast<std::size_t>(idx);
  }
  if (distance) *distance = std::sqrt(dist2);
  return flat;
}

std::size_t Lattice::exact_index(const std::vector<double>& x,
                                 double tol) const {
  if (static_cast<int>(x.size()) != dim())
    throw DimensionMismatch("point dimension differs from lattice");
  std::size_t flat = 0;
  for (int a = 0; a < dim(); ++a) {
    double lo = axes_[a].center - axes_[a].half_width;
    long idx = std::lround((x[a] - lo) / steps_[a]);
    if (idx < 0 || idx >= axes_[a].resolution) return npos;
    if (std::abs(x[a] - coord(a, static_cast<int>(idx))) > tol) return npos;
    flat += strides_[a] * static_cast<std::size_t>(idx);
  }
  return flat;
}

}  // namespace varcalc
