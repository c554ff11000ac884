#pragma once

#include <cstddef>
#include <vector>

#include "varcalc/errors.hpp"

namespace varcalc {

// One uniformly sampled state axis: `resolution` nodes spread over
// [center - half_width, center + half_width].
struct GridAxis {
  double center = 0.0;
  double half_width = 1.0;
  int resolution = 2;
};

// Row-major product lattice over a handful of axes.  This is the state grid
// shared by the trajectory solver and the value-function recursion, so both
// see bitwise-identical node coordinates and transition slopes.
class Lattice {
 public:
  explicit Lattice(std::vector<GridAxis> axes);

  int dim() const { return static_cast<int>(axes_.size()); }
  std::size_t size() const { return size_; }
  const std::vector<GridAxis>& axes() const { return axes_; }

  double step(int axis) const { return steps_[axis]; }
  double coord(int axis, int index) const {
    return axes_[axis].center - axes_[axis].half_width +
           steps_[axis] * index;
  }

  // Writes the node coordinates for a flat index.
  void node(std::size_t flat, double* out) const;

  // Nearest node to x.  Throws EndpointOutsideGrid when x leaves the box by
  // more than a half step on some axis; otherwise reports the snap distance.
  std::size_t snap(const std::vector<double>& x, double* distance) const;

  // Flat index of the node with exactly these coordinates, or npos when x
  // is not a lattice node (within `tol` per axis).
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t exact_index(const std::vector<double>& x,
                          double tol = 1e-9) const;

 private:
  std::vector<GridAxis> axes_;
  std::vector<double> steps_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

}  // namespace varcalc
