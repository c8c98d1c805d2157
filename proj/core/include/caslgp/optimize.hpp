#pragma once

#include <cstddef>
#include <functional>

#include "caslgp/types.hpp"

namespace caslgp {

/// Objective value and gradient; a non-finite value marks an infeasible point.
struct ObjectiveValue {
  double value = 0.0;
  Vector gradient;
};

using Objective = std::function<ObjectiveValue(const Vector&)>;

struct AscentResult {
  Vector x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Box-constrained gradient ascent. Search directions come from a limited
/// memory quasi-Newton update of the gradient history (falling back to the
/// projected gradient), step lengths from Armijo backtracking on the projected
/// step. Stops when the projected gradient or the relative improvement is
/// below tolerance.
AscentResult maximize_box(const Objective& f, Vector x0, const Vector& lower, const Vector& upper,
                          std::size_t max_iter, double grad_tol = 1e-6, double rel_tol = 1e-10);

}  // namespace caslgp
