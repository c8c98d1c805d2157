#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "caslgp/types.hpp"

namespace caslgp {

/// Input distribution. Conditional sampling exists for uniform boxes only.
struct InputDomain {
  enum class Kind { uniform_box, gaussian };
  Kind kind = Kind::uniform_box;
  Vector lower;
  Vector upper;

  static InputDomain box(Vector lower, Vector upper);
  static InputDomain box(std::size_t d, double lo, double hi);
};

struct McEstimate {
  double value = 0.0;      // mean of f over the accepted samples
  double std_error = 0.0;  // sample standard deviation / sqrt(n_mc)
  std::size_t proposals = 0;
};

inline constexpr double kMinAcceptance = 1e-3;

/// Monte Carlo estimate of E[f(x) | V1^T x = z1] for x uniform on the box.
/// Points on the slice are drawn by rejection: coordinates outside the
/// support of V1 are drawn directly, the rest from a bounding box of the
/// slice in an orthonormal complement of V1 restricted to its support.
/// Sampling-failure error when the acceptance rate falls below 1e-3;
/// unsupported-distribution error for non-uniform domains.
McEstimate mc_projection(const std::function<double(const Vector&)>& f, const Matrix& V1,
                         const Matrix& V2, const Vector& z1, std::size_t n_mc, std::uint64_t seed,
                         const InputDomain& domain);

}  // namespace caslgp
