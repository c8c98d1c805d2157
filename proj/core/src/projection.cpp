#include "caslgp/projection.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "caslgp/errors.hpp"
#include "caslgp/random.hpp"

namespace caslgp {

InputDomain InputDomain::box(Vector lower, Vector upper) {
  require(lower.size() == upper.size(), ErrorKind::argument, "box bounds differ in length");
  require((lower.array() < upper.array()).all(), ErrorKind::argument,
          "box lower bounds must be below upper bounds");
  InputDomain out;
  out.kind = Kind::uniform_box;
  out.lower = std::move(lower);
  out.upper = std::move(upper);
  return out;
}

InputDomain InputDomain::box(std::size_t d, double lo, double hi) {
  const auto n = static_cast<Eigen::Index>(d);
  return box(Vector::Constant(n, lo), Vector::Constant(n, hi));
}

namespace {
constexpr double kSupportTol = 1e-12;
constexpr double kOrthoTol = 1e-8;
}  // namespace

McEstimate mc_projection(const std::function<double(const Vector&)>& f, const Matrix& V1,
                         const Matrix& V2, const Vector& z1, std::size_t n_mc, std::uint64_t seed,
                         const InputDomain& domain) {
  require(domain.kind == InputDomain::Kind::uniform_box, ErrorKind::unsupported_distribution,
          "mc_projection: conditional sampling is implemented for uniform boxes only");
  const Eigen::Index d = V1.rows();
  const Eigen::Index r = V1.cols();
  require(n_mc >= 1, ErrorKind::argument, "mc_projection: n_mc must be positive");
  require(r >= 1 && V2.rows() == d && V2.cols() == d - r, ErrorKind::argument,
          "mc_projection: V1 and V2 shapes do not form a d x d basis");
  require(z1.size() == r, ErrorKind::argument, "mc_projection: z1 length differs from rank");
  require(domain.lower.size() == d, ErrorKind::argument, "mc_projection: domain dimension mismatch");
  Matrix V(d, d);
  V << V1, V2;
  require((V.transpose() * V - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= kOrthoTol,
          ErrorKind::argument, "mc_projection: [V1 V2] is not orthogonal");

  // Support of V1: the only coordinates the slice constraint touches.
  std::vector<Eigen::Index> support;
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < d; ++i) {
    (V1.row(i).cwiseAbs().maxCoeff() > kSupportTol ? support : free).push_back(i);
  }
  const auto a = static_cast<Eigen::Index>(support.size());
  Matrix Va(a, r);
  Vector lo_a(a);
  Vector hi_a(a);
  for (Eigen::Index k = 0; k < a; ++k) {
    Va.row(k) = V1.row(support[static_cast<std::size_t>(k)]);
    lo_a[k] = domain.lower[support[static_cast<std::size_t>(k)]];
    hi_a[k] = domain.upper[support[static_cast<std::size_t>(k)]];
  }
  const Vector center = Va * z1;
  // Orthonormal complement W of span(Va) inside the support coordinates.
  const Eigen::HouseholderQR<Matrix> qr(Va);
  const Matrix Q = qr.householderQ() * Matrix::Identity(a, a);
  const Matrix W = Q.rightCols(a - r);
  // z2 = W^T (x_a - center) ranges over at most these bounds for x_a in the box.
  Vector w_lo = Vector::Zero(a - r);
  Vector w_hi = Vector::Zero(a - r);
  for (Eigen::Index c = 0; c < a - r; ++c) {
    for (Eigen::Index k = 0; k < a; ++k) {
      const double p = W(k, c) * (lo_a[k] - center[k]);
      const double q = W(k, c) * (hi_a[k] - center[k]);
      w_lo[c] += std::min(p, q);
      w_hi[c] += std::max(p, q);
    }
  }

  Rng rng(seed);
  const auto max_proposals =
      static_cast<std::size_t>(std::ceil(static_cast<double>(n_mc) / kMinAcceptance));
  McEstimate out;
  std::size_t accepted = 0;
  double mean = 0.0;
  double m2 = 0.0;
  Vector x(d);
  Vector w(a - r);
  while (accepted < n_mc) {
    require(out.proposals < max_proposals, ErrorKind::sampling_failure,
            "mc_projection: acceptance rate below " + std::to_string(kMinAcceptance) + " after " +
                std::to_string(out.proposals) + " proposals");
    ++out.proposals;
    for (Eigen::Index c = 0; c < a - r; ++c) w[c] = rng.uniform(w_lo[c], w_hi[c]);
    const Vector xa = center + W * w;
    bool inside = true;
    for (Eigen::Index k = 0; k < a && inside; ++k) {
      inside = xa[k] >= lo_a[k] && xa[k] <= hi_a[k];
    }
    if (!inside) continue;
    for (Eigen::Index k = 0; k < a; ++k) x[support[static_cast<std::size_t>(k)]] = xa[k];
    for (Eigen::Index i : free) x[i] = rng.uniform(domain.lower[i], domain.upper[i]);
    const double v = f(x);
    ++accepted;
    const double delta = v - mean;
    mean += delta / static_cast<double>(accepted);
    m2 += delta * (v - mean);
  }
  out.value = mean;
  const double var = accepted > 1 ? m2 / static_cast<double>(accepted - 1) : 0.0;
  out.std_error = std::sqrt(var / static_cast<double>(accepted));
  return out;
}

}  // namespace caslgp
