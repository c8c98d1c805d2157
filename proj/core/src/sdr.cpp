#include "caslgp/sdr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "caslgp/errors.hpp"
#include "caslgp/subspace.hpp"

namespace caslgp {

std::vector<std::vector<std::size_t>> slice_by_response(const Vector& y, std::size_t n_slices) {
  const auto n = static_cast<std::size_t>(y.size());
  require(n_slices >= 1, ErrorKind::argument, "slice_by_response: need at least one slice");
  require(n >= n_slices, ErrorKind::slicing,
          "slice_by_response: " + std::to_string(n) + " samples cannot fill " +
              std::to_string(n_slices) + " slices");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return y[static_cast<Eigen::Index>(a)] < y[static_cast<Eigen::Index>(b)];
  });

  std::vector<std::vector<std::size_t>> slices;
  std::size_t start = 0;
  for (std::size_t h = 1; h <= n_slices && start < n; ++h) {
    std::size_t end = h == n_slices ? n : (h * n + n_slices / 2) / n_slices;
    end = std::max(end, start + 1);
    // extend past ties so equal responses stay together
    while (end < n && y[static_cast<Eigen::Index>(order[end])] ==
                          y[static_cast<Eigen::Index>(order[end - 1])]) {
      ++end;
    }
    slices.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                        order.begin() + static_cast<std::ptrdiff_t>(end));
    start = end;
  }
  for (std::size_t h = 0; h < slices.size(); ++h) {
    require(slices[h].size() >= 2, ErrorKind::slicing,
            "slice " + std::to_string(h + 1) + " received " + std::to_string(slices[h].size()) +
                " sample(s); need at least 2");
  }
  return slices;
}

namespace {

struct Standardized {
  Matrix Z;             // n x d
  Matrix inv_sqrt_cov;  // Sigma^{-1/2}
};

Standardized standardize(const Matrix& X) {
  const double n = static_cast<double>(X.rows());
  const Vector mean = X.colwise().mean();
  const Matrix centered = X.rowwise() - mean.transpose();
  const Matrix cov = centered.transpose() * centered / n;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (cov + cov.transpose()));
  const Vector& lambda = eig.eigenvalues();
  require(lambda.minCoeff() > 1e-12 * std::max(1.0, lambda.maxCoeff()), ErrorKind::argument,
          "sliced regression: input covariance is singular");
  const Matrix inv_sqrt =
      eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  return {centered * inv_sqrt, inv_sqrt};
}

DirectionEstimate leading_directions(const Matrix& kernel, const Matrix& inv_sqrt_cov,
                                     std::size_t r) {
  const EigenDecomposition eig = eigendecompose(kernel);
  const auto rank = static_cast<Eigen::Index>(r);
  // back to the original coordinates, then orthonormalize
  const Matrix beta = inv_sqrt_cov * eig.vectors.leftCols(rank);
  Eigen::HouseholderQR<Matrix> qr(beta);
  Matrix Q = qr.householderQ() * Matrix::Identity(beta.rows(), rank);
  for (Eigen::Index c = 0; c < rank; ++c) {
    Eigen::Index arg = 0;
    Q.col(c).cwiseAbs().maxCoeff(&arg);
    if (Q(arg, c) < 0.0) Q.col(c) = -Q.col(c);
  }
  return {eig.values, Q};
}

void check_request(const DataSet& dataset, std::size_t r, const char* who) {
  require(!dataset.empty(), ErrorKind::argument, std::string(who) + ": empty dataset");
  require(r >= 1 && r <= dataset.dim(), ErrorKind::argument,
          std::string(who) + ": rank must lie in 1..d");
}

}  // namespace

DirectionEstimate sir_directions(const DataSet& dataset, std::size_t r, std::size_t n_slices) {
  check_request(dataset, r, "sir_directions");
  const auto slices = slice_by_response(dataset.outputs(), n_slices);
  const Standardized s = standardize(dataset.inputs());
  const double n = static_cast<double>(dataset.size());
  const auto d = static_cast<Eigen::Index>(dataset.dim());
  Matrix M = Matrix::Zero(d, d);
  for (const auto& slice : slices) {
    Vector m = Vector::Zero(d);
    for (std::size_t i : slice) m += s.Z.row(static_cast<Eigen::Index>(i)).transpose();
    m /= static_cast<double>(slice.size());
    M += (static_cast<double>(slice.size()) / n) * (m * m.transpose());
  }
  return leading_directions(M, s.inv_sqrt_cov, r);
}

DirectionEstimate save_directions(const DataSet& dataset, std::size_t r, std::size_t n_slices) {
  check_request(dataset, r, "save_directions");
  const auto slices = slice_by_response(dataset.outputs(), n_slices);
  const Standardized s = standardize(dataset.inputs());
  const double n = static_cast<double>(dataset.size());
  const auto d = static_cast<Eigen::Index>(dataset.dim());
  Matrix M = Matrix::Zero(d, d);
  for (const auto& slice : slices) {
    const double nh = static_cast<double>(slice.size());
    Matrix Zh(static_cast<Eigen::Index>(slice.size()), d);
    for (std::size_t k = 0; k < slice.size(); ++k) {
      Zh.row(static_cast<Eigen::Index>(k)) = s.Z.row(static_cast<Eigen::Index>(slice[k]));
    }
    const Vector mh = Zh.colwise().mean();
    const Matrix centered = Zh.rowwise() - mh.transpose();
    const Matrix Ih_minus_cov = Matrix::Identity(d, d) - centered.transpose() * centered / nh;
    M += (nh / n) * (Ih_minus_cov * Ih_minus_cov);
  }
  return leading_directions(M, s.inv_sqrt_cov, r);
}

}  // namespace caslgp
