#pragma once

#include <cstddef>

#include "caslgp/dataset.hpp"
#include "caslgp/types.hpp"

namespace caslgp {

/// Eigenvalues in descending order with matching orthonormal eigenvector columns.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

/// Spectrum of a gradient-moment matrix split into retained and discarded parts.
class Subspace {
 public:
  Subspace() = default;
  Subspace(EigenDecomposition eig, std::size_t rank);

  const Vector& eigenvalues() const noexcept { return eig_.values; }
  const Matrix& basis() const noexcept { return eig_.vectors; }
  std::size_t rank() const noexcept { return rank_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(eig_.values.size()); }

  /// d x r matrix of retained directions.
  Matrix active() const;
  /// d x (d - r) complement.
  Matrix inactive() const;
  /// Sum of the discarded eigenvalues.
  double tail() const;

 private:
  EigenDecomposition eig_;
  std::size_t rank_ = 0;
};

/// (1/N) sum_n g_n g_n^T over the rows of an N x d gradient matrix.
Matrix gradient_moment(const Matrix& gradients);
Matrix gradient_moment(const DataSet& dataset);

/// Symmetric eigendecomposition of (C + C^T)/2.
///
/// Eigenvalues come back descending; values within -1e-10 of zero are clamped
/// to zero. The numerically null eigenspace is rebuilt from standard unit
/// vectors (lowest-leverage coordinates first) so that it is sparse and
/// reproducible, and every eigenvector is signed so that its largest-magnitude
/// entry is positive.
EigenDecomposition eigendecompose(const Matrix& C);

/// Smallest r with sum_{i<=r} lambda_i >= rho * sum_i lambda_i.
std::size_t select_rank(const Vector& eigenvalues, double rho);

/// z = V1^T x.
Vector project(const Matrix& V1, const Vector& x);

/// Largest principal angle (radians) between the column spans of A and B.
/// Columns need not be orthonormal. When the spans differ in dimension the
/// angle is measured from the smaller span into the larger one.
double max_principal_angle(const Matrix& A, const Matrix& B);

}  // namespace caslgp
