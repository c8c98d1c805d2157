#include "caslgp/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "caslgp/errors.hpp"

namespace caslgp {

Subspace::Subspace(EigenDecomposition eig, std::size_t rank) : eig_(std::move(eig)), rank_(rank) {
  require(eig_.vectors.rows() == eig_.values.size() && eig_.vectors.cols() == eig_.values.size(),
          ErrorKind::argument, "Subspace: eigenvector matrix shape mismatch");
  require(rank_ >= 1 && rank_ <= dim(), ErrorKind::argument,
          "Subspace: rank " + std::to_string(rank_) + " outside 1.." + std::to_string(dim()));
}

Matrix Subspace::active() const { return eig_.vectors.leftCols(static_cast<Eigen::Index>(rank_)); }

Matrix Subspace::inactive() const {
  return eig_.vectors.rightCols(static_cast<Eigen::Index>(dim() - rank_));
}

double Subspace::tail() const {
  return eig_.values.tail(static_cast<Eigen::Index>(dim() - rank_)).sum();
}

Matrix gradient_moment(const Matrix& gradients) {
  require(gradients.rows() > 0, ErrorKind::contract, "gradient_moment: no samples");
  require(gradients.allFinite(), ErrorKind::argument, "gradient_moment: non-finite gradients");
  Matrix C = gradients.transpose() * gradients / static_cast<double>(gradients.rows());
  // exact symmetry regardless of the product kernel's summation order
  return (0.5 * (C + C.transpose())).eval();
}

Matrix gradient_moment(const DataSet& dataset) {
  require(!dataset.empty(), ErrorKind::contract, "gradient_moment: empty dataset");
  require(dataset.has_gradients(), ErrorKind::contract, "gradient_moment: samples lack gradients");
  return gradient_moment(dataset.gradients());
}

namespace {

void fix_sign(Eigen::Ref<Vector> v) {
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // strict comparison keeps the lowest index among equal magnitudes
    if (std::abs(v[i]) > best + 1e-12) {
      best = std::abs(v[i]);
      arg = i;
    }
  }
  if (v[arg] < 0.0) v = -v;
}

// Replaces the trailing null-space columns of V by a basis assembled from unit
// vectors projected off the range, taking coordinates in order of increasing
// leverage (ties by index).
void canonicalize_null_space(Matrix& V, Eigen::Index range_dim) {
  const Eigen::Index d = V.rows();
  if (range_dim >= d) return;
  const Matrix range = V.leftCols(range_dim);
  std::vector<Eigen::Index> coords(static_cast<std::size_t>(d));
  std::iota(coords.begin(), coords.end(), Eigen::Index{0});
  Vector leverage = Vector::Zero(d);
  if (range_dim > 0) leverage = range.rowwise().squaredNorm();
  std::stable_sort(coords.begin(), coords.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double la = leverage[a] < 1e-14 ? 0.0 : leverage[a];
    const double lb = leverage[b] < 1e-14 ? 0.0 : leverage[b];
    return la < lb;
  });
  Matrix basis(d, d);
  basis.leftCols(range_dim) = range;
  Eigen::Index filled = range_dim;
  for (Eigen::Index c : coords) {
    if (filled == d) break;
    Vector v = Vector::Unit(d, c);
    // two Gram-Schmidt passes for numerical orthogonality
    for (int pass = 0; pass < 2; ++pass) {
      v -= basis.leftCols(filled) * (basis.leftCols(filled).transpose() * v);
    }
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    v /= norm;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (std::abs(v[i]) < 1e-15) v[i] = 0.0;
    }
    v.normalize();
    basis.col(filled++) = v;
  }
  // Ranges that are nearly coordinate aligned can leave the loop short; fall
  // back to the solver's own vectors in that case.
  if (filled == d) V.rightCols(d - range_dim) = basis.rightCols(d - range_dim);
}

}  // namespace

EigenDecomposition eigendecompose(const Matrix& C) {
  require(C.rows() == C.cols() && C.rows() > 0, ErrorKind::argument,
          "eigendecompose: matrix must be square and nonempty");
  require(C.allFinite(), ErrorKind::argument, "eigendecompose: non-finite entries");
  const Matrix S = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(S);
  require(solver.info() == Eigen::Success, ErrorKind::conditioning,
          "eigendecompose: symmetric eigensolver did not converge");

  const Eigen::Index d = S.rows();
  EigenDecomposition out{Vector(d), Matrix(d, d)};
  // solver order is ascending
  for (Eigen::Index i = 0; i < d; ++i) {
    out.values[i] = solver.eigenvalues()[d - 1 - i];
    out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (out.values[i] < 0.0 && out.values[i] >= -1e-10) out.values[i] = 0.0;
  }

  const double scale = std::max(out.values.cwiseAbs().maxCoeff(), 0.0);
  const double null_tol = scale * 1e-12 * static_cast<double>(d);
  Eigen::Index range_dim = 0;
  while (range_dim < d && out.values[range_dim] > null_tol) ++range_dim;
  if (range_dim < d && out.values.tail(d - range_dim).cwiseAbs().maxCoeff() <= null_tol) {
    canonicalize_null_space(out.vectors, range_dim);
  }
  for (Eigen::Index i = 0; i < d; ++i) fix_sign(out.vectors.col(i));
  return out;
}

std::size_t select_rank(const Vector& eigenvalues, double rho) {
  require(eigenvalues.size() > 0, ErrorKind::argument, "select_rank: empty spectrum");
  require(rho >= 0.0 && rho <= 1.0, ErrorKind::argument, "select_rank: rho must lie in [0, 1]");
  const double total = eigenvalues.sum();
  require(total > 0.0, ErrorKind::degenerate_spectrum, "select_rank: spectrum is all zero");
  const double target = rho * total;
  double running = 0.0;
  for (Eigen::Index r = 0; r < eigenvalues.size(); ++r) {
    running += eigenvalues[r];
    if (running >= target) return static_cast<std::size_t>(r + 1);
  }
  // rounding can leave the partial sum a hair below rho * total at r = d
  return static_cast<std::size_t>(eigenvalues.size());
}

Vector project(const Matrix& V1, const Vector& x) {
  require(V1.rows() == x.size(), ErrorKind::argument,
          "project: basis has " + std::to_string(V1.rows()) + " rows, input has length " +
              std::to_string(x.size()));
  return V1.transpose() * x;
}

double max_principal_angle(const Matrix& A, const Matrix& B) {
  require(A.rows() == B.rows(), ErrorKind::argument, "max_principal_angle: ambient dimension mismatch");
  require(A.cols() > 0 && B.cols() > 0, ErrorKind::argument, "max_principal_angle: empty span");
  const Matrix QA = Eigen::HouseholderQR<Matrix>(A).householderQ() * Matrix::Identity(A.rows(), A.cols());
  const Matrix QB = Eigen::HouseholderQR<Matrix>(B).householderQ() * Matrix::Identity(B.rows(), B.cols());
  const Matrix& small = QA.cols() <= QB.cols() ? QA : QB;
  const Matrix& large = QA.cols() <= QB.cols() ? QB : QA;
  // residual of the smaller span after projection onto the larger one
  const Matrix residual = small - large * (large.transpose() * small);
  Eigen::JacobiSVD<Matrix> svd(residual);
  const double sine = std::clamp(svd.singularValues()[0], 0.0, 1.0);
  return std::asin(sine);
}

}  // namespace caslgp
