#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "caslgp/types.hpp"

namespace caslgp {

enum class SvmKernel { linear, rbf };

struct SvmConfig {
  SvmKernel kernel = SvmKernel::linear;
  double C = 10.0;          // soft-margin penalty
  double rbf_gamma = 1.0;   // exp(-gamma |x - x'|^2)
  std::size_t max_iter = 0; // 0 means 10 * (points in the pair)
  double tol = 1e-3;        // stopping tolerance on the maximal KKT violation
};

/// Soft-margin binary machine separating `positive` (+1) from `negative` (-1).
/// decision(x) = sum_i coef_i K(sv_i, x) + bias; for the linear kernel the sum
/// is folded into `weights`.
struct BinarySvm {
  int positive = 0;
  int negative = 0;
  Vector weights;          // linear kernel only
  Matrix support_vectors;  // rbf kernel only, one row per vector
  Vector coefficients;     // alpha_i * y_i for each support vector (rbf)
  double bias = 0.0;
  std::size_t iterations = 0;
  bool converged = true;

  double decision(const Vector& x, const SvmConfig& config) const;
};

/// Trains one binary machine on points X (rows) with labels +1 / -1.
BinarySvm train_binary_svm(const Matrix& X, std::span<const int> signs, const SvmConfig& config);

/// One-vs-one multi-class SVM.
struct SvmModel {
  SvmConfig config;
  std::size_t dim = 0;
  std::vector<int> classes;         // ascending
  std::vector<BinarySvm> machines;  // pairs (classes[a], classes[b]), a < b, row-major
  std::vector<std::string> warnings;

  bool converged() const;
};

/// Degenerate-training error with fewer than two classes. Non-convergence is
/// recorded in `warnings` rather than thrown.
SvmModel train_svm(const Matrix& X, std::span<const int> labels, const SvmConfig& config);

/// Majority vote over pairwise machines; ties go to the larger summed
/// decision margin, then to the lower label.
int classify(const SvmModel& model, const Vector& x);

}  // namespace caslgp
