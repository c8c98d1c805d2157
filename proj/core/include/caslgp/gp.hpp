#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <Eigen/Cholesky>

#include "caslgp/types.hpp"

namespace caslgp {

/// Squared-exponential kernel with ARD lengthscales (one per input dimension)
/// or a single isotropic lengthscale, plus Gaussian observation noise.
struct KernelConfig {
  double signal_variance = 1.0;  // sigma_f^2 > 0
  Vector lengthscales;           // size r (ARD) or 1 (isotropic), all > 0
  double noise_variance = 0.0;   // sigma_M^2 >= 0

  bool isotropic() const noexcept { return lengthscales.size() == 1; }
  /// Argument error on nonpositive or non-finite hyperparameters, or when
  /// the lengthscale count matches neither 1 nor `input_dim`.
  void validate(std::size_t input_dim) const;
};

/// sigma_f^2 exp(-1/2 sum_i (z_i - z'_i)^2 / l_i^2).
double kernel_eval(const KernelConfig& cfg, const Vector& z, const Vector& zp);

/// Cross-covariance between the rows of A and the rows of B (no noise term).
Matrix kernel_matrix(const KernelConfig& cfg, const Matrix& A, const Matrix& B);

/// Jitter ladder 1e-10, 1e-9, ..., 1e-6 added to the diagonal on factorization failure.
inline constexpr double kJitterStart = 1e-10;
inline constexpr double kJitterMax = 1e-6;

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact GP posterior over fixed training data and hyperparameters. Caches
/// the Cholesky factor of K + (sigma_M^2 + jitter) I and alpha = that^{-1}(Y - mu0).
class GpModel {
 public:
  GpModel() = default;

  /// Conditioning error when the jitter ladder is exhausted.
  static GpModel build(Matrix Z, Vector Y, double mean, KernelConfig cfg);

  Prediction predict(const Vector& z) const;

  const Matrix& inputs() const noexcept { return Z_; }
  const Vector& outputs() const noexcept { return Y_; }
  double mean_constant() const noexcept { return mean_; }
  const KernelConfig& kernel() const noexcept { return cfg_; }
  double jitter() const noexcept { return jitter_; }
  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(Z_.cols()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(Z_.rows()); }
  Matrix factor() const { return llt_.matrixL(); }
  const Vector& alpha() const noexcept { return alpha_; }

 private:
  Matrix Z_;
  Vector Y_;
  double mean_ = 0.0;
  KernelConfig cfg_;
  double jitter_ = 0.0;
  Eigen::LLT<Matrix> llt_;
  Vector alpha_;
};

/// -1/2 r^T A^{-1} r - 1/2 log det A - n/2 log 2 pi, with r = Y - mu0 and
/// A = K + (sigma_M^2 + jitter) I.
double log_marginal_likelihood(const Matrix& Z, const Vector& Y, double mean,
                               const KernelConfig& cfg);

/// Log-hyperparameter vector layout used by the optimizer and the gradient:
/// [log sigma_f^2, log l_1 .. log l_m, log sigma_M^2]; the noise entry is
/// absent when noise is held fixed.
Vector pack_log_params(const KernelConfig& cfg, bool include_noise);
KernelConfig unpack_log_params(const Vector& theta, std::size_t lengthscale_count,
                               std::optional<double> fixed_noise);

struct LmlValue {
  double value = 0.0;
  Vector gradient;  // with respect to pack_log_params(cfg, include_noise)
  double jitter = 0.0;
};

/// Value and analytic gradient. Jitter is held constant in the derivative.
LmlValue log_marginal_likelihood_with_gradient(const Matrix& Z, const Vector& Y, double mean,
                                               const KernelConfig& cfg, bool include_noise);

struct GpOptions {
  std::size_t restarts = 5;
  std::size_t max_opt_iter = 100;
  std::optional<double> fixed_noise;
  bool isotropic = false;
  std::uint64_t seed = 0;
};

/// Constant mean mu0 = mean(Y); hyperparameters maximize the log marginal
/// likelihood over multi-start local searches in log space. Restart starting
/// points are log-uniform: l in [0.05, 5] x input range, sigma_f^2 in
/// [0.1, 10] x var(Y), sigma_M^2 in [1e-8, 1e-2] x var(Y); one lengthscale
/// factor is drawn per restart and shared by all dimensions.
GpModel fit_gp(const Matrix& Z, const Vector& Y, const GpOptions& opts);

}  // namespace caslgp
