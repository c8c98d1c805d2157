#include "caslgp/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "caslgp/errors.hpp"
#include "caslgp/optimize.hpp"
#include "caslgp/random.hpp"

namespace caslgp {

void KernelConfig::validate(std::size_t input_dim) const {
  require(std::isfinite(signal_variance) && signal_variance > 0.0, ErrorKind::argument,
          "kernel: signal variance must be positive");
  require(std::isfinite(noise_variance) && noise_variance >= 0.0, ErrorKind::argument,
          "kernel: noise variance must be nonnegative");
  require(lengthscales.size() == 1 || static_cast<std::size_t>(lengthscales.size()) == input_dim,
          ErrorKind::argument,
          "kernel: " + std::to_string(lengthscales.size()) + " lengthscales for input dimension " +
              std::to_string(input_dim));
  require(lengthscales.allFinite() && (lengthscales.array() > 0.0).all(), ErrorKind::argument,
          "kernel: lengthscales must be positive");
}

namespace {

// Inputs divided by their lengthscales, so the kernel depends on plain
// squared distances.
Matrix scaled(const KernelConfig& cfg, const Matrix& Z) {
  if (cfg.isotropic()) return Z / cfg.lengthscales[0];
  return Z * cfg.lengthscales.cwiseInverse().asDiagonal();
}

Matrix kernel_from_scaled(double signal_variance, const Matrix& A, const Matrix& B) {
  const Vector a2 = A.rowwise().squaredNorm();
  const Vector b2 = B.rowwise().squaredNorm();
  Matrix K = A * B.transpose();
  for (Eigen::Index j = 0; j < K.cols(); ++j) {
    for (Eigen::Index i = 0; i < K.rows(); ++i) {
      const double d2 = std::max(0.0, a2[i] + b2[j] - 2.0 * K(i, j));
      K(i, j) = signal_variance * std::exp(-0.5 * d2);
    }
  }
  return K;
}

struct Factorization {
  Eigen::LLT<Matrix> llt;
  double jitter = 0.0;
  bool ok = false;
};

// K + (noise + jitter) I, escalating jitter (relative to the signal variance)
// until the Cholesky factorization succeeds.
Factorization factorize(const Matrix& K, const KernelConfig& cfg) {
  Factorization out;
  Matrix A = K;
  A.diagonal().array() += cfg.noise_variance;
  out.llt.compute(A);
  if (out.llt.info() == Eigen::Success) {
    out.ok = true;
    return out;
  }
  for (double level = kJitterStart; level <= kJitterMax * 1.0000001; level *= 10.0) {
    const double jitter = level * cfg.signal_variance;
    Matrix Aj = A;
    Aj.diagonal().array() += jitter;
    out.llt.compute(Aj);
    if (out.llt.info() == Eigen::Success) {
      out.jitter = jitter;
      out.ok = true;
      return out;
    }
  }
  return out;
}

void check_training(const Matrix& Z, const Vector& Y) {
  require(Z.rows() >= 1, ErrorKind::argument, "gp: need at least one training point");
  require(Z.cols() >= 1, ErrorKind::argument, "gp: inputs have no columns");
  require(Z.rows() == Y.size(), ErrorKind::argument, "gp: input and output counts differ");
  require(Z.allFinite() && Y.allFinite(), ErrorKind::argument, "gp: non-finite training data");
}

}  // namespace

double kernel_eval(const KernelConfig& cfg, const Vector& z, const Vector& zp) {
  require(z.size() == zp.size(), ErrorKind::argument, "kernel_eval: input lengths differ");
  cfg.validate(static_cast<std::size_t>(z.size()));
  double q = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double l = cfg.isotropic() ? cfg.lengthscales[0] : cfg.lengthscales[i];
    const double t = (z[i] - zp[i]) / l;
    q += t * t;
  }
  return cfg.signal_variance * std::exp(-0.5 * q);
}

Matrix kernel_matrix(const KernelConfig& cfg, const Matrix& A, const Matrix& B) {
  require(A.cols() == B.cols(), ErrorKind::argument, "kernel_matrix: input dimensions differ");
  cfg.validate(static_cast<std::size_t>(A.cols()));
  return kernel_from_scaled(cfg.signal_variance, scaled(cfg, A), scaled(cfg, B));
}

GpModel GpModel::build(Matrix Z, Vector Y, double mean, KernelConfig cfg) {
  check_training(Z, Y);
  cfg.validate(static_cast<std::size_t>(Z.cols()));
  GpModel m;
  m.Z_ = std::move(Z);
  m.Y_ = std::move(Y);
  m.mean_ = mean;
  m.cfg_ = std::move(cfg);
  Factorization f = factorize(kernel_matrix(m.cfg_, m.Z_, m.Z_), m.cfg_);
  require(f.ok, ErrorKind::conditioning,
          "gp: kernel matrix not positive definite after jitter " + std::to_string(kJitterMax));
  m.jitter_ = f.jitter;
  m.llt_ = std::move(f.llt);
  m.alpha_ = m.llt_.solve((m.Y_.array() - m.mean_).matrix());
  return m;
}

Prediction GpModel::predict(const Vector& z) const {
  require(static_cast<std::size_t>(z.size()) == input_dim(), ErrorKind::argument,
          "predict: input has length " + std::to_string(z.size()) + ", model expects " +
              std::to_string(input_dim()));
  const Vector zs = cfg_.isotropic() ? Vector(z / cfg_.lengthscales[0])
                                     : Vector(z.cwiseQuotient(cfg_.lengthscales));
  const Matrix Zs = scaled(cfg_, Z_);
  const Vector k = kernel_from_scaled(cfg_.signal_variance, Zs, zs.transpose());
  Prediction p;
  p.mean = mean_ + k.dot(alpha_);
  const Vector v = llt_.matrixL().solve(k);
  p.variance = std::max(0.0, cfg_.signal_variance - v.squaredNorm());
  return p;
}

double log_marginal_likelihood(const Matrix& Z, const Vector& Y, double mean,
                               const KernelConfig& cfg) {
  check_training(Z, Y);
  const Factorization f = factorize(kernel_matrix(cfg, Z, Z), cfg);
  require(f.ok, ErrorKind::conditioning, "log_marginal_likelihood: factorization failed");
  const Vector r = (Y.array() - mean).matrix();
  const Vector alpha = f.llt.solve(r);
  const double log_det = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();
  const double n = static_cast<double>(Y.size());
  return -0.5 * r.dot(alpha) - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

Vector pack_log_params(const KernelConfig& cfg, bool include_noise) {
  const Eigen::Index m = cfg.lengthscales.size();
  Vector theta(1 + m + (include_noise ? 1 : 0));
  theta[0] = std::log(cfg.signal_variance);
  theta.segment(1, m) = cfg.lengthscales.array().log().matrix();
  if (include_noise) theta[1 + m] = std::log(cfg.noise_variance);
  return theta;
}

KernelConfig unpack_log_params(const Vector& theta, std::size_t lengthscale_count,
                               std::optional<double> fixed_noise) {
  const auto m = static_cast<Eigen::Index>(lengthscale_count);
  require(theta.size() == 1 + m + (fixed_noise ? 0 : 1), ErrorKind::argument,
          "unpack_log_params: parameter vector length mismatch");
  KernelConfig cfg;
  cfg.signal_variance = std::exp(theta[0]);
  cfg.lengthscales = theta.segment(1, m).array().exp().matrix();
  cfg.noise_variance = fixed_noise ? *fixed_noise : std::exp(theta[1 + m]);
  return cfg;
}

LmlValue log_marginal_likelihood_with_gradient(const Matrix& Z, const Vector& Y, double mean,
                                               const KernelConfig& cfg, bool include_noise) {
  check_training(Z, Y);
  cfg.validate(static_cast<std::size_t>(Z.cols()));
  const Eigen::Index n = Z.rows();
  const Matrix Kf = kernel_matrix(cfg, Z, Z);
  const Factorization f = factorize(Kf, cfg);
  require(f.ok, ErrorKind::conditioning, "log_marginal_likelihood: factorization failed");

  const Vector r = (Y.array() - mean).matrix();
  const Vector alpha = f.llt.solve(r);
  const double log_det = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();
  LmlValue out;
  out.jitter = f.jitter;
  out.value = -0.5 * r.dot(alpha) - 0.5 * log_det -
              0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

  // W = alpha alpha^T - A^{-1};  d/dtheta = 1/2 sum(W .* dA/dtheta)
  Matrix W = -f.llt.solve(Matrix::Identity(n, n));
  W.noalias() += alpha * alpha.transpose();
  const Matrix M = W.cwiseProduct(Kf);

  const Eigen::Index m = cfg.lengthscales.size();
  out.gradient = Vector::Zero(1 + m + (include_noise ? 1 : 0));
  out.gradient[0] = 0.5 * M.sum();

  // sum_ij M_ij (z_ik - z_jk)^2 = 2 (sum_i z_ik^2 (M 1)_i - z_k^T M z_k)
  const Vector row_sums = M.rowwise().sum();
  const Matrix MZ = M * Z;
  Vector per_dim(Z.cols());
  for (Eigen::Index k = 0; k < Z.cols(); ++k) {
    const auto zk = Z.col(k);
    per_dim[k] = 2.0 * (zk.array().square().matrix().dot(row_sums) - zk.dot(MZ.col(k)));
  }
  if (cfg.isotropic()) {
    const double l = cfg.lengthscales[0];
    out.gradient[1] = 0.5 * per_dim.sum() / (l * l);
  } else {
    for (Eigen::Index k = 0; k < m; ++k) {
      const double l = cfg.lengthscales[k];
      out.gradient[1 + k] = 0.5 * per_dim[k] / (l * l);
    }
  }
  if (include_noise) out.gradient[1 + m] = 0.5 * cfg.noise_variance * W.trace();
  return out;
}

GpModel fit_gp(const Matrix& Z, const Vector& Y, const GpOptions& opts) {
  check_training(Z, Y);
  require(opts.restarts >= 1, ErrorKind::argument, "fit_gp: need at least one restart");
  require(!opts.fixed_noise || *opts.fixed_noise >= 0.0, ErrorKind::argument,
          "fit_gp: fixed noise must be nonnegative");
  const double mean = Y.mean();
  const double var_y = (Y.array() - mean).square().mean();
  const double scale = var_y > 0.0 ? var_y : 1.0;

  const Eigen::Index r = Z.cols();
  Vector range = Z.colwise().maxCoeff() - Z.colwise().minCoeff();
  for (Eigen::Index k = 0; k < r; ++k) {
    if (!(range[k] > 0.0)) range[k] = 1.0;
  }
  if (opts.isotropic) range = Vector::Constant(1, range.maxCoeff());
  const Eigen::Index m = range.size();
  const bool learn_noise = !opts.fixed_noise.has_value();
  const Eigen::Index p = 1 + m + (learn_noise ? 1 : 0);

  Vector lower(p);
  Vector upper(p);
  Vector init_lo(p);
  Vector init_hi(p);
  lower[0] = std::log(1e-6 * scale);
  upper[0] = std::log(1e4 * scale);
  init_lo[0] = std::log(0.1 * scale);
  init_hi[0] = std::log(10.0 * scale);
  for (Eigen::Index k = 0; k < m; ++k) {
    lower[1 + k] = std::log(1e-3 * range[k]);
    upper[1 + k] = std::log(1e3 * range[k]);
    init_lo[1 + k] = std::log(0.05 * range[k]);
    init_hi[1 + k] = std::log(5.0 * range[k]);
  }
  if (learn_noise) {
    lower[1 + m] = std::log(1e-10 * scale);
    upper[1 + m] = std::log(10.0 * scale);
    init_lo[1 + m] = std::log(1e-8 * scale);
    init_hi[1 + m] = std::log(1e-2 * scale);
  }

  const Objective objective = [&](const Vector& theta) -> ObjectiveValue {
    const KernelConfig cfg = unpack_log_params(theta, static_cast<std::size_t>(m), opts.fixed_noise);
    try {
      LmlValue v = log_marginal_likelihood_with_gradient(Z, Y, mean, cfg, learn_noise);
      if (!std::isfinite(v.value) || !v.gradient.allFinite()) {
        return {-std::numeric_limits<double>::infinity(), Vector::Zero(p)};
      }
      return {v.value, std::move(v.gradient)};
    } catch (const Error&) {
      return {-std::numeric_limits<double>::infinity(), Vector::Zero(p)};
    }
  };

  Vector best_theta;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t restart = 0; restart < opts.restarts; ++restart) {
    Rng rng(derive_seed(opts.seed, restart));
    // One lengthscale draw shared by every dimension: independent draws leave
    // many short lengthscales in high dimension, where the likelihood is flat.
    Vector theta0(p);
    theta0[0] = rng.uniform(init_lo[0], init_hi[0]);
    const double t = rng.uniform();
    for (Eigen::Index k = 0; k < m; ++k) theta0[1 + k] = init_lo[1 + k] + t * (init_hi[1 + k] - init_lo[1 + k]);
    if (learn_noise) theta0[1 + m] = rng.uniform(init_lo[1 + m], init_hi[1 + m]);
    const AscentResult result = maximize_box(objective, theta0, lower, upper, opts.max_opt_iter);
    if (std::isfinite(result.value) && result.value > best_value) {
      best_value = result.value;
      best_theta = result.x;
    }
  }
  require(best_theta.size() == p, ErrorKind::conditioning,
          "fit_gp: every restart failed to factorize the kernel matrix");
  return GpModel::build(Z, Y, mean,
                        unpack_log_params(best_theta, static_cast<std::size_t>(m), opts.fixed_noise));
}

}  // namespace caslgp
