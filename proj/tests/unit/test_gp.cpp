#include <doctest.h>

#include <cmath>
#include <numbers>

#include "caslgp/errors.hpp"
#include "caslgp/gp.hpp"
#include "caslgp/random.hpp"
#include "helpers.hpp"

using namespace caslgp;

namespace {

KernelConfig unit_kernel(Eigen::Index dims, double noise = 0.0) {
  KernelConfig k;
  k.signal_variance = 1.0;
  k.lengthscales = Vector::Ones(dims);
  k.noise_variance = noise;
  return k;
}

Matrix random_inputs(Eigen::Index n, Eigen::Index r, std::uint64_t seed) {
  Rng rng(seed);
  Matrix Z(n, r);
  for (Eigen::Index i = 0; i < Z.size(); ++i) Z.data()[i] = rng.uniform(-1, 1);
  return Z;
}

}  // namespace

TEST_CASE("kernel values") {
  const KernelConfig k = unit_kernel(2);
  Vector z(2);
  z << 0.3, -0.2;
  CHECK(kernel_eval(k, z, z) == 1.0);
  Vector d(2);
  d << 1, 0;
  CHECK(kernel_eval(k, z, z + d) == doctest::Approx(0.60653065971).epsilon(1e-10));
  CHECK(kernel_eval(k, z, Vector(z + Vector::Constant(2, 50.0))) < 1e-300);
  CHECK(kernel_eval(k, z, z + d) == kernel_eval(k, z + d, z));
  KernelConfig bad = k;
  bad.signal_variance = 0.0;
  CHECK_THROWS_AS(kernel_eval(bad, z, z), Error);
  bad = k;
  bad.lengthscales[1] = -1;
  CHECK_THROWS_AS(kernel_eval(bad, z, z), Error);
}

TEST_CASE("kernel matrix agrees with kernel_eval") {
  KernelConfig k;
  k.signal_variance = 2.0;
  k.lengthscales = Vector(3);
  k.lengthscales << 0.5, 1.5, 3.0;
  const Matrix A = random_inputs(6, 3, 1);
  const Matrix B = random_inputs(4, 3, 2);
  const Matrix K = kernel_matrix(k, A, B);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      CHECK(K(i, j) == doctest::Approx(kernel_eval(k, A.row(i).transpose(), B.row(j).transpose())).epsilon(1e-12));
    }
  }
}

TEST_CASE("one-point marginal likelihood by hand") {
  const Matrix Z = Matrix::Zero(1, 1);
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  CHECK(log_marginal_likelihood(Z, Vector::Zero(1), 0.0, unit_kernel(1)) ==
        doctest::Approx(-half_log_2pi).epsilon(1e-12));
  CHECK(log_marginal_likelihood(Z, Vector::Ones(1), 0.0, unit_kernel(1)) ==
        doctest::Approx(-0.5 - half_log_2pi).epsilon(1e-12));
  CHECK(-half_log_2pi == doctest::Approx(-0.91894).epsilon(1e-5));
}

TEST_CASE("one-point posterior by hand") {
  Matrix Z(1, 1);
  Z << 0.25;
  Vector Y(1);
  Y << 2.0;
  const double mu0 = 0.5;
  const GpModel gp = GpModel::build(Z, Y, mu0, unit_kernel(1));
  Vector q(1);
  q << 1.25;
  const Prediction p = gp.predict(q);
  CHECK(std::abs(p.mean - (mu0 + (2.0 - mu0) * std::exp(-0.5))) <= 1e-10);
  CHECK(std::abs(p.variance - (1.0 - std::exp(-1.0))) <= 1e-10);
}

TEST_CASE("marginal likelihood varies continuously with noise") {
  const Matrix Z = random_inputs(12, 2, 4);
  Vector Y = Z.col(0).array().sin().matrix() + 0.1 * Z.col(1);
  double prev = log_marginal_likelihood(Z, Y, 0.0, unit_kernel(2, 0.0));
  CHECK(std::isfinite(prev));
  for (double s : {1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2}) {
    const double v = log_marginal_likelihood(Z, Y, 0.0, unit_kernel(2, s));
    CHECK(std::isfinite(v));
    prev = v;
  }
  KernelConfig k = unit_kernel(2, 0.01);
  const double a = log_marginal_likelihood(Z, Y, 0.0, k);
  k.noise_variance = 0.01 * (1 + 1e-9);
  CHECK(std::abs(log_marginal_likelihood(Z, Y, 0.0, k) - a) < 1e-6);
}

TEST_CASE("analytic likelihood gradient matches central differences") {
  const Matrix Z = random_inputs(15, 3, 5);
  const Vector Y = (Z.col(0).array() * 2.0).sin().matrix() + Z.col(1).cwiseProduct(Z.col(2));
  for (bool isotropic : {false, true}) {
    KernelConfig k;
    k.signal_variance = 0.8;
    k.lengthscales = isotropic ? Vector(Vector::Constant(1, 0.9)) : Vector((Vector(3) << 0.7, 1.3, 2.1).finished());
    k.noise_variance = 1e-3;
    const LmlValue v = log_marginal_likelihood_with_gradient(Z, Y, 0.1, k, true);
    const Vector theta = pack_log_params(k, true);
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Vector tp = theta;
      Vector tm = theta;
      tp[i] += h;
      tm[i] -= h;
      const auto m = static_cast<std::size_t>(k.lengthscales.size());
      const double fd = (log_marginal_likelihood(Z, Y, 0.1, unpack_log_params(tp, m, std::nullopt)) -
                         log_marginal_likelihood(Z, Y, 0.1, unpack_log_params(tm, m, std::nullopt))) /
                        (2 * h);
      CHECK(testing::rel_err(v.gradient[i], fd) <= 1e-4);
    }
    CHECK(v.value == doctest::Approx(log_marginal_likelihood(Z, Y, 0.1, k)).epsilon(1e-12));
  }
}

TEST_CASE("noise-free interpolation at training inputs") {
  Matrix Z(20, 1);
  Z.col(0) = Vector::LinSpaced(20, -1, 1);
  const Vector Y = (3.0 * Z.col(0).array()).sin().matrix();
  GpOptions opts;
  opts.fixed_noise = 0.0;
  opts.seed = 3;
  const GpModel gp = fit_gp(Z, Y, opts);
  for (Eigen::Index i = 0; i < 20; ++i) {
    const Prediction p = gp.predict(Z.row(i).transpose());
    CHECK(std::abs(p.mean - Y[i]) <= 1e-6);
    CHECK(p.variance <= 1e-6);
    CHECK(p.variance >= 0.0);
  }
}

TEST_CASE("constant outputs give a constant posterior mean") {
  const Matrix Z = random_inputs(10, 2, 6);
  const Vector Y = Vector::Constant(10, 3.5);
  const GpModel gp = fit_gp(Z, Y, GpOptions{});
  CHECK(gp.mean_constant() == 3.5);
  CHECK(gp.kernel().signal_variance <= 1e-2);
  for (const auto& q : sample_uniform(20, 2, -3, 3, 1)) CHECK(gp.predict(q).mean == doctest::Approx(3.5).epsilon(1e-9));
}

TEST_CASE("fit is deterministic per seed") {
  const Matrix Z = random_inputs(25, 2, 7);
  const Vector Y = Z.col(0).array().square().matrix() - Z.col(1);
  GpOptions o;
  o.seed = 99;
  const GpModel a = fit_gp(Z, Y, o);
  const GpModel b = fit_gp(Z, Y, o);
  CHECK(a.kernel().signal_variance == b.kernel().signal_variance);
  CHECK(a.kernel().lengthscales == b.kernel().lengthscales);
  CHECK(a.kernel().noise_variance == b.kernel().noise_variance);
  CHECK_THROWS_AS(fit_gp(Matrix(0, 2), Vector(0), o), Error);
}

TEST_CASE("posterior reverts to the prior far from data") {
  const Matrix Z = random_inputs(8, 2, 8);
  const Vector Y = Z.col(0);
  KernelConfig k = unit_kernel(2, 1e-6);
  k.signal_variance = 1.7;
  const GpModel gp = GpModel::build(Z, Y, 0.25, k);
  const Prediction p = gp.predict(Vector::Constant(2, 100.0));
  CHECK(p.mean == doctest::Approx(0.25));
  CHECK(p.variance == doctest::Approx(1.7));
  CHECK_THROWS_AS(gp.predict(Vector::Zero(3)), Error);
}

TEST_CASE("posterior variance bounds and monotonicity") {
  Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    const Matrix Z = random_inputs(12, 3, 20 + static_cast<std::uint64_t>(t));
    const Vector Y = Z.rowwise().sum();
    KernelConfig k = unit_kernel(3, rng.uniform(0.0, 0.1));
    k.lengthscales *= rng.uniform(0.3, 2.0);
    const GpModel small = GpModel::build(Z.topRows(11), Y.head(11), 0.0, k);
    const GpModel big = GpModel::build(Z, Y, 0.0, k);
    for (const auto& q : sample_uniform(20, 3, -1.5, 1.5, 30 + static_cast<std::uint64_t>(t))) {
      const double v_small = small.predict(q).variance;
      const double v_big = big.predict(q).variance;
      CHECK(v_big >= 0.0);
      CHECK(v_big <= k.signal_variance + 1e-8);
      CHECK(v_big <= v_small + 1e-10);
    }
  }
}

TEST_CASE("predictions are continuous in the query") {
  const Matrix Z = random_inputs(30, 2, 40);
  const Vector Y = Z.col(0).array().cos().matrix();
  const GpModel gp = GpModel::build(Z, Y, 0.0, unit_kernel(2, 1e-4));
  for (const auto& q : sample_uniform(20, 2, -1, 1, 41)) {
    const Prediction a = gp.predict(q);
    const Prediction b = gp.predict(Vector(q + Vector::Constant(2, 1e-9)));
    CHECK(std::abs(a.mean - b.mean) <= 1e-6);
    CHECK(std::abs(a.variance - b.variance) <= 1e-6);
  }
}

TEST_CASE("factor reconstructs the regularized kernel matrix") {
  const Matrix Z = random_inputs(20, 2, 50);
  const KernelConfig k = unit_kernel(2, 1e-3);
  const GpModel gp = GpModel::build(Z, Z.col(0), 0.0, k);
  Matrix A = kernel_matrix(k, Z, Z);
  A.diagonal().array() += k.noise_variance + gp.jitter();
  const Matrix L = gp.factor();
  CHECK((L * L.transpose() - A).cwiseAbs().maxCoeff() <= 1e-8 * A.cwiseAbs().maxCoeff());
}

TEST_CASE("duplicate inputs trigger jitter") {
  Matrix Z = Matrix::Zero(3, 1);
  const GpModel gp = GpModel::build(Z, Vector::Ones(3), 0.0, unit_kernel(1));
  CHECK(gp.jitter() > 0.0);
  CHECK(gp.jitter() <= kJitterMax);
}
