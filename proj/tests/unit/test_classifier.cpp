#include <doctest.h>

#include <numeric>

#include "caslgp/classifier.hpp"
#include "caslgp/errors.hpp"
#include "caslgp/random.hpp"
#include "caslgp/svm.hpp"

using namespace caslgp;

namespace {

struct Labelled {
  Matrix X;
  std::vector<int> labels;
};

int quadrant(const Vector& x) { return x[0] < 0 ? (x[1] < 0 ? 1 : 2) : (x[1] < 0 ? 3 : 4); }

Labelled quadrants(std::size_t n, std::size_t d, std::uint64_t seed) {
  const auto pts = sample_uniform(n, d, -1, 1, seed);
  Labelled out{Matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d)), {}};
  for (std::size_t i = 0; i < n; ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    out.labels.push_back(quadrant(pts[i]));
  }
  return out;
}

// Two classes split by sign(x1) with a gap of 0.2 around zero.
Labelled margin_split(std::size_t n, std::uint64_t seed) {
  auto pts = sample_uniform(n, 3, -1, 1, seed);
  Labelled out{Matrix(static_cast<Eigen::Index>(n), 3), {}};
  for (std::size_t i = 0; i < n; ++i) {
    Vector& x = pts[i];
    x[0] = x[0] >= 0 ? 0.1 + 0.9 * x[0] : -0.1 + 0.9 * x[0];
    out.X.row(static_cast<Eigen::Index>(i)) = x.transpose();
    out.labels.push_back(x[0] > 0 ? 2 : 1);
  }
  return out;
}

double accuracy(const SvmModel& m, const Matrix& X, const std::vector<int>& labels) {
  std::size_t ok = 0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) ok += classify(m, X.row(i).transpose()) == labels[static_cast<std::size_t>(i)];
  return static_cast<double>(ok) / static_cast<double>(labels.size());
}

}  // namespace

TEST_CASE("linear svm finds the axis-aligned separator") {
  const auto data = margin_split(200, 1);
  const SvmModel m = train_svm(data.X, data.labels, SvmConfig{});
  CHECK(accuracy(m, data.X, data.labels) == 1.0);
  REQUIRE(m.machines.size() == 1);
  const Vector& w = m.machines[0].weights;
  CHECK(std::abs(w[0]) / w.norm() >= 0.99);
}

TEST_CASE("svm training is deterministic") {
  const auto data = quadrants(200, 4, 2);
  const SvmModel a = train_svm(data.X, data.labels, SvmConfig{});
  const SvmModel b = train_svm(data.X, data.labels, SvmConfig{});
  REQUIRE(a.machines.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(a.machines[k].weights == b.machines[k].weights);
    CHECK(a.machines[k].bias == b.machines[k].bias);
  }
}

TEST_CASE("quadrant classes: training and fresh accuracy") {
  const auto train = quadrants(1000, 2, 3);
  const SvmModel m = train_svm(train.X, train.labels, SvmConfig{});
  CHECK(m.classes == std::vector<int>{1, 2, 3, 4});
  CHECK(accuracy(m, train.X, train.labels) >= 0.99);
  const auto fresh = quadrants(1000, 2, 4);
  CHECK(accuracy(m, fresh.X, fresh.labels) >= 0.97);
  const Vector x = train.X.row(0).transpose();
  CHECK(classify(m, x) == classify(m, x));
}

TEST_CASE("shuffled training order gives the same labels") {
  const auto data = margin_split(150, 5);
  std::vector<std::size_t> order(150);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(9);
  rng.shuffle(std::span<std::size_t>(order));
  Matrix Xs(150, 3);
  std::vector<int> ls;
  for (std::size_t i = 0; i < 150; ++i) {
    Xs.row(static_cast<Eigen::Index>(i)) = data.X.row(static_cast<Eigen::Index>(order[i]));
    ls.push_back(data.labels[order[i]]);
  }
  const SvmModel a = train_svm(data.X, data.labels, SvmConfig{});
  const SvmModel b = train_svm(Xs, ls, SvmConfig{});
  const auto probe = quadrants(300, 3, 6);
  for (Eigen::Index i = 0; i < probe.X.rows(); ++i) {
    const Vector x = probe.X.row(i).transpose();
    if (std::abs(x[0]) > 0.1) CHECK(classify(a, x) == classify(b, x));
  }
}

TEST_CASE("translation moves the bias, not the predictions") {
  const auto data = margin_split(150, 7);
  Vector shift(3);
  shift << 2.5, -1.0, 4.0;
  const Matrix moved = data.X.rowwise() + shift.transpose();
  const SvmModel a = train_svm(data.X, data.labels, SvmConfig{});
  const SvmModel b = train_svm(moved, data.labels, SvmConfig{});
  CHECK(a.machines[0].bias != doctest::Approx(b.machines[0].bias));
  const auto probe = quadrants(300, 3, 8);
  for (Eigen::Index i = 0; i < probe.X.rows(); ++i) {
    const Vector x = probe.X.row(i).transpose();
    if (std::abs(x[0]) > 0.1) CHECK(classify(a, x) == classify(b, Vector(x + shift)));
  }
}

TEST_CASE("rbf kernel separates a disc") {
  const auto pts = sample_uniform(300, 2, -1, 1, 10);
  Matrix X(300, 2);
  std::vector<int> labels;
  for (std::size_t i = 0; i < 300; ++i) {
    X.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    labels.push_back(pts[i].norm() < 0.6 ? 1 : 2);
  }
  SvmConfig cfg;
  cfg.kernel = SvmKernel::rbf;
  cfg.rbf_gamma = 4.0;
  CHECK(accuracy(train_svm(X, labels, cfg), X, labels) >= 0.95);
}

TEST_CASE("svm errors and warnings") {
  Matrix X(3, 2);
  X << 0, 0, 1, 1, 2, 2;
  CHECK_THROWS_AS(train_svm(X, std::vector<int>{1, 1, 1}, SvmConfig{}), Error);
  try {
    train_svm(X, std::vector<int>{1, 1, 1}, SvmConfig{});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_training);
  }
  const auto data = quadrants(200, 2, 11);
  SvmConfig tight;
  tight.max_iter = 2;
  const SvmModel m = train_svm(data.X, data.labels, tight);
  CHECK_FALSE(m.converged());
  CHECK_FALSE(m.warnings.empty());
  CHECK_THROWS_AS(classify(m, Vector::Zero(3)), Error);
}

TEST_CASE("classifier wrapper") {
  const auto data = quadrants(400, 3, 12);
  const Classifier c = Classifier::constant(3, 1);
  CHECK(c.classify(Vector::Zero(3)) == 1);
  const Classifier svm = Classifier::train(data.X, data.labels, ClassifierKind::svm, SvmConfig{});
  CHECK(svm.method() == Classifier::Method::svm);
  const Classifier nc = Classifier::train(data.X, data.labels, ClassifierKind::nearest_centroid, SvmConfig{});
  std::size_t ok = 0;
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    ok += nc.classify(data.X.row(i).transpose()) == data.labels[static_cast<std::size_t>(i)];
  }
  CHECK(static_cast<double>(ok) / 400.0 >= 0.9);
  CHECK_THROWS_AS(svm.classify(Vector::Zero(2)), Error);
}
