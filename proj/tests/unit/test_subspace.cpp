#include <doctest.h>

#include "caslgp/errors.hpp"
#include "caslgp/random.hpp"
#include "caslgp/sdr.hpp"
#include "caslgp/subspace.hpp"
#include "caslgp/test_functions.hpp"

using namespace caslgp;

namespace {

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix coordinate_span(std::size_t d, const std::vector<std::size_t>& coords) {
  Matrix E = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(coords.size()));
  for (std::size_t k = 0; k < coords.size(); ++k) E(static_cast<Eigen::Index>(coords[k]), static_cast<Eigen::Index>(k)) = 1.0;
  return E;
}

DataSet linear_data(std::size_t n, const Vector& a, std::uint64_t seed) {
  std::vector<Sample> s;
  for (const auto& x : sample_uniform(n, static_cast<std::size_t>(a.size()), -1, 1, seed)) {
    s.push_back({x, a.dot(x), a});
  }
  return DataSet(static_cast<std::size_t>(a.size()), s);
}

}  // namespace

TEST_CASE("gradient moment examples") {
  CHECK(gradient_moment(rows({{1, 0}})) == rows({{1, 0}, {0, 0}}));
  CHECK(gradient_moment(rows({{1, 0}, {0, 1}})) == rows({{0.5, 0}, {0, 0.5}}));
  Vector a(3);
  a << 0.5, -2.0, 1.5;
  const Matrix C = gradient_moment(linear_data(7, a, 1));
  CHECK((C - a * a.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK_THROWS_AS(gradient_moment(DataSet(1, {{Vector::Zero(1), 0.0, {}}})), Error);
}

TEST_CASE("gradient moment is symmetric positive semidefinite") {
  Rng rng(3);
  Matrix G(40, 6);
  for (Eigen::Index i = 0; i < G.size(); ++i) G.data()[i] = rng.uniform(-1, 1);
  const Matrix C = gradient_moment(G);
  CHECK((C - C.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(eigendecompose(C).values.minCoeff() >= -1e-10);
}

TEST_CASE("eigendecompose examples") {
  const auto id = eigendecompose(Matrix::Identity(4, 4));
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(id.values[i] == doctest::Approx(1.0));

  Vector a(2);
  a << 3, 4;
  const auto r1 = eigendecompose(a * a.transpose());
  CHECK(r1.values[0] == doctest::Approx(25.0));
  CHECK(r1.values[1] == 0.0);
  CHECK(std::abs(r1.vectors(0, 0)) == doctest::Approx(0.6));
  CHECK(std::abs(r1.vectors(1, 0)) == doctest::Approx(0.8));

  Rng rng(9);
  Matrix S(5, 5);
  for (Eigen::Index i = 0; i < S.size(); ++i) S.data()[i] = rng.uniform(-1, 1);
  S = (S + S.transpose()).eval();
  const auto e = eigendecompose(S);
  const Matrix recon = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
  CHECK((recon - S).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((S * e.vectors - e.vectors * e.values.asDiagonal()).cwiseAbs().maxCoeff() <=
        1e-8 * S.cwiseAbs().maxCoeff());
  CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-10);
  for (Eigen::Index i = 1; i < 5; ++i) CHECK(e.values[i - 1] >= e.values[i]);

  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = NAN;
  CHECK_THROWS_AS(eigendecompose(bad), Error);
}

TEST_CASE("largest entry of every eigenvector is positive") {
  Rng rng(4);
  Matrix G(30, 5);
  for (Eigen::Index i = 0; i < G.size(); ++i) G.data()[i] = rng.uniform(-1, 1);
  const auto e = eigendecompose(gradient_moment(G));
  for (Eigen::Index c = 0; c < 5; ++c) {
    Eigen::Index k = 0;
    e.vectors.col(c).cwiseAbs().maxCoeff(&k);
    CHECK(e.vectors(k, c) > 0.0);
  }
}

TEST_CASE("select_rank examples and monotonicity") {
  Vector l(4);
  l << 4, 3, 2, 1;
  CHECK(select_rank(l, 0.6) == 2);
  CHECK(select_rank(Vector::Unit(3, 0), 1.0) == 1);
  CHECK(select_rank(Vector::Unit(3, 0), 0.3) == 1);
  CHECK(select_rank(l, 1.0) == 4);
  std::size_t prev = 0;
  for (double rho = 0.0; rho <= 1.0; rho += 0.01) {
    const std::size_t r = select_rank(l, rho);
    CHECK(r >= prev);
    CHECK(r >= 1);
    prev = r;
  }
  CHECK_THROWS_AS(select_rank(Vector::Zero(3), 0.5), Error);
}

TEST_CASE("project examples") {
  Vector x(3);
  x << 0.3, -2, 5;
  CHECK(project(Matrix::Identity(3, 1), x)[0] == 0.3);
  CHECK(project(Matrix::Identity(3, 2), Vector::Zero(3)).norm() == 0.0);
  Matrix V(3, 2);
  V << 1, 1, 1, -1, 0, 0;
  V /= std::sqrt(2.0);
  Vector in_span = V * Vector::Constant(2, 0.7);
  CHECK(project(V, in_span).norm() == doctest::Approx(in_span.norm()));
  CHECK_THROWS_AS(project(V, Vector::Zero(4)), Error);
}

TEST_CASE("scaling gradients scales eigenvalues and keeps directions") {
  Rng rng(12);
  Matrix G(25, 4);
  for (Eigen::Index i = 0; i < G.size(); ++i) G.data()[i] = rng.uniform(-1, 1);
  const auto e1 = eigendecompose(gradient_moment(G));
  const auto e2 = eigendecompose(gradient_moment(Matrix(-3.0 * G)));
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(e2.values[i] == doctest::Approx(9.0 * e1.values[i]).epsilon(1e-10));
    CHECK(std::abs(e1.vectors.col(i).dot(e2.vectors.col(i))) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("per-region active subspaces of the piecewise function") {
  const std::size_t expected_rank[] = {2, 2, 1, 2};
  for (int region = 1; region <= 4; ++region) {
    // region boxes: x1 < 0 for regions 1, 2 and x2 < 0 for regions 1, 3
    Vector lo = Vector::Constant(50, -1.0);
    Vector hi = Vector::Constant(50, 1.0);
    (region <= 2 ? hi : lo)[0] = 0.0;
    (region == 1 || region == 3 ? hi : lo)[1] = 0.0;
    std::vector<Sample> s;
    for (auto x : sample_box(250, lo, hi, 100 + region)) {
      x[0] = region <= 2 ? std::min(x[0], -1e-9) : x[0];
      x[1] = region == 1 || region == 3 ? std::min(x[1], -1e-9) : x[1];
      REQUIRE(piecewise_region(x) == region);
      const auto e = eval_piecewise(x);
      s.push_back({x, e.y, e.g});
    }
    const auto eig = eigendecompose(gradient_moment(DataSet(50, s)));
    const std::size_t r = select_rank(eig.values, 0.99);
    CHECK(r == expected_rank[region - 1]);
    const Subspace sub(eig, r);
    const Matrix E = coordinate_span(50, piecewise_active_coordinates(region));
    CHECK(max_principal_angle(sub.active(), E) <= 0.05);
  }
}

TEST_CASE("subspace invariants") {
  Rng rng(2);
  Matrix G(20, 6);
  for (Eigen::Index i = 0; i < G.size(); ++i) G.data()[i] = rng.uniform(-1, 1);
  const Subspace s(eigendecompose(gradient_moment(G)), 2);
  CHECK(s.rank() == 2);
  CHECK(s.active().cols() == 2);
  CHECK(s.inactive().cols() == 4);
  Matrix V(6, 6);
  V << s.active(), s.inactive();
  CHECK((V.transpose() * V - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(s.tail() == doctest::Approx(s.eigenvalues().tail(4).sum()));
}

TEST_CASE("principal angles") {
  CHECK(max_principal_angle(Matrix::Identity(3, 1), Matrix::Identity(3, 2)) == doctest::Approx(0.0));
  Matrix b = Matrix::Zero(3, 1);
  b(2, 0) = 1;
  CHECK(max_principal_angle(Matrix::Identity(3, 1), b) == doctest::Approx(std::acos(0.0)));
}

// ---------------------------------------------------------------------------

namespace {

template <class F>
DataSet single_index(std::size_t n, std::size_t d, F f, std::uint64_t seed) {
  std::vector<Sample> s;
  for (const auto& x : sample_uniform(n, d, -1, 1, seed)) s.push_back({x, f(x), {}});
  return DataSet(d, s);
}

}  // namespace

TEST_CASE("SIR recovers a monotone single index") {
  const auto d = single_index(2000, 5, [](const Vector& x) { return x[0]; }, 1);
  const auto est = sir_directions(d, 1);
  CHECK(std::abs(est.directions(0, 0)) >= 0.95);
  CHECK(est.directions.col(0).norm() == doctest::Approx(1.0));
}

TEST_CASE("SIR is blind to a symmetric link") {
  const auto d = single_index(2000, 5, [](const Vector& x) { return x[0] * x[0]; }, 2);
  const auto est = sir_directions(d, 1);
  // slice means of a symmetric design sit near zero: the leading eigenvalue is
  // sampling noise, far below the monotone case
  const auto mono = sir_directions(single_index(2000, 5, [](const Vector& x) { return x[0]; }, 2), 1);
  CHECK(est.eigenvalues[0] < 0.05);
  CHECK(est.eigenvalues[0] < 0.1 * mono.eigenvalues[0]);
}

TEST_CASE("SAVE recovers a symmetric link") {
  const auto d = single_index(2000, 5, [](const Vector& x) { return x[0] * x[0]; }, 3);
  CHECK(std::abs(save_directions(d, 1).directions(0, 0)) >= 0.9);
  const auto m = single_index(2000, 5, [](const Vector& x) { return x[0]; }, 4);
  CHECK(std::abs(save_directions(m, 1).directions(0, 0)) >= 0.9);
}

TEST_CASE("SIR and SAVE see nothing in a constant response") {
  const auto d = single_index(200, 4, [](const Vector&) { return 1.5; }, 5);
  CHECK(sir_directions(d, 2).eigenvalues.cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(save_directions(d, 2).eigenvalues.cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("slicing errors") {
  const auto d = single_index(15, 3, [](const Vector& x) { return x[0]; }, 6);
  CHECK_THROWS_AS(sir_directions(d, 1, 10), Error);
  const auto slices = slice_by_response(Vector::LinSpaced(20, 0, 1), 10);
  CHECK(slices.size() == 10);
  for (const auto& s : slices) CHECK(s.size() == 2);
}
