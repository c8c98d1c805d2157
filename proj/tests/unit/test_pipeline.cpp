#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "caslgp/cross_validation.hpp"
#include "caslgp/errors.hpp"
#include "caslgp/pipeline.hpp"
#include "caslgp/random.hpp"
#include "caslgp/subspace.hpp"
#include "caslgp/test_functions.hpp"

using namespace caslgp;

namespace {

EmulatorConfig quick_config(std::size_t clusters, std::uint64_t seed) {
  EmulatorConfig c;
  c.clusters = clusters;
  c.seed = seed;
  c.gp.restarts = 2;
  c.gp.max_opt_iter = 30;
  return c;
}

DataSet piecewise(std::size_t n, std::uint64_t seed) {
  return generate_dataset(BenchmarkSpec{}, n, true, seed);
}

}  // namespace

TEST_CASE("method names") {
  for (Method m : {Method::cas, Method::as, Method::sir, Method::save, Method::plain_gp}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK(parse_method("gp") == Method::plain_gp);
  CHECK(parse_method("cas-lgp") == Method::cas);
  CHECK_THROWS_AS(parse_method("pca"), Error);
  CHECK(needs_gradients(Method::as));
  CHECK_FALSE(needs_gradients(Method::sir));
}

TEST_CASE("nmse examples") {
  const std::vector<double> t{1.0, -2.0, 3.0};
  CHECK(nmse(t, t) == 0.0);
  CHECK(nmse(std::vector<double>(3, 0.0), t) == 1.0);
  CHECK(nmse(std::vector<double>{1.0}, std::vector<double>{2.0}) == 0.25);
  CHECK_THROWS_AS(nmse(std::vector<double>{1.0}, std::vector<double>{0.0}), Error);
  CHECK_THROWS_AS(nmse(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}), Error);
  CHECK_THROWS_AS(nmse(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST_CASE("nmse is invariant under joint permutation") {
  Rng rng(3);
  std::vector<double> p(40);
  std::vector<double> t(40);
  for (std::size_t i = 0; i < 40; ++i) {
    p[i] = rng.uniform(-1, 1);
    t[i] = rng.uniform(-1, 1);
  }
  std::vector<std::size_t> idx(40);
  std::iota(idx.begin(), idx.end(), 0);
  std::reverse(idx.begin(), idx.end());
  std::rotate(idx.begin(), idx.begin() + 7, idx.end());
  std::vector<double> pp;
  std::vector<double> tp;
  for (std::size_t i : idx) {
    pp.push_back(p[i]);
    tp.push_back(t[i]);
  }
  CHECK(nmse(pp, tp) == doctest::Approx(nmse(p, t)).epsilon(1e-14));
}

TEST_CASE("single-cluster decomposition equals the global active subspace") {
  const DataSet data = piecewise(200, 5);
  const CasDecomposition dec = cas_decompose(data, 1, RankSelection::ratio(0.99), 1.0);
  REQUIRE(dec.subspaces.size() == 1);
  CHECK(std::all_of(dec.partition.labels.begin(), dec.partition.labels.end(), [](int l) { return l == 1; }));
  const EigenDecomposition eig = eigendecompose(gradient_moment(data));
  const std::size_t r = select_rank(eig.values, 0.99);
  CHECK(dec.subspaces[0].rank() == r);
  CHECK(dec.subspaces[0].eigenvalues() == eig.values);
  CHECK(max_principal_angle(dec.subspaces[0].active(), eig.vectors.leftCols(static_cast<Eigen::Index>(r))) <= 1e-12);
}

TEST_CASE("duplicated rows give matching cluster subspaces") {
  // Two tight gradient families, each copied twice.
  std::vector<Sample> rows;
  for (int copy = 0; copy < 2; ++copy) {
    Rng local(11);
    for (int i = 0; i < 10; ++i) {
      Vector x(3);
      x << local.uniform(), local.uniform(), local.uniform();
      Vector g(3);
      g << 1.0, 0.1 * local.uniform(), 0.0;
      if (i % 2 == 1) g << 0.0, 0.1 * local.uniform(), 1.0;
      rows.push_back({x, x.sum(), g});
    }
  }
  const DataSet data(3, rows);
  const CasDecomposition dec = cas_decompose(data, 2, RankSelection::forced(1), 1.0);
  REQUIRE(dec.subspaces.size() == 2);
  for (std::size_t i = 0; i < 10; ++i) CHECK(dec.partition.labels[i] == dec.partition.labels[i + 10]);
  CHECK(max_principal_angle(dec.subspaces[0].active(), dec.subspaces[1].active()) > 1.0);
}

TEST_CASE("zero-gradient cluster is reported by name") {
  std::vector<Sample> rows;
  for (int i = 0; i < 4; ++i) {
    Vector x = Vector::Constant(2, 0.1 * i);
    rows.push_back({x, 1.0, Vector::Zero(2)});
  }
  const DataSet data(2, rows);
  try {
    cas_decompose(data, 1, RankSelection::forced(1), 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_spectrum);
    CHECK(std::string(e.what()).find("cluster 1") != std::string::npos);
  }
}

TEST_CASE("rank selection") {
  Vector ev(4);
  ev << 5, 3, 1, 0;
  CHECK(RankSelection::forced(2).choose(ev) == 2);
  CHECK(RankSelection::forced(9).choose(ev) == 4);
  CHECK(RankSelection::ratio(0.99).choose(ev) == 3);
  CHECK_THROWS_AS(RankSelection::forced(0).validate(), Error);
  CHECK_THROWS_AS(RankSelection::ratio(1.5).validate(), Error);
}

TEST_CASE("singleton clusters are rejected") {
  const DataSet data = piecewise(4, 2);
  EmulatorConfig c = quick_config(4, 1);
  try {
    fit_emulator(data, c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::under_populated_cluster);
  }
}

TEST_CASE("non-clustered methods reject J > 1 and gradient-free data for gradient methods") {
  const DataSet data = piecewise(30, 2);
  EmulatorConfig c = quick_config(2, 1);
  c.method = Method::sir;
  CHECK_THROWS_AS(fit_emulator(data, c), Error);
  const DataSet bare = generate_dataset(BenchmarkSpec{}, 30, false, 2);
  CHECK_THROWS_AS(fit_emulator(bare, quick_config(1, 1)), Error);
}

TEST_CASE("one cluster reproduces a directly built active-subspace GP") {
  const DataSet data = piecewise(150, 12);
  EmulatorConfig c = quick_config(1, 77);
  const CasEmulator em = fit_emulator(data, c);

  // Independent route: moment matrix, eigenvectors, projected GP with the cluster seed.
  const EigenDecomposition eig = eigendecompose(gradient_moment(data));
  const Matrix V = Subspace(eig, 2).active();
  Matrix Z(static_cast<Eigen::Index>(data.size()), 2);
  for (std::size_t i = 0; i < data.size(); ++i) Z.row(static_cast<Eigen::Index>(i)) = project(V, data[i].x).transpose();
  GpOptions opts = c.gp;
  opts.seed = cluster_seed(c.seed, 1);
  const GpModel gp = fit_gp(Z, data.outputs(), opts);

  CHECK(em.clusters() == 1);
  CHECK(em.local(1).projection == V);
  for (const Vector& q : sample_uniform(1000, 50, 0.0, 1.0, 13)) {
    const EmulatorPrediction a = emulate(em, q);
    const Prediction b = gp.predict(project(V, q));
    CHECK(a.label == 1);
    REQUIRE(a.mean == b.mean);
    REQUIRE(a.variance == b.variance);
  }
}

TEST_CASE("cas with one cluster equals the as method") {
  const DataSet data = piecewise(80, 4);
  EmulatorConfig c = quick_config(1, 5);
  const CasEmulator a = fit_emulator(data, c);
  c.method = Method::as;
  const CasEmulator b = fit_emulator(data, c);
  for (const Vector& q : sample_uniform(50, 50, 0.0, 1.0, 6)) CHECK(emulate(a, q).mean == emulate(b, q).mean);
}

TEST_CASE("emulator routes, interpolates and is deterministic") {
  const DataSet data = piecewise(240, 21);
  EmulatorConfig c = quick_config(4, 3);
  c.gp.fixed_noise = 0.0;
  const CasEmulator em = fit_emulator(data, c);
  CHECK(em.clusters() == 4);
  std::size_t total = 0;
  for (const LocalModel& m : em.locals()) {
    total += m.members.size();
    CHECK(m.gp.input_dim() == m.rank());
    CHECK(std::is_sorted(m.members.begin(), m.members.end()));
  }
  CHECK(total == data.size());

  std::size_t checked = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const EmulatorPrediction p = emulate(em, data[i].x);
    if (p.label != em.labels()[i]) continue;
    ++checked;
    CHECK(std::abs(p.mean - data[i].y) <= 1e-4);
  }
  CHECK(checked >= data.size() * 9 / 10);

  const Vector q = Vector::Constant(50, 0.3);
  const EmulatorPrediction p1 = emulate(em, q);
  const EmulatorPrediction p2 = emulate(em, q);
  CHECK(p1.mean == p2.mean);
  CHECK(p1.variance == p2.variance);
  CHECK(p1.label == p2.label);
  CHECK_THROWS_AS(emulate(em, Vector::Zero(3)), Error);

  const CasEmulator again = fit_emulator(data, c);
  for (const Vector& x : sample_uniform(30, 50, 0.0, 1.0, 9)) CHECK(emulate(again, x).mean == emulate(em, x).mean);
}

TEST_CASE("plain GP and sliced methods fit without gradients") {
  const DataSet data = generate_dataset(BenchmarkSpec{}, 60, false, 31);
  for (Method m : {Method::plain_gp, Method::sir, Method::save}) {
    EmulatorConfig c = quick_config(1, 2);
    c.method = m;
    const CasEmulator em = fit_emulator(data, c);
    CHECK(em.local(1).rank() == (m == Method::plain_gp ? 50u : 2u));
    CHECK(std::isfinite(emulate(em, data[0].x).mean));
  }
}

TEST_CASE("fold construction") {
  const auto folds = make_folds(23, 5, 4);
  REQUIRE(folds.size() == 5);
  std::vector<std::size_t> all;
  for (const auto& f : folds) {
    CHECK((f.size() == 4 || f.size() == 5));
    CHECK(std::is_sorted(f.begin(), f.end()));
    all.insert(all.end(), f.begin(), f.end());
  }
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 23; ++i) CHECK(all[i] == i);
  CHECK(make_folds(23, 5, 4) == folds);
  CHECK(make_folds(23, 5, 5) != folds);
  CHECK_THROWS_AS(make_folds(3, 5, 1), Error);
  CHECK_THROWS_AS(make_folds(10, 1, 1), Error);
}

TEST_CASE("plateau rule") {
  const std::vector<double> table{0.364, 0.328, 0.313, 0.303, 0.302};
  CHECK(select_clusters(table, 0.02) == 4);
  CHECK(select_clusters(table, 0.0) == 5);
  CHECK(select_clusters(table, 0.5) == 1);
  CHECK(select_clusters(std::vector<double>{0.7}) == 1);
  const double nan = std::nan("");
  CHECK(select_clusters(std::vector<double>{nan, 0.4, 0.3}) == 3);
  CHECK_THROWS_AS(select_clusters(std::vector<double>{nan, nan}), Error);
}

TEST_CASE("cross-validation report shape") {
  const DataSet data = piecewise(60, 40);
  EmulatorConfig c = quick_config(1, 8);
  c.gp.restarts = 1;
  c.gp.max_opt_iter = 10;
  const CvReport one = cross_validate_clusters(data, c, 1, 3);
  CHECK(one.chosen == 1);
  REQUIRE(one.entries.size() == 1);
  CHECK(one.entries[0].fold_nmse.size() == 3);

  const CvReport rep = cross_validate_clusters(data, c, 2, 3);
  REQUIRE(rep.entries.size() == 2);
  CHECK(rep.entries[1].clusters == 2);
  CHECK(rep.chosen >= 1);
  CHECK(rep.chosen <= 2);
  const CvReport rep2 = cross_validate_clusters(data, c, 2, 3);
  CHECK(rep2.entries[1].fold_nmse == rep.entries[1].fold_nmse);

  CHECK_THROWS_AS(cross_validate_clusters(data, c, 2, 1), Error);
  CHECK_THROWS_AS(cross_validate_clusters(data, c, 30, 10), Error);
}
