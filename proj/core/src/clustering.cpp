#include "caslgp/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "caslgp/errors.hpp"

namespace caslgp {

DistanceMatrix::DistanceMatrix(Matrix values) : values_(std::move(values)) {
  require(values_.rows() == values_.cols(), ErrorKind::argument, "DistanceMatrix: not square");
  require(values_.allFinite(), ErrorKind::argument, "DistanceMatrix: non-finite entries");
  for (Eigen::Index i = 0; i < values_.rows(); ++i) {
    require(values_(i, i) == 0.0, ErrorKind::argument, "DistanceMatrix: nonzero diagonal");
    for (Eigen::Index j = i + 1; j < values_.cols(); ++j) {
      require(values_(i, j) >= 0.0 && values_(j, i) >= 0.0, ErrorKind::argument,
              "DistanceMatrix: negative entry");
      require(std::abs(values_(i, j) - values_(j, i)) <= 1e-12, ErrorKind::argument,
              "DistanceMatrix: not symmetric");
    }
  }
}

std::vector<std::size_t> Partition::members(int label) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Partition::sizes() const {
  std::vector<std::size_t> out(clusters, 0);
  for (int l : labels) ++out[static_cast<std::size_t>(l - 1)];
  return out;
}

namespace {

// Shared by pair_distance and pairwise_distance so both agree bit for bit.
double blended_distance(const Vector& x, const Vector& g, double g_norm, const Vector& xp,
                        const Vector& gp, double gp_norm, double eta) {
  double out = 0.0;
  if (eta > 0.0) {
    const bool zero_g = g_norm <= kZeroGradientNorm;
    const bool zero_gp = gp_norm <= kZeroGradientNorm;
    double term = 0.0;
    if (zero_g != zero_gp) {
      term = 1.0;
    } else if (!zero_g) {
      term = 1.0 - std::min(1.0, std::abs(g.dot(gp)) / (g_norm * gp_norm));
    }
    out += eta * term;
  }
  if (eta < 1.0) {
    out += (1.0 - eta) * (x - xp).norm() / std::sqrt(static_cast<double>(x.size()));
  }
  return out;
}

}  // namespace

double pair_distance(const Vector& x, const Vector& gx, const Vector& xp, const Vector& gxp,
                     double eta) {
  require(x.size() == xp.size() && x.size() == gx.size() && x.size() == gxp.size() && x.size() > 0,
          ErrorKind::argument, "pair_distance: vector lengths differ");
  require(eta >= 0.0 && eta <= 1.0, ErrorKind::argument, "pair_distance: eta must lie in [0, 1]");
  return blended_distance(x, gx, gx.norm(), xp, gxp, gxp.norm(), eta);
}

DistanceMatrix pairwise_distance(const DataSet& dataset, double eta) {
  require(dataset.has_gradients() || dataset.empty(), ErrorKind::contract,
          "pairwise_distance: samples lack gradients");
  require(eta >= 0.0 && eta <= 1.0, ErrorKind::argument, "pairwise_distance: eta must lie in [0, 1]");
  const std::size_t n = dataset.size();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) norms[i] = dataset[i].g->norm();

  Matrix D = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Sample& si = dataset[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Sample& sj = dataset[j];
      const double value = blended_distance(si.x, *si.g, norms[i], sj.x, *sj.g, norms[j], eta);
      D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
      D(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
    }
  }
  return DistanceMatrix(std::move(D));
}

std::vector<Merge> average_linkage(const DistanceMatrix& distances) {
  const std::size_t n = distances.size();
  std::vector<Merge> merges;
  if (n < 2) return merges;
  merges.reserve(n - 1);

  // Working copy; only entries (i, j) with i < j are read and written.
  Matrix D = distances.values();
  std::vector<double> weight(n, 1.0);
  std::vector<bool> active(n, true);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> nearest(n, n);
  std::vector<double> nearest_dist(n, kInf);

  auto at = [&](std::size_t i, std::size_t j) -> double& {
    return D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };
  // nearest active cluster with a larger index; first one wins ties
  auto rescan = [&](std::size_t i) {
    nearest[i] = n;
    nearest_dist[i] = kInf;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (active[j] && at(i, j) < nearest_dist[i]) {
        nearest_dist[i] = at(i, j);
        nearest[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i + 1 < n; ++i) rescan(i);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t a = n;
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i] && nearest[i] < n && nearest_dist[i] < best) {
        best = nearest_dist[i];
        a = i;
      }
    }
    const std::size_t b = nearest[a];
    merges.push_back({a, b, best});

    const double wa = weight[a];
    const double wb = weight[b];
    const double w = wa + wb;
    active[b] = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a) continue;
      const double dak = k < a ? at(k, a) : at(a, k);
      const double dbk = k < b ? at(k, b) : at(b, k);
      const double merged = (wa * dak + wb * dbk) / w;
      if (k < a) {
        at(k, a) = merged;
      } else {
        at(a, k) = merged;
      }
    }
    weight[a] = w;

    rescan(a);
    for (std::size_t k = 0; k < a; ++k) {
      if (!active[k]) continue;
      if (nearest[k] == a || nearest[k] == b) {
        rescan(k);
      } else if (at(k, a) < nearest_dist[k] ||
                 (at(k, a) == nearest_dist[k] && a < nearest[k])) {
        nearest[k] = a;
        nearest_dist[k] = at(k, a);
      }
    }
    for (std::size_t k = a + 1; k < b; ++k) {
      if (active[k] && nearest[k] == b) rescan(k);
    }
  }
  return merges;
}

Partition cut_dendrogram(std::span<const Merge> merges, std::size_t n, std::size_t J) {
  require(J >= 1 && J <= n, ErrorKind::argument,
          "cluster count " + std::to_string(J) + " outside 1.." + std::to_string(n));
  require(merges.size() + 1 == n || n == 0, ErrorKind::argument,
          "cut_dendrogram: merge record does not match point count");
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (std::size_t m = 0; m < n - J; ++m) {
    const std::size_t ra = find(merges[m].kept);
    const std::size_t rb = find(merges[m].absorbed);
    parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  Partition p;
  p.clusters = J;
  p.labels.assign(n, 0);
  std::map<std::size_t, int> label_of_root;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    auto it = label_of_root.find(root);
    if (it == label_of_root.end()) {
      it = label_of_root.emplace(root, static_cast<int>(label_of_root.size()) + 1).first;
    }
    p.labels[i] = it->second;
  }
  p.merge_heights.reserve(merges.size());
  for (const Merge& m : merges) p.merge_heights.push_back(m.height);
  return p;
}

Partition agglomerate(const DistanceMatrix& D, std::size_t J) {
  require(J >= 1 && J <= D.size(), ErrorKind::argument,
          "agglomerate: cluster count " + std::to_string(J) + " outside 1.." +
              std::to_string(D.size()));
  const auto merges = average_linkage(D);
  return cut_dendrogram(merges, D.size(), J);
}

Partition cluster_training_set(const DataSet& dataset, std::size_t J, double eta) {
  require(dataset.has_gradients(), ErrorKind::contract,
          "cluster_training_set: samples lack gradients");
  require(J >= 1 && J <= dataset.size(), ErrorKind::argument,
          "cluster_training_set: cluster count " + std::to_string(J) + " exceeds sample count " +
              std::to_string(dataset.size()));
  return agglomerate(pairwise_distance(dataset, eta), J);
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  require(a.size() == b.size(), ErrorKind::argument, "adjusted_rand_index: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) return 1.0;
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows;
  std::map<int, double> cols;
  for (std::size_t i = 0; i < n; ++i) {
    joint[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  auto pairs = [](double m) { return m * (m - 1.0) / 2.0; };
  double index = 0.0;
  for (const auto& [key, count] : joint) index += pairs(count);
  double sum_rows = 0.0;
  for (const auto& [key, count] : rows) sum_rows += pairs(count);
  double sum_cols = 0.0;
  for (const auto& [key, count] : cols) sum_cols += pairs(count);
  const double expected = sum_rows * sum_cols / pairs(static_cast<double>(n));
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected) return 1.0;
  return (index - expected) / (maximum - expected);
}

}  // namespace caslgp
