#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "caslgp/dataset.hpp"
#include "caslgp/types.hpp"

namespace caslgp {

/// Dense symmetric matrix of pairwise dissimilarities with a zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// Argument error unless the matrix is square, finite, nonnegative,
  /// symmetric within 1e-12 and zero on the diagonal.
  explicit DistanceMatrix(Matrix values);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Matrix& values() const noexcept { return values_; }

 private:
  Matrix values_;
};

/// One agglomeration step. Clusters are named by their smallest member index;
/// `kept` < `absorbed` and the merged cluster keeps the name `kept`.
struct Merge {
  std::size_t kept = 0;
  std::size_t absorbed = 0;
  double height = 0.0;
};

/// Cluster labels 1..J over n points plus the full dendrogram record.
struct Partition {
  std::vector<int> labels;
  std::size_t clusters = 0;
  std::vector<double> merge_heights;  // n - 1 entries, in merge order

  /// Zero-based member indices of cluster `label` (1-based label).
  std::vector<std::size_t> members(int label) const;
  std::vector<std::size_t> sizes() const;
};

/// eta * (1 - |cos(g, g')|) + (1 - eta) * |x - x'|_2 / sqrt(d).
///
/// A gradient with norm <= kZeroGradientNorm carries no direction: the cosine
/// term is 1 when exactly one of the two gradients is zero and 0 when both are.
double pair_distance(const Vector& x, const Vector& gx, const Vector& xp, const Vector& gxp,
                     double eta);

inline constexpr double kZeroGradientNorm = 1e-12;

DistanceMatrix pairwise_distance(const DataSet& dataset, double eta);

/// Full unweighted-average-linkage (UPGMA) merge sequence, n - 1 merges.
/// Ties go to the lexicographically smallest (kept, absorbed) pair.
std::vector<Merge> average_linkage(const DistanceMatrix& D);

/// Labels after applying the first n - J merges. Labels are numbered by the
/// smallest member index, so the cluster holding point 0 is label 1.
Partition cut_dendrogram(std::span<const Merge> merges, std::size_t n, std::size_t J);

Partition agglomerate(const DistanceMatrix& D, std::size_t J);

/// pairwise_distance followed by agglomerate.
Partition cluster_training_set(const DataSet& dataset, std::size_t J, double eta);

/// Chance-corrected agreement of two labelings of the same points.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

}  // namespace caslgp
