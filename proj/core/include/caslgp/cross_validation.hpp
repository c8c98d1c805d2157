#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "caslgp/dataset.hpp"
#include "caslgp/pipeline.hpp"

namespace caslgp {

inline constexpr double kDefaultPlateau = 0.02;

/// Shuffled indices cut into k folds whose sizes differ by at most one.
/// Each fold is sorted.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, std::uint64_t seed);

/// Smallest J (1-based) whose score is within (1 + delta) of the minimum.
/// Non-finite scores are ignored; degenerate-metric error if none is finite.
std::size_t select_clusters(std::span<const double> mean_nmse, double delta = kDefaultPlateau);

struct CvEntry {
  std::size_t clusters = 0;
  std::vector<double> fold_nmse;  // NaN for folds whose fit failed
  double mean_nmse = 0.0;         // over successful folds; NaN when none succeeded
  std::size_t failed_folds = 0;
};

struct CvReport {
  std::size_t folds = 0;
  double plateau = kDefaultPlateau;
  std::vector<CvEntry> entries;  // one per J = 1..J_max
  std::size_t chosen = 0;
  std::vector<std::string> warnings;
};

/// k-fold CV of the clustered emulator for J = 1..max_clusters. The same
/// fold split (seeded by config.seed) is shared by every J.
CvReport cross_validate_clusters(const DataSet& dataset, const EmulatorConfig& config,
                                 std::size_t max_clusters, std::size_t folds,
                                 double delta = kDefaultPlateau);

}  // namespace caslgp
