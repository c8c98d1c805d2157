#include "caslgp/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "caslgp/errors.hpp"
#include "caslgp/random.hpp"

namespace caslgp {

namespace {
constexpr std::uint64_t kFoldStream = 0xC5F01D5ULL;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
  require(k >= 2, ErrorKind::argument, "need at least two folds");
  require(n >= k, ErrorKind::argument,
          "cannot split " + std::to_string(n) + " samples into " + std::to_string(k) + " folds");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < n; ++i) folds[i % k].push_back(order[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::size_t select_clusters(std::span<const double> mean_nmse, double delta) {
  require(delta >= 0.0, ErrorKind::argument, "plateau tolerance must be nonnegative");
  double best = std::numeric_limits<double>::infinity();
  for (double v : mean_nmse) {
    if (std::isfinite(v)) best = std::min(best, v);
  }
  require(std::isfinite(best), ErrorKind::degenerate_metric,
          "cross validation produced no finite score");
  for (std::size_t j = 0; j < mean_nmse.size(); ++j) {
    if (std::isfinite(mean_nmse[j]) && mean_nmse[j] <= (1.0 + delta) * best) return j + 1;
  }
  return mean_nmse.size();
}

CvReport cross_validate_clusters(const DataSet& dataset, const EmulatorConfig& config,
                                 std::size_t max_clusters, std::size_t folds, double delta) {
  require(config.method == Method::cas, ErrorKind::argument,
          "cross validation over J applies to the cas method");
  require(max_clusters >= 1, ErrorKind::argument, "J_max must be at least 1");
  require(dataset.size() >= folds * max_clusters, ErrorKind::argument,
          "need at least folds x J_max = " + std::to_string(folds * max_clusters) +
              " samples, have " + std::to_string(dataset.size()));
  const auto split = make_folds(dataset.size(), folds, derive_seed(config.seed, kFoldStream));

  CvReport report;
  report.folds = folds;
  report.plateau = delta;
  for (std::size_t J = 1; J <= max_clusters; ++J) {
    CvEntry entry;
    entry.clusters = J;
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t f = 0; f < folds; ++f) {
      std::vector<std::size_t> train;
      train.reserve(dataset.size() - split[f].size());
      for (std::size_t g = 0; g < folds; ++g) {
        if (g != f) train.insert(train.end(), split[g].begin(), split[g].end());
      }
      std::sort(train.begin(), train.end());
      EmulatorConfig cfg = config;
      cfg.clusters = J;
      cfg.seed = derive_seed(config.seed, f);
      try {
        const CasEmulator em = fit_emulator(dataset.subset(train), cfg);
        const double score = test_nmse(em, dataset.subset(split[f]));
        entry.fold_nmse.push_back(score);
        sum += score;
        ++used;
      } catch (const Error& e) {
        entry.fold_nmse.push_back(std::numeric_limits<double>::quiet_NaN());
        ++entry.failed_folds;
        report.warnings.push_back("J=" + std::to_string(J) + " fold " + std::to_string(f + 1) +
                                  " skipped: " + std::string(to_string(e.kind())) + ": " + e.what());
      }
    }
    entry.mean_nmse = used > 0 ? sum / static_cast<double>(used)
                               : std::numeric_limits<double>::quiet_NaN();
    if (used == 0) {
      report.warnings.push_back("J=" + std::to_string(J) + ": every fold failed");
    }
    report.entries.push_back(std::move(entry));
  }
  std::vector<double> means;
  for (const auto& e : report.entries) means.push_back(e.mean_nmse);
  report.chosen = select_clusters(means, delta);
  return report;
}

}  // namespace caslgp
