#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "caslgp/pipeline.hpp"
#include "caslgp/test_functions.hpp"

namespace caslgp::cli {

/// One `key=value` line from a config file.
struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Flat key=value file. Blank lines and lines starting with '#' are skipped;
/// keys and values are trimmed; underscores in keys read as hyphens. Parse
/// error with the line number otherwise.
std::vector<ConfigEntry> read_config_file(const std::filesystem::path& path);

/// Every setting a command can take. Field names match the flag names with
/// '-' in place of '_'.
struct RunConfig {
  std::string benchmark = "piecewise";
  std::string mixture_params;  // JSON file; empty means the built-in fixture
  std::size_t n_train = 1000;
  std::size_t n_test = 5000;
  std::string train;
  std::string test;
  std::string inputs;
  std::string bundle;
  std::string predictions;
  std::string out;
  std::string dump_directions;
  std::string dump_clusters;

  std::string method = "cas";
  std::size_t clusters = 1;
  std::optional<std::size_t> rank;
  std::optional<double> rho;
  double eta = 1.0;
  std::string classifier = "svm";
  std::string svm_kernel = "linear";
  double svm_c = 10.0;
  double svm_gamma = 1.0;
  double svm_tol = 1e-3;
  std::size_t svm_max_iter = 0;
  std::size_t gp_restarts = 5;
  std::size_t gp_max_iter = 100;
  std::optional<double> gp_noise;
  bool gp_isotropic = false;
  std::size_t slices = kDefaultSlices;

  std::size_t folds = 10;
  std::size_t max_clusters = 5;
  double plateau = 0.02;

  std::vector<std::string> methods{"cas", "as", "sir", "save", "plain-gp"};
  std::vector<std::size_t> ranks{1, 2, 3, 4};
  std::vector<std::size_t> cluster_list{2, 3, 4};
  std::vector<std::uint64_t> seeds;  // compare: one run per seed; empty means {seed}
  std::uint64_t seed = 0;

  /// Argument error when rank and rho are both set, or a value is out of range.
  void validate() const;
  EmulatorConfig emulator() const;
  BenchmarkSpec benchmark_spec() const;
  /// Sorted `key=value` lines for every setting, used as provenance in reports.
  std::vector<std::string> lines() const;
};

std::string join_csv(const std::vector<std::string>& items);
std::vector<std::string> split_list(const std::string& text);

}  // namespace caslgp::cli
