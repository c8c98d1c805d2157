#include "experiments.hpp"

#include <limits>

#include "caslgp/errors.hpp"
#include "caslgp/random.hpp"

namespace caslgp::cli {

std::pair<DataSet, DataSet> benchmark_split(const BenchmarkSpec& spec, std::size_t n_train,
                                            std::size_t n_test, std::uint64_t seed) {
  return {generate_dataset(spec, n_train, true, derive_seed(seed, 1)),
          generate_dataset(spec, n_test, false, derive_seed(seed, 2))};
}

std::string Cell::name() const {
  switch (method) {
    case Method::cas: return "CAS J=" + std::to_string(clusters);
    case Method::as: return "AS";
    case Method::sir: return "SIR";
    case Method::save: return "SAVE";
    case Method::plain_gp: return "GP";
  }
  return "?";
}

std::vector<Cell> comparison_cells(const std::vector<Method>& methods,
                                   const std::vector<std::size_t>& ranks,
                                   const std::vector<std::size_t>& clusters) {
  auto wanted = [&](Method m) {
    for (Method x : methods) {
      if (x == m) return true;
    }
    return false;
  };
  std::vector<Cell> out;
  for (std::size_t r : ranks) {
    for (Method m : {Method::as, Method::sir, Method::save}) {
      if (wanted(m)) out.push_back({m, 1, r});
    }
    if (wanted(Method::cas)) {
      for (std::size_t J : clusters) out.push_back({Method::cas, J, r});
    }
  }
  if (wanted(Method::plain_gp)) out.push_back({Method::plain_gp, 1, std::nullopt});
  return out;
}

double evaluate_cell(const DataSet& train, const DataSet& test, const Cell& cell,
                     const EmulatorConfig& base, std::uint64_t seed) {
  EmulatorConfig cfg = base;
  cfg.method = cell.method;
  cfg.clusters = cell.clusters;
  if (cell.rank) cfg.rank = RankSelection::forced(*cell.rank);
  cfg.seed = seed;
  return test_nmse(fit_emulator(train, cfg), test);
}

std::vector<CellResult> run_comparison(const BenchmarkSpec& spec, std::size_t n_train,
                                       std::size_t n_test, const std::vector<std::uint64_t>& seeds,
                                       const std::vector<Cell>& cells, const EmulatorConfig& base,
                                       const std::function<void(const CellResult&)>& progress) {
  std::vector<CellResult> out;
  for (std::uint64_t seed : seeds) {
    const auto [train, test] = benchmark_split(spec, n_train, n_test, seed);
    for (const Cell& cell : cells) {
      CellResult res{cell, seed, std::numeric_limits<double>::quiet_NaN(), {}};
      try {
        res.nmse = evaluate_cell(train, test, cell, base, seed);
      } catch (const Error& e) {
        res.error = std::string(to_string(e.kind())) + ": " + e.what();
      }
      if (progress) progress(res);
      out.push_back(std::move(res));
    }
  }
  return out;
}

}  // namespace caslgp::cli
