#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "caslgp/dataset.hpp"
#include "caslgp/pipeline.hpp"
#include "caslgp/test_functions.hpp"

namespace caslgp::cli {

/// Training set (with gradients) and test set (without) drawn from
/// independent streams of `seed`.
std::pair<DataSet, DataSet> benchmark_split(const BenchmarkSpec& spec, std::size_t n_train,
                                            std::size_t n_test, std::uint64_t seed);

/// One table cell. Rank is empty for the unreduced GP.
struct Cell {
  Method method = Method::cas;
  std::size_t clusters = 1;
  std::optional<std::size_t> rank;

  std::string name() const;  // e.g. "CAS J=4", "AS", "GP"
};

struct CellResult {
  Cell cell;
  std::uint64_t seed = 0;
  double nmse = 0.0;  // NaN when the fit failed
  std::string error;
};

/// Cells in report order: AS, SIR, SAVE, CAS J in `clusters` for every rank,
/// then one unreduced GP cell. Methods not listed are skipped.
std::vector<Cell> comparison_cells(const std::vector<Method>& methods,
                                   const std::vector<std::size_t>& ranks,
                                   const std::vector<std::size_t>& clusters);

/// Fits every cell on the benchmark for each seed. The emulator seed of a
/// cell equals the data seed, so a one-cluster CAS cell reproduces AS.
std::vector<CellResult> run_comparison(const BenchmarkSpec& spec, std::size_t n_train,
                                       std::size_t n_test, const std::vector<std::uint64_t>& seeds,
                                       const std::vector<Cell>& cells, const EmulatorConfig& base,
                                       const std::function<void(const CellResult&)>& progress = {});

/// Test NMSE of one cell on an already drawn split.
double evaluate_cell(const DataSet& train, const DataSet& test, const Cell& cell,
                     const EmulatorConfig& base, std::uint64_t seed);

}  // namespace caslgp::cli
