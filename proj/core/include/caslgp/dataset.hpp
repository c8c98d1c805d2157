#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "caslgp/types.hpp"

namespace caslgp {

/// One training triple: input, output and (optionally) the gradient at the input.
struct Sample {
  Vector x;
  double y = 0.0;
  std::optional<Vector> g;
};

/// Immutable ordered collection of samples sharing one input dimension.
/// Either every sample carries a gradient or none does.
class DataSet {
 public:
  DataSet() = default;
  DataSet(std::size_t dim, std::vector<Sample> samples);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  bool has_gradients() const noexcept { return has_gradients_; }

  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<Sample>& samples() const noexcept { return samples_; }

  /// n x d matrix of inputs, one row per sample.
  Matrix inputs() const;
  Vector outputs() const;
  /// n x d matrix of gradients; contract error when the set has none.
  Matrix gradients() const;

  DataSet subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const DataSet& a, const DataSet& b);

 private:
  std::size_t dim_ = 0;
  bool has_gradients_ = false;
  std::vector<Sample> samples_;
};

/// Dataset CSV: header `x_1,...,x_d,y[,g_1,...,g_d]`, one sample per row.
DataSet load_dataset(const std::filesystem::path& path);
void save_dataset(const DataSet& dataset, const std::filesystem::path& path);

/// Reads only the `x_*` columns of a CSV; any other columns are ignored.
std::vector<Vector> load_inputs(const std::filesystem::path& path);

/// Seeded random split; the first part holds ceil(fraction * n) samples.
/// Both parts keep the original sample order.
std::pair<DataSet, DataSet> split(const DataSet& dataset, double fraction, std::uint64_t seed);

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

}  // namespace caslgp
