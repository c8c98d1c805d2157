#pragma once

#include <cstddef>
#include <vector>

#include "caslgp/dataset.hpp"
#include "caslgp/types.hpp"

namespace caslgp {

// Sliced inverse regression (SIR) and sliced average variance estimation
// (SAVE). Both work on standardized inputs z = Sigma^{-1/2}(x - mean) and
// slice the samples on y; neither needs gradients.

struct DirectionEstimate {
  Vector eigenvalues;  // full spectrum of the kernel matrix, descending
  Matrix directions;   // d x r, orthonormal columns in the original coordinates
};

inline constexpr std::size_t kDefaultSlices = 10;

/// Equal-frequency slices of the sample indices sorted by y. Tied y values
/// always share a slice, so fewer than `n_slices` slices may come back.
/// Slicing error if any slice ends up with fewer than two samples.
std::vector<std::vector<std::size_t>> slice_by_response(const Vector& y, std::size_t n_slices);

/// Leading r eigenvectors of sum_h p_h m_h m_h^T (m_h: slice mean of z).
DirectionEstimate sir_directions(const DataSet& dataset, std::size_t r,
                                 std::size_t n_slices = kDefaultSlices);

/// Leading r eigenvectors of sum_h p_h (I - Cov_h(z))^2.
DirectionEstimate save_directions(const DataSet& dataset, std::size_t r,
                                  std::size_t n_slices = kDefaultSlices);

}  // namespace caslgp
