#include "caslgp/errors.hpp"

namespace caslgp {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::argument: return "argument";
    case ErrorKind::parse: return "parse";
    case ErrorKind::contract: return "contract";
    case ErrorKind::io: return "io";
    case ErrorKind::degenerate_spectrum: return "degenerate-spectrum";
    case ErrorKind::slicing: return "slicing";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::degenerate_training: return "degenerate-training";
    case ErrorKind::under_populated_cluster: return "under-populated-cluster";
    case ErrorKind::degenerate_metric: return "degenerate-metric";
    case ErrorKind::sampling_failure: return "sampling-failure";
    case ErrorKind::unsupported_distribution: return "unsupported-distribution";
  }
  return "unknown";
}

}  // namespace caslgp
