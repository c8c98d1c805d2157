#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "caslgp/classifier.hpp"
#include "caslgp/clustering.hpp"
#include "caslgp/dataset.hpp"
#include "caslgp/gp.hpp"
#include "caslgp/sdr.hpp"
#include "caslgp/subspace.hpp"
#include "caslgp/types.hpp"

namespace caslgp {

/// cas: clustered active subspaces. as/sir/save: one global projection
/// estimated by the named method. plain_gp: no reduction.
enum class Method { cas, as, sir, save, plain_gp };

std::string to_string(Method method);
/// Accepts cas, as, sir, save, plain-gp (or plain_gp, gp). Argument error otherwise.
Method parse_method(std::string_view text);
bool needs_gradients(Method method);

/// Either a rank forced on every cluster or a cumulative eigenvalue ratio.
struct RankSelection {
  std::optional<std::size_t> rank;
  double rho = 0.99;

  static RankSelection forced(std::size_t r) { return {r, 0.99}; }
  static RankSelection ratio(double rho) { return {std::nullopt, rho}; }
  /// Forced ranks are capped at the spectrum length.
  std::size_t choose(const Vector& eigenvalues) const;
  void validate() const;
};

struct CasDecomposition {
  Partition partition;
  std::vector<Subspace> subspaces;  // subspaces[j] belongs to label j + 1
};

/// Clusters the training set (skipped for J = 1) and computes one active
/// subspace per cluster. Degenerate-spectrum error naming the cluster when
/// all its gradients vanish.
CasDecomposition cas_decompose(const DataSet& dataset, std::size_t J, const RankSelection& rank,
                               double eta);

struct EmulatorConfig {
  Method method = Method::cas;
  std::size_t clusters = 1;
  RankSelection rank = RankSelection::forced(2);
  double eta = 1.0;
  ClassifierKind classifier = ClassifierKind::svm;
  SvmConfig svm;
  GpOptions gp;  // gp.seed is ignored; cluster seeds derive from `seed`
  std::size_t slices = kDefaultSlices;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Seed of the GP fitted for cluster `label` (1-based).
std::uint64_t cluster_seed(std::uint64_t master, int label);

struct LocalModel {
  std::vector<std::size_t> members;  // training indices, ascending
  Vector spectrum;                   // eigenvalues behind the projection (empty for plain GP)
  Matrix projection;                 // d x r, orthonormal columns
  GpModel gp;

  std::size_t rank() const noexcept { return static_cast<std::size_t>(projection.cols()); }
  /// Sum of the discarded eigenvalues.
  double tail() const;
};

struct EmulatorPrediction {
  double mean = 0.0;
  double variance = 0.0;
  int label = 1;
};

class CasEmulator {
 public:
  CasEmulator() = default;
  CasEmulator(EmulatorConfig config, std::size_t dim, std::vector<int> labels,
              Classifier classifier, std::vector<LocalModel> locals);

  const EmulatorConfig& config() const noexcept { return config_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t clusters() const noexcept { return locals_.size(); }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const Classifier& classifier() const noexcept { return classifier_; }
  const std::vector<LocalModel>& locals() const noexcept { return locals_; }
  const LocalModel& local(int label) const;

  EmulatorPrediction predict(const Vector& x) const;
  std::vector<std::string> warnings() const;

 private:
  EmulatorConfig config_;
  std::size_t dim_ = 0;
  std::vector<int> labels_;  // training cluster labels
  Classifier classifier_;
  std::vector<LocalModel> locals_;
};

/// Training side of the local-GP construction: decomposition, classifier on
/// (x, label), one GP per cluster on projected members. Under-populated-cluster
/// error when a cluster has fewer than two members.
CasEmulator fit_emulator(const DataSet& dataset, const EmulatorConfig& config);

EmulatorPrediction emulate(const CasEmulator& emulator, const Vector& x);

std::vector<EmulatorPrediction> emulate_all(const CasEmulator& emulator, const DataSet& inputs);

/// sum (f - fhat)^2 / sum f^2. Degenerate-metric error when sum f^2 = 0.
double nmse(std::span<const double> predictions, std::span<const double> truths);

/// NMSE of the emulator's posterior mean on a labelled dataset.
double test_nmse(const CasEmulator& emulator, const DataSet& test);

}  // namespace caslgp
