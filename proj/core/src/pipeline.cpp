#include "caslgp/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "caslgp/errors.hpp"
#include "caslgp/random.hpp"

namespace caslgp {

std::string to_string(Method method) {
  switch (method) {
    case Method::cas: return "cas";
    case Method::as: return "as";
    case Method::sir: return "sir";
    case Method::save: return "save";
    case Method::plain_gp: return "plain-gp";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "cas" || s == "cas-lgp") return Method::cas;
  if (s == "as" || s == "as-gp") return Method::as;
  if (s == "sir") return Method::sir;
  if (s == "save") return Method::save;
  if (s == "plain-gp" || s == "plain_gp" || s == "gp") return Method::plain_gp;
  throw Error(ErrorKind::argument, "unknown method '" + std::string(text) + "'");
}

bool needs_gradients(Method method) { return method == Method::cas || method == Method::as; }

std::size_t RankSelection::choose(const Vector& eigenvalues) const {
  if (rank) return std::min(*rank, static_cast<std::size_t>(eigenvalues.size()));
  return select_rank(eigenvalues, rho);
}

void RankSelection::validate() const {
  if (rank) {
    require(*rank >= 1, ErrorKind::argument, "rank must be at least 1");
  } else {
    require(rho >= 0.0 && rho <= 1.0, ErrorKind::argument, "rho must lie in [0, 1]");
  }
}

CasDecomposition cas_decompose(const DataSet& dataset, std::size_t J, const RankSelection& rank,
                               double eta) {
  require(dataset.has_gradients(), ErrorKind::contract, "cas_decompose: dataset has no gradients");
  require(J >= 1 && J <= dataset.size(), ErrorKind::argument,
          "cas_decompose: cluster count " + std::to_string(J) + " outside 1.." +
              std::to_string(dataset.size()));
  rank.validate();

  CasDecomposition out;
  if (J == 1) {
    out.partition.labels.assign(dataset.size(), 1);
    out.partition.clusters = 1;
  } else {
    out.partition = cluster_training_set(dataset, J, eta);
  }
  const Matrix G = dataset.gradients();
  for (std::size_t j = 0; j < out.partition.clusters; ++j) {
    const int label = static_cast<int>(j) + 1;
    const auto members = out.partition.members(label);
    Matrix Gj(static_cast<Eigen::Index>(members.size()), G.cols());
    for (std::size_t i = 0; i < members.size(); ++i) {
      Gj.row(static_cast<Eigen::Index>(i)) = G.row(static_cast<Eigen::Index>(members[i]));
    }
    EigenDecomposition eig = eigendecompose(gradient_moment(Gj));
    require(eig.values.sum() > 0.0, ErrorKind::degenerate_spectrum,
            "cluster " + std::to_string(label) + " has only zero gradients");
    const std::size_t r = rank.choose(eig.values);
    out.subspaces.emplace_back(std::move(eig), r);
  }
  return out;
}

void EmulatorConfig::validate() const {
  require(clusters >= 1, ErrorKind::argument, "cluster count must be at least 1");
  require(method == Method::cas || clusters == 1, ErrorKind::argument,
          "method " + to_string(method) + " uses a single cluster");
  require(eta >= 0.0 && eta <= 1.0, ErrorKind::argument, "eta must lie in [0, 1]");
  require(slices >= 1, ErrorKind::argument, "slice count must be at least 1");
  rank.validate();
}

std::uint64_t cluster_seed(std::uint64_t master, int label) {
  return derive_seed(master, static_cast<std::uint64_t>(label));
}

double LocalModel::tail() const {
  const auto r = projection.cols();
  if (spectrum.size() <= r) return 0.0;
  return spectrum.tail(spectrum.size() - r).sum();
}

CasEmulator::CasEmulator(EmulatorConfig config, std::size_t dim, std::vector<int> labels,
                         Classifier classifier, std::vector<LocalModel> locals)
    : config_(std::move(config)),
      dim_(dim),
      labels_(std::move(labels)),
      classifier_(std::move(classifier)),
      locals_(std::move(locals)) {
  require(!locals_.empty(), ErrorKind::argument, "emulator needs at least one local model");
  for (const auto& m : locals_) {
    require(static_cast<std::size_t>(m.projection.rows()) == dim_, ErrorKind::argument,
            "local projection dimension mismatch");
    require(m.gp.input_dim() == m.rank(), ErrorKind::argument,
            "local GP input dimension differs from its rank");
  }
}

const LocalModel& CasEmulator::local(int label) const {
  require(label >= 1 && static_cast<std::size_t>(label) <= locals_.size(), ErrorKind::argument,
          "no cluster labelled " + std::to_string(label));
  return locals_[static_cast<std::size_t>(label - 1)];
}

EmulatorPrediction CasEmulator::predict(const Vector& x) const {
  require(static_cast<std::size_t>(x.size()) == dim_, ErrorKind::argument,
          "emulate: input has length " + std::to_string(x.size()) + ", emulator expects " +
              std::to_string(dim_));
  EmulatorPrediction out;
  out.label = classifier_.classify(x);
  const LocalModel& m = local(out.label);
  const Prediction p = m.gp.predict(project(m.projection, x));
  out.mean = p.mean;
  out.variance = p.variance;
  return out;
}

std::vector<std::string> CasEmulator::warnings() const { return classifier_.warnings(); }

namespace {

Matrix project_rows(const Matrix& V, const DataSet& data, std::span<const std::size_t> members) {
  Matrix Z(static_cast<Eigen::Index>(members.size()), V.cols());
  for (std::size_t i = 0; i < members.size(); ++i) {
    Z.row(static_cast<Eigen::Index>(i)) = project(V, data[members[i]].x).transpose();
  }
  return Z;
}

Vector outputs_of(const DataSet& data, std::span<const std::size_t> members) {
  Vector y(static_cast<Eigen::Index>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i) y[static_cast<Eigen::Index>(i)] = data[members[i]].y;
  return y;
}

// Projection for the single-cluster baselines.
std::pair<Vector, Matrix> global_projection(const DataSet& data, const EmulatorConfig& cfg) {
  const std::size_t d = data.dim();
  switch (cfg.method) {
    case Method::plain_gp:
      return {Vector(), Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))};
    case Method::sir:
    case Method::save: {
      DirectionEstimate est = cfg.method == Method::sir ? sir_directions(data, d, cfg.slices)
                                                        : save_directions(data, d, cfg.slices);
      require(est.eigenvalues.sum() > 0.0, ErrorKind::degenerate_spectrum,
              to_string(cfg.method) + " kernel matrix has an all-zero spectrum");
      const std::size_t r = cfg.rank.choose(est.eigenvalues);
      return {est.eigenvalues, est.directions.leftCols(static_cast<Eigen::Index>(r))};
    }
    default:
      break;
  }
  throw Error(ErrorKind::argument, "global_projection: unexpected method");
}

}  // namespace

CasEmulator fit_emulator(const DataSet& dataset, const EmulatorConfig& config) {
  config.validate();
  require(!dataset.empty(), ErrorKind::argument, "fit_emulator: empty training set");
  require(!needs_gradients(config.method) || dataset.has_gradients(), ErrorKind::contract,
          "method " + to_string(config.method) + " needs gradient columns in the training data");
  require(config.clusters <= dataset.size(), ErrorKind::argument,
          "cluster count " + std::to_string(config.clusters) + " exceeds training size " +
              std::to_string(dataset.size()));

  const std::size_t d = dataset.dim();
  std::vector<int> labels;
  std::vector<Vector> spectra;
  std::vector<Matrix> projections;
  if (needs_gradients(config.method)) {
    CasDecomposition dec = cas_decompose(dataset, config.clusters, config.rank, config.eta);
    labels = std::move(dec.partition.labels);
    for (const Subspace& s : dec.subspaces) {
      spectra.push_back(s.eigenvalues());
      projections.push_back(s.active());
    }
  } else {
    labels.assign(dataset.size(), 1);
    auto [spectrum, V] = global_projection(dataset, config);
    spectra.push_back(std::move(spectrum));
    projections.push_back(std::move(V));
  }

  const std::size_t J = projections.size();
  std::vector<std::vector<std::size_t>> members(J);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    members[static_cast<std::size_t>(labels[i] - 1)].push_back(i);
  }
  for (std::size_t j = 0; j < J; ++j) {
    require(members[j].size() >= 2, ErrorKind::under_populated_cluster,
            "cluster " + std::to_string(j + 1) + " has " + std::to_string(members[j].size()) +
                " member(s); try fewer clusters than " + std::to_string(J));
  }

  Classifier classifier = J == 1 ? Classifier::constant(d, 1)
                                 : Classifier::train(dataset.inputs(), labels, config.classifier,
                                                     config.svm);

  std::vector<LocalModel> locals(J);
  for (std::size_t j = 0; j < J; ++j) {
    LocalModel& m = locals[j];
    m.members = std::move(members[j]);
    m.spectrum = std::move(spectra[j]);
    m.projection = std::move(projections[j]);
    GpOptions opts = config.gp;
    opts.seed = cluster_seed(config.seed, static_cast<int>(j) + 1);
    m.gp = fit_gp(project_rows(m.projection, dataset, m.members), outputs_of(dataset, m.members),
                  opts);
  }
  return CasEmulator(config, d, std::move(labels), std::move(classifier), std::move(locals));
}

EmulatorPrediction emulate(const CasEmulator& emulator, const Vector& x) {
  return emulator.predict(x);
}

std::vector<EmulatorPrediction> emulate_all(const CasEmulator& emulator, const DataSet& inputs) {
  std::vector<EmulatorPrediction> out;
  out.reserve(inputs.size());
  for (const Sample& s : inputs.samples()) out.push_back(emulator.predict(s.x));
  return out;
}

double nmse(std::span<const double> predictions, std::span<const double> truths) {
  require(predictions.size() == truths.size(), ErrorKind::argument,
          "nmse: " + std::to_string(predictions.size()) + " predictions for " +
              std::to_string(truths.size()) + " truths");
  require(!truths.empty(), ErrorKind::argument, "nmse: empty input");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const double e = truths[i] - predictions[i];
    num += e * e;
    den += truths[i] * truths[i];
  }
  require(den > 0.0, ErrorKind::degenerate_metric, "nmse: all truths are zero");
  return num / den;
}

double test_nmse(const CasEmulator& emulator, const DataSet& test) {
  std::vector<double> pred;
  std::vector<double> truth;
  pred.reserve(test.size());
  truth.reserve(test.size());
  for (const Sample& s : test.samples()) {
    pred.push_back(emulator.predict(s.x).mean);
    truth.push_back(s.y);
  }
  return nmse(pred, truth);
}

}  // namespace caslgp
