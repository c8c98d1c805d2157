#include "caslgp/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "caslgp/errors.hpp"

namespace caslgp {

namespace {

constexpr double kTau = 1e-12;

Matrix gram_matrix(const Matrix& X, const SvmConfig& config) {
  Matrix K = X * X.transpose();
  if (config.kernel == SvmKernel::rbf) {
    const Vector sq = X.rowwise().squaredNorm();
    for (Eigen::Index i = 0; i < K.rows(); ++i) {
      for (Eigen::Index j = 0; j < K.cols(); ++j) {
        K(i, j) = std::exp(-config.rbf_gamma * std::max(0.0, sq[i] + sq[j] - 2.0 * K(i, j)));
      }
    }
  }
  return K;
}

void check_config(const SvmConfig& config) {
  require(config.C > 0.0, ErrorKind::argument, "svm: C must be positive");
  require(config.tol > 0.0, ErrorKind::argument, "svm: tol must be positive");
  require(config.kernel != SvmKernel::rbf || config.rbf_gamma > 0.0, ErrorKind::argument,
          "svm: rbf_gamma must be positive");
}

}  // namespace

double BinarySvm::decision(const Vector& x, const SvmConfig& config) const {
  if (config.kernel == SvmKernel::linear) return weights.dot(x) + bias;
  double sum = bias;
  for (Eigen::Index i = 0; i < support_vectors.rows(); ++i) {
    const double d2 = (support_vectors.row(i).transpose() - x).squaredNorm();
    sum += coefficients[i] * std::exp(-config.rbf_gamma * d2);
  }
  return sum;
}

// Dual problem: min 0.5 a^T Q a - e^T a, y^T a = 0, 0 <= a <= C, with
// Q_ij = y_i y_j K_ij. Working pairs are chosen by maximal violation for i and
// second-order gain for j.
BinarySvm train_binary_svm(const Matrix& X, std::span<const int> signs, const SvmConfig& config) {
  check_config(config);
  const auto n = static_cast<Eigen::Index>(X.rows());
  require(static_cast<std::size_t>(n) == signs.size() && n >= 2, ErrorKind::argument,
          "train_binary_svm: need at least two labelled points");
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    require(signs[static_cast<std::size_t>(i)] == 1 || signs[static_cast<std::size_t>(i)] == -1,
            ErrorKind::argument, "train_binary_svm: labels must be +1 or -1");
    y[i] = signs[static_cast<std::size_t>(i)];
  }
  require((y.array() > 0).any() && (y.array() < 0).any(), ErrorKind::degenerate_training,
          "train_binary_svm: both classes must be present");

  const Matrix K = gram_matrix(X, config);
  const Matrix Q = (y * y.transpose()).cwiseProduct(K);
  const double C = config.C;
  const std::size_t max_iter =
      config.max_iter > 0 ? config.max_iter : 10 * static_cast<std::size_t>(n);

  Vector alpha = Vector::Zero(n);
  Vector grad = -Vector::Ones(n);
  auto in_up = [&](Eigen::Index t) {
    return (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0);
  };
  auto in_low = [&](Eigen::Index t) {
    return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C);
  };

  BinarySvm out;
  out.converged = false;
  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (in_up(t) && -y[t] * grad[t] > gmax) {
        gmax = -y[t] * grad[t];
        i = t;
      }
    }
    double gmin = std::numeric_limits<double>::infinity();
    double best_gain = std::numeric_limits<double>::infinity();
    Eigen::Index j = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = -y[t] * grad[t];
      gmin = std::min(gmin, v);
      if (i >= 0 && v < gmax) {
        const double b = gmax - v;
        double a = K(i, i) + K(t, t) - 2.0 * K(i, t);
        if (a <= 0.0) a = kTau;
        const double gain = -(b * b) / a;
        if (gain < best_gain) {
          best_gain = gain;
          j = t;
        }
      }
    }
    if (i < 0 || j < 0 || gmax - gmin < config.tol) {
      out.converged = true;
      break;
    }

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    double quad = K(i, i) + K(j, j) - 2.0 * K(i, j);
    if (quad <= 0.0) quad = kTau;
    if (y[i] != y[j]) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
      }
      if (diff > 0) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
      } else {
        if (alpha[j] > C) { alpha[j] = C; alpha[i] = C + diff; }
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
      } else {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
      }
      if (sum > C) {
        if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
      }
    }
    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    grad.noalias() += dai * Q.col(i) + daj * Q.col(j);
  }
  out.iterations = iter;

  // Bias from free vectors, or the midpoint of the feasible interval.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] > 0.0 && alpha[t] < C) {
      free_sum += yg;
      ++free_count;
    } else if ((alpha[t] >= C && y[t] < 0) || (alpha[t] <= 0.0 && y[t] > 0)) {
      ub = std::min(ub, yg);
    } else {
      lb = std::max(lb, yg);
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (ub + lb);
  out.bias = -rho;

  const Vector coef = alpha.cwiseProduct(y);
  if (config.kernel == SvmKernel::linear) {
    out.weights = X.transpose() * coef;
  } else {
    std::vector<Eigen::Index> sv;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (alpha[t] > 0.0) sv.push_back(t);
    }
    out.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), X.cols());
    out.coefficients.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t k = 0; k < sv.size(); ++k) {
      out.support_vectors.row(static_cast<Eigen::Index>(k)) = X.row(sv[k]);
      out.coefficients[static_cast<Eigen::Index>(k)] = coef[sv[k]];
    }
  }
  return out;
}

bool SvmModel::converged() const {
  return std::all_of(machines.begin(), machines.end(),
                     [](const BinarySvm& m) { return m.converged; });
}

SvmModel train_svm(const Matrix& X, std::span<const int> labels, const SvmConfig& config) {
  check_config(config);
  require(static_cast<std::size_t>(X.rows()) == labels.size(), ErrorKind::argument,
          "train_svm: point and label counts differ");
  require(X.allFinite(), ErrorKind::argument, "train_svm: non-finite inputs");
  SvmModel model;
  model.config = config;
  model.dim = static_cast<std::size_t>(X.cols());
  model.classes.assign(labels.begin(), labels.end());
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()), model.classes.end());
  require(model.classes.size() >= 2, ErrorKind::degenerate_training,
          "train_svm: need at least two classes, got " + std::to_string(model.classes.size()));

  for (std::size_t a = 0; a < model.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
      const int pos = model.classes[a];
      const int neg = model.classes[b];
      std::vector<Eigen::Index> rows;
      std::vector<int> signs;
      for (std::size_t t = 0; t < labels.size(); ++t) {
        if (labels[t] == pos || labels[t] == neg) {
          rows.push_back(static_cast<Eigen::Index>(t));
          signs.push_back(labels[t] == pos ? 1 : -1);
        }
      }
      Matrix Xp(static_cast<Eigen::Index>(rows.size()), X.cols());
      for (std::size_t k = 0; k < rows.size(); ++k) Xp.row(static_cast<Eigen::Index>(k)) = X.row(rows[k]);
      BinarySvm machine = train_binary_svm(Xp, signs, config);
      machine.positive = pos;
      machine.negative = neg;
      if (!machine.converged) {
        model.warnings.push_back("svm pair (" + std::to_string(pos) + ", " + std::to_string(neg) +
                                 ") stopped at max_iter=" + std::to_string(machine.iterations) +
                                 " before reaching tol");
      }
      model.machines.push_back(std::move(machine));
    }
  }
  return model;
}

int classify(const SvmModel& model, const Vector& x) {
  require(static_cast<std::size_t>(x.size()) == model.dim, ErrorKind::argument,
          "classify: input has length " + std::to_string(x.size()) + ", model expects " +
              std::to_string(model.dim));
  require(!model.classes.empty(), ErrorKind::argument, "classify: untrained model");
  std::map<int, int> votes;
  std::map<int, double> margin;
  for (int c : model.classes) {
    votes[c] = 0;
    margin[c] = 0.0;
  }
  for (const BinarySvm& m : model.machines) {
    const double f = m.decision(x, model.config);
    const int winner = f > 0.0 ? m.positive : m.negative;
    ++votes[winner];
    margin[winner] += std::abs(f);
  }
  int best = model.classes.front();
  for (int c : model.classes) {
    if (votes[c] > votes[best] || (votes[c] == votes[best] && margin[c] > margin[best])) best = c;
  }
  return best;
}

}  // namespace caslgp
