#include "caslgp/optimize.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <vector>

namespace caslgp {

namespace {

constexpr std::size_t kMemory = 8;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 40;

Vector clamp(const Vector& x, const Vector& lo, const Vector& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

// Zeroes components that would push an iterate at a bound further outward.
Vector free_components(const Vector& v, const Vector& x, const Vector& lo, const Vector& hi) {
  Vector out = v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if ((x[i] <= lo[i] && v[i] < 0.0) || (x[i] >= hi[i] && v[i] > 0.0)) out[i] = 0.0;
  }
  return out;
}

}  // namespace

AscentResult maximize_box(const Objective& f, Vector x0, const Vector& lower, const Vector& upper,
                          std::size_t max_iter, double grad_tol, double rel_tol) {
  AscentResult result;
  result.x = clamp(x0, lower, upper);
  ObjectiveValue current = f(result.x);
  result.value = current.value;
  if (!std::isfinite(current.value)) {
    result.value = -std::numeric_limits<double>::infinity();
    return result;
  }

  // Curvature pairs for the minimization of -f.
  std::deque<Vector> s_hist;
  std::deque<Vector> y_hist;

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    result.iterations = iter + 1;
    const Vector pg = free_components(current.gradient, result.x, lower, upper);
    if (pg.lpNorm<Eigen::Infinity>() < grad_tol) {
      result.converged = true;
      break;
    }

    // two-loop recursion on the descent gradient -pg
    Vector q = -pg;
    std::vector<double> a(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      const double rho = 1.0 / y_hist[k].dot(s_hist[k]);
      a[k] = rho * s_hist[k].dot(q);
      q -= a[k] * y_hist[k];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double rho = 1.0 / y_hist[k].dot(s_hist[k]);
      const double b = rho * y_hist[k].dot(q);
      q += s_hist[k] * (a[k] - b);
    }
    Vector direction = free_components(-q, result.x, lower, upper);
    if (s_hist.empty() || direction.dot(pg) <= 0.0) {
      direction = pg;
      s_hist.clear();
      y_hist.clear();
    }

    double step = s_hist.empty() ? std::min(1.0, 1.0 / pg.lpNorm<Eigen::Infinity>()) : 1.0;
    bool accepted = false;
    Vector x_new;
    ObjectiveValue next;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      x_new = clamp(result.x + step * direction, lower, upper);
      next = f(x_new);
      if (std::isfinite(next.value) &&
          next.value >= current.value + kArmijo * current.gradient.dot(x_new - result.x)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!s_hist.empty()) {
        s_hist.clear();
        y_hist.clear();
        continue;
      }
      break;
    }

    const Vector s = x_new - result.x;
    const Vector y = current.gradient - next.gradient;
    const double improvement = next.value - current.value;
    result.x = x_new;
    current = std::move(next);
    result.value = current.value;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      if (s_hist.size() > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    if (improvement <= rel_tol * (std::abs(current.value) + 1.0)) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace caslgp
