#include "caslgp/random.hpp"

#include <limits>
#include <string>

#include "caslgp/errors.hpp"

namespace caslgp {

std::size_t Rng::below(std::size_t n) {
  require(n > 0, ErrorKind::argument, "Rng::below: empty range");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return static_cast<std::size_t>(draw % bound);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<Vector> sample_box(std::size_t n, const Vector& lo, const Vector& hi,
                               std::uint64_t seed) {
  require(lo.size() == hi.size(), ErrorKind::argument,
          "sample_box: bound vectors differ in length");
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    require(lo[i] < hi[i], ErrorKind::argument,
            "sample_box: require lo < hi in coordinate " + std::to_string(i + 1));
  }
  Rng rng(seed);
  std::vector<Vector> points;
  points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Vector x(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
    points.push_back(std::move(x));
  }
  return points;
}

std::vector<Vector> sample_uniform(std::size_t n, std::size_t d, double lo, double hi,
                                   std::uint64_t seed) {
  require(lo < hi, ErrorKind::argument, "sample_uniform: require lo < hi");
  const auto dim = static_cast<Eigen::Index>(d);
  return sample_box(n, Vector::Constant(dim, lo), Vector::Constant(dim, hi), seed);
}

}  // namespace caslgp
