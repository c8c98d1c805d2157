#include "caslgp/classifier.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "caslgp/errors.hpp"

namespace caslgp {

Classifier Classifier::constant(std::size_t dim, int label) {
  Classifier c;
  c.method_ = Method::constant;
  c.dim_ = dim;
  c.constant_label_ = label;
  return c;
}

Classifier Classifier::from_svm(SvmModel model) {
  Classifier c;
  c.method_ = Method::svm;
  c.dim_ = model.dim;
  c.svm_ = std::move(model);
  return c;
}

Classifier Classifier::from_centroids(std::vector<int> labels, Matrix centroids) {
  require(static_cast<std::size_t>(centroids.rows()) == labels.size() && !labels.empty(),
          ErrorKind::argument, "nearest-centroid: label and centroid counts differ");
  Classifier c;
  c.method_ = Method::nearest_centroid;
  c.dim_ = static_cast<std::size_t>(centroids.cols());
  c.centroid_labels_ = std::move(labels);
  c.centroids_ = std::move(centroids);
  return c;
}

Classifier Classifier::train(const Matrix& X, std::span<const int> labels, ClassifierKind kind,
                             const SvmConfig& svm_config) {
  require(static_cast<std::size_t>(X.rows()) == labels.size() && !labels.empty(),
          ErrorKind::argument, "classifier: point and label counts differ");
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() == 1) return constant(static_cast<std::size_t>(X.cols()), classes.front());
  if (kind == ClassifierKind::svm) return from_svm(train_svm(X, labels, svm_config));

  Matrix centroids = Matrix::Zero(static_cast<Eigen::Index>(classes.size()), X.cols());
  std::vector<double> counts(classes.size(), 0.0);
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const auto k = static_cast<std::size_t>(
        std::lower_bound(classes.begin(), classes.end(), labels[t]) - classes.begin());
    centroids.row(static_cast<Eigen::Index>(k)) += X.row(static_cast<Eigen::Index>(t));
    counts[k] += 1.0;
  }
  for (std::size_t k = 0; k < classes.size(); ++k) {
    centroids.row(static_cast<Eigen::Index>(k)) /= counts[k];
  }
  return from_centroids(std::move(classes), std::move(centroids));
}

int Classifier::classify(const Vector& x) const {
  require(static_cast<std::size_t>(x.size()) == dim_, ErrorKind::argument,
          "classify: input has length " + std::to_string(x.size()) + ", expected " +
              std::to_string(dim_));
  switch (method_) {
    case Method::constant:
      return constant_label_;
    case Method::svm:
      return caslgp::classify(svm_, x);
    case Method::nearest_centroid: {
      Eigen::Index best = 0;
      (centroids_.rowwise() - x.transpose()).rowwise().squaredNorm().minCoeff(&best);
      return centroid_labels_[static_cast<std::size_t>(best)];
    }
  }
  return constant_label_;
}

std::vector<std::string> Classifier::warnings() const {
  return method_ == Method::svm ? svm_.warnings : std::vector<std::string>{};
}

}  // namespace caslgp
