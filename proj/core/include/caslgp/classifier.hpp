#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "caslgp/svm.hpp"
#include "caslgp/types.hpp"

namespace caslgp {

enum class ClassifierKind { svm, nearest_centroid };

/// Routes an input to a training-cluster label. A single-class training set
/// yields a constant router; otherwise the configured method is trained.
class Classifier {
 public:
  enum class Method { constant, svm, nearest_centroid };

  Classifier() = default;

  static Classifier train(const Matrix& X, std::span<const int> labels, ClassifierKind kind,
                          const SvmConfig& svm_config);
  static Classifier constant(std::size_t dim, int label);
  static Classifier from_svm(SvmModel model);
  static Classifier from_centroids(std::vector<int> labels, Matrix centroids);

  int classify(const Vector& x) const;

  Method method() const noexcept { return method_; }
  std::size_t dim() const noexcept { return dim_; }
  const SvmModel& svm() const noexcept { return svm_; }
  const std::vector<int>& centroid_labels() const noexcept { return centroid_labels_; }
  const Matrix& centroids() const noexcept { return centroids_; }
  int constant_label() const noexcept { return constant_label_; }
  std::vector<std::string> warnings() const;

 private:
  Method method_ = Method::constant;
  std::size_t dim_ = 0;
  int constant_label_ = 1;
  SvmModel svm_;
  std::vector<int> centroid_labels_;
  Matrix centroids_;  // one row per label
};

}  // namespace caslgp
