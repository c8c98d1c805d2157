#pragma once

#include <Eigen/Core>

namespace caslgp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace caslgp
