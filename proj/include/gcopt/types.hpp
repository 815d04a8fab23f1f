#pragma once

#include <Eigen/Dense>

namespace gcopt {

using Scalar = double;
using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

} // namespace gcopt
