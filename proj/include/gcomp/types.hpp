#pragma once

#include <Eigen/Dense>

namespace gcomp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace gcomp
