#pragma once

#include <Eigen/Dense>

namespace esclab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

}  // namespace esclab
