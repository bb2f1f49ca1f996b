#pragma once

#include <Eigen/Dense>

namespace nhj {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

}  // namespace nhj
