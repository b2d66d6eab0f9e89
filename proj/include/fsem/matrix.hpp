#pragma once

#include <Eigen/Dense>

namespace fsem {

/// Row-major dense matrix; one point per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace fsem
