#pragma once

#include <Eigen/Dense>

namespace biwhitham {

using Real = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr Real pi = 3.14159265358979323846;

}  // namespace biwhitham
