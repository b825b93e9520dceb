#pragma once

#include <Eigen/Dense>

namespace phdae {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Vec16 = Eigen::Matrix<double, 16, 1>;
using Vec21 = Eigen::Matrix<double, 21, 1>;
using VecX = Eigen::VectorXd;

using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat16 = Eigen::Matrix<double, 16, 16>;
using Mat21 = Eigen::Matrix<double, 21, 21>;
using Mat42 = Eigen::Matrix<double, 42, 42>;
using MatX = Eigen::MatrixXd;

} // namespace phdae
