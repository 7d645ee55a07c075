#pragma once

#include <Eigen/Dense>
#include <complex>

namespace pfbhf {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;   // photon field in orthonormalized grid coordinates
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;

constexpr double kSymmetryTol = 1e-12;

// defect of complex symmetry, relative to matrix size
double symmetry_defect(const Mat& m);
// defect of hermiticity
double hermiticity_defect(const Mat& m);

}  // namespace pfbhf
