#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace chball {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

// M^k by binary exponentiation; k >= 0.
CMatrix matrix_power(const CMatrix& m, std::int64_t k);

// ||M* M - Id|| in operator norm; 0 for an exactly unitary matrix.
double unitarity_defect(const CMatrix& m);

}  // namespace chball
