#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace sectorial {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I_unit{0.0, 1.0};

// Principal-branch power z^s, cut along the negative real axis.
inline cplx principal_pow(cplx z, double s) {
  if (z == cplx{0.0, 0.0}) return s > 0.0 ? cplx{0.0, 0.0} : cplx{1.0, 0.0};
  return std::polar(std::pow(std::abs(z), s), s * std::arg(z));
}

inline cplx principal_pow(cplx z, cplx s) {
  if (z == cplx{0.0, 0.0}) return {0.0, 0.0};
  return std::exp(s * cplx{std::log(std::abs(z)), std::arg(z)});
}

}  // namespace sectorial
