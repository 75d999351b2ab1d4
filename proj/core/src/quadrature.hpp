#pragma once

#include <functional>

#include <Eigen/Eigenvalues>

#include "sectorial/contour.hpp"
#include "sectorial/operator_matrix.hpp"

namespace sectorial::detail {

/// Resolvents (zeta I - A)^{-1} evaluated in the Schur basis A = U T U^H,
/// where each one is a triangular inverse.
class SchurResolvent {
 public:
  explicit SchurResolvent(const OperatorMatrix& A);

  Eigen::Index dim() const noexcept { return t_.rows(); }
  const Matrix& unitary() const noexcept { return u_; }
  const Matrix& triangular() const noexcept { return t_; }
  double norm() const noexcept { return norm_; }
  double inverse_norm() const noexcept { return inverse_norm_; }

  /// (zeta I - T)^{-1}; SingularResolvent if zeta is within 1e-12 ||A|| of an eigenvalue.
  Matrix resolvent(cplx zeta) const;
  Matrix to_schur(const Matrix& m) const { return u_.adjoint() * m * u_; }
  Matrix from_schur(const Matrix& m) const { return u_ * m * u_.adjoint(); }

 private:
  Matrix u_;
  Matrix t_;
  double norm_ = 0.0;
  double inverse_norm_ = 0.0;
};

struct Window {
  double r_min = 0.0;
  double r_max = 0.0;
  double tail = 0.0;
};

/// Window for integrands bounded by C (r/(1+r^2))^eps ||zeta R(zeta,A)||.
Window certificate_window(double C, double eps, double norm, double inverse_norm, double tol);
double certificate_tail(double C, double eps, double norm, double inverse_norm, double r_min, double r_max);

/// Window for zeta^{1-s} F(zeta) A^s R(zeta, A) with ||F|| <= F_sup.
Window altdef_window(double F_sup, double s, double norm_As, double norm_Asm1, double norm,
                     double inverse_norm, double tol);
double altdef_tail(double F_sup, double s, double norm_As, double norm_Asm1, double norm,
                   double inverse_norm, double r_min, double r_max);

struct TwoLevelSum {
  Matrix fine;
  Matrix coarse;  // trapezoid rule on every other node
};

/// Sums term(j) for j in [0, count) in fixed pairwise order; the coarse sum
/// uses even j with doubled weight. Blocks of nodes are evaluated in
/// parallel but combined in index order, so the result is bit-stable.
TwoLevelSum accumulate(std::size_t count, Eigen::Index rows, Eigen::Index cols,
                       const std::function<Matrix(std::size_t)>& term);

/// Resolves the window (from the spec, or `fallback` when unset).
ContourSpec with_window(const ContourSpec& c, const Window& fallback);

}  // namespace sectorial::detail
