#pragma once

#include <functional>

#include "sectorial/bound_estimate.hpp"
#include "sectorial/norm.hpp"
#include "sectorial/operator_matrix.hpp"

namespace sectorial {

/// Exponent s in (0, 1), checked on construction.
class FractionalExponent {
 public:
  FractionalExponent(double s);  // NOLINT: implicit by design
  double value() const noexcept { return s_; }
  operator double() const noexcept { return s_; }

 private:
  double s_;
};

/// (lambda I - A)^{-1}. SingularResolvent when sigma_min(lambda I - A) < 1e-12 ||A||.
OperatorMatrix resolvent(const OperatorMatrix& A, cplx lambda);
Matrix resolvent_matrix(const OperatorMatrix& A, cplx lambda);

/// max_i |arg lambda_i|. NotSectorial for an eigenvalue at 0 or on the negative axis.
Sector spectral_angle(const OperatorMatrix& A);

struct SectorialGrid {
  int radii_per_decade = 16;
  int angles = 8;
  double margin_decades = 4.0;  // decades beyond the spectral radius range
  int refine_iterations = 40;
};

/// sup ||zeta R(zeta, A)|| over |arg zeta| >= sigma, by grid sweep plus local
/// refinement. The witness records the maximizing zeta.
BoundEstimate sectorial_constant(const OperatorMatrix& A, const Sector& sigma, const NormSpec& norm,
                                 const SectorialGrid& grid = {});

/// V_n = n (nI + A)^{-1} - (I + nA)^{-1}.
OperatorMatrix approximate_identity(const OperatorMatrix& A, double n);

/// Principal A^s: eigendecomposition when well conditioned, otherwise the
/// contour representation A^s = g(A)(I + A) with g(z) = z^s / (1 + z).
OperatorMatrix fractional_power(const OperatorMatrix& A, FractionalExponent s);
Matrix fractional_power_contour(const OperatorMatrix& A, double s);

/// V diag(f(lambda_i)) V^{-1}. IllConditionedEigenbasis if the eigenbasis is
/// unusable.
Matrix apply_eigen(const OperatorMatrix& A, const std::function<cplx(cplx)>& f);

}  // namespace sectorial
