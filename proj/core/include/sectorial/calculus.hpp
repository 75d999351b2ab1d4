#pragma once

#include <cstdint>
#include <vector>

#include "sectorial/bound_estimate.hpp"
#include "sectorial/contour.hpp"
#include "sectorial/functions.hpp"
#include "sectorial/norm.hpp"
#include "sectorial/operator_matrix.hpp"

namespace sectorial {

struct QuadratureReport {
  double angle = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t nodes = 0;             // total evaluation points over both rays
  double truncation_bound = 0.0;     // analytic tail bound (spectral norm)
  double discretization_estimate = 0.0;  // ||T_h - T_2h||
};

struct FcalcResult {
  Matrix value;
  QuadratureReport report;
};

/// f(A) = (-1/2 pi i) int_Gamma f(zeta) R(zeta, A) d zeta for f with a decay
/// certificate. The window is chosen from the certificate unless `c` fixes one.
FcalcResult contour_fcalc(const OperatorMatrix& A, const ScalarFunction& f, const ContourSpec& c);
/// Same, with the contour angle halfway between the spectral and domain angles.
FcalcResult contour_fcalc(const OperatorMatrix& A, const ScalarFunction& f);

struct RegularizedOptions {
  double n_max = 1024;
  double tolerance = 1e-8;
  double ceiling = 1e12;
};

struct RegularizedResult {
  Matrix value;
  std::vector<double> n_values;
  std::vector<double> sup_trace;  // ||(phi_n f)(A)|| for each n
  double sup = 0.0;
  bool converged = false;
  QuadratureReport report;  // of the last quadrature
};

/// Bounded f without decay: computes (phi_n f)(A) for n = 2, 4, ... and the
/// limit candidate (phi_n f)(A) V_n^{-1}, stopping when successive
/// candidates agree to `tolerance` (relative).
RegularizedResult regularized_fcalc(const OperatorMatrix& A, const ScalarFunction& f,
                                    const ContourSpec& c, const RegularizedOptions& options = {});

/// F(A) = (-1/2 pi i) int zeta^{-s} F(zeta) A^s R(zeta, A) d zeta for a bounded
/// F whose values commute with A.
FcalcResult operator_fcalc(const OperatorMatrix& A, const OperatorFunction& F, double s,
                           const ContourSpec& c);

/// Throws CommutantViolation unless sampled values of F commute with A.
void check_commutant(const OperatorMatrix& A, const OperatorFunction& F, double angle);

enum class JointRoute { Automatic, Direct, Regularized };

struct JointOptions {
  JointRoute route = JointRoute::Automatic;
  double n = 8.0;  // regularization index for the regularized route
};

struct JointResult {
  Matrix value;
  QuadratureReport report_a;
  QuadratureReport report_b;
  bool regularized = false;
};

/// f(A, B) for commuting A, B by the iterated double contour integral.
JointResult joint_fcalc(const OperatorMatrix& A, const OperatorMatrix& B, const BivariateFunction& f,
                        const ContourSpec& ca, const ContourSpec& cb, const JointOptions& options = {});

void check_commuting(const OperatorMatrix& A, const OperatorMatrix& B);

// ---- dyadic decomposition ------------------------------------------------

struct DyadicTerms {
  Matrix plus;
  Matrix minus;
  int K = 0;
  double tail_estimate = 0.0;
};

/// M_pm(t) = e^{+-i(1-s)nu} sum_{|k|<=K} F(2^{-k} t^{-1} e^{+-i nu}) h_s^{+-nu}(2^k t A).
/// K = 0 selects the smallest K (doubling from 8) whose tail estimate is
/// below `tail_tolerance`; TailTooLarge if a given K misses it.
DyadicTerms dyadic_decomposition(const OperatorMatrix& A, const OperatorFunction& F, double s,
                                 double nu, double t, int K, double tail_tolerance = 1e-10);

/// F(A) = (-1/2 pi i) int_1^2 (M_+(t) - M_-(t)) dt / t, trapezoid in ln t with J nodes.
Matrix dyadic_reconstruction(const OperatorMatrix& A, const OperatorFunction& F, double s, double nu,
                             int K = 0, int J = 32);

struct SignSearchOptions {
  SearchMode mode = SearchMode::Exhaustive;
  int starts = 16;
  int sweeps = 50;
  std::uint64_t seed = 42;
};

/// sup over |alpha_k| <= 1 of || sum_{|k|<=K} alpha_k f(2^k t A) ||.
BoundEstimate unconditional_dyadic_bound(const OperatorMatrix& A, const ScalarFunction& f, double t,
                                         int K, const NormSpec& norm,
                                         const SignSearchOptions& options = {});

/// Default t grid: n log-spaced points in [1, 2).
std::vector<double> default_t_grid(int n = 8);

/// sup over t, both rays and signs of
/// || sum_{|k|<=K} eps_k (2^k t)^{1-s} A^s R(2^k t e^{+-i nu}, A) ||.
BoundEstimate hinfty_criterion(const OperatorMatrix& A, double nu, double s,
                               const std::vector<double>& t_grid, int K, const NormSpec& norm,
                               const SignSearchOptions& options = {});

struct HinftyFamilyConfig {
  int samples = 400;
  int max_degree = 12;
  int rational_samples = 100;
  std::uint64_t seed = 42;
  int nodes_per_decade = 40;
};

/// Best C with ||f(A)|| <= C ||f||_sup over a randomized family of bounded
/// holomorphic test functions on the sector.
BoundEstimate hinfty_constant(const OperatorMatrix& A, const Sector& sigma, const NormSpec& norm,
                              const HinftyFamilyConfig& config = {});

/// Conformal map of the sector of the given angle onto the unit disk (1 -> 0).
cplx sector_to_disk(cplx z, double angle);

}  // namespace sectorial
