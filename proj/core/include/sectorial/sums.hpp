#pragma once

#include <string>
#include <vector>

#include "sectorial/bound_estimate.hpp"
#include "sectorial/calculus.hpp"
#include "sectorial/contour.hpp"
#include "sectorial/norm.hpp"
#include "sectorial/operator_matrix.hpp"
#include "sectorial/rademacher.hpp"

namespace sectorial {

/// Commuting sectorial pair; commutation is checked on construction.
class CommutingPair {
 public:
  CommutingPair(OperatorMatrix A, OperatorMatrix B);

  const OperatorMatrix& A() const noexcept { return a_; }
  const OperatorMatrix& B() const noexcept { return b_; }
  double commutator_norm() const noexcept { return commutator_; }
  double angle_a() const noexcept { return angle_a_; }
  double angle_b() const noexcept { return angle_b_; }
  /// AngleSumExceeded unless angle_a + angle_b < pi.
  void require_angle_sum() const;

 private:
  OperatorMatrix a_;
  OperatorMatrix b_;
  double commutator_ = 0.0;
  double angle_a_ = 0.0;
  double angle_b_ = 0.0;
};

/// Contours and function domains for bivariate functions of (A, B). The gap
/// pi - angle_a - angle_b is split in thirds; `limit` caps both domains (used
/// when the function has a singularity on w + z = mu).
struct SumContours {
  ContourSpec a;
  ContourSpec b;
  double domain_a = 0.0;
  double domain_b = 0.0;
};
SumContours sum_contours(const CommutingPair& pair, double limit = pi, double tail_tolerance = 1e-12);

/// f(A, B) with f(w, z) = w (w + z)^{-1}, through the regularized joint calculus.
Matrix inverse_sum_operator(const CommutingPair& pair);

/// Best C with ||Ax|| + ||Bx|| <= C ||(A + B)x||, by multi-start ascent.
BoundEstimate sum_closedness_constant(const CommutingPair& pair, const NormSpec& norm,
                                      const OperatorNormOptions& options = {});

struct SumSampleConfig {
  int radii_per_decade = 2;
  int angles = 3;
  double margin_decades = 1.0;
  int selection = 3;
  SignConfig sign;
  SearchConfig search{8, 60, 42, 8};
};

/// R-bound of sampled {mu R(mu, A + B) : |arg mu| >= rho}; every sample is
/// cross-checked against the joint calculus of mu (mu - w - z)^{-1}.
BoundEstimate sum_r_sectoriality(const CommutingPair& pair, const Sector& rho, const NormSpec& norm,
                                 const SumSampleConfig& config = {});

// ---- maximal regularity ------------------------------------------------

struct CauchyProblem {
  Matrix A;
  double T = 1.0;
  int m = 64;
  double p = 2.0;
  double q = 2.0;  // norm on C^d inside the time grid
  Matrix forcing;  // m x d samples; may be empty
};

/// y' + A y = f, y(0) = 0, by implicit Euler; rows of the result are y_1..y_m.
Matrix solve_cauchy(const CauchyProblem& problem);

struct RegularityLevel {
  int m = 0;
  double constant = 0.0;  // norm of f -> A y
  double derivative_part = 0.0;  // norm of f -> y'
  double joint = 0.0;  // norm of f -> (y', A y) into the l_p product
  bool exact = false;
};

struct RegularityReport {
  double constant = 0.0;
  double p = 2.0;
  std::vector<RegularityLevel> trace;
  std::string method;
  nlohmann::json details = nlohmann::json::object();
};

struct MaxregOptions {
  OperatorNormOptions search{8, 200, 42};
};

/// Constants of the discrete solution map at m, 2m, ..., 2^{levels-1} m.
RegularityReport maximal_regularity_constant(const CauchyProblem& problem, int levels = 1,
                                             const MaxregOptions& options = {});

std::string trace_csv(const RegularityReport& r);
void to_json(nlohmann::json& j, const RegularityReport& r);

struct TimeGrid {
  double T = 1.0;
  int m = 64;
  double q = 2.0;
};

/// Norm of the causal convolution f -> int_delta^inf A e^{-uA} f(. - u) du on
/// the grid, with f piecewise constant.
BoundEstimate s_delta_norm(const OperatorMatrix& A, double delta, double p, const TimeGrid& grid,
                           const OperatorNormOptions& options = {});

std::vector<BoundEstimate> s_delta_sweep(const OperatorMatrix& A, const std::vector<double>& deltas, double p,
                                         const TimeGrid& grid, const OperatorNormOptions& options = {});

struct GtResult {
  double value = 0.0;
  double ratio = 0.0;  // value / ||x||_1
  std::size_t nodes = 0;
};

/// int over the contour of ||A^s R(zeta, A) x||_1 |d zeta| / |zeta|^s.
GtResult gt_absolute_integral(const OperatorMatrix& A, double s, double nu, const Vector& x, const NormSpec& norm,
                              int nodes_per_decade = 40);

}  // namespace sectorial
