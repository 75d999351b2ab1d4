#pragma once

#include <cstdint>
#include <vector>

#include "sectorial/bound_estimate.hpp"
#include "sectorial/functions.hpp"
#include "sectorial/norm.hpp"
#include "sectorial/operator_matrix.hpp"

namespace sectorial {

/// Finite operator family on a fixed norm. Nonempty, uniform dimension.
class OperatorFamily {
 public:
  OperatorFamily(std::vector<Matrix> members, NormSpec norm);

  const std::vector<Matrix>& members() const noexcept { return members_; }
  const NormSpec& norm() const noexcept { return norm_; }
  std::size_t size() const noexcept { return members_.size(); }
  Eigen::Index dim() const noexcept { return norm_.dim(); }
  /// max_k ||T_k|| in the family norm (computed on construction).
  double uniform_bound() const noexcept { return uniform_bound_; }
  const std::vector<double>& member_norms() const noexcept { return member_norms_; }

 private:
  std::vector<Matrix> members_;
  NormSpec norm_;
  std::vector<double> member_norms_;
  double uniform_bound_ = 0.0;
};

struct SignConfig {
  SearchMode mode = SearchMode::Exhaustive;
  int n_max = 14;  // exhaustive enumeration up to this many terms
  int samples = 4096;
  std::uint64_t seed = 42;
};

struct SearchConfig {
  int starts = 64;
  int steps = 200;
  std::uint64_t seed = 42;
  int selection_cap = 32;  // operator selections examined per estimate
};

struct RademacherMean {
  double value = 0.0;
  double standard_error = 0.0;
  bool exhaustive = true;
  std::uint64_t patterns = 0;
};

/// (E || sum eps_k x_k ||^2)^{1/2}.
RademacherMean rademacher_mean(const std::vector<Vector>& vectors, const NormSpec& norm,
                               const SignConfig& sign = {});

/// Best constant C with (E||sum eps_k T_k x_k||^2)^{1/2} <= C (E||sum eps_k x_k||^2)^{1/2}
/// over selections of n distinct members.
BoundEstimate r_bound(const OperatorFamily& family, int n, const SignConfig& sign = {},
                      const SearchConfig& search = {});

/// Best C with sum |<T_k x_k, x*_k>| <= C Rad(x) Rad*(x*).
BoundEstimate wr_bound(const OperatorFamily& family, int n, const SignConfig& sign = {},
                       const SearchConfig& search = {});

/// As wr_bound with max-over-signs norms in both denominators.
BoundEstimate u_bound(const OperatorFamily& family, int n, const SignConfig& sign = {},
                      const SearchConfig& search = {});

struct PropertyConstants {
  BoundEstimate alpha;
  BoundEstimate A;
  BoundEstimate Delta;
};

/// Finite-n constants of the doubly indexed Rademacher inequalities.
PropertyConstants property_constants(const NormSpec& norm, int n, const SignConfig& sign = {},
                                     const SearchConfig& search = {});

struct RayExtensionConfig {
  int K = 6;            // ray members a^k t e^{+-i nu}, |k| <= K
  int sector_angles = 5;
  int selection = 3;
  SearchConfig search{16, 100, 42, 16};
};

/// U-bounds of F on the rays arg = +-nu versus a direct U-bound on the sector
/// |arg z| <= sigma0 sampled over the same radii.
BoundEstimate ray_ubound_extension(const OperatorFunction& F, double nu, double a, double sigma0,
                                   const std::vector<double>& t_grid, const NormSpec& norm,
                                   const RayExtensionConfig& config = {});

/// R-bound of the partial sums {sum_{k<=n} U_k V_k : n <= K}, reported next to
/// the unconditional constants M_U, M_V of both sequences.
BoundEstimate uncseries_partial_sums(const std::vector<Matrix>& U, const std::vector<Matrix>& V,
                                     const NormSpec& norm, int K, const SignConfig& sign = {},
                                     const SearchConfig& search = {});

enum class BoundKind { R, WR, U };

const char* to_string(BoundKind k);

struct AngleFamilyConfig {
  BoundKind kind = BoundKind::R;
  int radii_per_decade = 16;
  int angles = 8;
  double margin_decades = 2.0;
  int selection = 3;
  double ceiling = 1e3;
  int refine_levels = 1;
  SignConfig sign;
  SearchConfig search{8, 60, 42, 8};
};

struct AnglePoint {
  double sigma = 0.0;
  BoundEstimate bound;
  double refined_value = 0.0;  // the same estimate at the next refinement level
  std::size_t members = 0;
};

struct AngleCurve {
  BoundKind kind = BoundKind::R;
  std::vector<AnglePoint> points;
  double surrogate_angle = 0.0;  // smallest stable sigma below the ceiling; NaN if none
};

/// Bound of {lambda R(lambda, A) : |arg lambda| >= sigma} for each sigma.
AngleCurve r_sectorial_angle(const OperatorMatrix& A, const NormSpec& norm,
                             const std::vector<double>& angle_grid, const AngleFamilyConfig& config = {});

nlohmann::json to_json(const AngleCurve& c);

}  // namespace sectorial
