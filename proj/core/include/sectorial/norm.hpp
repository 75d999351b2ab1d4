#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "sectorial/linalg.hpp"
#include "sectorial/types.hpp"

namespace sectorial {

inline constexpr double inf_exponent = std::numeric_limits<double>::infinity();

/// Banach geometry on C^n. Either l_p on C^d, or the grid norm
/// scale * ( sum_j ||x_j||_q^p )^(1/p) on C^(points*block), x_j being
/// consecutive blocks of length `block`. All bound estimators are relative
/// to one of these.
///
/// Duality uses the sesquilinear pairing <x, y> = y^H x.
class NormSpec {
 public:
  enum class Kind { Lp, Grid };

  static NormSpec lp(Eigen::Index dim, double p);
  static NormSpec grid(Eigen::Index points, Eigen::Index block, double p, double q,
                       double scale = 1.0);

  Kind kind() const noexcept { return kind_; }
  Eigen::Index dim() const noexcept { return points_ * block_; }
  Eigen::Index points() const noexcept { return points_; }
  Eigen::Index block() const noexcept { return block_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double scale() const noexcept { return scale_; }

  /// Same geometry on a different dimension (l_p only; grid keeps its shape).
  NormSpec with_dim(Eigen::Index dim) const;

  double norm(const Vector& x) const;
  double dual_norm(const Vector& y) const;
  NormSpec dual() const;

  /// y with dual_norm(y) == 1 and y^H x == norm(x). Zero x maps to zero.
  Vector dual_vector(const Vector& x) const;
  /// x with norm(x) == 1 and y^H x == dual_norm(y).
  Vector predual_vector(const Vector& y) const { return dual().dual_vector(y); }

  /// True when the operator norm has a closed form (l1, l2, l_inf and grids
  /// that collapse to one of them).
  bool has_exact_operator_norm() const noexcept;

  std::string describe() const;

  friend bool operator==(const NormSpec&, const NormSpec&) = default;

 private:
  NormSpec() = default;
  Kind kind_ = Kind::Lp;
  Eigen::Index points_ = 1;
  Eigen::Index block_ = 1;
  double p_ = 2.0;
  double q_ = 2.0;
  double scale_ = 1.0;
};

double dual_exponent(double p);

struct OperatorNormOptions {
  int starts = 8;
  int max_iterations = 200;
  std::uint64_t seed = 42;
};

struct OperatorNormResult {
  double value = 0.0;
  Vector witness;  // unit vector (in the domain norm) attaining `value`
  bool exact = false;
};

/// ||T||_{in -> out}. Closed forms where available, otherwise the Boyd
/// power iteration from several deterministic starts (a lower bound).
OperatorNormResult operator_norm(const LinearMap& op, const NormSpec& in, const NormSpec& out,
                                 const OperatorNormOptions& options = {});
OperatorNormResult operator_norm(const Matrix& m, const NormSpec& norm,
                                 const OperatorNormOptions& options = {});

/// Maximizes a convex, positively homogeneous functional phi over the unit
/// sphere of `in`. `gradient(x)` must return a supporting functional z of phi
/// at x, so that Re z^H x == phi(x). Monotone (Boyd) iteration.
struct ConvexAscentResult {
  double value = 0.0;
  Vector witness;
};
ConvexAscentResult maximize_convex_on_sphere(
    const std::function<double(const Vector&)>& phi,
    const std::function<Vector(const Vector&)>& gradient, const NormSpec& in, Vector start,
    int max_iterations = 200, double rel_tol = 1e-12);

/// Sampled triangle-inequality and homogeneity checks of the norm axioms.
bool validate_norm_axioms(const NormSpec& norm, int samples, std::uint64_t seed);

}  // namespace sectorial
