#pragma once

#include <memory>
#include <mutex>

#include "sectorial/types.hpp"

namespace sectorial {

/// Open sector {z : |arg z| < angle}. Angles are in radians.
class Sector {
 public:
  /// Validated constructor: 0 < angle < pi.
  explicit Sector(double angle);

  /// Angle read off a spectrum; 0 is allowed (degenerate, caller widens).
  static Sector from_spectrum(double angle);

  double angle() const noexcept { return angle_; }
  bool contains(cplx z) const noexcept;

 private:
  struct Unchecked {};
  Sector(double angle, Unchecked) : angle_(angle) {}
  double angle_;
};

struct EigenData {
  Vector values;
  Matrix vectors;
  Matrix inverse_vectors;
  double condition = 0.0;
  bool diagonalizable = false;
  double reconstruction_error = 0.0;
};

/// Dense complex square matrix used as a sectorial operator. Immutable;
/// copies share a lazily computed eigendecomposition (computed once, safe
/// under concurrent first use).
class OperatorMatrix {
 public:
  static constexpr double ill_conditioned_threshold = 1e8;

  explicit OperatorMatrix(Matrix entries);

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }
  operator const Matrix&() const noexcept { return entries_; }

  double norm() const;          // spectral norm
  const EigenData& eigen() const;
  /// Eigendata usable for f(A) = V f(D) V^-1 (condition below threshold).
  bool well_diagonalizable() const;

  OperatorMatrix scaled(double t) const { return OperatorMatrix(entries_ * t); }

 private:
  struct Cache {
    std::once_flag eigen_once;
    EigenData eigen;
    std::once_flag norm_once;
    double norm = 0.0;
  };
  Matrix entries_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace sectorial
