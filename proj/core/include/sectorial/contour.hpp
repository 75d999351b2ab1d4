#pragma once

#include <vector>

#include "sectorial/types.hpp"

namespace sectorial {

/// The contour {|t| e^{i sgn(t) nu}} truncated to r_min <= |t| <= r_max and
/// discretized by the trapezoid rule in u = ln r. A zero r_min or r_max asks
/// the caller to choose the window from a tail bound.
struct ContourSpec {
  double angle = pi / 2;
  int nodes_per_decade = 40;
  double r_min = 0.0;
  double r_max = 0.0;
  double tail_tolerance = 1e-12;
  /// Test hook: every quadrature weight is multiplied by (1 + weight_perturbation).
  double weight_perturbation = 0.0;

  /// Angle halfway between a spectral angle and a function's domain angle.
  static ContourSpec between(double spectral_angle, double domain_angle, int nodes_per_decade = 40);

  double step() const;
  bool has_window() const noexcept { return r_min > 0.0 && r_max > r_min; }
  void validate() const;
};

/// Radial nodes shared by both rays: zeta_pm = r e^{+-i nu}.
struct RadialNodes {
  std::vector<double> r;
  std::vector<double> weight;  // trapezoid weights in u, end points halved
  double r_min = 0.0;
  double r_max = 0.0;
  double step = 0.0;
};

/// Nodes u_k = ln r_min + k h covering [r_min, r_max]; r_max is rounded up to
/// a whole (even) number of steps. stride 2 gives the coarse companion rule
/// on every other node.
RadialNodes make_radial_nodes(const ContourSpec& spec, int stride = 1);

inline constexpr double window_floor = 1e-150;
inline constexpr double window_ceiling = 1e150;

}  // namespace sectorial
