#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sectorial/operator_matrix.hpp"
#include "sectorial/types.hpp"

namespace sectorial {

/// |f(z)| <= C (|z| / (1 + |z|^2))^epsilon on the function's sector.
struct DecayCertificate {
  double C = 1.0;
  double epsilon = 1.0;
};

double decay_weight(cplx z, double epsilon);

struct ScalarFunction {
  std::function<cplx(cplx)> evaluator;
  double domain_angle = pi / 2;
  std::optional<DecayCertificate> decay;
  nlohmann::json spec = nlohmann::json::object();  // how to rebuild it from config

  cplx operator()(cplx z) const { return evaluator(z); }
};

struct OperatorFunction {
  std::function<Matrix(cplx)> evaluator;
  double domain_angle = pi / 2;

  Matrix operator()(cplx z) const { return evaluator(z); }
};

struct BivariateFunction {
  std::function<cplx(cplx, cplx)> evaluator;
  double domain_angle_a = pi / 2;
  double domain_angle_b = pi / 2;
  /// Joint decay: |f(w,z)| <= C (w-weight)^eps (z-weight)^eps.
  std::optional<DecayCertificate> decay;

  cplx operator()(cplx w, cplx z) const { return evaluator(w, z); }
};

/// phi_n(z) = n/(n+z) - 1/(1+nz).
cplx phi_n(double n, cplx z);

/// h_s^rho(z) = z^s (e^{i rho} - z)^{-1}. Throws PoleHit near z = e^{i rho}.
cplx h_s_rho(cplx z, double s, double rho);

namespace fn {

inline constexpr double default_domain = 5.0 * pi / 6.0;

/// z (1+z)^{-2}.
ScalarFunction z_over_one_plus_z_squared(double domain_angle = default_domain);
ScalarFunction phi(double n, double domain_angle = default_domain);
ScalarFunction h_s_rho(double s, double rho);
/// z^s / (1 + z), used to build fractional powers on the contour route.
ScalarFunction power_over_shift(double s, double domain_angle = default_domain);
/// sum_k coeffs_k / (z - poles_k); no certificate.
ScalarFunction rational(std::vector<cplx> poles, std::vector<cplx> coeffs);
/// (lambda - z)^{-1}; no certificate.
ScalarFunction resolvent(cplx lambda);
ScalarFunction one(double domain_angle = default_domain);
/// z^{i tau} on the principal branch; bounded on every sector < pi.
ScalarFunction imaginary_power(double tau, double domain_angle = default_domain);

/// Pointwise product; certificate combined when both factors have one.
ScalarFunction product(const ScalarFunction& f, const ScalarFunction& g);
/// z -> f(t z).
ScalarFunction dilate(const ScalarFunction& f, double t);

ScalarFunction from_json(const nlohmann::json& spec);

}  // namespace fn

struct SupSampleOptions {
  int interior_points = 1000;
  int boundary_points_per_ray = 200;
  double log10_radius = 6.0;  // radii sampled in [10^-L, 10^L]
};

/// Sampled sup of |f| over the closed sector of the given angle (interior
/// Halton points plus both boundary rays).
double sampled_sup(const std::function<cplx(cplx)>& f, double angle,
                   const SupSampleOptions& options = {});

/// Sampled max of |f(z)| / decay_weight(z, eps) over the sector.
double sampled_decay_ratio(const ScalarFunction& f, double angle, double epsilon,
                           const SupSampleOptions& options = {});

/// Checks finiteness and (when present) the certificate to within 1.05 C.
bool validate_certificate(const ScalarFunction& f, const SupSampleOptions& options = {});

/// Sample points of the sector used by the samplers above.
std::vector<cplx> sector_samples(double angle, const SupSampleOptions& options);

}  // namespace sectorial
