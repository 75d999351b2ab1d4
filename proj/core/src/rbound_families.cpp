#include <algorithm>
#include <cmath>
#include <limits>

#include "sectorial/error.hpp"
#include "sectorial/linalg.hpp"
#include "sectorial/operators.hpp"
#include "sectorial/rademacher.hpp"
#include "sectorial/serialize.hpp"
#include "sign_search.hpp"

namespace sectorial {

namespace {

BoundEstimate bound_of(BoundKind kind, const OperatorFamily& f, int n, const SignConfig& sign,
                       const SearchConfig& search) {
  switch (kind) {
    case BoundKind::R: return r_bound(f, n, sign, search);
    case BoundKind::WR: return wr_bound(f, n, sign, search);
    case BoundKind::U: break;
  }
  return u_bound(f, n, sign, search);
}

}  // namespace

BoundEstimate ray_ubound_extension(const OperatorFunction& F, double nu, double a, double sigma0,
                                   const std::vector<double>& t_grid, const NormSpec& norm,
                                   const RayExtensionConfig& config) {
  require(a > 1.0, Errc::InvalidArgument, "ratio a must exceed 1");
  require(sigma0 > 0.0 && sigma0 < nu, Errc::InvalidArgument, "need 0 < sigma0 < nu");
  require(nu < pi && nu <= F.domain_angle, Errc::InvalidArgument, "nu must lie inside the domain of F");
  require(!t_grid.empty(), Errc::InvalidArgument, "t grid must be nonempty");
  require(config.K >= 0 && config.sector_angles >= 1, Errc::InvalidArgument, "invalid ray configuration");
  const SignConfig sign;

  double ray_sup = 0.0;
  json rays = json::array();
  for (const double t : t_grid) {
    double m_t = 0.0;
    for (const double sgn : {1.0, -1.0}) {
      std::vector<Matrix> members;
      for (int k = -config.K; k <= config.K; ++k) members.push_back(F(std::polar(std::pow(a, k) * t, sgn * nu)));
      m_t = std::max(m_t, u_bound(OperatorFamily(std::move(members), norm), config.selection, sign, config.search).value);
    }
    ray_sup = std::max(ray_sup, m_t);
    rays.push_back({{"t", t}, {"bound", m_t}});
  }

  std::vector<Matrix> sector;
  const int J = config.sector_angles;
  for (const double t : t_grid)
    for (int k = -config.K; k <= config.K; ++k)
      for (int j = 0; j < J; ++j) {
        const double theta = J == 1 ? 0.0 : -sigma0 + 2.0 * sigma0 * j / (J - 1);
        sector.push_back(F(std::polar(std::pow(a, k) * t, theta)));
      }
  BoundEstimate b = u_bound(OperatorFamily(std::move(sector), norm), config.selection, sign, config.search);
  b.method = "ray-ubound-extension";
  b.details["ray_sup"] = ray_sup;
  b.details["ratio"] = ray_sup > 0.0 ? b.value / ray_sup : 0.0;
  b.details["rays"] = rays;
  b.details["nu"] = nu;
  b.details["sigma0"] = sigma0;
  b.details["a"] = a;
  return b;
}

BoundEstimate uncseries_partial_sums(const std::vector<Matrix>& U, const std::vector<Matrix>& V, const NormSpec& norm,
                                     int K, const SignConfig& sign, const SearchConfig& search) {
  require(K >= 1, Errc::InvalidArgument, "K must be at least 1");
  require(U.size() >= static_cast<std::size_t>(K) && V.size() >= static_cast<std::size_t>(K), Errc::InvalidArgument,
          "U and V need at least K members");
  const detail::MatrixNorm mnorm(norm);
  // sup over prefixes n <= K and signs of || sum_{k<=n} eps_k W_k ||.
  auto unconditional = [&](const std::vector<Matrix>& W) {
    double best = 0.0;
    for (int n = 1; n <= K; ++n) {
      const std::vector<Matrix> prefix(W.begin(), W.begin() + n);
      const detail::SignSupResult r =
          n <= 20 ? detail::exhaustive_sign_sup(prefix, mnorm)
                  : detail::randomized_sign_sup(prefix, mnorm, {SearchMode::Randomized, 16, 50, sign.seed});
      best = std::max(best, r.value);
    }
    return best;
  };
  const double MU = unconditional(U);
  const double MV = unconditional(V);

  std::vector<Matrix> partial;
  Matrix acc = Matrix::Zero(norm.dim(), norm.dim());
  for (int k = 0; k < K; ++k) {
    acc += U[static_cast<std::size_t>(k)] * V[static_cast<std::size_t>(k)];
    partial.push_back(acc);
  }
  BoundEstimate b = r_bound(OperatorFamily(std::move(partial), norm), std::min(K, 6), sign, search);
  b.method = "uncseries-partial-sums";
  b.details["M_U"] = MU;
  b.details["M_V"] = MV;
  b.details["ratio"] = MU * MV > 0.0 ? b.value / (MU * MV) : 0.0;
  b.details["K"] = K;
  return b;
}

namespace {

std::vector<Matrix> resolvent_family(const OperatorMatrix& A, double sigma, double r_lo, double r_hi,
                                     int radii_per_decade, int angles) {
  const double decades = std::log10(r_hi / r_lo);
  const int nr = std::max(1, static_cast<int>(std::ceil(decades * radii_per_decade))) + 1;
  std::vector<double> thetas;
  for (int i = 0; i < angles; ++i) thetas.push_back(angles == 1 ? sigma : sigma + (pi - sigma) * i / (angles - 1));
  std::vector<cplx> lambdas;
  for (int i = 0; i < nr; ++i) {
    const double r = r_lo * std::pow(10.0, decades * i / (nr - 1));
    for (const double th : thetas) {
      lambdas.push_back(std::polar(r, th));
      if (th < pi) lambdas.push_back(std::polar(r, -th));
    }
  }
  std::vector<Matrix> out(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) { out[i] = lambdas[i] * resolvent_matrix(A, lambdas[i]); });
  return out;
}

}  // namespace

AngleCurve r_sectorial_angle(const OperatorMatrix& A, const NormSpec& norm, const std::vector<double>& angle_grid,
                             const AngleFamilyConfig& config) {
  require(norm.dim() == A.dim(), Errc::InvalidArgument, "norm dimension does not match operator");
  require(!angle_grid.empty(), Errc::InvalidArgument, "angle grid must be nonempty");
  const double omega = spectral_angle(A).angle();
  for (const double s : angle_grid)
    if (!(s > omega && s < pi)) fail(Errc::InvalidArgument, "angle grid must lie in (spectral angle, pi)");
  const auto moduli = A.eigen().values.cwiseAbs();
  const double span = std::pow(10.0, config.margin_decades);
  const double r_lo = moduli.minCoeff() / span;
  const double r_hi = moduli.maxCoeff() * span;

  AngleCurve curve;
  curve.kind = config.kind;
  curve.surrogate_angle = std::numeric_limits<double>::quiet_NaN();
  for (const double sigma : angle_grid) {
    AnglePoint pt;
    pt.sigma = sigma;
    const std::vector<Matrix> members =
        resolvent_family(A, sigma, r_lo, r_hi, config.radii_per_decade, config.angles);
    pt.members = members.size();
    pt.bound = bound_of(config.kind, OperatorFamily(members, norm), config.selection, config.sign, config.search);
    pt.refined_value = pt.bound.value;
    int rpd = config.radii_per_decade;
    int ang = config.angles;
    for (int level = 0; level < config.refine_levels; ++level) {
      rpd *= 2;
      ang = 2 * ang - 1;
      pt.refined_value = bound_of(config.kind, OperatorFamily(resolvent_family(A, sigma, r_lo, r_hi, rpd, ang), norm),
                                  config.selection, config.sign, config.search)
                             .value;
    }
    const bool stable = std::abs(pt.refined_value - pt.bound.value) <= 0.05 * pt.bound.value;
    if (pt.bound.value <= config.ceiling && stable &&
        (std::isnan(curve.surrogate_angle) || sigma < curve.surrogate_angle))
      curve.surrogate_angle = sigma;
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

nlohmann::json to_json(const AngleCurve& c) {
  json pts = json::array();
  for (const AnglePoint& p : c.points) {
    json b;
    to_json(b, p.bound);
    pts.push_back({{"sigma", p.sigma}, {"value", p.bound.value}, {"refined_value", p.refined_value},
                   {"members", p.members}, {"bound", b}});
  }
  return {{"kind", to_string(c.kind)}, {"points", pts}, {"surrogate_angle", real_to_json(c.surrogate_angle)}};
}

}  // namespace sectorial
