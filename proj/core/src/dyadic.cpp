#include <algorithm>
#include <cmath>

#include "quadrature.hpp"
#include "sectorial/calculus.hpp"
#include "sectorial/error.hpp"
#include "sectorial/linalg.hpp"
#include "sectorial/operators.hpp"
#include "sectorial/serialize.hpp"
#include "sign_search.hpp"

namespace sectorial {

namespace {

struct DyadicContext {
  detail::SchurResolvent R;
  Matrix Ts;  // A^s in the Schur basis

  DyadicContext(const OperatorMatrix& A, double s)
      : R(A), Ts(R.to_schur(fractional_power(A, s).matrix())) {}

  // h_s^rho(lambda A) = lambda^{s-1} A^s R(e^{i rho} / lambda, A), Schur basis.
  Matrix h(double lambda, double rho, double s) const {
    return std::pow(lambda, s - 1.0) * (Ts * R.resolvent(std::polar(1.0, rho) / lambda));
  }
};

DyadicTerms dyadic_terms(const DyadicContext& ctx, const OperatorFunction& F, double s, double nu, double t,
                         int K) {
  const Matrix& U = ctx.R.unitary();
  const Eigen::Index d = ctx.R.dim();
  DyadicTerms out;
  out.K = K;
  double edge = 0.0;
  for (const double sgn : {1.0, -1.0}) {
    PairwiseSum<Matrix> sum;
    for (int k = -K; k <= K; ++k) {
      const double lambda = std::ldexp(t, k);
      const cplx zeta = std::polar(1.0 / lambda, sgn * nu);
      const Matrix term = F(zeta) * (U * ctx.h(lambda, sgn * nu, s) * U.adjoint());
      if (k == -K || k == K) edge = std::max(edge, spectral_norm(term));
      sum.add(term);
    }
    const Matrix total = std::polar(1.0, sgn * (1.0 - s) * nu) * sum.result(Matrix::Zero(d, d));
    (sgn > 0 ? out.plus : out.minus) = total;
  }
  const double eps = std::min(s, 1.0 - s);
  out.tail_estimate = edge / (1.0 - std::pow(2.0, -eps));
  return out;
}

void check_dyadic_inputs(const OperatorMatrix& A, const OperatorFunction& F, double s, double nu) {
  require(s > 0.0 && s < 1.0, Errc::InvalidArgument, "fractional exponent must lie in (0, 1)");
  require(nu > 0.0 && nu < pi, Errc::InvalidArgument, "angle nu must lie in (0, pi)");
  if (!(nu > spectral_angle(A).angle())) fail(Errc::NotSectorial, "nu must exceed the spectral angle");
  require(nu < F.domain_angle, Errc::InvalidArgument, "nu must be below the domain angle of F");
}

DyadicTerms dyadic_with(const DyadicContext& ctx, const OperatorFunction& F, double s, double nu, double t,
                        int K, double tol) {
  if (K > 0) {
    DyadicTerms r = dyadic_terms(ctx, F, s, nu, t, K);
    if (!(r.tail_estimate <= tol)) fail(Errc::TailTooLarge, "dyadic tail exceeds the tolerance for this K");
    return r;
  }
  for (int k = 8; k <= 1024; k *= 2) {
    DyadicTerms r = dyadic_terms(ctx, F, s, nu, t, k);
    if (r.tail_estimate <= tol) return r;
  }
  fail(Errc::TailTooLarge, "dyadic tail does not fall below the tolerance for K <= 1024");
}

}  // namespace

DyadicTerms dyadic_decomposition(const OperatorMatrix& A, const OperatorFunction& F, double s, double nu,
                                 double t, int K, double tail_tolerance) {
  check_dyadic_inputs(A, F, s, nu);
  require(t >= 1.0 && t <= 2.0, Errc::InvalidArgument, "t must lie in [1, 2]");
  require(K >= 0, Errc::InvalidArgument, "K must be nonnegative");
  check_commutant(A, F, nu);
  const DyadicContext ctx(A, s);
  return dyadic_with(ctx, F, s, nu, t, K, tail_tolerance);
}

Matrix dyadic_reconstruction(const OperatorMatrix& A, const OperatorFunction& F, double s, double nu, int K,
                             int J) {
  check_dyadic_inputs(A, F, s, nu);
  require(J >= 1, Errc::InvalidArgument, "J must be positive");
  check_commutant(A, F, nu);
  const DyadicContext ctx(A, s);
  const double tol = 1e-10;
  if (K == 0) K = dyadic_with(ctx, F, s, nu, 1.0, 0, tol).K + 2;
  const Eigen::Index d = A.dim();
  PairwiseSum<Matrix> sum;
  const double h = std::log(2.0) / J;
  for (int j = 0; j < J; ++j) {
    const double t = std::exp(h * j);
    const DyadicTerms m = dyadic_with(ctx, F, s, nu, t, K, tol);
    sum.add(h * (m.plus - m.minus));
  }
  return (-1.0 / (2.0 * pi * I_unit)) * sum.result(Matrix::Zero(d, d));
}

std::vector<double> default_t_grid(int n) {
  require(n >= 1, Errc::InvalidArgument, "t grid needs at least one point");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = std::pow(2.0, static_cast<double>(j) / n);
  return t;
}

BoundEstimate unconditional_dyadic_bound(const OperatorMatrix& A, const ScalarFunction& f, double t, int K,
                                         const NormSpec& norm, const SignSearchOptions& options) {
  require(K >= 0, Errc::InvalidArgument, "K must be nonnegative");
  require(t > 0.0, Errc::InvalidArgument, "t must be positive");
  require(norm.dim() == A.dim(), Errc::InvalidArgument, "norm dimension does not match operator");
  if (!f.decay) fail(Errc::MissingDecay, "unconditional_dyadic_bound needs a decay certificate");
  const std::size_t n = static_cast<std::size_t>(2 * K + 1);
  std::vector<Matrix> members(n);
  const ContourSpec c = ContourSpec::between(spectral_angle(A).angle(), f.domain_angle);
  for (int k = -K; k <= K; ++k)
    members[static_cast<std::size_t>(k + K)] = contour_fcalc(A, fn::dilate(f, std::ldexp(t, k)), c).value;

  const detail::MatrixNorm mnorm(norm);
  detail::SignSupResult best;
  if (options.mode == SearchMode::Exhaustive) {
    require(n <= 20, Errc::InvalidArgument, "exhaustive mode needs 2K+1 <= 20");
    best = detail::exhaustive_sign_sup(members, mnorm);
  } else {
    best = detail::randomized_sign_sup(members, mnorm, options);
  }
  // Complex phases can only increase the sup; polish by coordinate ascent.
  std::vector<cplx> alpha(best.signs.begin(), best.signs.end());
  double value = detail::phase_ascent(members, mnorm, alpha, options.sweeps);
  if (options.mode == SearchMode::Randomized) {
    for (int st = 0; st < options.starts; ++st) {
      Rng rng = make_stream(options.seed, static_cast<std::uint64_t>(st) + 1);
      std::uniform_real_distribution<double> angle(-pi, pi);
      std::vector<cplx> a(n);
      for (auto& x : a) x = std::polar(1.0, angle(rng));
      const double v = detail::phase_ascent(members, mnorm, a, options.sweeps);
      if (v > value) {
        value = v;
        alpha = std::move(a);
      }
    }
  }

  BoundEstimate b;
  b.value = detail::evaluate_combination(members, mnorm, alpha);
  b.method = "dyadic-unconditional";
  b.mode = options.mode;
  b.seed = options.seed;
  b.samples = best.patterns;
  b.is_lower_bound = true;
  json a = json::array();
  for (const cplx x : alpha) a.push_back(complex_to_json(x));
  b.witness = {{"alpha", a}, {"k_range", {-K, K}}, {"t", t}};
  b.details = {{"real_sign_value", best.value}, {"norm", norm_to_json(norm)}, {"terms", n}};
  return b;
}

BoundEstimate hinfty_criterion(const OperatorMatrix& A, double nu, double s, const std::vector<double>& t_grid,
                               int K, const NormSpec& norm, const SignSearchOptions& options) {
  require(s > 0.0 && s < 1.0, Errc::InvalidArgument, "fractional exponent must lie in (0, 1)");
  require(K >= 0, Errc::InvalidArgument, "K must be nonnegative");
  require(!t_grid.empty(), Errc::InvalidArgument, "t grid must be nonempty");
  require(norm.dim() == A.dim(), Errc::InvalidArgument, "norm dimension does not match operator");
  if (!(nu > spectral_angle(A).angle())) fail(Errc::NotSectorial, "nu must exceed the spectral angle");
  const DyadicContext ctx(A, s);
  const Matrix& U = ctx.R.unitary();
  const detail::MatrixNorm mnorm(norm);
  const std::size_t n = static_cast<std::size_t>(2 * K + 1);
  const bool exhaustive = options.mode == SearchMode::Exhaustive && n <= 20;

  BoundEstimate b;
  b.value = -1.0;
  std::uint64_t patterns = 0;
  for (const double t : t_grid) {
    for (const double sgn : {1.0, -1.0}) {
      std::vector<Matrix> members(n);
      for (int k = -K; k <= K; ++k) {
        const double lambda = std::ldexp(t, k);
        const cplx zeta = std::polar(lambda, sgn * nu);
        members[static_cast<std::size_t>(k + K)] =
            std::pow(lambda, 1.0 - s) * (U * (ctx.Ts * ctx.R.resolvent(zeta)) * U.adjoint());
      }
      const detail::SignSupResult r = exhaustive ? detail::exhaustive_sign_sup(members, mnorm)
                                                 : detail::randomized_sign_sup(members, mnorm, options);
      patterns += r.patterns;
      if (r.value > b.value) {
        b.value = r.value;
        b.witness = {{"t", t}, {"ray", sgn > 0 ? "+" : "-"}, {"signs", r.signs}, {"k_range", {-K, K}}};
      }
    }
  }
  b.method = "hinfty-criterion";
  b.mode = exhaustive ? SearchMode::Exhaustive : SearchMode::Randomized;
  b.seed = options.seed;
  b.samples = patterns;
  b.details = {{"nu", nu}, {"s", s}, {"t_grid", t_grid}, {"K", K}, {"norm", norm_to_json(norm)}};
  return b;
}

}  // namespace sectorial
