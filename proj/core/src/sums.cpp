#include "sectorial/sums.hpp"

#include <algorithm>
#include <cmath>

#include "quadrature.hpp"
#include "sectorial/error.hpp"
#include "sectorial/linalg.hpp"
#include "sectorial/operators.hpp"
#include "sectorial/serialize.hpp"

namespace sectorial {

CommutingPair::CommutingPair(OperatorMatrix A, OperatorMatrix B) : a_(std::move(A)), b_(std::move(B)) {
  require(a_.dim() == b_.dim(), Errc::InvalidArgument, "A and B must have the same dimension");
  commutator_ = spectral_norm(a_.matrix() * b_.matrix() - b_.matrix() * a_.matrix());
  check_commuting(a_, b_);
  angle_a_ = spectral_angle(a_).angle();
  angle_b_ = spectral_angle(b_).angle();
}

void CommutingPair::require_angle_sum() const {
  if (!(angle_a_ + angle_b_ < pi)) fail(Errc::AngleSumExceeded, "spectral angles of A and B sum to pi or more");
}

SumContours sum_contours(const CommutingPair& pair, double limit, double tail_tolerance) {
  pair.require_angle_sum();
  const double wa = pair.angle_a();
  const double wb = pair.angle_b();
  const double slack = std::min((pi - wa - wb) / 3.0, (limit - std::max(wa, wb)) / 2.0);
  require(slack > 0.0, Errc::InvalidArgument, "no room between the spectral angles and the limit");
  // Trapezoid error decays like exp(-2 pi slack / h).
  const int npd = std::clamp(static_cast<int>(std::ceil(std::log(10.0) * 24.0 / (2.0 * pi * slack))), 40, 240);
  SumContours c;
  c.domain_a = wa + 1.4 * slack;
  c.domain_b = wb + 1.4 * slack;
  c.a.angle = wa + slack;
  c.b.angle = wb + slack;
  c.a.nodes_per_decade = c.b.nodes_per_decade = npd;
  c.a.tail_tolerance = c.b.tail_tolerance = tail_tolerance;
  return c;
}

namespace {

Matrix joint_of(const CommutingPair& pair, std::function<cplx(cplx, cplx)> f, double limit, double tol) {
  const SumContours c = sum_contours(pair, limit, tol);
  BivariateFunction g;
  g.evaluator = std::move(f);
  g.domain_angle_a = c.domain_a;
  g.domain_angle_b = c.domain_b;
  JointOptions o;
  o.route = JointRoute::Regularized;
  return joint_fcalc(pair.A(), pair.B(), g, c.a, c.b, o).value;
}

}  // namespace

Matrix inverse_sum_operator(const CommutingPair& pair) {
  pair.require_angle_sum();
  return joint_of(pair, [](cplx w, cplx z) { return w / (w + z); }, pi, 1e-12);
}

BoundEstimate sum_closedness_constant(const CommutingPair& pair, const NormSpec& norm,
                                      const OperatorNormOptions& options) {
  pair.require_angle_sum();
  require(norm.dim() == pair.A().dim(), Errc::InvalidArgument, "norm dimension does not match operators");
  const Eigen::Index d = norm.dim();
  const Matrix S = pair.A().matrix() + pair.B().matrix();
  if (smallest_singular_value(S) < 1e-12 * spectral_norm(S)) fail(Errc::SumSingular, "A + B is numerically singular");
  const Eigen::PartialPivLU<Matrix> lu(S);
  const Matrix Sinv = lu.inverse();
  // With y = (A + B)x the ratio becomes ||P y|| + ||Q y||, convex in y.
  const Matrix P = pair.A().matrix() * Sinv;
  const Matrix Q = pair.B().matrix() * Sinv;
  auto phi = [&](const Vector& y) { return norm.norm(P * y) + norm.norm(Q * y); };
  auto grad = [&](const Vector& y) -> Vector {
    return P.adjoint() * norm.dual_vector(P * y) + Q.adjoint() * norm.dual_vector(Q * y);
  };
  const int starts = std::max(1, options.starts);
  std::vector<ConvexAscentResult> results(static_cast<std::size_t>(starts));
  parallel_for(results.size(), [&](std::size_t st) {
    Vector y = Vector::Ones(d);
    if (st > 0) {
      Rng rng = make_stream(options.seed, st);
      y = complex_gaussian(d, rng);
    }
    results[st] = maximize_convex_on_sphere(phi, grad, norm, y, options.max_iterations);
  });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value > results[arg].value) arg = i;

  const Vector x = lu.solve(results[arg].witness);
  const double denom = norm.norm(S * x);
  BoundEstimate b;
  b.value = (norm.norm(pair.A().matrix() * x) + norm.norm(pair.B().matrix() * x)) / denom;
  b.method = "sum-closedness-ascent";
  b.mode = SearchMode::Randomized;
  b.seed = options.seed;
  b.samples = static_cast<std::uint64_t>(starts);
  b.witness = {{"x", vector_to_json(x)}};
  const Matrix f = inverse_sum_operator(pair);
  const double fnorm = operator_norm(f, norm).value;
  b.details = {{"calculus_bound", 1.0 + 2.0 * fnorm},
               {"inverse_sum_norm", fnorm},
               {"identity_residual", spectral_norm(f * S - pair.A().matrix()) / std::max(pair.A().norm(), 1e-300)},
               {"norm", norm_to_json(norm)}};
  return b;
}

BoundEstimate sum_r_sectoriality(const CommutingPair& pair, const Sector& rho, const NormSpec& norm,
                                 const SumSampleConfig& config) {
  pair.require_angle_sum();
  require(norm.dim() == pair.A().dim(), Errc::InvalidArgument, "norm dimension does not match operators");
  require(rho.angle() > std::max(pair.angle_a(), pair.angle_b()), Errc::InvalidArgument,
          "rho must exceed both spectral angles");
  require(config.angles >= 1 && config.radii_per_decade >= 1, Errc::InvalidArgument, "invalid sample configuration");
  const Eigen::Index d = norm.dim();
  const Matrix S = pair.A().matrix() + pair.B().matrix();
  const OperatorMatrix sum(S);
  const auto moduli = sum.eigen().values.cwiseAbs();
  const double span = std::pow(10.0, config.margin_decades);
  const double r_lo = moduli.minCoeff() / span;
  const double r_hi = moduli.maxCoeff() * span;
  const double decades = std::log10(r_hi / r_lo);
  const int nr = std::max(1, static_cast<int>(std::ceil(decades * config.radii_per_decade))) + 1;

  std::vector<cplx> mus;
  for (int i = 0; i < nr; ++i) {
    const double r = r_lo * std::pow(10.0, decades * i / std::max(1, nr - 1));
    for (int j = 0; j < config.angles; ++j) {
      const double th = config.angles == 1 ? rho.angle()
                                           : rho.angle() + (pi - rho.angle()) * j / (config.angles - 1);
      mus.push_back(std::polar(r, th));
      if (th < pi) mus.push_back(std::polar(r, -th));
    }
  }
  std::vector<Matrix> members(mus.size());
  std::vector<double> deviation(mus.size(), 0.0);
  for (std::size_t i = 0; i < mus.size(); ++i) {
    const cplx mu = mus[i];
    members[i] = mu * (mu * Matrix::Identity(d, d) - S).partialPivLu().inverse();
    const double limit = std::min(std::abs(std::arg(mu)), pi);
    const Matrix viaJoint = joint_of(pair, [mu](cplx w, cplx z) { return mu / (mu - w - z); }, limit, 1e-10);
    deviation[i] = (viaJoint - members[i]).norm() / std::max(members[i].norm(), 1e-300);
  }
  const double worst = deviation.empty() ? 0.0 : *std::max_element(deviation.begin(), deviation.end());

  BoundEstimate b = r_bound(OperatorFamily(members, norm), config.selection, config.sign, config.search);
  b.method = "sum-r-sectoriality";
  json mj = json::array();
  for (const cplx mu : mus) mj.push_back(complex_to_json(mu));
  b.details["mu_samples"] = mj;
  b.details["max_consistency_error"] = worst;
  b.details["verified"] = worst <= 1e-6;
  b.details["rho"] = rho.angle();
  return b;
}

}  // namespace sectorial
