#include "sectorial/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "quadrature.hpp"
#include "sectorial/error.hpp"
#include "sectorial/linalg.hpp"
#include "sectorial/operators.hpp"

namespace sectorial {

namespace {

const cplx minus_one_over_two_pi_i = -1.0 / (2.0 * pi * I_unit);

void check_angles(const OperatorMatrix& A, double nu, double domain_angle) {
  const double omega = spectral_angle(A).angle();
  if (!(nu > omega)) fail(Errc::NotSectorial, "contour angle must exceed the spectral angle");
  require(nu < domain_angle, Errc::InvalidArgument, "contour angle must be below the function's domain angle");
}

double relative_difference(const Matrix& a, const Matrix& b) {
  const double scale = std::max({a.norm(), b.norm(), std::numeric_limits<double>::min()});
  return (a - b).norm() / scale;
}

}  // namespace

FcalcResult contour_fcalc(const OperatorMatrix& A, const ScalarFunction& f, const ContourSpec& c) {
  if (!f.decay) fail(Errc::MissingDecay, "function has no decay certificate; use regularized_fcalc");
  c.validate();
  check_angles(A, c.angle, f.domain_angle);
  const detail::SchurResolvent R(A);
  const auto cert = *f.decay;
  const detail::Window w =
      detail::certificate_window(cert.C, cert.epsilon, R.norm(), R.inverse_norm(), c.tail_tolerance);
  const ContourSpec spec = detail::with_window(c, w);
  const RadialNodes nodes = make_radial_nodes(spec);
  const cplx ep = std::polar(1.0, spec.angle);
  const cplx em = std::conj(ep);
  const Eigen::Index d = A.dim();

  const auto sum = detail::accumulate(nodes.r.size(), d, d, [&](std::size_t j) -> Matrix {
    const cplx zp = nodes.r[j] * ep;
    const cplx zm = nodes.r[j] * em;
    return nodes.weight[j] * ((f(zp) * zp) * R.resolvent(zp) - (f(zm) * zm) * R.resolvent(zm));
  });

  FcalcResult out;
  out.value = R.from_schur(minus_one_over_two_pi_i * sum.fine);
  out.report.angle = spec.angle;
  out.report.r_min = nodes.r_min;
  out.report.r_max = nodes.r_max;
  out.report.nodes = 2 * nodes.r.size();
  out.report.truncation_bound =
      detail::certificate_tail(cert.C, cert.epsilon, R.norm(), R.inverse_norm(), nodes.r_min, nodes.r_max);
  out.report.discretization_estimate = spectral_norm(minus_one_over_two_pi_i * (sum.fine - sum.coarse));
  return out;
}

FcalcResult contour_fcalc(const OperatorMatrix& A, const ScalarFunction& f) {
  return contour_fcalc(A, f, ContourSpec::between(spectral_angle(A).angle(), f.domain_angle));
}

RegularizedResult regularized_fcalc(const OperatorMatrix& A, const ScalarFunction& f,
                                    const ContourSpec& c, const RegularizedOptions& options) {
  require(options.n_max >= 2.0, Errc::InvalidArgument, "regularization needs n_max >= 2");
  RegularizedResult out;
  Matrix previous;
  for (double n = 2.0; n <= options.n_max; n *= 2.0) {
    const ScalarFunction g = fn::product(fn::phi(n, f.domain_angle), f);
    const FcalcResult r = contour_fcalc(A, g, c);
    const double size = spectral_norm(r.value);
    out.n_values.push_back(n);
    out.sup_trace.push_back(size);
    out.sup = std::max(out.sup, size);
    out.report = r.report;
    if (!(out.sup <= options.ceiling))
      fail(Errc::NoConvergence, "sup of ||(phi_n f)(A)|| exceeds the configured ceiling");
    const Matrix Vn = approximate_identity(A, n).matrix();
    // (phi_n f)(A) = f(A) V_n, so the candidate removes the regularizer exactly.
    Matrix candidate = Vn.transpose().partialPivLu().solve(r.value.transpose()).transpose();
    if (previous.size() != 0 && relative_difference(candidate, previous) < options.tolerance) {
      out.value = std::move(candidate);
      out.converged = true;
      return out;
    }
    previous = std::move(candidate);
  }
  out.value = std::move(previous);
  out.converged = false;
  return out;
}

void check_commutant(const OperatorMatrix& A, const OperatorFunction& F, double angle) {
  const double scale = A.norm();
  const Vector& ev = A.eigen().values;
  const double anchor = std::sqrt(ev.cwiseAbs().minCoeff() * ev.cwiseAbs().maxCoeff());
  for (const double lr : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    for (const double sgn : {1.0, -1.0}) {
      const cplx z = std::polar(anchor * std::pow(10.0, lr), sgn * angle);
      const Matrix Fz = F(z);
      require(Fz.rows() == A.dim() && Fz.cols() == A.dim(), Errc::InvalidArgument,
              "operator function has the wrong dimension");
      const double comm = spectral_norm(Fz * A.matrix() - A.matrix() * Fz);
      if (comm > 1e-8 * scale * spectral_norm(Fz))
        fail(Errc::CommutantViolation, "F(zeta) does not commute with A");
    }
  }
}

namespace {

double sampled_operator_sup(const OperatorFunction& F, double angle, double anchor) {
  double sup = 0.0;
  for (int k = -80; k <= 80; ++k) {
    for (const double sgn : {1.0, -1.0}) {
      const cplx z = std::polar(anchor * std::pow(10.0, 0.25 * k), sgn * angle);
      sup = std::max(sup, spectral_norm(F(z)));
    }
  }
  return sup;
}

}  // namespace

FcalcResult operator_fcalc(const OperatorMatrix& A, const OperatorFunction& F, double s,
                           const ContourSpec& c) {
  require(s > 0.0 && s < 1.0, Errc::InvalidArgument, "fractional exponent must lie in (0, 1)");
  c.validate();
  check_angles(A, c.angle, F.domain_angle);
  check_commutant(A, F, c.angle);
  const detail::SchurResolvent R(A);
  const Matrix As = fractional_power(A, s).matrix();
  const Matrix Ts = R.to_schur(As);
  const double norm_As = spectral_norm(As);
  const double norm_Asm1 = spectral_norm(A.matrix().partialPivLu().solve(As));
  const Vector& ev = A.eigen().values;
  const double anchor = std::sqrt(ev.cwiseAbs().minCoeff() * ev.cwiseAbs().maxCoeff());
  const double Fsup = sampled_operator_sup(F, c.angle, anchor);
  const detail::Window w = detail::altdef_window(Fsup, s, norm_As, norm_Asm1, R.norm(), R.inverse_norm(),
                                                 c.tail_tolerance);
  const ContourSpec spec = detail::with_window(c, w);
  const RadialNodes nodes = make_radial_nodes(spec);
  const cplx ep = std::polar(1.0, spec.angle);
  const cplx em = std::conj(ep);
  const Eigen::Index d = A.dim();
  const Matrix& U = R.unitary();

  const auto sum = detail::accumulate(nodes.r.size(), d, d, [&](std::size_t j) -> Matrix {
    const cplx zp = nodes.r[j] * ep;
    const cplx zm = nodes.r[j] * em;
    const Matrix Pp = U * (Ts * R.resolvent(zp)) * U.adjoint();
    const Matrix Pm = U * (Ts * R.resolvent(zm)) * U.adjoint();
    return nodes.weight[j] *
           (principal_pow(zp, 1.0 - s) * (F(zp) * Pp) - principal_pow(zm, 1.0 - s) * (F(zm) * Pm));
  });

  FcalcResult out;
  out.value = minus_one_over_two_pi_i * sum.fine;
  out.report.angle = spec.angle;
  out.report.r_min = nodes.r_min;
  out.report.r_max = nodes.r_max;
  out.report.nodes = 2 * nodes.r.size();
  out.report.truncation_bound =
      detail::altdef_tail(Fsup, s, norm_As, norm_Asm1, R.norm(), R.inverse_norm(), nodes.r_min, nodes.r_max);
  out.report.discretization_estimate = spectral_norm(minus_one_over_two_pi_i * (sum.fine - sum.coarse));
  return out;
}

void check_commuting(const OperatorMatrix& A, const OperatorMatrix& B) {
  require(A.dim() == B.dim(), Errc::InvalidArgument, "operators must have equal dimension");
  const double comm = spectral_norm(A.matrix() * B.matrix() - B.matrix() * A.matrix());
  if (comm > 1e-10 * A.norm() * B.norm()) fail(Errc::NonCommuting, "A and B do not commute");
}

namespace {

double sampled_bivariate_sup(const BivariateFunction& f, double angle_a, double angle_b) {
  double sup = 0.0;
  for (int i = -24; i <= 24; ++i) {
    for (int k = -24; k <= 24; ++k) {
      const double ra = std::pow(10.0, 0.25 * i);
      const double rb = std::pow(10.0, 0.25 * k);
      for (const double sa : {1.0, -1.0})
        for (const double sb : {1.0, -1.0})
          for (const double fa : {1.0, 0.5, 0.0})
            for (const double fb : {1.0, 0.5, 0.0}) {
              const double v =
                  std::abs(f(std::polar(ra, sa * fa * angle_a), std::polar(rb, sb * fb * angle_b)));
              if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
              sup = std::max(sup, v);
            }
    }
  }
  return sup;
}

// sup ||eta R(eta, B)|| sampled along the contour rays.
double sampled_sectorial_bound(const detail::SchurResolvent& R, double angle) {
  double sup = 0.0;
  const double anchor = std::sqrt(R.norm() / R.inverse_norm());
  for (int k = -40; k <= 40; ++k) {
    for (const double sgn : {1.0, -1.0}) {
      const cplx z = std::polar(anchor * std::pow(10.0, 0.125 * k), sgn * angle);
      sup = std::max(sup, spectral_norm(z * R.resolvent(z)));
    }
  }
  return sup;
}

struct RayKernels {
  RadialNodes nodes;
  std::vector<cplx> points;  // upper-ray nodes then lower-ray nodes
  Matrix stacked;            // row j: vec(sign_j w_j zeta_j R(zeta_j)) in the original basis
};

RayKernels ray_kernels(const detail::SchurResolvent& R, const ContourSpec& spec) {
  RayKernels k;
  k.nodes = make_radial_nodes(spec);
  const std::size_t n = k.nodes.r.size();
  const Eigen::Index d = R.dim();
  k.stacked.resize(static_cast<Eigen::Index>(2 * n), d * d);
  k.points.resize(2 * n);
  const cplx ep = std::polar(1.0, spec.angle);
  parallel_for(2 * n, [&](std::size_t idx) {
    const bool upper = idx < n;
    const std::size_t j = upper ? idx : idx - n;
    const cplx z = k.nodes.r[j] * (upper ? ep : std::conj(ep));
    k.points[idx] = z;
    const double sign = upper ? 1.0 : -1.0;
    const Matrix m = R.from_schur((sign * k.nodes.weight[j]) * z * R.resolvent(z));
    k.stacked.row(static_cast<Eigen::Index>(idx)) = Eigen::Map<const Eigen::RowVectorXcd>(m.data(), d * d);
  });
  return k;
}

// Coarse-rule mask: even radial index on either ray, doubled.
double coarse_factor(std::size_t idx, std::size_t n) {
  const std::size_t j = idx < n ? idx : idx - n;
  return j % 2 == 0 ? 2.0 : 0.0;
}

JointResult joint_direct(const OperatorMatrix& A, const OperatorMatrix& B, const BivariateFunction& f,
                         const ContourSpec& ca, const ContourSpec& cb) {
  require(f.decay.has_value(), Errc::MissingDecay, "bivariate function has no joint decay certificate");
  const detail::SchurResolvent RA(A);
  const detail::SchurResolvent RB(B);
  const auto cert = *f.decay;
  const double eps = cert.epsilon;
  // Integrating one variable out leaves at most (1/pi)(2/eps) sup||zeta R|| per unit of C.
  const double MA = sampled_sectorial_bound(RA, ca.angle);
  const double MB = sampled_sectorial_bound(RB, cb.angle);
  const double CA = cert.C * MB * 2.0 / (pi * eps);
  const double CB = cert.C * MA * 2.0 / (pi * eps);
  const ContourSpec sa = detail::with_window(
      ca, detail::certificate_window(CA, eps, RA.norm(), RA.inverse_norm(), ca.tail_tolerance));
  const ContourSpec sb = detail::with_window(
      cb, detail::certificate_window(CB, eps, RB.norm(), RB.inverse_norm(), cb.tail_tolerance));

  const RayKernels ka = ray_kernels(RA, sa);
  const RayKernels kb = ray_kernels(RB, sb);
  const auto na = static_cast<Eigen::Index>(ka.points.size());
  const auto nb = static_cast<Eigen::Index>(kb.points.size());
  const Eigen::Index d = A.dim();

  Matrix coeff(na, nb);
  parallel_for(static_cast<std::size_t>(na), [&](std::size_t i) {
    for (Eigen::Index j = 0; j < nb; ++j)
      coeff(static_cast<Eigen::Index>(i), j) = f(ka.points[i], kb.points[static_cast<std::size_t>(j)]);
  });
  // Inner integrals over the B contour for every A node, fine and coarse rule.
  Matrix kb_coarse = kb.stacked;
  for (Eigen::Index j = 0; j < nb; ++j)
    kb_coarse.row(j) *= coarse_factor(static_cast<std::size_t>(j), kb.nodes.r.size());
  const Matrix G = coeff * kb.stacked;
  const Matrix Gc = coeff * kb_coarse;

  const std::size_t n_a = ka.nodes.r.size();
  auto outer = [&](const Matrix& inner, bool coarse_a) {
    return detail::accumulate(static_cast<std::size_t>(na), d, d, [&](std::size_t i) -> Matrix {
      const double factor = coarse_a ? coarse_factor(i, n_a) : 1.0;
      if (factor == 0.0) return Matrix::Zero(d, d);
      const auto row = static_cast<Eigen::Index>(i);
      Matrix ka_i(d, d);
      Matrix g_i(d, d);
      for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index r = 0; r < d; ++r) {
          ka_i(r, c) = ka.stacked(row, c * d + r);
          g_i(r, c) = inner(row, c * d + r);
        }
      return factor * (ka_i * g_i);
    }).fine;
  };
  const cplx scale = minus_one_over_two_pi_i * minus_one_over_two_pi_i;
  const Matrix fine = scale * outer(G, false);
  const Matrix coarse_a = scale * outer(G, true);
  const Matrix coarse_b = scale * outer(Gc, false);

  JointResult out;
  out.value = fine;
  out.regularized = false;
  out.report_a.angle = sa.angle;
  out.report_a.r_min = ka.nodes.r_min;
  out.report_a.r_max = ka.nodes.r_max;
  out.report_a.nodes = ka.points.size();
  out.report_a.truncation_bound =
      detail::certificate_tail(CA, eps, RA.norm(), RA.inverse_norm(), ka.nodes.r_min, ka.nodes.r_max);
  out.report_a.discretization_estimate = spectral_norm(fine - coarse_a);
  out.report_b.angle = sb.angle;
  out.report_b.r_min = kb.nodes.r_min;
  out.report_b.r_max = kb.nodes.r_max;
  out.report_b.nodes = kb.points.size();
  out.report_b.truncation_bound =
      detail::certificate_tail(CB, eps, RB.norm(), RB.inverse_norm(), kb.nodes.r_min, kb.nodes.r_max);
  out.report_b.discretization_estimate = spectral_norm(fine - coarse_b);
  return out;
}

}  // namespace

JointResult joint_fcalc(const OperatorMatrix& A, const OperatorMatrix& B, const BivariateFunction& f,
                        const ContourSpec& ca, const ContourSpec& cb, const JointOptions& options) {
  check_commuting(A, B);
  ca.validate();
  cb.validate();
  check_angles(A, ca.angle, f.domain_angle_a);
  check_angles(B, cb.angle, f.domain_angle_b);

  bool regularize = options.route == JointRoute::Regularized;
  if (options.route == JointRoute::Automatic) regularize = !f.decay.has_value();
  if (options.route == JointRoute::Direct && !f.decay)
    fail(Errc::MissingDecay, "direct joint route needs a joint decay certificate");
  if (!regularize) return joint_direct(A, B, f, ca, cb);

  const double n = options.n;
  require(n >= 2.0, Errc::InvalidArgument, "regularization index must be >= 2");
  const double sup = sampled_bivariate_sup(f, f.domain_angle_a, f.domain_angle_b);
  require(std::isfinite(sup), Errc::InvalidArgument, "bivariate function is unbounded on its sectors");
  const ScalarFunction pa = fn::phi(n, f.domain_angle_a);
  const ScalarFunction pb = fn::phi(n, f.domain_angle_b);
  BivariateFunction g;
  g.evaluator = [fe = f.evaluator, n](cplx w, cplx z) { return phi_n(n, w) * phi_n(n, z) * fe(w, z); };
  g.domain_angle_a = f.domain_angle_a;
  g.domain_angle_b = f.domain_angle_b;
  g.decay = DecayCertificate{1.05 * sup * pa.decay->C * pb.decay->C, 1.0};
  JointResult r = joint_direct(A, B, g, ca, cb);
  const Matrix VA = approximate_identity(A, n).matrix();
  const Matrix VB = approximate_identity(B, n).matrix();
  // (psi_n f)(A,B) = f(A,B) V_n(A) V_n(B), all factors commuting.
  const Matrix V = VA * VB;
  r.value = V.transpose().partialPivLu().solve(r.value.transpose()).transpose();
  r.regularized = true;
  return r;
}

}  // namespace sectorial
