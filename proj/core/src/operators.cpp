#include "sectorial/operators.hpp"

#include <algorithm>
#include <cmath>

#include "sectorial/calculus.hpp"
#include "sectorial/error.hpp"
#include "sectorial/functions.hpp"
#include "sectorial/serialize.hpp"

namespace sectorial {

FractionalExponent::FractionalExponent(double s) : s_(s) {
  require(s > 0.0 && s < 1.0, Errc::InvalidArgument, "fractional exponent must lie in (0, 1)");
}

Matrix resolvent_matrix(const OperatorMatrix& A, cplx lambda) {
  const Eigen::Index d = A.dim();
  const Matrix m = lambda * Matrix::Identity(d, d) - A.matrix();
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smin = sv(d - 1);
  const double scale = std::max(A.norm(), std::numeric_limits<double>::min());
  if (!(smin >= 1e-12 * scale))
    fail(Errc::SingularResolvent, "lambda lies within tolerance of the spectrum");
  return svd.matrixV() * sv.cwiseInverse().cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
}

OperatorMatrix resolvent(const OperatorMatrix& A, cplx lambda) {
  return OperatorMatrix(resolvent_matrix(A, lambda));
}

Sector spectral_angle(const OperatorMatrix& A) {
  const Vector& ev = A.eigen().values;
  const double tiny = 1e-13 * std::max(A.norm(), std::numeric_limits<double>::min());
  double angle = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= tiny) fail(Errc::NotSectorial, "0 is an eigenvalue");
    const double a = std::abs(std::arg(ev(i)));
    if (a >= pi - 1e-12) fail(Errc::NotSectorial, "eigenvalue on the negative real axis");
    angle = std::max(angle, a);
  }
  return Sector::from_spectrum(angle);
}

Matrix apply_eigen(const OperatorMatrix& A, const std::function<cplx(cplx)>& f) {
  const EigenData& e = A.eigen();
  if (!e.diagonalizable)
    fail(Errc::IllConditionedEigenbasis, "eigenvector matrix is ill conditioned");
  Vector fv(e.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(e.values(i));
  return e.vectors * fv.asDiagonal() * e.inverse_vectors;
}

OperatorMatrix approximate_identity(const OperatorMatrix& A, double n) {
  require(n >= 1.0, Errc::InvalidArgument, "approximate identity needs n >= 1");
  const Eigen::Index d = A.dim();
  const Matrix I = Matrix::Identity(d, d);
  if (n == 1.0) return OperatorMatrix(Matrix::Zero(d, d));
  const Matrix first = (n * I + A.matrix()).partialPivLu().solve(n * I);
  const Matrix second = (I + n * A.matrix()).partialPivLu().solve(I);
  return OperatorMatrix(first - second);
}

Matrix fractional_power_contour(const OperatorMatrix& A, double s) {
  const double omega = spectral_angle(A).angle();
  const double domain = omega + 2.0 * (pi - omega) / 3.0;
  const ScalarFunction g = fn::power_over_shift(s, domain);
  const ContourSpec c = ContourSpec::between(omega, domain);
  const Matrix gA = contour_fcalc(A, g, c).value;
  return gA * (Matrix::Identity(A.dim(), A.dim()) + A.matrix());
}

OperatorMatrix fractional_power(const OperatorMatrix& A, FractionalExponent s) {
  spectral_angle(A);
  const double sv = s.value();
  if (A.well_diagonalizable()) return OperatorMatrix(apply_eigen(A, [sv](cplx z) { return principal_pow(z, sv); }));
  return OperatorMatrix(fractional_power_contour(A, sv));
}

namespace {

double resolvent_scaled_norm(const OperatorMatrix& A, cplx zeta, const NormSpec& norm) {
  const Eigen::Index d = A.dim();
  const Matrix m = zeta * Matrix::Identity(d, d) - A.matrix();
  const Matrix r = zeta * m.partialPivLu().inverse();
  if (!r.allFinite()) fail(Errc::SingularResolvent, "resolvent evaluated on the spectrum");
  OperatorNormOptions opts;
  opts.starts = 4;
  opts.max_iterations = 50;
  return operator_norm(r, norm, opts).value;
}

}  // namespace

BoundEstimate sectorial_constant(const OperatorMatrix& A, const Sector& sigma, const NormSpec& norm,
                                 const SectorialGrid& grid) {
  require(norm.dim() == A.dim(), Errc::InvalidArgument, "norm dimension does not match operator");
  const double omega = spectral_angle(A).angle();
  if (!(sigma.angle() > omega)) fail(Errc::NotSectorial, "sector angle must exceed the spectral angle");

  const Vector& ev = A.eigen().values;
  const double lmin = ev.cwiseAbs().minCoeff();
  const double lmax = ev.cwiseAbs().maxCoeff();
  const double h = std::log(10.0) / grid.radii_per_decade;
  const double u0 = std::log(lmin) - grid.margin_decades * std::log(10.0);
  const double u1 = std::log(lmax) + grid.margin_decades * std::log(10.0);
  const auto nr = static_cast<int>(std::ceil((u1 - u0) / h)) + 1;
  const int na = std::max(2, grid.angles);
  const double dth = (pi - sigma.angle()) / (na - 1);

  struct Point {
    double u;
    double theta;
  };
  std::vector<Point> pts;
  for (int k = 0; k < nr; ++k)
    for (int j = 0; j < na; ++j)
      for (const double sgn : {1.0, -1.0}) {
        if (j == na - 1 && sgn < 0) continue;  // +pi and -pi coincide
        pts.push_back({u0 + k * h, sgn * (sigma.angle() + j * dth)});
      }

  std::vector<double> vals(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    vals[i] = resolvent_scaled_norm(A, std::polar(std::exp(pts[i].u), pts[i].theta), norm);
  });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] > vals[arg]) arg = i;

  // Pattern search in (u, |theta|) from the best grid point.
  Point best = pts[arg];
  double value = vals[arg];
  const double sgn = best.theta < 0 ? -1.0 : 1.0;
  double su = h;
  double st = std::max(dth, 1e-3);
  for (int it = 0; it < grid.refine_iterations; ++it) {
    bool moved = false;
    for (const auto& [du, dt] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
      Point cand{best.u + du * su, best.theta + sgn * dt * st};
      const double mag = std::clamp(std::abs(cand.theta), sigma.angle(), pi);
      cand.theta = sgn * mag;
      const double v = resolvent_scaled_norm(A, std::polar(std::exp(cand.u), cand.theta), norm);
      if (v > value) {
        value = v;
        best = cand;
        moved = true;
      }
    }
    if (!moved) {
      su *= 0.5;
      st *= 0.5;
    }
  }

  BoundEstimate b;
  b.value = value;
  b.method = "grid+pattern-search";
  b.mode = SearchMode::Exhaustive;
  b.samples = pts.size();
  const cplx zeta = std::polar(std::exp(best.u), best.theta);
  b.witness = {{"zeta", complex_to_json(zeta)}, {"radius", std::exp(best.u)}, {"arg", best.theta}};
  b.details = {{"sigma", sigma.angle()},
               {"spectral_angle", omega},
               {"radii", nr},
               {"angles", na},
               {"norm", norm_to_json(norm)}};
  return b;
}

}  // namespace sectorial
