#include "quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "sectorial/error.hpp"
#include "sectorial/linalg.hpp"

namespace sectorial::detail {

SchurResolvent::SchurResolvent(const OperatorMatrix& A) {
  Eigen::ComplexSchur<Matrix> schur(A.matrix(), true);
  u_ = schur.matrixU();
  t_ = schur.matrixT();
  norm_ = A.norm();
  const double smin = smallest_singular_value(A.matrix());
  if (!(smin > 1e-14 * norm_)) fail(Errc::NotSectorial, "operator is singular");
  inverse_norm_ = 1.0 / smin;
}

Matrix SchurResolvent::resolvent(cplx zeta) const {
  const Eigen::Index d = dim();
  Matrix m = -t_;
  m.diagonal().array() += zeta;
  const double gap = m.diagonal().cwiseAbs().minCoeff();
  if (!(gap >= 1e-12 * norm_)) fail(Errc::SingularResolvent, "contour node hits the spectrum");
  return m.triangularView<Eigen::Upper>().solve(Matrix::Identity(d, d));
}

namespace {

double clamp_window(double r) { return std::clamp(r, window_floor, window_ceiling); }

}  // namespace

double certificate_tail(double C, double eps, double norm, double inverse_norm, double r_min,
                        double r_max) {
  double tail = 0.0;
  if (r_max >= 2.0 * norm) tail += 2.0 * C / (pi * eps) * std::pow(r_max, -eps);
  else tail = std::numeric_limits<double>::infinity();
  if (r_min * 2.0 * inverse_norm <= 1.0)
    tail += 2.0 * C * inverse_norm / (pi * (1.0 + eps)) * std::pow(r_min, 1.0 + eps);
  else tail = std::numeric_limits<double>::infinity();
  return tail;
}

Window certificate_window(double C, double eps, double norm, double inverse_norm, double tol) {
  Window w;
  w.r_max = clamp_window(std::max(2.0 * norm, std::pow(2.0 * C / (pi * eps * tol), 1.0 / eps)));
  w.r_min = clamp_window(std::min(1.0 / (2.0 * inverse_norm),
                                  std::pow(pi * (1.0 + eps) * tol / (2.0 * C * inverse_norm), 1.0 / (1.0 + eps))));
  w.tail = certificate_tail(C, eps, norm, inverse_norm, w.r_min, w.r_max);
  return w;
}

double altdef_tail(double F_sup, double s, double norm_As, double norm_Asm1, double norm,
                   double inverse_norm, double r_min, double r_max) {
  double tail = 0.0;
  if (r_max >= 2.0 * norm) tail += 2.0 / pi * F_sup * norm_As * std::pow(r_max, -s) / s;
  else tail = std::numeric_limits<double>::infinity();
  if (r_min * 2.0 * inverse_norm <= 1.0)
    tail += 2.0 / pi * F_sup * norm_Asm1 * std::pow(r_min, 1.0 - s) / (1.0 - s);
  else tail = std::numeric_limits<double>::infinity();
  return tail;
}

Window altdef_window(double F_sup, double s, double norm_As, double norm_Asm1, double norm,
                     double inverse_norm, double tol) {
  Window w;
  const double a = std::max(2.0 / pi * F_sup * norm_As / s, std::numeric_limits<double>::min());
  const double b = std::max(2.0 / pi * F_sup * norm_Asm1 / (1.0 - s), std::numeric_limits<double>::min());
  w.r_max = clamp_window(std::max(2.0 * norm, std::pow(a / tol, 1.0 / s)));
  w.r_min = clamp_window(std::min(1.0 / (2.0 * inverse_norm), std::pow(tol / b, 1.0 / (1.0 - s))));
  w.tail = altdef_tail(F_sup, s, norm_As, norm_Asm1, norm, inverse_norm, w.r_min, w.r_max);
  return w;
}

TwoLevelSum accumulate(std::size_t count, Eigen::Index rows, Eigen::Index cols,
                       const std::function<Matrix(std::size_t)>& term) {
  constexpr std::size_t block = 32;
  const std::size_t blocks = (count + block - 1) / block;
  std::vector<Matrix> fine(blocks);
  std::vector<Matrix> coarse(blocks);
  const Matrix zero = Matrix::Zero(rows, cols);
  parallel_for(blocks, [&](std::size_t b) {
    PairwiseSum<Matrix> f;
    PairwiseSum<Matrix> c;
    const std::size_t end = std::min(count, (b + 1) * block);
    for (std::size_t j = b * block; j < end; ++j) {
      Matrix t = term(j);
      if (j % 2 == 0) c.add(2.0 * t);
      f.add(std::move(t));
    }
    fine[b] = f.result(zero);
    coarse[b] = c.result(zero);
  });
  PairwiseSum<Matrix> f;
  PairwiseSum<Matrix> c;
  for (std::size_t b = 0; b < blocks; ++b) {
    f.add(std::move(fine[b]));
    c.add(std::move(coarse[b]));
  }
  return {f.result(zero), c.result(zero)};
}

ContourSpec with_window(const ContourSpec& c, const Window& fallback) {
  ContourSpec out = c;
  if (!c.has_window()) {
    out.r_min = fallback.r_min;
    out.r_max = fallback.r_max;
  }
  return out;
}

}  // namespace sectorial::detail
