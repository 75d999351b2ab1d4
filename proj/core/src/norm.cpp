#include "sectorial/norm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sectorial/error.hpp"

namespace sectorial {

namespace {

bool valid_exponent(double p) { return p >= 1.0 && (std::isfinite(p) || std::isinf(p)); }

// l_p norm of a vector of nonnegative reals, scaled to avoid overflow.
double lp_of_moduli(const RealVector& a, double p) {
  if (a.size() == 0) return 0.0;
  const double m = a.maxCoeff();
  if (m == 0.0) return 0.0;
  if (std::isinf(p)) return m;
  if (p == 1.0) return a.sum();
  if (p == 2.0) return a.norm();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += std::pow(a(i) / m, p);
  return m * std::pow(acc, 1.0 / p);
}

// Nonnegative weights b with ||b||_{p'} == 1 and sum b_i a_i == ||a||_p.
RealVector lp_dual_weights(const RealVector& a, double p) {
  RealVector b = RealVector::Zero(a.size());
  const double n = lp_of_moduli(a, p);
  if (n == 0.0) return b;
  if (std::isinf(p)) {
    Eigen::Index arg = 0;
    a.maxCoeff(&arg);
    b(arg) = 1.0;
    return b;
  }
  if (p == 1.0) {
    for (Eigen::Index i = 0; i < a.size(); ++i) b(i) = a(i) > 0.0 ? 1.0 : 0.0;
    return b;
  }
  for (Eigen::Index i = 0; i < a.size(); ++i) b(i) = std::pow(a(i) / n, p - 1.0);
  return b;
}

cplx phase(cplx z) {
  const double r = std::abs(z);
  return r > 0.0 ? z / r : cplx{0.0, 0.0};
}

RealVector moduli(const Vector& x) { return x.cwiseAbs(); }

RealVector block_norms(const Vector& x, Eigen::Index points, Eigen::Index block, double q) {
  RealVector a(points);
  for (Eigen::Index j = 0; j < points; ++j) a(j) = lp_of_moduli(moduli(x.segment(j * block, block)), q);
  return a;
}

Vector lp_dual_vector(const Vector& x, double p) {
  const RealVector b = lp_dual_weights(moduli(x), p);
  Vector y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y(i) = b(i) * phase(x(i));
  return y;
}

}  // namespace

double dual_exponent(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return inf_exponent;
  return p / (p - 1.0);
}

NormSpec NormSpec::lp(Eigen::Index dim, double p) {
  require(dim >= 1, Errc::InvalidArgument, "norm dimension must be positive");
  require(valid_exponent(p), Errc::InvalidArgument, "exponent p must lie in [1, inf]");
  NormSpec n;
  n.kind_ = Kind::Lp;
  n.points_ = 1;
  n.block_ = dim;
  n.p_ = p;
  n.q_ = p;
  return n;
}

NormSpec NormSpec::grid(Eigen::Index points, Eigen::Index block, double p, double q, double scale) {
  require(points >= 1 && block >= 1, Errc::InvalidArgument, "grid dimensions must be positive");
  require(valid_exponent(p) && valid_exponent(q), Errc::InvalidArgument,
          "grid exponents must lie in [1, inf]");
  require(scale > 0.0 && std::isfinite(scale), Errc::InvalidArgument, "grid scale must be positive");
  NormSpec n;
  n.kind_ = Kind::Grid;
  n.points_ = points;
  n.block_ = block;
  n.p_ = p;
  n.q_ = q;
  n.scale_ = scale;
  return n;
}

NormSpec NormSpec::with_dim(Eigen::Index dim) const {
  if (kind_ == Kind::Lp) return lp(dim, p_);
  require(dim == this->dim(), Errc::InvalidArgument, "grid norm cannot change dimension");
  return *this;
}

double NormSpec::norm(const Vector& x) const {
  require(x.size() == dim(), Errc::InvalidArgument, "vector dimension does not match norm");
  if (kind_ == Kind::Lp) return lp_of_moduli(moduli(x), p_);
  return scale_ * lp_of_moduli(block_norms(x, points_, block_, q_), p_);
}

NormSpec NormSpec::dual() const {
  if (kind_ == Kind::Lp) return lp(block_, dual_exponent(p_));
  return grid(points_, block_, dual_exponent(p_), dual_exponent(q_), 1.0 / scale_);
}

double NormSpec::dual_norm(const Vector& y) const { return dual().norm(y); }

Vector NormSpec::dual_vector(const Vector& x) const {
  require(x.size() == dim(), Errc::InvalidArgument, "vector dimension does not match norm");
  if (kind_ == Kind::Lp) return lp_dual_vector(x, p_);
  const RealVector a = block_norms(x, points_, block_, q_);
  const RealVector b = lp_dual_weights(a, p_);
  Vector y = Vector::Zero(x.size());
  for (Eigen::Index j = 0; j < points_; ++j) {
    if (b(j) == 0.0) continue;
    y.segment(j * block_, block_) = scale_ * b(j) * lp_dual_vector(x.segment(j * block_, block_), q_);
  }
  return y;
}

bool NormSpec::has_exact_operator_norm() const noexcept {
  const bool lp_like = kind_ == Kind::Lp || p_ == q_ || points_ == 1;
  const double e = kind_ == Kind::Lp || points_ > 1 ? p_ : q_;
  return lp_like && (e == 1.0 || e == 2.0 || std::isinf(e));
}

std::string NormSpec::describe() const {
  auto fmt = [](double e) {
    std::ostringstream os;
    if (std::isinf(e)) os << "inf";
    else os << e;
    return os.str();
  };
  std::ostringstream os;
  if (kind_ == Kind::Lp) {
    os << "l" << fmt(p_) << "(" << block_ << ")";
  } else {
    os << "L" << fmt(p_) << "(" << points_ << "; l" << fmt(q_) << "(" << block_ << "))";
  }
  return os.str();
}

namespace {

double effective_exponent(const NormSpec& n) {
  if (n.kind() == NormSpec::Kind::Lp || n.points() > 1) return n.p();
  return n.q();
}

Matrix dense_of(const LinearMap& op) {
  Matrix m(op.rows, op.cols);
  for (Eigen::Index j = 0; j < op.cols; ++j) m.col(j) = op.apply(Vector::Unit(op.cols, j));
  return m;
}

OperatorNormResult exact_operator_norm(const LinearMap& op, const NormSpec& norm) {
  OperatorNormResult r;
  r.exact = true;
  const double p = effective_exponent(norm);
  if (p == 2.0) {
    if (op.cols <= 512) {
      const Matrix m = dense_of(op);
      Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinV);
      r.value = svd.singularValues()(0);
      r.witness = svd.matrixV().col(0);
    } else {
      const auto l = largest_singular_value(op);
      r.value = l.value;
      r.witness = l.right_vector;
    }
    r.witness /= norm.norm(r.witness);
    return r;
  }
  const Matrix m = dense_of(op);
  if (p == 1.0) {
    Eigen::Index arg = 0;
    r.value = m.cwiseAbs().colwise().sum().maxCoeff(&arg);
    r.witness = Vector::Unit(op.cols, arg);
  } else {
    Eigen::Index arg = 0;
    r.value = m.cwiseAbs().rowwise().sum().maxCoeff(&arg);
    r.witness = Vector(op.cols);
    for (Eigen::Index j = 0; j < op.cols; ++j) {
      const cplx a = m(arg, j);
      r.witness(j) = std::abs(a) > 0.0 ? std::conj(a) / std::abs(a) : cplx{1.0, 0.0};
    }
  }
  r.witness /= norm.norm(r.witness);
  return r;
}

}  // namespace

ConvexAscentResult maximize_convex_on_sphere(const std::function<double(const Vector&)>& phi,
                                             const std::function<Vector(const Vector&)>& gradient,
                                             const NormSpec& in, Vector start, int max_iterations,
                                             double rel_tol) {
  ConvexAscentResult best;
  const double n0 = in.norm(start);
  if (n0 == 0.0) start = Vector::Ones(in.dim());
  Vector x = start / in.norm(start);
  double value = phi(x);
  best.value = value;
  best.witness = x;
  for (int it = 0; it < max_iterations; ++it) {
    const Vector g = gradient(x);
    if (g.norm() == 0.0) break;
    Vector next = in.predual_vector(g);
    const double nn = in.norm(next);
    if (nn == 0.0) break;
    next /= nn;
    const double v = phi(next);
    if (v > best.value) {
      best.value = v;
      best.witness = next;
    }
    if (v <= value * (1.0 + rel_tol)) break;
    value = v;
    x = std::move(next);
  }
  return best;
}

OperatorNormResult operator_norm(const LinearMap& op, const NormSpec& in, const NormSpec& out,
                                 const OperatorNormOptions& options) {
  require(in.dim() == op.cols && out.dim() == op.rows, Errc::InvalidArgument,
          "operator shape does not match norms");
  if (in == out && in.has_exact_operator_norm()) return exact_operator_norm(op, in);

  auto phi = [&](const Vector& x) { return out.norm(op.apply(x)); };
  auto grad = [&](const Vector& x) { return op.apply_adjoint(out.dual_vector(op.apply(x))); };

  const int starts = std::max(1, options.starts);
  std::vector<ConvexAscentResult> results(static_cast<std::size_t>(starts));
  parallel_for(results.size(), [&](std::size_t i) {
    Vector s;
    if (i == 0) {
      s = Vector::Ones(op.cols);
    } else {
      Rng rng = make_stream(options.seed, i);
      s = complex_gaussian(op.cols, rng);
    }
    results[i] = maximize_convex_on_sphere(phi, grad, in, s, options.max_iterations);
  });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value > results[arg].value) arg = i;
  OperatorNormResult r;
  r.value = results[arg].value;
  r.witness = results[arg].witness;
  r.exact = false;
  return r;
}

OperatorNormResult operator_norm(const Matrix& m, const NormSpec& norm,
                                 const OperatorNormOptions& options) {
  return operator_norm(LinearMap::from_matrix(m), norm, norm, options);
}

bool validate_norm_axioms(const NormSpec& norm, int samples, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  const NormSpec dual = norm.dual();
  for (int i = 0; i < samples; ++i) {
    const Vector x = complex_gaussian(norm.dim(), rng);
    const Vector y = complex_gaussian(norm.dim(), rng);
    const Vector c = complex_gaussian(1, rng);
    const double nx = norm.norm(x);
    const double ny = norm.norm(y);
    if (!(nx > 0.0) || !std::isfinite(nx)) return false;
    if (norm.norm(x + y) > (nx + ny) * (1.0 + 1e-12)) return false;
    if (std::abs(norm.norm(c(0) * x) - std::abs(c(0)) * nx) > 1e-12 * std::abs(c(0)) * nx + 1e-300)
      return false;
    const Vector d = norm.dual_vector(x);
    if (std::abs(dual.norm(d) - 1.0) > 1e-10) return false;
    if (std::abs(d.dot(x) - nx) > 1e-10 * nx) return false;
    if (std::abs(y.dot(x)) > nx * dual.norm(y) * (1.0 + 1e-12)) return false;
  }
  return true;
}

}  // namespace sectorial
