#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "quadrature.hpp"
#include "sectorial/error.hpp"
#include "sectorial/linalg.hpp"
#include "sectorial/operators.hpp"
#include "sectorial/serialize.hpp"
#include "sectorial/sums.hpp"

namespace sectorial {

namespace {

Matrix matrix_power(const Matrix& X, Eigen::Index k) {
  Matrix out = Matrix::Identity(X.rows(), X.cols());
  Matrix base = X;
  for (; k > 0; k >>= 1) {
    if (k & 1) out = out * base;
    base = base * base;
  }
  return out;
}

void require_analytic(const OperatorMatrix& A) {
  if (!(spectral_angle(A).angle() < pi / 2)) fail(Errc::AngleExceeded, "spectral angle must be below pi/2");
}

// Causal map f -> g with g_j = S f_{j-k0} + C w_j and w_j = P w_{j-1} + Q f_{j-lag}
// (entries with negative index are zero). Both kernels used here are of this
// form, so apply and adjoint cost O(m d^2).
struct CausalRecurrence {
  Eigen::Index m = 0;
  Eigen::Index d = 0;
  Matrix S, C, P, Q;
  Eigen::Index k0 = 0;
  Eigen::Index lag = 0;

  Eigen::Index size() const { return m * d; }

  Vector apply(const Vector& f) const {
    Vector out = Vector::Zero(size());
    Vector w = Vector::Zero(d);
    for (Eigen::Index j = 0; j < m; ++j) {
      w = P * w;
      if (j >= lag) w.noalias() += Q * f.segment((j - lag) * d, d);
      out.segment(j * d, d).noalias() = C * w;
      if (j >= k0) out.segment(j * d, d).noalias() += S * f.segment((j - k0) * d, d);
    }
    return out;
  }

  Vector apply_adjoint(const Vector& g) const {
    Vector out = Vector::Zero(size());
    Vector z = Vector::Zero(d);
    for (Eigen::Index t = m - 1; t >= 0; --t) {
      z = P.adjoint() * z;
      z.noalias() += C.adjoint() * g.segment(t * d, d);
      if (t >= lag) out.segment((t - lag) * d, d).noalias() += Q.adjoint() * z;
      if (t >= k0) out.segment((t - k0) * d, d).noalias() += S.adjoint() * g.segment(t * d, d);
    }
    return out;
  }

  LinearMap map() const {
    LinearMap L;
    L.rows = L.cols = size();
    L.apply = [this](const Vector& f) { return apply(f); };
    L.apply_adjoint = [this](const Vector& g) { return apply_adjoint(g); };
    return L;
  }
};

struct MapNorm {
  double value = 0.0;
  bool exact = false;
};

MapNorm map_norm(const LinearMap& L, const NormSpec& in, const NormSpec& out, bool hilbert,
                 const OperatorNormOptions& options) {
  if (hilbert) {
    const LanczosResult r = largest_singular_value(L);
    return {r.value, r.converged};
  }
  return {operator_norm(L, in, out, options).value, false};
}

// A y for y_j = M (y_{j-1} + h f_j), M = (I + hA)^{-1}.
CausalRecurrence euler_kernel(const Matrix& A, double h, int m) {
  const Eigen::Index d = A.rows();
  const Matrix M = (Matrix::Identity(d, d) + h * A).partialPivLu().inverse();
  CausalRecurrence c;
  c.m = m;
  c.d = d;
  c.S = Matrix::Zero(d, d);
  c.C = A;
  c.P = M;
  c.Q = h * M;
  return c;
}

RegularityLevel regularity_level(const Matrix& A, double T, int m, double p, double q,
                                 const MaxregOptions& options) {
  const double h = T / m;
  const CausalRecurrence conv = euler_kernel(A, h, m);
  const Eigen::Index n = conv.size();
  const bool hilbert = p == 2.0 && q == 2.0;
  const double scale = std::pow(h, 1.0 / p);
  const NormSpec in = NormSpec::grid(m, A.rows(), p, q, scale);
  const NormSpec out2 = NormSpec::grid(2 * m, A.rows(), p, q, scale);

  const LinearMap ay = conv.map();
  LinearMap dy;
  dy.rows = dy.cols = n;
  dy.apply = [&](const Vector& f) -> Vector { return f - conv.apply(f); };
  dy.apply_adjoint = [&](const Vector& g) -> Vector { return g - conv.apply_adjoint(g); };
  LinearMap joint;
  joint.rows = 2 * n;
  joint.cols = n;
  joint.apply = [&](const Vector& f) -> Vector {
    const Vector a = conv.apply(f);
    Vector r(2 * n);
    r << f - a, a;
    return r;
  };
  joint.apply_adjoint = [&](const Vector& g) -> Vector {
    return g.head(n) - conv.apply_adjoint(g.head(n)) + conv.apply_adjoint(g.tail(n));
  };

  RegularityLevel level;
  level.m = m;
  const MapNorm a = map_norm(ay, in, in, hilbert, options.search);
  level.constant = a.value;
  level.derivative_part = map_norm(dy, in, in, hilbert, options.search).value;
  level.joint = map_norm(joint, in, out2, hilbert, options.search).value;
  level.exact = hilbert && a.exact;
  return level;
}

void check_problem(const CauchyProblem& p) {
  require(p.A.rows() == p.A.cols() && p.A.rows() > 0, Errc::InvalidArgument, "A must be square");
  require(p.m >= 8, Errc::InvalidArgument, "need at least 8 grid points");
  require(p.p > 1.0 && std::isfinite(p.p), Errc::InvalidArgument, "p must lie in (1, inf)");
  require(p.q >= 1.0, Errc::InvalidArgument, "q must be at least 1");
  require(p.T > 0.0, Errc::InvalidArgument, "horizon must be positive");
}

}  // namespace

Matrix solve_cauchy(const CauchyProblem& problem) {
  check_problem(problem);
  const Eigen::Index d = problem.A.rows();
  require(problem.forcing.rows() == problem.m && problem.forcing.cols() == d, Errc::InvalidArgument,
          "forcing must be m x d");
  const double h = problem.T / problem.m;
  const Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(d, d) + h * problem.A);
  Matrix y(problem.m, d);
  Vector prev = Vector::Zero(d);
  for (int j = 0; j < problem.m; ++j) {
    prev = lu.solve(prev + h * Vector(problem.forcing.row(j).transpose()));
    y.row(j) = prev.transpose();
  }
  return y;
}

RegularityReport maximal_regularity_constant(const CauchyProblem& problem, int levels, const MaxregOptions& options) {
  check_problem(problem);
  require(levels >= 1, Errc::InvalidArgument, "need at least one refinement level");
  require_analytic(OperatorMatrix(problem.A));
  RegularityReport r;
  r.p = problem.p;
  r.method = problem.p == 2.0 && problem.q == 2.0 ? "implicit-euler-lanczos" : "implicit-euler-boyd";
  std::vector<RegularityLevel> trace(static_cast<std::size_t>(levels));
  parallel_for(trace.size(), [&](std::size_t l) {
    trace[l] = regularity_level(problem.A, problem.T, problem.m << l, problem.p, problem.q, options);
  });
  r.trace = std::move(trace);
  r.constant = r.trace.back().constant;
  r.details = {{"T", problem.T}, {"q", real_to_json(problem.q)}, {"m0", problem.m}, {"levels", levels}};
  return r;
}

std::string trace_csv(const RegularityReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "m,constant,derivative_part,joint,exact\n";
  for (const RegularityLevel& l : r.trace)
    os << l.m << ',' << l.constant << ',' << l.derivative_part << ',' << l.joint << ',' << (l.exact ? 1 : 0) << '\n';
  return os.str();
}

void to_json(nlohmann::json& j, const RegularityReport& r) {
  json trace = json::array();
  for (const RegularityLevel& l : r.trace)
    trace.push_back({{"m", l.m},
                     {"constant", l.constant},
                     {"derivative_part", l.derivative_part},
                     {"joint", l.joint},
                     {"exact", l.exact}});
  j = {{"constant", r.constant}, {"p", r.p}, {"method", r.method}, {"trace", trace}, {"details", r.details}};
}

BoundEstimate s_delta_norm(const OperatorMatrix& A, double delta, double p, const TimeGrid& grid,
                           const OperatorNormOptions& options) {
  require(delta > 0.0, Errc::InvalidArgument, "delta must be positive");
  require(p >= 1.0, Errc::InvalidArgument, "p must be at least 1");
  require(grid.m >= 1 && grid.T > 0.0, Errc::InvalidArgument, "invalid time grid");
  require_analytic(A);
  const Eigen::Index d = A.dim();
  const double h = grid.T / grid.m;
  const Matrix E = (-h * A.matrix()).exp();
  const Matrix Edelta = (-delta * A.matrix()).exp();
  // Cell k integrates A e^{-uA} over [max(delta, kh), (k+1)h]; from the first
  // cell past delta on, the cells are E^k (I - E).
  const auto k0 = static_cast<Eigen::Index>(std::floor(delta / h));
  const bool zero = k0 >= grid.m;
  CausalRecurrence conv;
  conv.m = grid.m;
  conv.d = d;
  conv.k0 = k0;
  conv.lag = k0 + 1;
  if (!zero) {
    const Matrix Ek = matrix_power(E, k0);
    const double lo = static_cast<double>(k0) * h;
    conv.S = (lo >= delta ? Ek : Edelta) - Ek * E;
    conv.C = Matrix::Identity(d, d);
    conv.P = E;
    conv.Q = Ek * E * (Matrix::Identity(d, d) - E);
  }
  const bool hilbert = p == 2.0 && grid.q == 2.0;
  const NormSpec norm = NormSpec::grid(grid.m, d, p, grid.q, std::pow(h, 1.0 / p));
  const MapNorm n = zero ? MapNorm{0.0, true} : map_norm(conv.map(), norm, norm, hilbert, options);

  BoundEstimate b;
  b.value = n.value;
  b.method = hilbert ? "s-delta-lanczos" : "s-delta-boyd";
  b.mode = hilbert ? SearchMode::Exhaustive : SearchMode::Randomized;
  b.seed = options.seed;
  b.is_lower_bound = !n.exact;
  b.witness = {{"delta", delta}};
  b.details = {{"p", real_to_json(p)}, {"q", real_to_json(grid.q)}, {"T", grid.T}, {"m", grid.m}};
  return b;
}

std::vector<BoundEstimate> s_delta_sweep(const OperatorMatrix& A, const std::vector<double>& deltas, double p,
                                         const TimeGrid& grid, const OperatorNormOptions& options) {
  std::vector<BoundEstimate> out(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) out[i] = s_delta_norm(A, deltas[i], p, grid, options);
  return out;
}

GtResult gt_absolute_integral(const OperatorMatrix& A, double s, double nu, const Vector& x, const NormSpec& norm,
                              int nodes_per_decade) {
  if (!(norm.kind() == NormSpec::Kind::Lp && norm.p() == 1.0))
    fail(Errc::UnsupportedNorm, "the absolute integral is defined for l1 only");
  require(norm.dim() == A.dim() && x.size() == A.dim(), Errc::InvalidArgument, "dimension mismatch");
  require(s > 0.0 && s < 1.0, Errc::InvalidArgument, "fractional exponent must lie in (0, 1)");
  require(nu > 0.0 && nu < pi, Errc::InvalidArgument, "angle must lie in (0, pi)");
  if (!(nu > spectral_angle(A).angle())) fail(Errc::NotSectorial, "nu must exceed the spectral angle");
  GtResult g;
  const double xnorm = norm.norm(x);
  if (xnorm == 0.0) return g;

  const detail::SchurResolvent R(A);
  const Matrix As = fractional_power(A, s).matrix();
  const Vector Tx = R.to_schur(As) * (R.unitary().adjoint() * x);
  const Matrix& U = R.unitary();
  const auto moduli = A.eigen().values.cwiseAbs();
  ContourSpec c;
  c.angle = nu;
  c.nodes_per_decade = nodes_per_decade;
  c.r_min = moduli.minCoeff() * 1e-6;
  c.r_max = moduli.maxCoeff() * 1e6;
  const RadialNodes nodes = make_radial_nodes(c);
  const cplx ep = std::polar(1.0, nu);
  std::vector<double> terms(nodes.r.size());
  parallel_for(nodes.r.size(), [&](std::size_t j) {
    const double r = nodes.r[j];
    const double a = norm.norm(U * (R.resolvent(r * ep) * Tx));
    const double b = norm.norm(U * (R.resolvent(r * std::conj(ep)) * Tx));
    terms[j] = nodes.weight[j] * std::pow(r, 1.0 - s) * (a + b);
  });
  PairwiseSum<double> sum;
  for (const double t : terms) sum.add(t);
  // Small r: A^s R(zeta) x ~ -A^{s-1} x; large r: ~ zeta^{-1} A^s x.
  const Matrix Asm1 = A.matrix().partialPivLu().solve(As);
  const double head = 2.0 * norm.norm(Asm1 * x) * std::pow(nodes.r_min, 1.0 - s) / (1.0 - s);
  const double tail = 2.0 * norm.norm(As * x) * std::pow(nodes.r_max, -s) / s;
  g.value = sum.result(0.0) + head + tail;
  g.ratio = g.value / xnorm;
  g.nodes = 2 * nodes.r.size();
  return g;
}

}  // namespace sectorial
