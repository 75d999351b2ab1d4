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

cplx sector_to_disk(cplx z, double angle) {
  const cplx w = principal_pow(z, pi / (2.0 * angle));
  return (w - 1.0) / (w + 1.0);
}

namespace {

// Stacked quadrature kernels for f(A) = (-1/2 pi i) sum_j f(zeta_j) K_j with
// K_j = +-w_j zeta_j^{1/2} A^{1/2} R(zeta_j, A); valid for every bounded f
// (|f| <= 1) holomorphic on a sector beyond the contour.
struct BoundedKernel {
  std::vector<cplx> points;
  Matrix stacked;  // row j: vec(K_j) in the original basis
  Eigen::Index dim = 0;
  double truncation_bound = 0.0;

  Matrix apply(const std::function<cplx(cplx)>& f) const {
    Eigen::RowVectorXcd coeff(static_cast<Eigen::Index>(points.size()));
    for (std::size_t j = 0; j < points.size(); ++j) coeff(static_cast<Eigen::Index>(j)) = f(points[j]);
    const Eigen::RowVectorXcd flat = coeff * stacked;
    Matrix m(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c)
      for (Eigen::Index r = 0; r < dim; ++r) m(r, c) = flat(c * dim + r);
    return (-1.0 / (2.0 * pi * I_unit)) * m;
  }
};

BoundedKernel bounded_kernel(const OperatorMatrix& A, double nu, int nodes_per_decade) {
  constexpr double s = 0.5;
  const detail::SchurResolvent R(A);
  const Matrix As = fractional_power(A, s).matrix();
  const Matrix Ts = R.to_schur(As);
  const double norm_As = spectral_norm(As);
  const double norm_Asm1 = spectral_norm(A.matrix().partialPivLu().solve(As));
  ContourSpec c;
  c.angle = nu;
  c.nodes_per_decade = nodes_per_decade;
  const detail::Window w =
      detail::altdef_window(1.0, s, norm_As, norm_Asm1, R.norm(), R.inverse_norm(), c.tail_tolerance);
  c = detail::with_window(c, w);
  const RadialNodes nodes = make_radial_nodes(c);
  const std::size_t n = nodes.r.size();
  const Eigen::Index d = A.dim();
  BoundedKernel k;
  k.dim = d;
  k.truncation_bound = w.tail;
  k.points.resize(2 * n);
  k.stacked.resize(static_cast<Eigen::Index>(2 * n), d * d);
  const cplx ep = std::polar(1.0, nu);
  parallel_for(2 * n, [&](std::size_t idx) {
    const bool upper = idx < n;
    const std::size_t j = upper ? idx : idx - n;
    const cplx z = nodes.r[j] * (upper ? ep : std::conj(ep));
    k.points[idx] = z;
    const double sign = upper ? 1.0 : -1.0;
    const Matrix m = R.from_schur((sign * nodes.weight[j]) * principal_pow(z, 1.0 - s) * (Ts * R.resolvent(z)));
    k.stacked.row(static_cast<Eigen::Index>(idx)) = Eigen::Map<const Eigen::RowVectorXcd>(m.data(), d * d);
  });
  return k;
}

struct TestFunction {
  std::function<cplx(cplx)> f;
  json description;
};

TestFunction blaschke_sample(Rng& rng, int max_degree, double sigma) {
  std::uniform_int_distribution<int> degree_dist(0, max_degree);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int degree = degree_dist(rng);
  std::vector<cplx> zeros(static_cast<std::size_t>(degree));
  for (auto& a : zeros) a = std::polar(0.98 * std::sqrt(unit(rng)), 2.0 * pi * unit(rng));
  const double rotation = 2.0 * pi * unit(rng);
  TestFunction t;
  t.f = [zeros, rotation, sigma](cplx z) {
    const cplx w = sector_to_disk(z, sigma);
    cplx acc = std::polar(1.0, rotation);
    for (const cplx a : zeros) acc *= (w - a) / (1.0 - std::conj(a) * w);
    return acc;
  };
  json zj = json::array();
  for (const cplx a : zeros) zj.push_back(complex_to_json(a));
  t.description = {{"family", "blaschke"}, {"degree", degree}, {"zeros", zj}, {"rotation", rotation}};
  return t;
}

TestFunction rational_sample(Rng& rng, double sigma) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pole = [&] {
    const double arg = sigma + (pi - sigma) * (0.1 + 0.9 * unit(rng));
    const double radius = std::pow(10.0, -1.0 + 2.0 * unit(rng));
    return std::polar(radius, unit(rng) < 0.5 ? arg : -arg);
  };
  const cplx p = pole();
  const cplx q = pole();
  TestFunction t;
  t.f = [p, q](cplx z) { return z / ((z - p) * (z - q)); };
  t.description = {{"family", "rational"}, {"poles", {complex_to_json(p), complex_to_json(q)}}};
  return t;
}

}  // namespace

BoundEstimate hinfty_constant(const OperatorMatrix& A, const Sector& sigma, const NormSpec& norm,
                              const HinftyFamilyConfig& config) {
  require(norm.dim() == A.dim(), Errc::InvalidArgument, "norm dimension does not match operator");
  const double omega = spectral_angle(A).angle();
  if (!(sigma.angle() > omega)) fail(Errc::NotSectorial, "sector angle must exceed the spectral angle");
  const double nu = 0.5 * (omega + sigma.angle());
  const BoundedKernel kernel = bounded_kernel(A, nu, config.nodes_per_decade);
  const detail::MatrixNorm mnorm(norm);

  const int total = config.samples + config.rational_samples;
  std::vector<double> ratios(static_cast<std::size_t>(total), 0.0);
  std::vector<json> descriptions(static_cast<std::size_t>(total));
  std::vector<double> sups(static_cast<std::size_t>(total), 0.0);
  parallel_for(static_cast<std::size_t>(total), [&](std::size_t i) {
    Rng rng = make_stream(config.seed, i);
    const TestFunction t = static_cast<int>(i) < config.samples ? blaschke_sample(rng, config.max_degree, sigma.angle())
                                                                : rational_sample(rng, sigma.angle());
    const double sup = sampled_sup(t.f, sigma.angle());
    const double value = mnorm(kernel.apply(t.f));
    ratios[i] = sup > 0.0 ? value / sup : 0.0;
    sups[i] = sup;
    descriptions[i] = t.description;
  });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < ratios.size(); ++i)
    if (ratios[i] > ratios[arg]) arg = i;

  BoundEstimate b;
  b.value = ratios.empty() ? 0.0 : ratios[arg];
  b.method = "hinfty-test-family";
  b.mode = SearchMode::Randomized;
  b.seed = config.seed;
  b.samples = static_cast<std::uint64_t>(total);
  b.witness = descriptions.empty() ? json::object() : descriptions[arg];
  if (!descriptions.empty()) b.witness["sampled_sup"] = sups[arg];
  b.details = {{"sigma", sigma.angle()},
               {"contour_angle", nu},
               {"nodes", kernel.points.size()},
               {"truncation_bound", kernel.truncation_bound},
               {"norm", norm_to_json(norm)}};
  return b;
}

}  // namespace sectorial
