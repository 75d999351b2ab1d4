#include <gtest/gtest.h>

#include "sectorial/calculus.hpp"
#include "sectorial/error.hpp"
#include "sectorial/norm.hpp"
#include "sectorial/operators.hpp"
#include "sectorial/rademacher.hpp"
#include "sectorial/serialize.hpp"
#include "support.hpp"

using namespace sectorial;
using namespace sectorial::testing;

namespace {

const SearchConfig quick{8, 80, 42, 8};

std::vector<Vector> columns(const json& j) {
  std::vector<Vector> out;
  for (const auto& c : j) out.push_back(vector_from_json(c));
  return out;
}

std::function<double(const Vector&)> norm_fn(const NormSpec& n) {
  return [n](const Vector& x) { return n.norm(x); };
}

std::function<double(const Vector&)> dual_fn(const NormSpec& n) {
  return [n](const Vector& x) { return n.dual_norm(x); };
}

std::vector<Matrix> gaussian_family(int members, Eigen::Index d, Rng& rng) {
  std::vector<Matrix> F;
  for (int k = 0; k < members; ++k) F.push_back(complex_gaussian(d, d, rng) / std::sqrt(double(d)));
  return F;
}

}  // namespace

TEST(RademacherMean, Examples) {
  Vector x(3);
  x << 1.0, cplx{0.0, -2.0}, 0.5;
  const NormSpec n = NormSpec::lp(3, 1.5);
  EXPECT_NEAR(rademacher_mean({x}, n).value, n.norm(x), 1e-14);

  Rng rng = make_stream(1, 0);
  std::vector<Vector> xs;
  double sq = 0.0;
  for (int k = 0; k < 5; ++k) {
    xs.push_back(complex_gaussian(4, rng));
    sq += xs.back().squaredNorm();
  }
  EXPECT_NEAR(rademacher_mean(xs, NormSpec::lp(4, 2.0)).value, std::sqrt(sq), 1e-13 * std::sqrt(sq));

  Vector e1 = Vector::Zero(2);
  Vector e2 = Vector::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;
  EXPECT_NEAR(rademacher_mean({e1, e2}, NormSpec::lp(2, 1.0)).value, 2.0, 1e-14);
}

TEST(RademacherMean, MatchesBruteForce) {
  Rng rng = make_stream(2, 0);
  for (const double p : {1.0, 1.5, 3.0, inf_exponent}) {
    std::vector<Vector> xs;
    for (int k = 0; k < 7; ++k) xs.push_back(complex_gaussian(3, rng));
    const NormSpec n = NormSpec::lp(3, p);
    const RademacherMean r = rademacher_mean(xs, n);
    EXPECT_TRUE(r.exhaustive);
    EXPECT_NEAR(r.value, brute_rad(xs, norm_fn(n)), 1e-12 * r.value) << "p = " << p;
  }
}

TEST(RademacherMean, MonteCarloWithinStandardErrors) {
  Rng rng = make_stream(3, 0);
  std::vector<Vector> xs;
  for (int k = 0; k < 12; ++k) xs.push_back(complex_gaussian(3, rng));
  const NormSpec n = NormSpec::lp(3, 1.0);
  SignConfig s;
  s.n_max = 4;
  s.samples = 4096;
  const RademacherMean mc = rademacher_mean(xs, n, s);
  EXPECT_FALSE(mc.exhaustive);
  EXPECT_GT(mc.standard_error, 0.0);
  EXPECT_LT(std::abs(mc.value - brute_rad(xs, norm_fn(n))), 5.0 * mc.standard_error);
}

TEST(RBound, HilbertCollapse) {
  Rng rng = make_stream(4, 0);
  for (int trial = 0; trial < 4; ++trial) {
    const OperatorFamily F(gaussian_family(4, 3, rng), NormSpec::lp(3, 2.0));
    const BoundEstimate b = r_bound(F, 3, {}, quick);
    EXPECT_NEAR(b.value, F.uniform_bound(), 0.02 * F.uniform_bound());
    EXPECT_TRUE(b.is_lower_bound);
  }
}

TEST(RBound, ScalarContractionOnEveryNorm) {
  const std::vector<double> c = {0.5, -1.5, 1.0, 0.25};
  for (const NormSpec& n : {NormSpec::lp(3, 1.0), NormSpec::lp(3, 1.5), NormSpec::lp(3, 2.0), NormSpec::lp(3, 4.0),
                            NormSpec::lp(3, inf_exponent), NormSpec::grid(3, 2, 1.5, 3.0, 0.5)}) {
    std::vector<Matrix> members;
    for (const double ck : c) members.push_back(ck * eye(n.dim()));
    const OperatorFamily F(members, n);
    const BoundEstimate b = r_bound(F, 3, {}, quick);
    EXPECT_NEAR(b.value, 1.5, 0.03) << n.describe();
  }
}

TEST(RBound, ComplexScalarsExceedMaxModulusOffHilbert) {
  const std::vector<cplx> c = {0.5, cplx{0.0, -1.5}, 1.0, 0.25};
  for (const double p : {1.0, 2.0, inf_exponent}) {
    const NormSpec n = NormSpec::lp(3, p);
    std::vector<Matrix> members;
    for (const cplx ck : c) members.push_back(ck * eye(3));
    const double v = r_bound(OperatorFamily(members, n), 4, {}, quick).value;
    EXPECT_GE(v, 1.5 * (1.0 - 1e-9));
    EXPECT_LE(v, 1.5 * pi / 2);
    if (p == 2.0) EXPECT_NEAR(v, 1.5, 1e-6);
    else EXPECT_GT(v, 1.5 * 1.1);
  }
}

TEST(RBound, SingletonsGiveOperatorNorm) {
  Matrix T(2, 2);
  T << 1.0, 2.0, cplx{0.0, 1.0}, -1.0;
  for (const double p : {2.0, 1.0, 3.0}) {
    const NormSpec n = NormSpec::lp(2, p);
    const double want = operator_norm(T, n, OperatorNormOptions{32, 400, 1}).value;
    const OperatorFamily F({T}, n);
    for (const BoundEstimate& b : {r_bound(F, 1, {}, quick), wr_bound(F, 1, {}, quick), u_bound(F, 1, {}, quick)})
      EXPECT_NEAR(b.value, want, 1e-6 * want) << b.method << " p = " << p;
  }
}

TEST(RBound, WitnessReevaluates) {
  Rng rng = make_stream(5, 0);
  const NormSpec n = NormSpec::lp(3, 1.5);
  const OperatorFamily F(gaussian_family(4, 3, rng), n);
  const BoundEstimate r = r_bound(F, 3, {}, quick);
  const auto sel = r.witness["selection"].get<std::vector<std::size_t>>();
  const std::vector<Vector> x = columns(r.witness["x"]);
  ASSERT_EQ(sel.size(), x.size());
  std::vector<Vector> tx;
  for (std::size_t k = 0; k < x.size(); ++k) tx.push_back(F.members()[sel[k]] * x[k]);
  EXPECT_NEAR(brute_rad(tx, norm_fn(n)) / brute_rad(x, norm_fn(n)), r.value, 1e-9 * r.value);

  const BoundEstimate w = wr_bound(F, 3, {}, quick);
  const auto wsel = w.witness["selection"].get<std::vector<std::size_t>>();
  const std::vector<Vector> wx = columns(w.witness["x"]);
  const std::vector<Vector> wy = columns(w.witness["x_star"]);
  double pairing = 0.0;
  for (std::size_t k = 0; k < wx.size(); ++k) pairing += std::abs(wy[k].dot(F.members()[wsel[k]] * wx[k]));
  EXPECT_NEAR(pairing / (brute_rad(wx, norm_fn(n)) * brute_rad(wy, dual_fn(n))), w.value, 1e-9 * w.value);
}

TEST(RBound, WeakPairingCauchySchwarz) {
  Rng rng = make_stream(6, 0);
  for (const double p : {1.5, 3.0}) {
    const NormSpec n = NormSpec::lp(3, p);
    std::vector<Matrix> members;
    for (int k = 0; k < 4; ++k) members.push_back(complex_gaussian(3, 3, rng).real().cast<cplx>());
    const OperatorFamily F(members, n);
    const BoundEstimate w = wr_bound(F, 3, {}, quick);
    const auto sel = w.witness["selection"].get<std::vector<std::size_t>>();
    const std::vector<Vector> x = columns(w.witness["x"]);
    const std::vector<Vector> y = columns(w.witness["x_star"]);
    double pairing = 0.0;
    std::vector<Vector> tx, ty;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const Vector v = F.members()[sel[k]] * x[k];
      const cplx c = y[k].dot(v);
      pairing += std::abs(c);
      tx.push_back(v);
      ty.push_back(std::abs(c) > 0.0 ? Vector(y[k] * (c / std::abs(c))) : y[k]);
    }
    EXPECT_LE(pairing, brute_rad(tx, norm_fn(n)) * brute_rad(ty, dual_fn(n)) * (1.0 + 1e-12));
  }
}

TEST(RBound, OrderingOnComplexFamilies) {
  Rng rng = make_stream(7, 0);
  for (const double p : {1.5, 3.0}) {
    for (int trial = 0; trial < 3; ++trial) {
      const OperatorFamily F(gaussian_family(3, 3, rng), NormSpec::lp(3, p));
      const double r = r_bound(F, 3, {}, quick).value;
      const double w = wr_bound(F, 3, {}, quick).value;
      const double u = u_bound(F, 3, {}, quick).value;
      EXPECT_LE(u, w * 1.03) << "p = " << p;
      EXPECT_LE(w, r * 1.03) << "p = " << p;
    }
  }
}

TEST(RBound, EnlargingFamilyNeverDecreases) {
  Rng rng = make_stream(8, 0);
  const NormSpec n = NormSpec::lp(3, 3.0);
  std::vector<Matrix> members = gaussian_family(3, 3, rng);
  const double small = r_bound(OperatorFamily(members, n), 2, {}, quick).value;
  members.push_back(complex_gaussian(3, 3, rng));
  const double large = r_bound(OperatorFamily(members, n), 2, {}, quick).value;
  EXPECT_GE(large, small * (1.0 - 1e-12));
}

TEST(UBound, DiagonalSignsOnL1) {
  const NormSpec n = NormSpec::lp(2, 1.0);
  const OperatorFamily F({diag({1.0, 1.0}), diag({1.0, -1.0})}, n);
  const BoundEstimate b = u_bound(F, 2, {}, SearchConfig{32, 200, 42, 8});

  std::vector<Vector> unit;
  for (int i = 0; i < 12; ++i) {
    const double t = pi * i / 12;
    unit.push_back((Vector(2) << std::cos(t), std::sin(t)).finished());
  }
  const std::vector<double> scales = {0.25, 0.5, 1.0, 2.0, 4.0};
  auto sign_max = [](const Vector& a, const Vector& c, const std::function<double(const Vector&)>& f) {
    return std::max(f(a + c), f(a - c));
  };
  double grid = 0.0;
  for (const Vector& x1 : unit)
    for (const Vector& u2 : unit)
      for (const double sx : scales) {
        const Vector x2 = sx * u2;
        const double dx = sign_max(x1, x2, norm_fn(n));
        const Vector t2 = F.members()[1] * x2;
        for (const Vector& y1 : unit)
          for (const Vector& v2 : unit)
            for (const double sy : scales) {
              const Vector y2 = sy * v2;
              const double num = std::abs(y1.dot(x1)) + std::abs(y2.dot(t2));
              grid = std::max(grid, num / (dx * sign_max(y1, y2, dual_fn(n))));
            }
      }
  EXPECT_GE(b.value, grid * (1.0 - 1e-9));

  const auto sel = b.witness["selection"].get<std::vector<std::size_t>>();
  const std::vector<Vector> x = columns(b.witness["x"]);
  const std::vector<Vector> y = columns(b.witness["x_star"]);
  double num = 0.0;
  for (std::size_t k = 0; k < 2; ++k) num += std::abs(y[k].dot(F.members()[sel[k]] * x[k]));
  EXPECT_NEAR(num / (sign_max(x[0], x[1], norm_fn(n)) * sign_max(y[0], y[1], dual_fn(n))), b.value, 1e-9 * b.value);
}

TEST(Properties, SingleTermAndHilbert) {
  const PropertyConstants one = property_constants(NormSpec::lp(3, 1.0), 1, {}, SearchConfig{4, 40, 42, 4});
  EXPECT_NEAR(one.alpha.value, 1.0, 1e-6);
  EXPECT_NEAR(one.A.value, 1.0, 1e-6);
  EXPECT_NEAR(one.Delta.value, 1.0, 1e-6);
  for (const int n : {2, 3}) {
    const PropertyConstants h = property_constants(NormSpec::lp(2, 2.0), n, {}, SearchConfig{4, 40, 42, 4});
    EXPECT_NEAR(h.Delta.value, 1.0, 1e-6) << "n = " << n;
  }
}

TEST(Properties, DeltaWitnessMatchesBruteForce) {
  const int n = 2;
  const NormSpec norm = NormSpec::lp(4, 1.0);
  const PropertyConstants p = property_constants(norm, n, {}, SearchConfig{8, 80, 42, 8});
  EXPECT_GE(p.Delta.value, 1.0 - 1e-9);
  const std::vector<Vector> x = columns(p.Delta.witness["x"]);
  ASSERT_EQ(x.size(), 4u);
  auto double_rad = [&](bool triangular) {
    double acc = 0.0;
    for (unsigned mask = 0; mask < 16; ++mask) {
      Vector s = Vector::Zero(4);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (triangular && k > j) continue;
          const double e = ((mask >> j) & 1 ? -1.0 : 1.0) * ((mask >> (n + k)) & 1 ? -1.0 : 1.0);
          s += e * x[static_cast<std::size_t>(j * n + k)];
        }
      acc += std::pow(norm.norm(s), 2);
    }
    return std::sqrt(acc / 16.0);
  };
  EXPECT_NEAR(double_rad(true) / double_rad(false), p.Delta.value, 1e-9 * p.Delta.value);
}

TEST(RayExtension, ConstantAndZero) {
  Matrix T(2, 2);
  T << 1.0, 0.5, 0.0, 2.0;
  OperatorFunction F;
  F.domain_angle = 5 * pi / 6;
  F.evaluator = [T](cplx) -> Matrix { return T; };
  RayExtensionConfig rc;
  rc.K = 1;
  rc.sector_angles = 3;
  rc.selection = 1;
  rc.search = SearchConfig{4, 40, 42, 4};
  const BoundEstimate b = ray_ubound_extension(F, pi / 2, 2.0, pi / 4, {1.0}, NormSpec::lp(2, 2.0), rc);
  const double want = spectral_norm(T);
  EXPECT_NEAR(b.value, want, 1e-6 * want);
  EXPECT_NEAR(b.details["ray_sup"].get<double>(), want, 1e-6 * want);

  OperatorFunction Z;
  Z.evaluator = [](cplx) -> Matrix { return Matrix::Zero(2, 2); };
  EXPECT_EQ(ray_ubound_extension(Z, pi / 2, 2.0, pi / 4, {1.0}, NormSpec::lp(2, 2.0), rc).value, 0.0);
}

TEST(RayExtension, PhiFactorRecorded) {
  OperatorFunction F;
  F.domain_angle = 5 * pi / 6;
  F.evaluator = [](cplx z) -> Matrix { return phi_n(2.0, z) * eye(2); };
  RayExtensionConfig rc;
  rc.K = 3;
  rc.selection = 2;
  rc.search = SearchConfig{4, 40, 42, 4};
  const BoundEstimate b = ray_ubound_extension(F, pi / 2, 2.0, pi / 4, default_t_grid(2), NormSpec::lp(2, 1.5), rc);
  const double ray = b.details["ray_sup"].get<double>();
  ASSERT_GT(ray, 0.0);
  EXPECT_NEAR(b.details["ratio"].get<double>(), b.value / ray, 1e-12);
  EXPECT_TRUE(std::isfinite(b.value));
}

TEST(Uncseries, ProjectionsAndSingleTerm) {
  std::vector<Matrix> P;
  for (int k = 0; k < 3; ++k) {
    Matrix e = Matrix::Zero(3, 3);
    e(k, k) = 1.0;
    P.push_back(e);
  }
  EXPECT_NEAR(uncseries_partial_sums(P, P, NormSpec::lp(3, 2.0), 3, {}, quick).value, 1.0, 1e-6);
  Matrix U(2, 2), V(2, 2);
  U << 1.0, 2.0, 0.0, 1.0;
  V << 0.5, 0.0, 1.0, 1.0;
  const double want = spectral_norm(U * V);
  EXPECT_NEAR(uncseries_partial_sums({U}, {V}, NormSpec::lp(2, 2.0), 1, {}, quick).value, want, 1e-6 * want);
}

TEST(Uncseries, HilbertRatioFinite) {
  Rng rng = make_stream(9, 0);
  std::vector<Matrix> U, V;
  for (int k = 0; k < 4; ++k) {
    U.push_back(complex_gaussian(3, 3, rng) / 3.0);
    V.push_back(complex_gaussian(3, 3, rng) / 3.0);
  }
  const BoundEstimate b = uncseries_partial_sums(U, V, NormSpec::lp(3, 2.0), 4, {}, quick);
  const double MU = b.details["M_U"].get<double>();
  const double MV = b.details["M_V"].get<double>();
  EXPECT_GT(MU, 0.0);
  EXPECT_GT(MV, 0.0);
  EXPECT_TRUE(std::isfinite(b.details["ratio"].get<double>()));
  EXPECT_NEAR(b.details["ratio"].get<double>(), b.value / (MU * MV), 1e-12);
}

TEST(AngleCurve, ScalarIsSupModulus) {
  AngleFamilyConfig cfg;
  cfg.search = SearchConfig{4, 40, 42, 4};
  const AngleCurve c = r_sectorial_angle(OperatorMatrix(eye(1) * 2.0), NormSpec::lp(1, 1.5), {pi / 3, 2 * pi / 3}, cfg);
  ASSERT_EQ(c.points.size(), 2u);
  for (const AnglePoint& pt : c.points) {
    // sup over the sampled region of |lambda / (lambda - 2)| is attained on the boundary ray
    double sup = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      const double r = std::pow(10.0, -3.0 + 7.0 * i / 4000.0);
      sup = std::max(sup, std::abs(std::polar(r, pt.sigma) / (std::polar(r, pt.sigma) - 2.0)));
    }
    EXPECT_LE(pt.bound.value, sup * (1.0 + 1e-9));
    EXPECT_GE(pt.bound.value, sup * 0.98);
  }
}

TEST(AngleCurve, HilbertMatchesSectorialConstant) {
  AngleFamilyConfig cfg;
  cfg.search = SearchConfig{4, 40, 42, 4};
  const OperatorMatrix A(eye(2));
  const AngleCurve c = r_sectorial_angle(A, NormSpec::lp(2, 2.0), {pi / 4, pi / 2}, cfg);
  for (const AnglePoint& pt : c.points) {
    const double sc = sectorial_constant(A, Sector(pt.sigma), NormSpec::lp(2, 2.0)).value;
    EXPECT_NEAR(pt.bound.value, sc, 0.02 * sc) << "sigma = " << pt.sigma;
  }
}

TEST(AngleCurve, BlowsUpAtSpectralAngle) {
  AngleFamilyConfig cfg;
  cfg.search = SearchConfig{4, 40, 42, 4};
  const OperatorMatrix A(diag({std::polar(1.0, pi / 4), std::polar(1.0, -pi / 4), 3.0}));
  const AngleCurve c = r_sectorial_angle(A, NormSpec::lp(3, 2.0), {pi / 4 + 0.01, pi / 4 + 0.1, pi / 2}, cfg);
  ASSERT_EQ(c.points.size(), 3u);
  EXPECT_GT(c.points[0].bound.value, c.points[1].bound.value);
  EXPECT_GT(c.points[1].bound.value, c.points[2].bound.value);
  EXPECT_GT(c.points[0].bound.value, 20.0);
  EXPECT_THROW(r_sectorial_angle(A, NormSpec::lp(3, 2.0), std::vector<double>{pi / 6}, cfg), Error);
}

namespace {

Matrix jordan_like() {
  Matrix J(2, 2);
  J << 1.0, 0.7, 0.0, cplx(2.0, 0.5);
  return J;
}

std::vector<Matrix> resolvent_members(const Matrix& A, double sigma) {
  std::vector<Matrix> out;
  for (int i = 0; i <= 24; ++i) {
    const double r = std::pow(10.0, -2.0 + 4.5 * i / 24.0);
    for (const double th : {sigma, 0.5 * (sigma + pi), pi})
      for (const double s : {1.0, -1.0}) {
        const cplx l = std::polar(r, s * th);
        out.push_back(l * (l * eye(A.rows()) - A).inverse());
      }
  }
  return out;
}

}  // namespace

TEST(AngleCurve, BoundKindsOrderedOnHilbert) {
  const OperatorMatrix A(jordan_like());
  std::vector<double> v[3];
  int i = 0;
  for (const BoundKind k : {BoundKind::U, BoundKind::WR, BoundKind::R}) {
    AngleFamilyConfig cfg;
    cfg.kind = k;
    cfg.radii_per_decade = 4;
    cfg.angles = 3;
    cfg.refine_levels = 0;
    for (const AnglePoint& pt : r_sectorial_angle(A, NormSpec::lp(2, 2.0), {pi / 2, 3 * pi / 4}, cfg).points)
      v[i].push_back(pt.bound.value);
    ++i;
  }
  for (std::size_t j = 0; j < v[0].size(); ++j) {
    EXPECT_LE(v[0][j], v[1][j] * 1.03);
    EXPECT_LE(v[1][j], v[2][j] * 1.03);
  }
}

// Off Hilbert space the weak pairing with real signs can exceed the R-bound
// by the phase factor Rad*(theta x*) / Rad*(x*) of its own witness.
TEST(AngleCurve, WeakBoundWithinPhaseFactorOfR) {
  const NormSpec n = NormSpec::lp(2, 3.0);
  const OperatorFamily F(resolvent_members(jordan_like(), 3 * pi / 4), n);
  const SearchConfig s{16, 100, 42, 8};
  const double r = r_bound(F, 2, {}, s).value;
  const BoundEstimate w = wr_bound(F, 2, {}, s);
  const double u = u_bound(F, 2, {}, s).value;
  EXPECT_LE(u, w.value * 1.03);

  const auto sel = w.witness["selection"].get<std::vector<std::size_t>>();
  const std::vector<Vector> x = columns(w.witness["x"]);
  const std::vector<Vector> y = columns(w.witness["x_star"]);
  std::vector<Vector> tx, ty;
  for (std::size_t k = 0; k < x.size(); ++k) {
    tx.push_back(F.members()[sel[k]] * x[k]);
    const cplx c = y[k].dot(tx.back());
    ty.push_back(std::abs(c) > 0.0 ? Vector(y[k] * (c / std::abs(c))) : y[k]);
  }
  const double strong = brute_rad(tx, norm_fn(n)) / brute_rad(x, norm_fn(n));
  const double phase = brute_rad(ty, dual_fn(n)) / brute_rad(y, dual_fn(n));
  EXPECT_LE(strong, r * 1.03);
  EXPECT_LE(w.value, strong * phase * (1.0 + 1e-12));
  EXPECT_LE(w.value, r * phase * 1.03);
}

TEST(Norms, AxiomsAndDuality) {
  Rng rng = make_stream(10, 0);
  for (const NormSpec& n : {NormSpec::lp(4, 1.0), NormSpec::lp(4, 1.7), NormSpec::lp(4, inf_exponent),
                            NormSpec::grid(2, 2, 3.0, 1.5, 0.25)}) {
    EXPECT_TRUE(validate_norm_axioms(n, 200, 1)) << n.describe();
    const Vector x = complex_gaussian(4, rng);
    const Vector y = n.dual_vector(x);
    EXPECT_NEAR(n.dual_norm(y), 1.0, 1e-12);
    EXPECT_NEAR(std::real(y.dot(x)), n.norm(x), 1e-12 * n.norm(x));
    if (n.kind() == NormSpec::Kind::Lp) {
      EXPECT_NEAR(n.norm(x), lp_norm(x, n.p()), 1e-12 * n.norm(x));
      EXPECT_NEAR(n.dual_norm(x), lp_norm(x, dual_exponent(n.p())), 1e-12 * n.dual_norm(x));
    }
  }
}
