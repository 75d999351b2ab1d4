#include "sectorial/cli/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "sectorial/calculus.hpp"
#include "sectorial/cli/run.hpp"
#include "sectorial/error.hpp"
#include "sectorial/linalg.hpp"
#include "sectorial/operators.hpp"
#include "sectorial/rademacher.hpp"
#include "sectorial/serialize.hpp"
#include "sectorial/sums.hpp"

namespace sectorial::cli {

namespace {

struct Outcome {
  Outcome(double m, double t, std::string n = {}) : metric(m), tolerance(t), note(std::move(n)) {}
  double metric;
  double tolerance;
  std::string note;
};

using Check = std::function<Outcome()>;

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

Matrix diag(std::initializer_list<cplx> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const cplx z : v) d(i++) = z;
  return d.asDiagonal();
}

Matrix eye(Eigen::Index d) { return Matrix::Identity(d, d); }

Outcome expect_error(Errc code, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    if (e.code() == code) return {0.0, 0.0, std::string(e.name())};
    return {1.0, 0.0, "wrong error " + std::string(e.name())};
  }
  return {1.0, 0.0, "no error raised"};
}

class Suite {
 public:
  explicit Suite(const SelftestOptions& o) : o_(o) {}

  ContourSpec contour(const OperatorMatrix& A, double domain_angle) const {
    ContourSpec c = ContourSpec::between(spectral_angle(A).angle(), domain_angle);
    c.weight_perturbation = o_.weight_perturbation;
    return c;
  }

  Matrix fcalc(const OperatorMatrix& A, const ScalarFunction& f) const {
    return contour_fcalc(A, f, contour(A, f.domain_angle)).value;
  }

  std::vector<std::pair<std::string, Check>> cases() const;

 private:
  SelftestOptions o_;
};

std::vector<std::pair<std::string, Check>> Suite::cases() const {
  std::vector<std::pair<std::string, Check>> c;
  const std::uint64_t seed = o_.seed;

  // operators
  c.emplace_back("operators.resolvent.scalar", [] {
    return Outcome{std::abs(resolvent_matrix(OperatorMatrix(eye(1)), -1.0)(0, 0) + 0.5), 1e-14};
  });
  c.emplace_back("operators.resolvent.diagonal", [] {
    const cplx l{0.0, 3.0};
    return Outcome{rel(resolvent_matrix(OperatorMatrix(diag({1.0, 2.0})), l), diag({1.0 / (l - 1.0), 1.0 / (l - 2.0)})),
                   1e-14};
  });
  c.emplace_back("operators.resolvent.singular", [] {
    return expect_error(Errc::SingularResolvent, [] { resolvent(OperatorMatrix(eye(1)), 1.0); });
  });
  c.emplace_back("operators.angle.normal", [] {
    const Matrix A = diag({std::polar(1.0, pi / 4), std::polar(1.0, -pi / 4)});
    return Outcome{std::abs(spectral_angle(OperatorMatrix(A)).angle() - pi / 4), 1e-14};
  });
  c.emplace_back("operators.angle.jordan", [] {
    Matrix J(2, 2);
    J << 1.0, 1.0, 0.0, 1.0;
    return Outcome{spectral_angle(OperatorMatrix(J)).angle(), 1e-7};
  });
  c.emplace_back("operators.angle.not_sectorial", [] {
    return expect_error(Errc::NotSectorial, [] { spectral_angle(OperatorMatrix(diag({1.0, -1.0}))); });
  });
  c.emplace_back("operators.sectorial_constant.identity", [] {
    const BoundEstimate b = sectorial_constant(OperatorMatrix(eye(2)), Sector(pi / 2), NormSpec::lp(2, 2.0));
    return Outcome{std::abs(b.value - 1.0), 1e-2};
  });
  c.emplace_back("operators.sectorial_constant.monotone", [] {
    const OperatorMatrix A(eye(2));
    const double wide = sectorial_constant(A, Sector(pi / 2), NormSpec::lp(2, 2.0)).value;
    const double narrow = sectorial_constant(A, Sector(pi / 2 + 0.3), NormSpec::lp(2, 2.0)).value;
    return Outcome{std::max(0.0, narrow - wide), 0.0};
  });
  c.emplace_back("operators.phi.one", [] {
    double worst = approximate_identity(OperatorMatrix(diag({1.0, 3.0})), 1.0).matrix().norm();
    for (const cplx z : {cplx{1.0, 0.0}, cplx{0.5, 2.0}, cplx{7.0, -1.0}}) worst = std::max(worst, std::abs(phi_n(1.0, z)));
    return Outcome{worst, 1e-15};
  });
  c.emplace_back("operators.phi.two", [] { return Outcome{std::abs(phi_n(2.0, 1.0) - 1.0 / 3.0), 1e-15}; });
  c.emplace_back("operators.approximate_identity.decreasing", [] {
    const OperatorMatrix A(eye(1));
    double prev = std::numeric_limits<double>::infinity();
    int violations = 0;
    for (const double n : {2.0, 8.0, 32.0}) {
      const double e = std::abs(approximate_identity(A, n).matrix()(0, 0) - 1.0);
      const double oracle = std::abs(n / (n + 1.0) - 1.0 / (n + 1.0) - 1.0);
      if (!(e < prev) || std::abs(e - oracle) > 1e-14) ++violations;
      prev = e;
    }
    return Outcome{static_cast<double>(violations), 0.0};
  });
  c.emplace_back("operators.power.diagonal", [] {
    return Outcome{rel(fractional_power(OperatorMatrix(diag({1.0, 9.0})), 0.5).matrix(), diag({1.0, 3.0})), 1e-12};
  });
  c.emplace_back("operators.power.identity", [] {
    return Outcome{rel(fractional_power(OperatorMatrix(eye(3)), 0.3).matrix(), eye(3)), 1e-12};
  });
  c.emplace_back("operators.power.jordan", [] {
    Matrix J(2, 2);
    J << 2.0, 1.0, 0.0, 2.0;
    Matrix want(2, 2);
    want << std::sqrt(2.0), 1.0 / (2.0 * std::sqrt(2.0)), 0.0, std::sqrt(2.0);
    return Outcome{rel(fractional_power(OperatorMatrix(J), 0.5).matrix(), want), 1e-8};
  });
  c.emplace_back("operators.h.value", [] {
    return Outcome{std::abs(h_s_rho(1.0, 0.5, pi / 2) - cplx{-0.5, -0.5}), 1e-15};
  });
  c.emplace_back("operators.h.zero_limit", [] { return Outcome{std::abs(h_s_rho(1e-12, 0.5, pi / 2)), 1e-5}; });

  // calculus
  c.emplace_back("calculus.contour.identity", [this] {
    return Outcome{rel(fcalc(OperatorMatrix(eye(2)), fn::z_over_one_plus_z_squared()), 0.25 * eye(2)), 1e-8};
  });
  c.emplace_back("calculus.contour.diagonal", [this] {
    return Outcome{rel(fcalc(OperatorMatrix(diag({1.0, 4.0})), fn::z_over_one_plus_z_squared()), diag({0.25, 0.16})),
                   1e-8};
  });
  c.emplace_back("calculus.contour.eigen_oracle", [this, seed] {
    Rng rng = make_stream(seed, 101);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Eigen::Index d = 6;
    Vector lam(d);
    for (Eigen::Index i = 0; i < d; ++i) lam(i) = std::polar(std::pow(10.0, u(rng)), 0.9 * (pi / 6) * u(rng));
    const Matrix V = eye(d) + 0.3 * complex_gaussian(d, d, rng) / std::sqrt(double(d));
    const Matrix Vi = V.inverse();
    const OperatorMatrix A(V * lam.asDiagonal() * Vi);
    Vector f(d);
    for (Eigen::Index i = 0; i < d; ++i) f(i) = lam(i) / ((1.0 + lam(i)) * (1.0 + lam(i)));
    return Outcome{rel(fcalc(A, fn::z_over_one_plus_z_squared()), V * f.asDiagonal() * Vi), 1e-6};
  });
  c.emplace_back("calculus.contour.multiplicativity", [this] {
    const OperatorMatrix A(diag({0.5, 2.0, cplx{3.0, 1.0}}));
    const ScalarFunction f = fn::z_over_one_plus_z_squared();
    const ScalarFunction g = fn::phi(2.0);
    const Matrix fg = fcalc(A, fn::product(f, g));
    return Outcome{rel(fcalc(A, f) * fcalc(A, g), fg), 1e-8};
  });
  c.emplace_back("calculus.regularized.one", [this] {
    const OperatorMatrix A(diag({1.0, 5.0}));
    const ScalarFunction f = fn::one();
    return Outcome{rel(regularized_fcalc(A, f, contour(A, f.domain_angle)).value, eye(2)), 1e-6};
  });
  c.emplace_back("calculus.regularized.resolvent", [this] {
    const OperatorMatrix A(diag({1.0, cplx{2.0, 1.0}}));
    const ScalarFunction f = fn::resolvent(-1.0);
    const Matrix want = (eye(2) + A.matrix()).inverse();
    return Outcome{rel(-regularized_fcalc(A, f, contour(A, f.domain_angle)).value, want), 1e-6};
  });
  c.emplace_back("calculus.operator.scalar", [this] {
    const OperatorMatrix A(eye(2));
    const ScalarFunction f = fn::z_over_one_plus_z_squared();
    OperatorFunction F;
    F.domain_angle = f.domain_angle;
    F.evaluator = [f](cplx z) -> Matrix { return f(z) * eye(2); };
    return Outcome{rel(operator_fcalc(A, F, 0.5, contour(A, f.domain_angle)).value, 0.25 * eye(2)), 1e-8};
  });
  c.emplace_back("calculus.operator.commutant_violation", [this] {
    return expect_error(Errc::CommutantViolation, [this] {
      const OperatorMatrix A(diag({1.0, 2.0}));
      Matrix M(2, 2);
      M << 0.0, 1.0, 1.0, 0.0;
      OperatorFunction F;
      F.evaluator = [M](cplx) -> Matrix { return M; };
      operator_fcalc(A, F, 0.5, contour(A, F.domain_angle));
    });
  });
  c.emplace_back("calculus.joint.phi_product", [this] {
    const OperatorMatrix A(eye(1));
    const ScalarFunction p = fn::phi(2.0);
    BivariateFunction g;
    g.evaluator = [p](cplx w, cplx z) { return p(w) * p(z); };
    g.domain_angle_a = g.domain_angle_b = p.domain_angle;
    g.decay = DecayCertificate{p.decay->C * p.decay->C, p.decay->epsilon};
    const ContourSpec cs = contour(A, p.domain_angle);
    return Outcome{std::abs(joint_fcalc(A, A, g, cs, cs).value(0, 0) - 1.0 / 9.0), 1e-8};
  });
  c.emplace_back("calculus.joint.identity", [this] {
    const OperatorMatrix A(eye(2));
    BivariateFunction g;
    g.evaluator = [](cplx w, cplx z) { return w / (w + z); };
    const ContourSpec cs = contour(A, pi / 2);
    return Outcome{rel(joint_fcalc(A, A, g, cs, cs).value, 0.5 * eye(2)), 1e-6};
  });
  c.emplace_back("calculus.joint.diagonal", [this] {
    const OperatorMatrix A(diag({1.0, 2.0}));
    const OperatorMatrix B(diag({3.0, 4.0}));
    BivariateFunction g;
    g.evaluator = [](cplx w, cplx z) { return w / (w + z); };
    const ContourSpec cs = contour(A, pi / 2);
    return Outcome{rel(joint_fcalc(A, B, g, cs, cs).value, diag({0.25, 1.0 / 3.0})), 1e-6};
  });
  c.emplace_back("calculus.dyadic.zero", [] {
    OperatorFunction F;
    F.domain_angle = 5 * pi / 6;
    F.evaluator = [](cplx) -> Matrix { return Matrix::Zero(2, 2); };
    const DyadicTerms t = dyadic_decomposition(OperatorMatrix(diag({1.0, 3.0})), F, 0.5, 3 * pi / 4, 1.0, 8);
    return Outcome{t.plus.norm() + t.minus.norm(), 0.0};
  });
  c.emplace_back("calculus.dyadic.reconstruction", [this] {
    const OperatorMatrix A(diag({1.0, 3.0}));
    const ScalarFunction p = fn::phi(2.0);
    OperatorFunction F;
    F.domain_angle = p.domain_angle;
    F.evaluator = [p](cplx z) -> Matrix { return p(z) * eye(2); };
    return Outcome{rel(dyadic_reconstruction(A, F, 0.5, 3 * pi / 4), fcalc(A, p)), 1e-5};
  });
  c.emplace_back("calculus.dyadic.scalar_bound", [] {
    const ScalarFunction f = fn::h_s_rho(0.5, 3 * pi / 4);
    double want = 0.0;
    for (int k = -8; k <= 8; ++k) want += std::abs(f(std::ldexp(1.0, k)));
    const BoundEstimate b = unconditional_dyadic_bound(OperatorMatrix(eye(1)), f, 1.0, 8, NormSpec::lp(1, 2.0));
    return Outcome{std::abs(b.value - want) / want, 1e-10};
  });
  c.emplace_back("calculus.hinfty.identity_exact", [seed] {
    HinftyFamilyConfig h;
    h.seed = seed;
    h.samples = 16;
    h.max_degree = 0;
    h.rational_samples = 0;
    const BoundEstimate b = hinfty_constant(OperatorMatrix(eye(2)), Sector(pi / 3), NormSpec::lp(2, 2.0), h);
    return Outcome{std::abs(b.value - 1.0), 1e-8};
  });
  c.emplace_back("calculus.hinfty.identity_family", [seed] {
    HinftyFamilyConfig h;
    h.seed = seed;
    h.samples = 40;
    h.rational_samples = 10;
    const BoundEstimate b = hinfty_constant(OperatorMatrix(eye(2)), Sector(pi / 3), NormSpec::lp(2, 2.0), h);
    return Outcome{std::max(0.0, b.value - 1.0), 1e-8};
  });

  // rbound
  c.emplace_back("rbound.rad.single", [] {
    Vector x(3);
    x << 1.0, cplx{0.0, -2.0}, 0.5;
    const NormSpec n = NormSpec::lp(3, 1.5);
    return Outcome{std::abs(rademacher_mean({x}, n).value - n.norm(x)), 1e-14};
  });
  c.emplace_back("rbound.rad.hilbert", [seed] {
    Rng rng = make_stream(seed, 102);
    std::vector<Vector> xs;
    double sq = 0.0;
    for (int k = 0; k < 5; ++k) {
      xs.push_back(complex_gaussian(4, rng));
      sq += xs.back().squaredNorm();
    }
    return Outcome{std::abs(rademacher_mean(xs, NormSpec::lp(4, 2.0)).value - std::sqrt(sq)) / std::sqrt(sq), 1e-13};
  });
  c.emplace_back("rbound.rad.l1_pair", [] {
    Vector e1 = Vector::Zero(2);
    Vector e2 = Vector::Zero(2);
    e1(0) = 1.0;
    e2(1) = 1.0;
    return Outcome{std::abs(rademacher_mean({e1, e2}, NormSpec::lp(2, 1.0)).value - 2.0), 1e-14};
  });
  c.emplace_back("rbound.r.scalar_family", [seed] {
    const OperatorFamily F({0.5 * eye(3), -1.5 * eye(3), 1.0 * eye(3)}, NormSpec::lp(3, 3.0));
    const BoundEstimate b = r_bound(F, 3, {}, SearchConfig{8, 60, seed, 8});
    return Outcome{std::abs(b.value - 1.5) / 1.5, 0.02};
  });
  c.emplace_back("rbound.singletons", [seed] {
    Matrix T(2, 2);
    T << 1.0, 2.0, cplx{0.0, 1.0}, -1.0;
    const double want = spectral_norm(T);
    const OperatorFamily F({T}, NormSpec::lp(2, 2.0));
    const SearchConfig s{8, 60, seed, 8};
    double worst = 0.0;
    for (const BoundEstimate& b : {r_bound(F, 1, {}, s), wr_bound(F, 1, {}, s), u_bound(F, 1, {}, s)})
      worst = std::max(worst, std::abs(b.value - want) / want);
    return Outcome{worst, 1e-6};
  });
  c.emplace_back("rbound.properties.single_term", [seed] {
    const PropertyConstants p = property_constants(NormSpec::lp(3, 1.0), 1, {}, SearchConfig{4, 40, seed, 4});
    const double worst = std::max({std::abs(p.alpha.value - 1.0), std::abs(p.A.value - 1.0), std::abs(p.Delta.value - 1.0)});
    return Outcome{worst, 1e-6};
  });
  c.emplace_back("rbound.properties.hilbert_delta", [seed] {
    const PropertyConstants p = property_constants(NormSpec::lp(2, 2.0), 2, {}, SearchConfig{4, 40, seed, 4});
    return Outcome{std::abs(p.Delta.value - 1.0), 1e-6};
  });
  c.emplace_back("rbound.ray_extension.constant", [seed] {
    Matrix T(2, 2);
    T << 1.0, 0.5, 0.0, 2.0;
    OperatorFunction F;
    F.domain_angle = 5 * pi / 6;
    F.evaluator = [T](cplx) -> Matrix { return T; };
    RayExtensionConfig rc;
    rc.K = 1;
    rc.sector_angles = 3;
    rc.selection = 1;
    rc.search = SearchConfig{4, 40, seed, 4};
    const BoundEstimate b = ray_ubound_extension(F, pi / 2, 2.0, pi / 4, {1.0}, NormSpec::lp(2, 2.0), rc);
    const double want = spectral_norm(T);
    return Outcome{std::max(std::abs(b.value - want), std::abs(b.details["ray_sup"].get<double>() - want)) / want,
                   1e-6};
  });
  c.emplace_back("rbound.ray_extension.zero", [seed] {
    OperatorFunction F;
    F.evaluator = [](cplx) -> Matrix { return Matrix::Zero(2, 2); };
    RayExtensionConfig rc;
    rc.K = 1;
    rc.sector_angles = 3;
    rc.selection = 1;
    rc.search = SearchConfig{2, 20, seed, 2};
    return Outcome{ray_ubound_extension(F, pi / 2, 2.0, pi / 4, {1.0}, NormSpec::lp(2, 2.0), rc).value, 0.0};
  });
  c.emplace_back("rbound.uncseries.projections", [seed] {
    std::vector<Matrix> P;
    for (int k = 0; k < 3; ++k) {
      Matrix e = Matrix::Zero(3, 3);
      e(k, k) = 1.0;
      P.push_back(e);
    }
    const BoundEstimate b = uncseries_partial_sums(P, P, NormSpec::lp(3, 2.0), 3, {}, SearchConfig{8, 60, seed, 8});
    return Outcome{std::abs(b.value - 1.0), 1e-6};
  });
  c.emplace_back("rbound.uncseries.single", [seed] {
    Matrix U(2, 2);
    Matrix V(2, 2);
    U << 1.0, 2.0, 0.0, 1.0;
    V << 0.5, 0.0, 1.0, 1.0;
    const BoundEstimate b = uncseries_partial_sums({U}, {V}, NormSpec::lp(2, 2.0), 1, {}, SearchConfig{8, 60, seed, 8});
    const double want = spectral_norm(U * V);
    return Outcome{std::abs(b.value - want) / want, 1e-6};
  });

  // sums
  c.emplace_back("sum.inverse.identity", [] {
    const CommutingPair p{OperatorMatrix(eye(2)), OperatorMatrix(eye(2))};
    return Outcome{rel(inverse_sum_operator(p), 0.5 * eye(2)), 1e-6};
  });
  c.emplace_back("sum.inverse.diagonal", [] {
    const CommutingPair p{OperatorMatrix(diag({1.0, 2.0})), OperatorMatrix(diag({3.0, 0.5}))};
    return Outcome{rel(inverse_sum_operator(p), diag({0.25, 0.8})), 1e-6};
  });
  c.emplace_back("sum.angle_exceeded", [] {
    return expect_error(Errc::AngleSumExceeded, [] {
      const CommutingPair p(OperatorMatrix(diag({std::polar(1.0, 3 * pi / 4), std::polar(1.0, -3 * pi / 4)})),
                            OperatorMatrix(diag({std::polar(1.0, pi / 2), std::polar(1.0, -pi / 2)})));
      inverse_sum_operator(p);
    });
  });
  c.emplace_back("sum.closedness.equal", [seed] {
    const Matrix A = diag({1.0, cplx{2.0, 1.0}, 4.0});
    const CommutingPair p{OperatorMatrix(A), OperatorMatrix(A)};
    OperatorNormOptions o;
    o.seed = seed;
    return Outcome{std::abs(sum_closedness_constant(p, NormSpec::lp(3, 1.5), o).value - 1.0), 1e-12};
  });
  c.emplace_back("sum.closedness.positive_diagonals", [seed] {
    const CommutingPair p{OperatorMatrix(diag({1.0, 5.0, 0.1})), OperatorMatrix(diag({2.0, 0.01, 7.0}))};
    OperatorNormOptions o;
    o.seed = seed;
    return Outcome{std::max(0.0, sum_closedness_constant(p, NormSpec::lp(3, 3.0), o).value - 2.0), 0.0};
  });
  c.emplace_back("sum.r_sectoriality.identity", [seed] {
    const CommutingPair p{OperatorMatrix(eye(2)), OperatorMatrix(eye(2))};
    SumSampleConfig sc;
    sc.search = SearchConfig{4, 40, seed, 4};
    sc.sign.seed = seed;
    const BoundEstimate b = sum_r_sectoriality(p, Sector(3 * pi / 4), NormSpec::lp(2, 2.0), sc);
    double sup = 0.0;
    for (const auto& m : b.details["mu_samples"]) {
      const cplx mu = complex_from_json(m);
      sup = std::max(sup, std::abs(mu / (mu - 2.0)));
    }
    return Outcome{std::abs(b.value - sup) / sup, 1e-6};
  });

  // maximal regularity and GT
  c.emplace_back("maxreg.vanishing_a", [] {
    CauchyProblem pr;
    pr.A = 1e-6 * eye(1);
    pr.m = 32;
    return Outcome{maximal_regularity_constant(pr).constant, 1e-5};
  });
  c.emplace_back("maxreg.s_delta.beyond_horizon", [] {
    const BoundEstimate b = s_delta_norm(OperatorMatrix(eye(2)), 1.5, 2.0, TimeGrid{1.0, 16, 2.0});
    return Outcome{b.value, 0.0};
  });
  c.emplace_back("gt.zero_vector", [] {
    return Outcome{gt_absolute_integral(OperatorMatrix(eye(2)), 0.5, 3 * pi / 4, Vector::Zero(2), NormSpec::lp(2, 1.0))
                       .value,
                   0.0};
  });
  c.emplace_back("gt.identity_factorizes", [] {
    Vector x(2);
    x << 1.0, cplx{0.0, -3.0};
    Vector one = Vector::Ones(1);
    const double v1 = gt_absolute_integral(OperatorMatrix(eye(1)), 0.5, 3 * pi / 4, one, NormSpec::lp(1, 1.0)).value;
    const double v2 = gt_absolute_integral(OperatorMatrix(eye(2)), 0.5, 3 * pi / 4, x, NormSpec::lp(2, 1.0)).value;
    return Outcome{std::abs(v2 - v1 * 4.0) / (v1 * 4.0), 1e-12};
  });

  // cli
  c.emplace_back("cli.fcalc_report", [] {
    const ExperimentConfig cfg = parse_config(
        R"({"operator": {"diagonal": [1, 1]}, "function": {"fn": "z_div_1pz_sq"}})", "fcalc");
    const Report r = run(cfg);
    return Outcome{rel(matrix_from_json(r.document["results"]["value"]), 0.25 * eye(2)), 1e-8};
  });
  c.emplace_back("cli.rbound_report", [seed] {
    const ExperimentConfig cfg = parse_config(
        R"({"family": {"scalars": [1, 2], "dim": 2}, "norm": {"p": 2}, "estimators": ["r"],
            "search": {"starts": 8, "steps": 60, "selection_cap": 8}})",
        "rbound", seed);
    const Report r = run(cfg);
    return Outcome{std::abs(r.document["results"]["value"].get<double>() - 2.0) / 2.0, 0.02};
  });
  c.emplace_back("cli.malformed_json", [] {
    try {
      parse_config("{\"operator\": ", "fcalc");
    } catch (const ConfigError&) {
      return Outcome{0.0, 0.0};
    }
    return Outcome{1.0, 0.0, "no ConfigError"};
  });
  return c;
}

}  // namespace

bool SelftestReport::passed() const { return failures().empty(); }

std::vector<std::string> SelftestReport::failures() const {
  std::vector<std::string> out;
  for (const SelftestCase& c : cases)
    if (!c.passed) out.push_back(c.id);
  return out;
}

SelftestReport selftest(const SelftestOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const Suite suite(options);
  SelftestReport report;
  for (auto& [id, check] : suite.cases()) {
    SelftestCase sc;
    sc.id = id;
    try {
      const Outcome o = check();
      sc.metric = o.metric;
      sc.tolerance = o.tolerance;
      sc.note = o.note;
      sc.passed = std::isfinite(o.metric) && o.metric <= o.tolerance;
    } catch (const std::exception& e) {
      sc.metric = std::numeric_limits<double>::quiet_NaN();
      sc.note = e.what();
      sc.passed = false;
    }
    report.cases.push_back(std::move(sc));
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  report.seconds = dt.count();
  return report;
}

std::string format_table(const SelftestReport& r) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-44s %-6s %-13s %s\n", "case", "result", "metric", "tolerance");
  out += line;
  for (const SelftestCase& c : r.cases) {
    std::snprintf(line, sizeof line, "%-44s %-6s %-13.6e %.1e\n", c.id.c_str(), c.passed ? "pass" : "FAIL", c.metric,
                  c.tolerance);
    out += line;
  }
  const auto failed = r.failures();
  std::snprintf(line, sizeof line, "%zu passed, %zu failed\n", r.cases.size() - failed.size(), failed.size());
  out += line;
  if (!failed.empty()) {
    out += "failing:";
    for (const std::string& id : failed) out += " " + id;
    out += "\n";
  }
  return out;
}

nlohmann::json to_json(const SelftestReport& r, const SelftestOptions& options) {
  json cases = json::array();
  for (const SelftestCase& c : r.cases)
    cases.push_back({{"id", c.id},
                     {"passed", c.passed},
                     {"metric", real_to_json(c.metric)},
                     {"tolerance", c.tolerance},
                     {"note", c.note}});
  return {{"command", "selftest"},
          {"version", library_version()},
          {"config", {{"seed", options.seed}, {"weight_perturbation", options.weight_perturbation}}},
          {"results", {{"cases", cases}, {"passed", r.passed()}, {"failures", r.failures()}}},
          {"wall_times", {{"total", r.seconds}}}};
}

}  // namespace sectorial::cli
