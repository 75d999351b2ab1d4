#include <gtest/gtest.h>

#include "sectorial/calculus.hpp"
#include "sectorial/error.hpp"
#include "sectorial/operators.hpp"
#include "sectorial/serialize.hpp"
#include "support.hpp"

using namespace sectorial;
using namespace sectorial::testing;

namespace {

Matrix fcalc(const OperatorMatrix& A, const ScalarFunction& f) { return contour_fcalc(A, f).value; }

OperatorFunction scalar_operator(const ScalarFunction& f, Eigen::Index d) {
  OperatorFunction F;
  F.domain_angle = f.domain_angle;
  F.evaluator = [f, d](cplx z) -> Matrix { return f(z) * eye(d); };
  return F;
}

cplx f_example(cplx z) { return z / ((1.0 + z) * (1.0 + z)); }

}  // namespace

TEST(ContourFcalc, Examples) {
  EXPECT_LT(rel(fcalc(OperatorMatrix(eye(2)), fn::z_over_one_plus_z_squared()), 0.25 * eye(2)), 1e-8);
  EXPECT_LT(rel(fcalc(OperatorMatrix(diag({1.0, 4.0})), fn::z_over_one_plus_z_squared()), diag({0.25, 0.16})), 1e-8);
}

TEST(ContourFcalc, EigenOracle) {
  Rng rng = make_stream(101, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const Diagonalizable D = random_diagonalizable(8, pi / 6, rng, 100.0);
    const FcalcResult r = contour_fcalc(OperatorMatrix(D.A), fn::z_over_one_plus_z_squared());
    EXPECT_LT(rel(r.value, eigen_oracle(D, f_example)), 1e-6);
    EXPECT_LT((r.value * D.A - D.A * r.value).norm(), 1e-8 * (1.0 + r.value.norm() * D.A.norm()));
    EXPECT_LT(r.report.truncation_bound, 1e-10);
    EXPECT_GT(r.report.nodes, 0u);
  }
}

TEST(ContourFcalc, MissingDecay) {
  try {
    contour_fcalc(OperatorMatrix(eye(2)), fn::one());
    FAIL() << "expected MissingDecay";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MissingDecay);
  }
}

TEST(ContourFcalc, Multiplicativity) {
  Rng rng = make_stream(103, 0);
  const std::vector<std::pair<ScalarFunction, ScalarFunction>> pairs = {
      {fn::z_over_one_plus_z_squared(), fn::phi(2.0)},
      {fn::phi(3.0), fn::h_s_rho(0.5, 5 * pi / 6)},
      {fn::power_over_shift(0.3), fn::z_over_one_plus_z_squared()},
  };
  for (int trial = 0; trial < 3; ++trial) {
    const OperatorMatrix A(random_diagonalizable(5, pi / 4, rng).A);
    for (const auto& [f, g] : pairs) {
      const Matrix fA = fcalc(A, f);
      const Matrix gA = fcalc(A, g);
      const Matrix fgA = fcalc(A, fn::product(f, g));
      EXPECT_LE(spectral_norm(fgA - fA * gA), 1e-6 * (1.0 + spectral_norm(fA)) * (1.0 + spectral_norm(gA)));
    }
  }
}

TEST(ContourFcalc, ContourIndependence) {
  Rng rng = make_stream(107, 0);
  const ScalarFunction f = fn::z_over_one_plus_z_squared();
  for (int trial = 0; trial < 5; ++trial) {
    const OperatorMatrix A(random_diagonalizable(5, pi / 4, rng).A);
    ContourSpec c1;
    c1.angle = pi / 2;
    ContourSpec c2;
    c2.angle = 3 * pi / 4;
    EXPECT_LT(rel(contour_fcalc(A, f, c1).value, contour_fcalc(A, f, c2).value), 1e-6);
  }
}

TEST(ContourFcalc, DilationEquivariance) {
  Rng rng = make_stream(109, 0);
  const ScalarFunction f = fn::phi(2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const OperatorMatrix A(random_diagonalizable(5, pi / 4, rng).A);
    for (const double t : {0.01, 0.7, 30.0}) {
      ContourSpec c = ContourSpec::between(spectral_angle(A).angle(), f.domain_angle);
      const Matrix lhs = contour_fcalc(A.scaled(t), f, c).value;
      const Matrix rhs = contour_fcalc(A, fn::dilate(f, t), c).value;
      EXPECT_LT(rel(lhs, rhs), 1e-8) << "t = " << t;
    }
  }
}

TEST(ContourFcalc, WeightPerturbationIsVisible) {
  const OperatorMatrix A(diag({0.5, 2.0}));
  const ScalarFunction f = fn::z_over_one_plus_z_squared();
  ContourSpec c = ContourSpec::between(spectral_angle(A).angle(), f.domain_angle);
  const Matrix clean = contour_fcalc(A, f, c).value;
  c.weight_perturbation = 1e-3;
  EXPECT_NEAR(rel(contour_fcalc(A, f, c).value, clean), 1e-3, 1e-6);
}

TEST(ContourFcalc, DeterministicAcrossCalls) {
  Rng rng = make_stream(113, 0);
  const OperatorMatrix A(random_diagonalizable(10, pi / 4, rng).A);
  const Matrix a = fcalc(A, fn::z_over_one_plus_z_squared());
  const Matrix b = fcalc(OperatorMatrix(A.matrix()), fn::z_over_one_plus_z_squared());
  EXPECT_EQ((a - b).cwiseAbs().maxCoeff(), 0.0);
}

TEST(RegularizedFcalc, Examples) {
  const OperatorMatrix A(diag({1.0, 5.0}));
  const ScalarFunction one = fn::one();
  const RegularizedResult r = regularized_fcalc(A, one, ContourSpec::between(0.0, one.domain_angle));
  EXPECT_TRUE(r.converged);
  EXPECT_LT(rel(r.value, eye(2)), 1e-6);
  EXPECT_EQ(r.sup_trace.size(), r.n_values.size());

  const OperatorMatrix E(diag({1.0, std::exp(1.0)}));
  const ScalarFunction ip = fn::imaginary_power(1.0);
  const RegularizedResult q = regularized_fcalc(E, ip, ContourSpec::between(0.0, ip.domain_angle));
  EXPECT_LT(rel(q.value, diag({1.0, std::polar(1.0, 1.0)})), 1e-6);
}

TEST(RegularizedFcalc, RationalConsistency) {
  Rng rng = make_stream(127, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const OperatorMatrix A(random_diagonalizable(4, pi / 4, rng).A);
    for (const cplx lambda : {cplx{-1.0, 0.0}, cplx{-0.5, 2.0}, cplx{-3.0, -1.0}}) {
      const ScalarFunction f = fn::resolvent(lambda);
      const RegularizedResult r = regularized_fcalc(A, f, ContourSpec::between(spectral_angle(A).angle(), f.domain_angle));
      EXPECT_LT(rel(r.value, resolvent_matrix(A, lambda)), 1e-8);
    }
  }
}

TEST(OperatorFcalc, ScalarReduction) {
  Rng rng = make_stream(131, 0);
  const ScalarFunction f = fn::z_over_one_plus_z_squared();
  EXPECT_LT(rel(operator_fcalc(OperatorMatrix(eye(2)), scalar_operator(f, 2), 0.5, ContourSpec::between(0.0, f.domain_angle))
                    .value,
                0.25 * eye(2)),
            1e-8);
  const OperatorMatrix A(random_diagonalizable(5, pi / 4, rng).A);
  const ContourSpec c = ContourSpec::between(spectral_angle(A).angle(), f.domain_angle);
  for (const double s : {0.3, 0.5, 0.7})
    EXPECT_LT(rel(operator_fcalc(A, scalar_operator(f, 5), s, c).value, fcalc(A, f)), 1e-6);
}

TEST(OperatorFcalc, CommutingFactor) {
  Rng rng = make_stream(137, 0);
  const Diagonalizable D = random_diagonalizable(5, pi / 4, rng);
  const OperatorMatrix A(D.A);
  const Matrix M = resolvent_matrix(A, -1.0);
  OperatorFunction F;
  F.domain_angle = fn::default_domain;
  F.evaluator = [M](cplx z) -> Matrix { return phi_n(2.0, z) * M; };
  const Matrix got = operator_fcalc(A, F, 0.5, ContourSpec::between(spectral_angle(A).angle(), F.domain_angle)).value;
  const Matrix want = eigen_oracle(D, [](cplx z) { return phi_n(2.0, z); }) * eigen_oracle(D, [](cplx z) { return 1.0 / (-1.0 - z); });
  EXPECT_LT(rel(got, want), 1e-6);
}

TEST(OperatorFcalc, CommutantViolation) {
  const OperatorMatrix A(diag({1.0, 2.0}));
  Matrix M(2, 2);
  M << 0.0, 1.0, 1.0, 0.0;
  OperatorFunction F;
  F.evaluator = [M](cplx) -> Matrix { return M; };
  try {
    operator_fcalc(A, F, 0.5, ContourSpec::between(0.0, F.domain_angle));
    FAIL() << "expected CommutantViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CommutantViolation);
  }
}

TEST(JointFcalc, Examples) {
  const ScalarFunction p = fn::phi(2.0);
  BivariateFunction g;
  g.evaluator = [p](cplx w, cplx z) { return p(w) * p(z); };
  g.domain_angle_a = g.domain_angle_b = p.domain_angle;
  g.decay = DecayCertificate{p.decay->C * p.decay->C, p.decay->epsilon};
  const OperatorMatrix one(eye(1));
  const ContourSpec cs = ContourSpec::between(0.0, p.domain_angle);
  EXPECT_NEAR(std::abs(joint_fcalc(one, one, g, cs, cs).value(0, 0) - 1.0 / 9.0), 0.0, 1e-8);

  BivariateFunction q;
  q.evaluator = [](cplx w, cplx z) { return w / (w + z); };
  const ContourSpec c2 = ContourSpec::between(0.0, pi / 2);
  EXPECT_LT(rel(joint_fcalc(OperatorMatrix(eye(2)), OperatorMatrix(eye(2)), q, c2, c2).value, 0.5 * eye(2)), 1e-6);
  const JointResult r = joint_fcalc(OperatorMatrix(diag({1.0, 2.0})), OperatorMatrix(diag({3.0, 4.0})), q, c2, c2);
  EXPECT_TRUE(r.regularized);
  EXPECT_LT(rel(r.value, diag({0.25, 1.0 / 3.0})), 1e-6);
}

TEST(JointFcalc, SharedEigenbasisOracle) {
  Rng rng = make_stream(139, 0);
  for (int trial = 0; trial < 3; ++trial) {
    const Diagonalizable D = random_diagonalizable(4, pi / 4, rng);
    Vector mu(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (Eigen::Index i = 0; i < 4; ++i) mu(i) = std::polar(std::pow(10.0, u(rng)), 0.2 * u(rng));
    const Matrix B = D.V * mu.asDiagonal() * D.Vinv;
    BivariateFunction q;
    q.evaluator = [](cplx w, cplx z) { return w / (w + z); };
    const OperatorMatrix A(D.A);
    const ContourSpec ca = ContourSpec::between(spectral_angle(A).angle(), pi / 2);
    const ContourSpec cb = ContourSpec::between(0.2, pi / 2);
    Vector want(4);
    for (Eigen::Index i = 0; i < 4; ++i) want(i) = D.lambda(i) / (D.lambda(i) + mu(i));
    EXPECT_LT(rel(joint_fcalc(A, OperatorMatrix(B), q, ca, cb).value, D.V * want.asDiagonal() * D.Vinv), 1e-6);
  }
}

TEST(JointFcalc, NonCommuting) {
  Matrix B(2, 2);
  B << 1.0, 1.0, 0.0, 2.0;
  BivariateFunction q;
  q.evaluator = [](cplx w, cplx z) { return w / (w + z); };
  const ContourSpec c = ContourSpec::between(0.0, pi / 2);
  try {
    joint_fcalc(OperatorMatrix(diag({1.0, 3.0})), OperatorMatrix(B), q, c, c);
    FAIL() << "expected NonCommuting";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonCommuting);
  }
}

TEST(Dyadic, ZeroFunction) {
  OperatorFunction F;
  F.domain_angle = 5 * pi / 6;
  F.evaluator = [](cplx) -> Matrix { return Matrix::Zero(2, 2); };
  const DyadicTerms t = dyadic_decomposition(OperatorMatrix(diag({1.0, 3.0})), F, 0.5, 3 * pi / 4, 1.0, 8);
  EXPECT_EQ(t.plus.norm() + t.minus.norm(), 0.0);
}

TEST(Dyadic, ScalarSeriesOracle) {
  const double s = 0.4;
  const double nu = 3 * pi / 4;
  const ScalarFunction f = fn::z_over_one_plus_z_squared();
  for (const double t : {1.0, 1.5}) {
    const DyadicTerms terms = dyadic_decomposition(OperatorMatrix(eye(1)), scalar_operator(f, 1), s, nu, t, 0);
    ASSERT_GT(terms.K, 0);
    for (const double sgn : {1.0, -1.0}) {
      cplx want = 0.0;
      for (int k = -terms.K; k <= terms.K; ++k)
        want += f(std::polar(std::ldexp(1.0, -k) / t, sgn * nu)) * h_s_rho(std::ldexp(t, k), s, sgn * nu);
      want *= std::polar(1.0, sgn * (1.0 - s) * nu);
      const cplx got = (sgn > 0 ? terms.plus : terms.minus)(0, 0);
      EXPECT_LT(std::abs(got - want), 1e-13 * (1.0 + std::abs(want)));
    }
    EXPECT_LT(terms.tail_estimate, 1e-10);
  }
}

TEST(Dyadic, TailTooLarge) {
  const ScalarFunction f = fn::z_over_one_plus_z_squared();
  try {
    dyadic_decomposition(OperatorMatrix(eye(1)), scalar_operator(f, 1), 0.5, 3 * pi / 4, 1.0, 2);
    FAIL() << "expected TailTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TailTooLarge);
  }
}

TEST(Dyadic, Reconstruction) {
  Rng rng = make_stream(149, 0);
  const ScalarFunction p = fn::phi(2.0);
  EXPECT_LT(rel(dyadic_reconstruction(OperatorMatrix(diag({1.0, 3.0})), scalar_operator(p, 2), 0.5, 3 * pi / 4),
                fcalc(OperatorMatrix(diag({1.0, 3.0})), p)),
            1e-5);
  for (int trial = 0; trial < 3; ++trial) {
    const OperatorMatrix A(random_diagonalizable(4, pi / 4, rng).A);
    const ContourSpec c = ContourSpec::between(spectral_angle(A).angle(), p.domain_angle);
    const Matrix direct = operator_fcalc(A, scalar_operator(p, 4), 0.5, c).value;
    EXPECT_LT(rel(dyadic_reconstruction(A, scalar_operator(p, 4), 0.5, c.angle), direct), 1e-5);
  }
}

TEST(UnconditionalBound, ScalarReduction) {
  for (const double t : {1.0, 1.3}) {
    const ScalarFunction f = fn::h_s_rho(0.5, 3 * pi / 4);
    double want = 0.0;
    for (int k = -8; k <= 8; ++k) want += std::abs(f(std::ldexp(t, k)));
    const BoundEstimate b = unconditional_dyadic_bound(OperatorMatrix(eye(1)), f, t, 8, NormSpec::lp(1, 2.0));
    EXPECT_NEAR(b.value, want, 1e-10 * want);
  }
}

TEST(UnconditionalBound, ExhaustiveAgreesWithRandomized) {
  const OperatorMatrix A(diag({1.0, 2.0}));
  const ScalarFunction f = fn::h_s_rho(0.5, 3 * pi / 4);
  for (const double p : {2.0, 1.0, 3.0}) {
    const NormSpec n = NormSpec::lp(2, p);
    const BoundEstimate ex = unconditional_dyadic_bound(A, f, 1.0, 6, n);
    SignSearchOptions o;
    o.mode = SearchMode::Randomized;
    o.seed = 5;
    const BoundEstimate rnd = unconditional_dyadic_bound(A, f, 1.0, 6, n, o);
    EXPECT_NEAR(rnd.value, ex.value, 0.02 * ex.value) << "p = " << p;
  }
}

TEST(HinftyCriterion, IdentityScalarOracle) {
  const double s = 0.5;
  const double nu = pi / 2;
  const int K = 6;
  const std::vector<double> grid = default_t_grid(4);
  double want = 0.0;
  for (const double t : grid) {
    for (const double sgn : {1.0, -1.0}) {
      std::vector<cplx> c;
      for (int k = -K; k <= K; ++k) {
        const double l = std::ldexp(t, k);
        c.push_back(std::pow(l, 1.0 - s) / (std::polar(l, sgn * nu) - 1.0));
      }
      for (std::uint64_t mask = 0; mask < (1ULL << c.size()); ++mask) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) acc += ((mask >> k) & 1 ? -1.0 : 1.0) * c[k];
        want = std::max(want, std::abs(acc));
      }
    }
  }
  const BoundEstimate b = hinfty_criterion(OperatorMatrix(eye(2)), nu, s, grid, K, NormSpec::lp(2, 2.0));
  EXPECT_NEAR(b.value, want, 1e-12 * want);
}

TEST(HinftyCriterion, TruncationStable) {
  const Vector lam = (Vector(2) << 1.0, 3.0).finished();
  const OperatorMatrix A(lam.asDiagonal().toDenseMatrix());
  const NormSpec n = NormSpec::lp(2, 2.0);
  const double nu = 3 * pi / 4;
  const std::vector<double> grid = default_t_grid();
  SignSearchOptions o;
  o.seed = 3;
  auto term_sum = [&](int from, int to) {
    double worst = 0.0;
    for (const double t : grid) {
      double acc = 0.0;
      for (int k = from; k <= to; ++k) {
        for (const int sgn : {1, -1}) {
          const double l = std::ldexp(t, sgn * k);
          double m = 0.0;
          for (Eigen::Index i = 0; i < 2; ++i)
            m = std::max(m, std::abs(std::pow(l, 0.5) * std::sqrt(lam(i)) / (std::polar(l, nu) - lam(i))));
          acc += m;
        }
      }
      worst = std::max(worst, acc);
    }
    return worst;
  };
  const double k8 = hinfty_criterion(A, nu, 0.5, grid, 8, n, o).value;
  const double k16 = hinfty_criterion(A, nu, 0.5, grid, 16, n, o).value;
  const double k24 = hinfty_criterion(A, nu, 0.5, grid, 24, n, o).value;
  EXPECT_GE(k16, k8 * (1.0 - 1e-9));
  EXPECT_LE(k16 - k8, term_sum(9, 16));
  EXPECT_LT(std::abs(k24 - k16) / k16, 0.01);
}

TEST(HinftyCriterion, MonotoneInAngle) {
  const OperatorMatrix A(eye(1));
  const NormSpec n = NormSpec::lp(1, 2.0);
  const double wide = hinfty_criterion(A, 3 * pi / 4, 0.5, default_t_grid(), 8, n).value;
  const double close = hinfty_criterion(A, pi / 2 + 0.05, 0.5, default_t_grid(), 8, n).value;
  EXPECT_LE(wide, close);
}

TEST(HinftyConstant, IdentityIsExact) {
  HinftyFamilyConfig h;
  h.samples = 16;
  h.max_degree = 0;
  h.rational_samples = 0;
  EXPECT_NEAR(hinfty_constant(OperatorMatrix(eye(2)), Sector(pi / 3), NormSpec::lp(2, 2.0), h).value, 1.0, 1e-8);
}

TEST(HinftyConstant, NormalOperatorNearOne) {
  Rng rng = make_stream(151, 0);
  Vector lam(4);
  lam << 1.0, std::polar(3.0, 0.3), std::polar(0.2, -0.4), 10.0;
  const Matrix U = random_unitary(4, rng);
  HinftyFamilyConfig h;
  h.samples = 60;
  h.rational_samples = 20;
  h.seed = 9;
  const BoundEstimate b = hinfty_constant(OperatorMatrix(U * lam.asDiagonal() * U.adjoint()), Sector(pi / 3),
                                          NormSpec::lp(4, 2.0), h);
  EXPECT_NEAR(b.value, 1.0, 0.03);
}

TEST(HinftyConstant, JordanBlockExceedsOne) {
  Matrix J(2, 2);
  J << 1.0, 1.0, 0.0, 1.0;
  HinftyFamilyConfig h;
  h.samples = 60;
  h.rational_samples = 10;
  const BoundEstimate b = hinfty_constant(OperatorMatrix(J), Sector(pi / 5), NormSpec::lp(2, 2.0), h);
  EXPECT_GT(b.value, 1.0 + 1e-3);
  EXPECT_FALSE(b.witness.empty());
}

TEST(SectorMap, SendsOneToZeroAndBoundaryToCircle) {
  for (const double a : {pi / 5, pi / 3, 2 * pi / 3}) {
    EXPECT_LT(std::abs(sector_to_disk(1.0, a)), 1e-15);
    for (const double r : {0.1, 1.0, 7.0}) {
      EXPECT_NEAR(std::abs(sector_to_disk(std::polar(r, a), a)), 1.0, 1e-12);
      EXPECT_LT(std::abs(sector_to_disk(std::polar(r, 0.5 * a), a)), 1.0);
    }
  }
}
