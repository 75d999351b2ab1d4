#include <gtest/gtest.h>

#include "sectorial/error.hpp"
#include "sectorial/operators.hpp"
#include "sectorial/serialize.hpp"
#include "sectorial/sums.hpp"
#include "support.hpp"

using namespace sectorial;
using namespace sectorial::testing;

namespace {

BivariateFunction inverse_sum_symbol() {
  BivariateFunction f;
  f.evaluator = [](cplx w, cplx z) { return w / (w + z); };
  return f;
}

}  // namespace

TEST(CommutingPair, RejectsNonCommuting) {
  Matrix B(2, 2);
  B << 1.0, 1.0, 0.0, 2.0;
  try {
    CommutingPair p{OperatorMatrix(diag({1.0, 3.0})), OperatorMatrix(B)};
    FAIL() << "expected NonCommuting";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonCommuting);
  }
}

TEST(InverseSum, Examples) {
  EXPECT_LT(rel(inverse_sum_operator(CommutingPair{OperatorMatrix(eye(2)), OperatorMatrix(eye(2))}), 0.5 * eye(2)),
            1e-6);
  EXPECT_LT(rel(inverse_sum_operator(CommutingPair{OperatorMatrix(diag({1.0, 2.0})), OperatorMatrix(diag({3.0, 0.5}))}),
                diag({0.25, 0.8})),
            1e-6);
}

TEST(InverseSum, AngleSumExceeded) {
  const CommutingPair p{OperatorMatrix(diag({std::polar(1.0, 3 * pi / 4), std::polar(1.0, -3 * pi / 4)})),
                        OperatorMatrix(diag({std::polar(1.0, pi / 2 - 1e-9), std::polar(1.0, -pi / 2 + 1e-9)}))};
  try {
    inverse_sum_operator(p);
    FAIL() << "expected AngleSumExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AngleSumExceeded);
  }
}

TEST(InverseSum, SplitsTheSum) {
  Rng rng = make_stream(21, 0);
  for (int trial = 0; trial < 3; ++trial) {
    const SharedPair s = shared_pair(4, pi / 3, pi / 2, rng, 10.0);
    const Matrix A = s.pair.A().matrix();
    const Matrix B = s.pair.B().matrix();
    const Matrix f = inverse_sum_operator(s.pair);
    EXPECT_LE(spectral_norm(f * (A + B) - A), 1e-6 * spectral_norm(A));
    EXPECT_LE(spectral_norm((eye(4) - f) * (A + B) - B), 1e-6 * spectral_norm(B));
    Vector want(4);
    for (Eigen::Index i = 0; i < 4; ++i) want(i) = s.a(i) / (s.a(i) + s.b(i));
    EXPECT_LT(rel(f, s.V * want.asDiagonal() * s.Vinv), 1e-6);
  }
}

TEST(InverseSum, AgreesWithJointCalculus) {
  const OperatorMatrix A(diag({1.0, cplx{2.0, 1.0}}));
  const OperatorMatrix B(diag({0.5, 3.0}));
  const SumContours c = sum_contours(CommutingPair{A, B});
  EXPECT_GT(c.a.angle, 0.0);
  EXPECT_LT(c.a.angle + c.b.angle, pi);
  const Matrix viaJoint = joint_fcalc(A, B, inverse_sum_symbol(), c.a, c.b).value;
  EXPECT_LT(rel(inverse_sum_operator(CommutingPair{A, B}), viaJoint), 1e-8);
}

TEST(Closedness, EqualOperatorsGiveOne) {
  Rng rng = make_stream(22, 0);
  const Matrix A = random_diagonalizable(3, pi / 3, rng).A;
  for (const double p : {1.0, 1.5, 2.0, inf_exponent}) {
    const BoundEstimate b = sum_closedness_constant(CommutingPair{OperatorMatrix(A), OperatorMatrix(A)}, NormSpec::lp(3, p));
    EXPECT_NEAR(b.value, 1.0, 1e-12) << "p = " << p;
  }
}

TEST(Closedness, PositiveDiagonalsAtMostTwo) {
  const CommutingPair p{OperatorMatrix(diag({1.0, 5.0, 0.1})), OperatorMatrix(diag({2.0, 0.01, 7.0}))};
  for (const double q : {1.0, 3.0, inf_exponent}) {
    const BoundEstimate b = sum_closedness_constant(p, NormSpec::lp(3, q));
    EXPECT_LE(b.value, 2.0 + 1e-12);
    EXPECT_GE(b.value, 1.0);
  }
}

TEST(Closedness, SharedUnitaryBasisOracle) {
  Rng rng = make_stream(23, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const SharedPair s = shared_pair(3, pi / 6, pi / 3, rng, 1.0);
    const BoundEstimate b = sum_closedness_constant(s.pair, NormSpec::lp(3, 2.0));
    const double oracle = simplex_oracle(s.a, s.b);
    EXPECT_NEAR(b.value, oracle, 0.02 * oracle);
    double per_index = 0.0;
    for (Eigen::Index i = 0; i < 3; ++i)
      per_index = std::max(per_index, (std::abs(s.a(i)) + std::abs(s.b(i))) / std::abs(s.a(i) + s.b(i)));
    EXPECT_GE(b.value, per_index * (1.0 - 1e-9));
    EXPECT_LE(b.value, b.details["calculus_bound"].get<double>() * 1.01);
    EXPECT_LT(b.details["identity_residual"].get<double>(), 1e-6);
  }
}

TEST(Closedness, PerIndexMaxIsOnlyALowerBound) {
  const double e = 0.05;
  const Vector a = (Vector(2) << 1.0, e).finished();
  const Vector b = (Vector(2) << e, 1.0).finished();
  const double oracle = simplex_oracle(a, b);
  const BoundEstimate est = sum_closedness_constant(
      CommutingPair{OperatorMatrix(a.asDiagonal().toDenseMatrix()), OperatorMatrix(b.asDiagonal().toDenseMatrix())},
      NormSpec::lp(2, 2.0));
  EXPECT_NEAR(est.value, oracle, 1e-6 * oracle);
  EXPECT_GT(oracle, 1.3);
}

TEST(Closedness, WitnessReevaluates) {
  Rng rng = make_stream(24, 0);
  const SharedPair s = shared_pair(4, pi / 4, pi / 4, rng, 5.0);
  const NormSpec n = NormSpec::lp(4, 1.5);
  const BoundEstimate b = sum_closedness_constant(s.pair, n);
  const Vector x = vector_from_json(b.witness["x"]);
  const Matrix& A = s.pair.A().matrix();
  const Matrix& B = s.pair.B().matrix();
  EXPECT_NEAR((n.norm(A * x) + n.norm(B * x)) / n.norm((A + B) * x), b.value, 1e-9 * b.value);
}

TEST(SumRSectoriality, IdentityPair) {
  const CommutingPair p{OperatorMatrix(eye(2)), OperatorMatrix(eye(2))};
  SumSampleConfig sc;
  sc.search = SearchConfig{4, 40, 42, 4};
  const BoundEstimate b = sum_r_sectoriality(p, Sector(3 * pi / 4), NormSpec::lp(2, 2.0), sc);
  double sup = 0.0;
  for (const auto& m : b.details["mu_samples"]) {
    const cplx mu = complex_from_json(m);
    sup = std::max(sup, std::abs(mu / (mu - 2.0)));
  }
  EXPECT_NEAR(b.value, sup, 1e-6 * sup);
  EXPECT_TRUE(b.details["verified"].get<bool>());
}

TEST(SumRSectoriality, DiagonalPairOracle) {
  const Vector a = (Vector(2) << 1.0, cplx(2.0, 1.0)).finished();
  const Vector c = (Vector(2) << 0.5, 4.0).finished();
  const CommutingPair p{OperatorMatrix(a.asDiagonal().toDenseMatrix()), OperatorMatrix(c.asDiagonal().toDenseMatrix())};
  SumSampleConfig sc;
  sc.search = SearchConfig{4, 40, 42, 4};
  const BoundEstimate b = sum_r_sectoriality(p, Sector(2 * pi / 3), NormSpec::lp(2, 2.0), sc);
  double sup = 0.0;
  for (const auto& m : b.details["mu_samples"]) {
    const cplx mu = complex_from_json(m);
    for (Eigen::Index i = 0; i < 2; ++i) sup = std::max(sup, std::abs(mu / (mu - a(i) - c(i))));
  }
  EXPECT_NEAR(b.value, sup, 0.02 * sup);
  EXPECT_LT(b.details["max_consistency_error"].get<double>(), 1e-6);
}

TEST(MaxReg, ScalarOperatorTendsToOne) {
  CauchyProblem pr;
  pr.A = 50.0 * eye(1);
  pr.T = 1.0;
  pr.m = 128;
  const RegularityReport r = maximal_regularity_constant(pr, 3);
  ASSERT_EQ(r.trace.size(), 3u);
  EXPECT_EQ(r.trace.back().m, 512);
  EXPECT_NEAR(r.trace.back().constant, 1.0, 0.03);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_GE(r.trace[i].constant, r.trace[i - 1].constant - 1e-9);
}

TEST(MaxReg, NormalOperatorGridStable) {
  CauchyProblem pr;
  pr.A = diag({1.0, 10.0});
  pr.m = 64;
  const RegularityReport r = maximal_regularity_constant(pr, 3);
  ASSERT_EQ(r.trace.size(), 3u);
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    EXPECT_LE(std::abs(r.trace[i].constant - r.trace[i - 1].constant), 0.1 * r.trace[i - 1].constant);
  EXPECT_LE(r.constant, 1.0 + 1e-9);
}

TEST(MaxReg, VanishingOperator) {
  CauchyProblem pr;
  pr.m = 32;
  double prev = 1.0;
  for (const double a : {1e-2, 1e-4, 1e-6}) {
    pr.A = a * eye(1);
    const double c = maximal_regularity_constant(pr).constant;
    EXPECT_LT(c, prev);
    prev = c;
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(MaxReg, MatchesDenseSolutionMap) {
  CauchyProblem pr;
  pr.A = (Matrix(2, 2) << 2.0, 1.0, 0.0, 5.0).finished();
  pr.T = 2.0;
  pr.m = 16;
  const double h = pr.T / pr.m;
  const Eigen::Index d = 2, m = pr.m;
  // y_j = (I + hA)^{-1} (y_{j-1} + h f_j), so A y = L f with L block lower triangular.
  const Matrix M = (eye(d) + h * pr.A).inverse();
  Matrix L = Matrix::Zero(m * d, m * d);
  for (Eigen::Index j = 0; j < m; ++j) {
    Matrix P = h * M;
    for (Eigen::Index i = j; i >= 0; --i) {
      L.block(j * d, i * d, d, d) = pr.A * P;
      P = M * P;
    }
  }
  const RegularityReport r = maximal_regularity_constant(pr);
  EXPECT_NEAR(r.constant, spectral_norm(L), 1e-9 * spectral_norm(L));

  pr.forcing = Matrix::Ones(m, d);
  const Matrix y = solve_cauchy(pr);
  Vector f = Vector::Ones(m * d);
  Vector Ay = L * f;
  for (Eigen::Index j = 0; j < m; ++j) EXPECT_LT((pr.A * y.row(j).transpose() - Ay.segment(j * d, d)).norm(), 1e-12);
}

TEST(MaxReg, RejectsWideAngle) {
  CauchyProblem pr;
  pr.A = diag({std::polar(1.0, 0.6 * pi), std::polar(1.0, -0.6 * pi)});
  try {
    maximal_regularity_constant(pr);
    FAIL() << "expected AngleExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AngleExceeded);
  }
}

TEST(MaxReg, NonHilbertExponent) {
  CauchyProblem pr;
  pr.A = diag({1.0, 4.0});
  pr.m = 32;
  pr.p = 3.0;
  const RegularityReport r = maximal_regularity_constant(pr);
  EXPECT_GT(r.constant, 0.0);
  EXPECT_LT(r.constant, 2.0);
  EXPECT_FALSE(r.trace.front().exact);
}

namespace {

// Dense block-Toeplitz operator of the truncated convolution with kernel
// cells int A e^{-uA} du over [max(delta, kh), (k+1)h], via eigendecomposition.
double s_delta_dense(const Diagonalizable& D, double delta, const TimeGrid& g) {
  const Eigen::Index d = D.A.rows();
  const double h = g.T / g.m;
  auto expm = [&](double t) { return eigen_oracle(D, [t](cplx z) { return std::exp(-t * z); }); };
  Matrix L = Matrix::Zero(g.m * d, g.m * d);
  for (Eigen::Index k = 0; k < g.m; ++k) {
    const double hi = (k + 1) * h;
    if (hi <= delta) continue;
    const Matrix cell = expm(std::max(delta, k * h)) - expm(hi);
    for (Eigen::Index j = k; j < g.m; ++j) L.block(j * d, (j - k) * d, d, d) = cell;
  }
  return spectral_norm(L);
}

}  // namespace

TEST(SDelta, MatchesDenseOracle) {
  Rng rng = make_stream(25, 0);
  const Diagonalizable D = random_diagonalizable(2, pi / 4, rng, 3.0);
  const TimeGrid g{2.0, 24, 2.0};
  for (const double delta : {0.01, 0.2, 0.5, 1.3}) {
    const double want = s_delta_dense(D, delta, g);
    EXPECT_NEAR(s_delta_norm(OperatorMatrix(D.A), delta, 2.0, g).value, want, 1e-9 * std::max(want, 1.0))
        << "delta = " << delta;
  }
}

TEST(SDelta, MonotoneAndBeyondHorizon) {
  const OperatorMatrix A(diag({1.0, cplx(3.0, 1.0)}));
  const TimeGrid g{1.0, 64, 2.0};
  const std::vector<BoundEstimate> sweep = s_delta_sweep(A, {0.001, 0.01, 0.05, 0.2, 0.6}, 2.0, g);
  for (std::size_t i = 1; i < sweep.size(); ++i) EXPECT_LE(sweep[i].value, sweep[i - 1].value + 1e-12);
  EXPECT_EQ(s_delta_norm(A, 1.5, 2.0, g).value, 0.0);
  EXPECT_THROW(s_delta_norm(A, 0.0, 2.0, g), Error);
}

TEST(SDelta, SmallDeltaScalarNearOne) {
  const OperatorMatrix A(50.0 * eye(1));
  const double v = s_delta_norm(A, 1e-6, 2.0, TimeGrid{1.0, 512, 2.0}).value;
  EXPECT_NEAR(v, 1.0, 0.03);
}

TEST(GtIntegral, ScaleInvariantInOneDimension) {
  const Vector one = Vector::Ones(1);
  const double base = gt_absolute_integral(OperatorMatrix(eye(1)), 0.5, 3 * pi / 4, one, NormSpec::lp(1, 1.0)).value;
  for (const double a : {0.5, 5.0, 1e3}) {
    const double v = gt_absolute_integral(OperatorMatrix(a * eye(1)), 0.5, 3 * pi / 4, one, NormSpec::lp(1, 1.0)).value;
    EXPECT_NEAR(v, base, 0.01 * base) << "a = " << a;
  }
}

TEST(GtIntegral, ScalarQuadratureOracle) {
  for (const double s : {0.3, 0.5, 0.7}) {
    const double nu = 2 * pi / 3;
    double want = 0.0;
    const double du = 1e-3;
    for (double u = -80.0; u <= 80.0; u += du) {
      const double r = std::exp(u);
      want += 2.0 * du * std::pow(r, 1.0 - s) / std::abs(std::polar(r, nu) - 1.0);
    }
    const GtResult g = gt_absolute_integral(OperatorMatrix(eye(1)), s, nu, Vector::Ones(1), NormSpec::lp(1, 1.0));
    EXPECT_NEAR(g.value, want, 1e-6 * want) << "s = " << s;
  }
}

TEST(GtIntegral, TrivialCases) {
  EXPECT_EQ(gt_absolute_integral(OperatorMatrix(eye(2)), 0.5, 3 * pi / 4, Vector::Zero(2), NormSpec::lp(2, 1.0)).value,
            0.0);
  Vector x(2);
  x << 1.0, cplx{0.0, -3.0};
  const double v1 = gt_absolute_integral(OperatorMatrix(eye(1)), 0.5, 3 * pi / 4, Vector::Ones(1), NormSpec::lp(1, 1.0)).value;
  const double v2 = gt_absolute_integral(OperatorMatrix(eye(2)), 0.5, 3 * pi / 4, x, NormSpec::lp(2, 1.0)).value;
  EXPECT_NEAR(v2, 4.0 * v1, 1e-12 * v2);
  EXPECT_THROW(gt_absolute_integral(OperatorMatrix(eye(2)), 0.5, 3 * pi / 4, x, NormSpec::lp(2, 2.0)), Error);
}

TEST(GtIntegral, PositiveDiagonalRatioIsConstant) {
  Rng rng = make_stream(26, 0);
  const OperatorMatrix A(diag({0.1, 1.0, 7.0, 40.0}));
  const NormSpec n = NormSpec::lp(4, 1.0);
  const double base = gt_absolute_integral(OperatorMatrix(eye(1)), 0.5, 3 * pi / 4, Vector::Ones(1), NormSpec::lp(1, 1.0)).value;
  for (int i = 0; i < 5; ++i) {
    const GtResult g = gt_absolute_integral(A, 0.5, 3 * pi / 4, complex_gaussian(4, rng), n);
    EXPECT_NEAR(g.ratio, base, 1e-6 * base);
  }
}

TEST(GtIntegral, TwoSidedOnComplexSpectrum) {
  Rng rng = make_stream(27, 0);
  const OperatorMatrix A(random_diagonalizable(6, pi / 3, rng, 5.0).A);
  const NormSpec n = NormSpec::lp(6, 1.0);
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < 20; ++i) {
    const GtResult g = gt_absolute_integral(A, 0.5, 2 * pi / 3, complex_gaussian(6, rng), n);
    lo = std::min(lo, g.ratio);
    hi = std::max(hi, g.ratio);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 1e3);
}
