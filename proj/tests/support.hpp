#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "sectorial/linalg.hpp"
#include "sectorial/operator_matrix.hpp"
#include "sectorial/sums.hpp"
#include "sectorial/types.hpp"

namespace sectorial::testing {

inline double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

inline Matrix eye(Eigen::Index d) { return Matrix::Identity(d, d); }

inline Matrix diag(std::initializer_list<cplx> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const cplx z : v) d(i++) = z;
  return d.asDiagonal();
}

/// V diag(lambda) V^{-1} with moduli in [10^-lo, 10^hi], |arg| < angle and a
/// random eigenbasis of condition about `condition`.
struct Diagonalizable {
  Matrix A;
  Matrix V;
  Matrix Vinv;
  Vector lambda;
};

inline Diagonalizable random_diagonalizable(Eigen::Index d, double angle, Rng& rng, double condition = 10.0,
                                            double decades = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Diagonalizable out;
  out.lambda.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) out.lambda(i) = std::polar(std::pow(10.0, decades * u(rng)), 0.95 * angle * u(rng));
  RealVector s(d);
  for (Eigen::Index i = 0; i < d; ++i) s(i) = d > 1 ? std::pow(condition, double(i) / double(d - 1)) : 1.0;
  out.V = random_unitary(d, rng) * s.cast<cplx>().asDiagonal() * random_unitary(d, rng);
  out.Vinv = out.V.inverse();
  out.A = out.V * out.lambda.asDiagonal() * out.Vinv;
  return out;
}

template <class F>
Matrix eigen_oracle(const Diagonalizable& D, F f) {
  Vector v(D.lambda.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f(D.lambda(i));
  return D.V * v.asDiagonal() * D.Vinv;
}

/// Rademacher average by brute force over all 2^n sign patterns.
inline double brute_rad(const std::vector<Vector>& xs, const std::function<double(const Vector&)>& norm) {
  const std::size_t n = xs.size();
  double acc = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    Vector s = Vector::Zero(xs.front().size());
    for (std::size_t k = 0; k < n; ++k) s += ((mask >> k) & 1 ? -1.0 : 1.0) * xs[k];
    const double v = norm(s);
    acc += v * v;
  }
  return std::sqrt(acc / static_cast<double>(1ULL << n));
}

inline double lp_norm(const Vector& x, double p) {
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)), p);
  return std::pow(s, 1.0 / p);
}

/// Commuting pair sharing the eigenbasis of a random diagonalizable A.
struct SharedPair {
  Matrix V;
  Matrix Vinv;
  Vector a;
  Vector b;
  CommutingPair pair;
};

inline Vector random_spectrum(Eigen::Index d, double angle, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = std::polar(std::pow(10.0, u(rng)), 0.95 * angle * u(rng));
  return v;
}

inline SharedPair shared_pair(Eigen::Index d, double angle_a, double angle_b, Rng& rng, double condition) {
  const Diagonalizable D = random_diagonalizable(d, angle_a, rng, condition);
  const Vector b = random_spectrum(d, angle_b, rng);
  const Matrix B = D.V * b.asDiagonal() * D.Vinv;
  return {D.V, D.Vinv, D.lambda, b, CommutingPair{OperatorMatrix(D.A), OperatorMatrix(B)}};
}

// Exact l2 constant on a unitary eigenbasis: with p_i = |x_i|^2 the ratio is
// (sqrt(sum |a|^2 p) + sqrt(sum |b|^2 p)) / sqrt(sum |a+b|^2 p) over the simplex.
inline double simplex_oracle(const Vector& a, const Vector& b) {
  const Eigen::Index d = a.size();
  auto ratio = [&](const RealVector& p) {
    double sa = 0.0, sb = 0.0, ss = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      sa += std::norm(a(i)) * p(i);
      sb += std::norm(b(i)) * p(i);
      ss += std::norm(a(i) + b(i)) * p(i);
    }
    return (std::sqrt(sa) + std::sqrt(sb)) / std::sqrt(ss);
  };
  double best = 0.0;
  RealVector arg;
  const int steps = 120;
  std::vector<int> k(static_cast<std::size_t>(d), 0);
  std::function<void(Eigen::Index, int)> walk = [&](Eigen::Index i, int left) {
    if (i == d - 1) {
      k[static_cast<std::size_t>(i)] = left;
      RealVector p(d);
      for (Eigen::Index j = 0; j < d; ++j) p(j) = double(k[static_cast<std::size_t>(j)]) / steps;
      const double r = ratio(p);
      if (r > best) {
        best = r;
        arg = p;
      }
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[static_cast<std::size_t>(i)] = v;
      walk(i + 1, left - v);
    }
  };
  walk(0, steps);
  // Pairwise mass transfers polish the grid optimum.
  for (double step = 1.0 / steps; step > 1e-10; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
          if (i == j || arg(j) < step) continue;
          RealVector q = arg;
          q(i) += step;
          q(j) -= step;
          const double r = ratio(q);
          if (r > best) {
            best = r;
            arg = q;
            moved = true;
          }
        }
    }
  }
  return best;
}

}  // namespace sectorial::testing
