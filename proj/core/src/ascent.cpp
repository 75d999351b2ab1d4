#include "ascent.hpp"

#include <cmath>

namespace sectorial::detail {

Matrix apply_slots(const Slots& T, const Matrix& X) {
  Matrix out(X.rows(), X.cols());
  for (Eigen::Index b = 0; b < X.cols(); ++b) {
    const Matrix& t = T[static_cast<std::size_t>(b)];
    out.col(b) = t.size() == 0 ? Vector(X.col(b)) : Vector(t * X.col(b));
  }
  return out;
}

namespace {

Matrix apply_slots_adjoint(const Slots& T, const Matrix& Y) {
  Matrix out(Y.rows(), Y.cols());
  for (Eigen::Index b = 0; b < Y.cols(); ++b) {
    const Matrix& t = T[static_cast<std::size_t>(b)];
    out.col(b) = t.size() == 0 ? Vector(Y.col(b)) : Vector(t.adjoint() * Y.col(b));
  }
  return out;
}

NormValue den_with_gradient(Denominator d, const Matrix& X, const Patterns& P, const NormSpec& norm) {
  return d == Denominator::Rad ? rad_with_gradient(X, P, norm) : sign_max_with_gradient(X, P, norm);
}

double pairing_sum(const Matrix& TX, const Matrix& Y) {
  double s = 0.0;
  for (Eigen::Index b = 0; b < TX.cols(); ++b) s += std::abs(Y.col(b).dot(TX.col(b)));
  return s;
}

// Generic monotone ascent: value(z) and log-gradient(z) on a point z that is
// renormalized after every accepted step.
template <class Point, class Value, class Gradient, class Normalize, class Step>
int backtracking_ascent(Point& z, double& value, int steps, Value val, Gradient grad, Normalize normalize,
                        Step step) {
  double eta = 0.5;
  int taken = 0;
  for (int it = 0; it < steps; ++it) {
    const auto g = grad(z);
    bool accepted = false;
    for (int tries = 0; tries < 8; ++tries) {
      Point trial = step(z, g, eta);
      if (!normalize(trial)) {
        eta *= 0.25;
        continue;
      }
      const double v = val(trial);
      if (v > value) {
        const bool tiny = v <= value * (1.0 + 1e-13);
        value = v;
        z = std::move(trial);
        eta *= 1.5;
        accepted = !tiny;
        ++taken;
        break;
      }
      eta *= 0.25;
    }
    if (!accepted) break;
  }
  return taken;
}

}  // namespace

double r_ratio(const Slots& T, const NormSpec& norm, const Patterns& P, const Matrix& X) {
  const double d = rad(X, P, norm);
  if (!(d > 0.0)) return 0.0;
  return rad(apply_slots(T, X), P, norm) / d;
}

double w_ratio(const Slots& T, const NormSpec& norm, const Patterns& P, Denominator den, const Matrix& X,
               const Matrix& Y) {
  const double dx = denominator(den, X, P, norm);
  const double dy = denominator(den, Y, P, norm.dual());
  if (!(dx > 0.0) || !(dy > 0.0)) return 0.0;
  return pairing_sum(apply_slots(T, X), Y) / (dx * dy);
}

AscentResult ascend_r(const Slots& T, const NormSpec& norm, const Patterns& P, Matrix X, int steps) {
  auto normalize = [&](Matrix& Z) {
    const double d = rad(Z, P, norm);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    Z /= d;
    return true;
  };
  auto value = [&](const Matrix& Z) { return r_ratio(T, norm, P, Z); };
  auto gradient = [&](const Matrix& Z) -> Matrix {
    const NormValue num = rad_with_gradient(apply_slots(T, Z), P, norm);
    const NormValue den = rad_with_gradient(Z, P, norm);
    if (!(num.value > 0.0)) return -den.gradient / den.value;
    return apply_slots_adjoint(T, num.gradient) / num.value - den.gradient / den.value;
  };
  auto step = [](const Matrix& Z, const Matrix& g, double eta) -> Matrix { return Z + eta * g; };

  AscentResult out;
  if (!normalize(X)) return out;
  out.value = value(X);
  out.steps = backtracking_ascent(X, out.value, steps, value, gradient, normalize, step);
  out.X = std::move(X);
  return out;
}

AscentResult ascend_w(const Slots& T, const NormSpec& norm, const Patterns& P, Denominator den, Matrix X,
                      Matrix Y, int steps) {
  const NormSpec dual = norm.dual();
  using Pair = std::pair<Matrix, Matrix>;
  auto normalize = [&](Pair& z) {
    const double dx = denominator(den, z.first, P, norm);
    const double dy = denominator(den, z.second, P, dual);
    if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) return false;
    z.first /= dx;
    z.second /= dy;
    return true;
  };
  auto value = [&](const Pair& z) { return w_ratio(T, norm, P, den, z.first, z.second); };
  auto gradient = [&](const Pair& z) -> Pair {
    const Matrix TX = apply_slots(T, z.first);
    // d|c_b| along X_b is T_b^H y_b c_b/|c_b|; along y_b it is T_b x_b conj(c_b)/|c_b|.
    Matrix gy = Matrix::Zero(z.second.rows(), z.second.cols());
    Matrix py = Matrix::Zero(z.second.rows(), z.second.cols());
    double total = 0.0;
    for (Eigen::Index b = 0; b < TX.cols(); ++b) {
      const cplx c = z.second.col(b).dot(TX.col(b));
      const double a = std::abs(c);
      total += a;
      if (a == 0.0) continue;
      gy.col(b) = TX.col(b) * (std::conj(c) / a);
      py.col(b) = z.second.col(b) * (c / a);
    }
    const NormValue dx = den_with_gradient(den, z.first, P, norm);
    const NormValue dy = den_with_gradient(den, z.second, P, dual);
    if (!(total > 0.0)) return {-dx.gradient / dx.value, -dy.gradient / dy.value};
    return {apply_slots_adjoint(T, py) / total - dx.gradient / dx.value, gy / total - dy.gradient / dy.value};
  };
  auto step = [](const Pair& z, const Pair& g, double eta) -> Pair {
    return {z.first + eta * g.first, z.second + eta * g.second};
  };

  AscentResult out;
  Pair z{std::move(X), std::move(Y)};
  if (!normalize(z)) return out;
  out.value = value(z);
  out.steps = backtracking_ascent(z, out.value, steps, value, gradient, normalize, step);
  out.X = std::move(z.first);
  out.Y = std::move(z.second);
  return out;
}

}  // namespace sectorial::detail
