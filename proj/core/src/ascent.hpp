#pragma once

#include <cstdint>
#include <vector>

#include "sectorial/norm.hpp"
#include "sectorial/rademacher.hpp"

namespace sectorial::detail {

/// Sign patterns as rows of an N x m matrix of +-1 (stored complex so that
/// X * S^T needs no conversion). Exhaustive sets fix the first sign to +1.
struct Patterns {
  Matrix S;
  bool exhaustive = true;
};

Patterns single_patterns(int m, const SignConfig& sign);
/// Products eps_j eta_k on slot j*n + k. Exhaustive only for n <= 3.
Patterns double_patterns(int n, const SignConfig& sign);

struct NormValue {
  double value = 0.0;
  Matrix gradient;  // dim x m; Re tr(gradient^H X) == value
};

enum class Denominator { Rad, Max };

/// Columns of X are the vectors x_1..x_m.
double rad(const Matrix& X, const Patterns& P, const NormSpec& norm);
NormValue rad_with_gradient(const Matrix& X, const Patterns& P, const NormSpec& norm);
double sign_max(const Matrix& X, const Patterns& P, const NormSpec& norm);
NormValue sign_max_with_gradient(const Matrix& X, const Patterns& P, const NormSpec& norm);
double denominator(Denominator d, const Matrix& X, const Patterns& P, const NormSpec& norm);

/// Slot operators; an empty matrix stands for the identity.
using Slots = std::vector<Matrix>;

Matrix apply_slots(const Slots& T, const Matrix& X);

double r_ratio(const Slots& T, const NormSpec& norm, const Patterns& P, const Matrix& X);
double w_ratio(const Slots& T, const NormSpec& norm, const Patterns& P, Denominator den, const Matrix& X,
               const Matrix& Y);

struct AscentResult {
  double value = 0.0;
  Matrix X;
  Matrix Y;  // dual vectors (pairing ratios only)
  int steps = 0;
};

/// Gradient ascent of log r_ratio with backtracking; monotone.
AscentResult ascend_r(const Slots& T, const NormSpec& norm, const Patterns& P, Matrix X, int steps);
/// Joint gradient ascent of log w_ratio in (X, Y); Y lives in the dual norm.
AscentResult ascend_w(const Slots& T, const NormSpec& norm, const Patterns& P, Denominator den, Matrix X,
                      Matrix Y, int steps);

std::uint64_t mix_seed(std::uint64_t seed, const std::vector<std::size_t>& key);

}  // namespace sectorial::detail
