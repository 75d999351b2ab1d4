#pragma once

#include <cstdint>
#include <vector>

#include "sectorial/calculus.hpp"
#include "sectorial/norm.hpp"

namespace sectorial::detail {

/// Operator norm of square matrices in a fixed NormSpec; closed forms where
/// possible, otherwise a deterministic Boyd iteration.
class MatrixNorm {
 public:
  explicit MatrixNorm(const NormSpec& norm);

  double operator()(const Matrix& m) const;
  OperatorNormResult with_witness(const Matrix& m) const;
  const NormSpec& spec() const noexcept { return norm_; }

 private:
  NormSpec norm_;
  bool exact_;
  double exponent_;
};

struct SignSupResult {
  double value = 0.0;
  std::vector<int> signs;
  std::uint64_t patterns = 0;
};

/// max over eps in {+-1}^n of ||sum eps_k M_k||, by Gray-code enumeration
/// with eps_0 = +1 (the global sign does not change the norm).
SignSupResult exhaustive_sign_sup(const std::vector<Matrix>& members, const MatrixNorm& norm);

/// Multi-start greedy single-flip ascent over signs.
SignSupResult randomized_sign_sup(const std::vector<Matrix>& members, const MatrixNorm& norm,
                                  const SignSearchOptions& options);

double evaluate_combination(const std::vector<Matrix>& members, const MatrixNorm& norm,
                            const std::vector<cplx>& alpha);

/// Coordinate ascent of ||sum alpha_k M_k|| over |alpha_k| = 1, starting
/// from (and updating) alpha. Monotone. Returns the final value.
double phase_ascent(const std::vector<Matrix>& members, const MatrixNorm& norm, std::vector<cplx>& alpha,
                    int sweeps);

}  // namespace sectorial::detail
