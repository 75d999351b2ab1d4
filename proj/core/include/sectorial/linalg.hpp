#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "sectorial/types.hpp"

namespace sectorial {

double spectral_norm(const Matrix& m);
double smallest_singular_value(const Matrix& m);

/// A linear map given only through its action and the action of its adjoint.
/// Used for the large block-Toeplitz maps of the regularity harness.
struct LinearMap {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::function<Vector(const Vector&)> apply;
  std::function<Vector(const Vector&)> apply_adjoint;

  static LinearMap from_matrix(const Matrix& m);
};

/// Largest singular value of `op` by Golub-Kahan-Lanczos bidiagonalization
/// with full reorthogonalization. Deterministic (fixed start vector).
struct LanczosResult {
  double value = 0.0;
  Vector right_vector;  // unit right singular vector estimate
  int iterations = 0;
  bool converged = false;
};
LanczosResult largest_singular_value(const LinearMap& op, int max_iterations = 300,
                                     double rel_tol = 1e-13);

/// Fixed-order pairwise (cascade) summation. Adding the same sequence always
/// produces bit-identical results; error growth is O(log n).
template <class T>
class PairwiseSum {
 public:
  void add(T value) {
    std::size_t level = 0;
    while (level < slots_.size() && slots_[level].second) {
      value = std::move(slots_[level].first) + value;
      slots_[level].second = false;
      ++level;
    }
    if (level == slots_.size()) slots_.emplace_back(std::move(value), true);
    else slots_[level] = {std::move(value), true};
    ++count_;
  }

  // Combines partial sums from the finest level upward.
  T result(T zero) const {
    bool have = false;
    T acc = zero;
    for (const auto& [v, used] : slots_) {
      if (!used) continue;
      acc = have ? T(v + acc) : T(v);
      have = true;
    }
    return acc;
  }

  std::size_t count() const noexcept { return count_; }

 private:
  std::vector<std::pair<T, bool>> slots_;
  std::size_t count_ = 0;
};

using Rng = std::mt19937_64;

/// Independent deterministic stream for (seed, index); used so that parallel
/// multi-starts are reproducible regardless of scheduling.
Rng make_stream(std::uint64_t seed, std::uint64_t index);

Vector complex_gaussian(Eigen::Index n, Rng& rng);
Matrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Matrix random_unitary(Eigen::Index n, Rng& rng);

/// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads.
/// Callers must write results by index; completion order is irrelevant.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace sectorial
