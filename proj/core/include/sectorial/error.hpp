#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sectorial {

/// Failure categories raised by the numerical modules. The names returned by
/// `to_string` are the ones surfaced in CLI reports.
enum class Errc {
  SingularResolvent,
  NotSectorial,
  IllConditionedEigenbasis,
  PoleHit,
  MissingDecay,
  NoConvergence,
  CommutantViolation,
  NonCommuting,
  TailTooLarge,
  AngleSumExceeded,
  SumSingular,
  AngleExceeded,
  InvalidArgument,
  UnsupportedNorm,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return to_string(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, Errc code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace sectorial
