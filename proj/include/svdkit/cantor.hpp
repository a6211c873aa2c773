#pragma once

#include <memory>
#include <vector>

namespace svdkit {

/// Ternary digits consumed by default. The truncation error of the staircase
/// is at most 2^-40 (about 9.1e-13).
inline constexpr int kDefaultCantorDepth = 40;

/// Exact ternary digits of a double in [0, 1). Every finite double is a dyadic
/// rational, so the expansion is computed with integer arithmetic and never
/// drifts the way repeated `x *= 3` does.
class TernaryExpansion {
 public:
  explicit TernaryExpansion(double x);
  ~TernaryExpansion();
  TernaryExpansion(const TernaryExpansion&) = delete;
  TernaryExpansion& operator=(const TernaryExpansion&) = delete;

  /// Next digit in {0, 1, 2}.
  int next();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Cantor-Lebesgue function C(x) with absolute error <= 2^-depth.
/// Throws DomainError outside [0, 1].
double cantor_eval(double x, int depth = kDefaultCantorDepth);

/// First moment of the Cantor measure, M(x) = int_0^x s dC(s).
double cantor_moment(double x, int depth = kDefaultCantorDepth);

/// True when the first `depth` ternary digits of x avoid the digit 1, i.e. x
/// cannot be told apart from a point of the Cantor set at that depth.
/// Values outside [0, 1] are never in the set.
bool in_cantor_set(double x, int depth = kDefaultCantorDepth);

std::vector<int> ternary_digits(double x, int count);

}  // namespace svdkit
