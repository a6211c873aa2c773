#include "svdkit/cantor.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <variant>

#include "svdkit/errors.hpp"

namespace svdkit {

namespace {

using Big = boost::multiprecision::cpp_int;
using u128 = unsigned __int128;

// x = numerator / 2^shift with numerator < 2^shift.
template <class Int>
struct DyadicDigits {
  Int numerator;
  int shift;

  int next() {
    numerator *= 3;
    Int digit = numerator >> shift;
    numerator -= digit << shift;
    return static_cast<int>(digit);
  }
};

}  // namespace

struct TernaryExpansion::State {
  std::variant<DyadicDigits<u128>, DyadicDigits<Big>> digits;
};

TernaryExpansion::TernaryExpansion(double x) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("ternary expansion needs x in [0, 1)");
  if (x == 0.0) {
    state_ = std::make_unique<State>(State{DyadicDigits<u128>{0, 1}});
    return;
  }
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent
  const auto m = static_cast<std::uint64_t>(std::ldexp(mantissa, 53));
  const int shift = 53 - exponent;
  if (shift <= 120) {
    state_ = std::make_unique<State>(State{DyadicDigits<u128>{static_cast<u128>(m), shift}});
  } else {
    state_ = std::make_unique<State>(State{DyadicDigits<Big>{Big(m), shift}});
  }
}

TernaryExpansion::~TernaryExpansion() = default;

int TernaryExpansion::next() {
  return std::visit([](auto& d) { return d.next(); }, state_->digits);
}

std::vector<int> ternary_digits(double x, int count) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count));
  TernaryExpansion expansion(x);
  for (int i = 0; i < count; ++i) out.push_back(expansion.next());
  return out;
}

double cantor_eval(double x, int depth) {
  if (depth < 1) throw ContractError("cantor_eval: depth must be >= 1");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("cantor_eval: x outside [0, 1]");
  if (x == 1.0) return 1.0;
  if (x < std::pow(3.0, -depth)) return 0.0;

  TernaryExpansion expansion(x);
  double result = 0.0;
  double weight = 0.5;
  for (int k = 0; k < depth; ++k, weight *= 0.5) {
    const int digit = expansion.next();
    if (digit == 1) return result + weight;
    if (digit == 2) result += weight;
  }
  return result;
}

double cantor_moment(double x, int depth) {
  if (depth < 1) throw ContractError("cantor_moment: depth must be >= 1");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("cantor_moment: x outside [0, 1]");
  if (x == 1.0) return 0.5;
  if (x == 0.0) return 0.0;

  // M(x) = a + b M(y) + c C(y) where y is the tail of the expansion.
  // Digit 0: M(y) = M(y')/6,                 C(y) = C(y')/2
  // Digit 2: M(y) = 1/12 + M(y')/6 + C(y')/3, C(y) = 1/2 + C(y')/2
  // Digit 1: M(y) = 1/12,                    C(y) = 1/2
  double a = 0.0, b = 1.0, c = 0.0;
  TernaryExpansion expansion(x);
  for (int k = 0; k < depth; ++k) {
    const int digit = expansion.next();
    if (digit == 1) return a + b / 12.0 + c / 2.0;
    if (digit == 0) {
      b /= 6.0;
      c /= 2.0;
    } else {
      a += b / 12.0 + c / 2.0;
      c = b / 3.0 + c / 2.0;
      b /= 6.0;
    }
  }
  return a;
}

bool in_cantor_set(double x, int depth) {
  if (!(x >= 0.0 && x <= 1.0)) return false;
  if (x == 0.0 || x == 1.0) return true;
  TernaryExpansion expansion(x);
  for (int k = 0; k < depth; ++k) {
    if (expansion.next() == 1) return false;
  }
  return true;
}

}  // namespace svdkit
