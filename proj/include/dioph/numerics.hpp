#pragma once

// Exact rationals and rigorous real enclosures.
//
// Every real quantity used in an inequality decision is carried as an
// Enclosure: a closed interval with dyadic (or at least rational) endpoints
// that is guaranteed to contain the true value. Operations round outward
// only, so a decision taken from an enclosure is a proof.

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dioph/errors.hpp"

namespace dioph {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline constexpr int kDefaultPrecisionCap = 4096;

BigInt floor_q(const BigRational& q);
BigInt ceil_q(const BigRational& q);

/// Largest multiple of 2^-bits that is <= q.
BigRational floor_to_grid(const BigRational& q, int bits);
/// Smallest multiple of 2^-bits that is >= q.
BigRational ceil_to_grid(const BigRational& q, int bits);

/// num/den in canonical form.
BigRational ratio(const BigInt& num, const BigInt& den);
BigRational pow2(int e);
BigRational abs_q(const BigRational& q);
/// Floor of log2(|q|) for q != 0.
long ilog2(const BigRational& q);

std::string to_string(const BigRational& q);
BigRational parse_rational(const std::string& text);

class Enclosure {
 public:
  Enclosure() = default;
  explicit Enclosure(const BigRational& exact_value);
  Enclosure(BigRational lo, BigRational hi, int precision_bits);

  static Enclosure exact(const BigRational& v) { return Enclosure(v); }
  static Enclosure hull(const Enclosure& a, const Enclosure& b);

  const BigRational& lower() const { return lo_; }
  const BigRational& upper() const { return hi_; }
  int precision_bits() const { return bits_; }
  BigRational width() const { return hi_ - lo_; }
  BigRational midpoint() const { return (lo_ + hi_) / 2; }
  BigRational radius() const { return (hi_ - lo_) / 2; }
  bool is_exact() const { return lo_ == hi_; }
  bool contains(const BigRational& q) const { return lo_ <= q && q <= hi_; }
  bool contains(const Enclosure& e) const { return lo_ <= e.lo_ && e.hi_ <= hi_; }
  bool certainly_positive() const { return lo_ > 0; }
  bool certainly_negative() const { return hi_ < 0; }
  bool contains_zero() const { return lo_ <= 0 && hi_ >= 0; }
  double approx() const { return midpoint().get_d(); }

  /// Outward rounding of both endpoints to the 2^-bits grid.
  Enclosure rounded(int bits) const;
  /// Outward rounding that keeps the relative error near 2^-bits.
  Enclosure rounded_relative(int bits) const;

  Enclosure operator-() const;
  Enclosure& operator+=(const Enclosure& o);
  Enclosure& operator-=(const Enclosure& o);
  Enclosure& operator*=(const Enclosure& o);

  friend Enclosure operator+(Enclosure a, const Enclosure& b) { return a += b; }
  friend Enclosure operator-(Enclosure a, const Enclosure& b) { return a -= b; }
  friend Enclosure operator*(Enclosure a, const Enclosure& b) { return a *= b; }
  friend Enclosure operator/(const Enclosure& a, const Enclosure& b);

 private:
  BigRational lo_{0};
  BigRational hi_{0};
  int bits_ = 1 << 30;
};

Enclosure abs(const Enclosure& e);
Enclosure max(const Enclosure& a, const Enclosure& b);
Enclosure min(const Enclosure& a, const Enclosure& b);
Enclosure square(const Enclosure& e);
Enclosure pow(const Enclosure& e, unsigned k);
/// Enclosure of sqrt(q), q >= 0, with width <= 2^-bits.
Enclosure sqrt_q(const BigRational& q, int bits);
/// Negative lower endpoints are clipped to zero; an entirely negative input throws.
Enclosure sqrt(const Enclosure& e, int bits);
/// sqrt with about `bits` significant bits, for values of any magnitude.
Enclosure sqrt_relative(const Enclosure& e, int bits);
/// Natural logarithm with directed rounding; requires a positive enclosure.
Enclosure log(const Enclosure& e, int bits);
Enclosure exp(const Enclosure& e, int bits);
Enclosure pi(int bits);
/// base^exponent for a positive base and an exact rational exponent.
Enclosure pow_rational(const Enclosure& base, const BigRational& exponent, int bits);

std::ostream& operator<<(std::ostream& os, const Enclosure& e);

enum class Certificate { True, False, Undecided };

const char* to_string(Certificate c);

/// TRUE when a.upper <= b.lower, FALSE when a.lower > b.upper.
Certificate certify_le(const Enclosure& a, const Enclosure& b);
Certificate certify_lt(const Enclosure& a, const Enclosure& b);

/// A real value that may be +infinity (suprema of exponents).
class ExtendedReal {
 public:
  ExtendedReal() = default;
  ExtendedReal(const Enclosure& e) : value_(e) {}  // NOLINT: implicit by intent
  ExtendedReal(const BigRational& q) : value_(Enclosure(q)) {}  // NOLINT

  static ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const { return infinite_; }
  const Enclosure& value() const;

 private:
  bool infinite_ = false;
  Enclosure value_;
};

Certificate certify_le(const ExtendedReal& a, const ExtendedReal& b);

// ---------------------------------------------------------------------------
// Real descriptions

struct RationalLiteral {
  BigRational value;
};

struct DecimalLiteral {
  std::string text;  // e.g. "-0.1234567890"
};

/// Real root of an integer polynomial isolated in [lower, upper].
struct AlgebraicNumber {
  std::vector<BigInt> coeffs;  // ascending powers
  BigRational lower;
  BigRational upper;
};

/// Integer exponent schedule a_1 < a_2 < ... for lacunary series.
struct Schedule {
  enum class Kind { Power, Factorial, Affine, Explicit };
  Kind kind = Kind::Power;
  BigInt a = 3;  // Power: a_k = a^k; Affine: a_k = a*k + b
  BigInt b = 0;
  std::vector<BigInt> terms;  // Explicit (finite)

  /// a_k for k >= 1; nullopt past the end of an explicit list.
  std::optional<BigInt> term(long k) const;
  std::string describe() const;
};

/// sum_{k>=1} base^(-a_k).
struct LacunarySeries {
  BigInt base = 2;
  Schedule schedule;
};

using RealDescription =
    std::variant<RationalLiteral, AlgebraicNumber, LacunarySeries, DecimalLiteral>;

BigRational decimal_value(const DecimalLiteral& d);
void validate(const RealDescription& d);
bool is_rational(const RealDescription& d);
std::string describe(const RealDescription& d);

/// Enclosure of width <= 2^-precision_bits containing the described real.
Enclosure eval(const RealDescription& d, int precision_bits);

/// Calls f(bits) with doubling precision until it yields a value.
template <class F>
auto escalate(int start_bits, int cap_bits, F&& f) -> typename decltype(f(0))::value_type {
  for (int bits = start_bits; bits <= cap_bits; bits *= 2) {
    if (auto r = f(bits)) return *std::move(r);
  }
  throw PrecisionExhausted("precision cap of " + std::to_string(cap_bits) + " bits reached");
}

}  // namespace dioph
