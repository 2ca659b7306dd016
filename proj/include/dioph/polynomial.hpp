#pragma once

#include <vector>

#include "dioph/numerics.hpp"

namespace dioph {

/// Dense univariate polynomial over Q, ascending coefficients, no trailing zeros.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<BigRational> coeffs);
  static Polynomial from_integers(const std::vector<BigInt>& coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<BigRational>& coeffs() const { return c_; }
  const BigRational& leading() const { return c_.back(); }

  BigRational operator()(const BigRational& x) const;
  Enclosure operator()(const Enclosure& x) const;

  Polynomial derivative() const;
  Polynomial monic() const;
  Polynomial operator-() const;

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  /// Euclidean division; returns {quotient, remainder}.
  static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
  static Polynomial gcd(Polynomial a, Polynomial b);

  Polynomial squarefree_part() const;

  /// Number of distinct real roots in the half-open interval (lo, hi].
  int count_roots(const BigRational& lo, const BigRational& hi) const;

 private:
  void trim();
  std::vector<BigRational> c_;
};

/// Exact irreducibility test over Q for integer polynomials of degree <= 8.
/// Uses factor-degree patterns modulo small primes, then Kronecker's method.
bool is_irreducible_over_q(const std::vector<BigInt>& coeffs);

}  // namespace dioph
