#pragma once

// Transfer inequalities between the exponents omega_d, evaluated exactly on
// extended-real intervals, and the compositions that derive one from another.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dioph/numerics.hpp"

namespace dioph {

enum class Provenance { Estimated, Asserted };
const char* to_string(Provenance p);

struct ExponentVector {
  int n = 0;
  std::map<int, ExtendedReal> omega;  // d -> omega_d, 0 <= d <= n-1
  std::optional<ExtendedReal> omega_hat_0;
  std::optional<ExtendedReal> omega_hat_top;
  Provenance provenance = Provenance::Asserted;
  std::string note;
};

/// Signed extended real; Undefined marks limits that do not exist.
struct ExtValue {
  enum class Kind { Finite, PlusInfinity, MinusInfinity, Undefined };
  Kind kind = Kind::Finite;
  Enclosure value;

  static ExtValue finite(const Enclosure& e) { return {Kind::Finite, e}; }
  static ExtValue plus_infinity() { return {Kind::PlusInfinity, {}}; }
  static ExtValue minus_infinity() { return {Kind::MinusInfinity, {}}; }
  static ExtValue undefined() { return {Kind::Undefined, {}}; }
  static ExtValue from(const ExtendedReal& x);

  bool is_finite() const { return kind == Kind::Finite; }
  bool is_exact() const { return kind != Kind::Finite || value.is_exact(); }
  double approx() const;
  std::string str() const;
};

Certificate certify_le(const ExtValue& a, const ExtValue& b);
ExtValue operator-(const ExtValue& a, const ExtValue& b);
ExtValue operator+(const ExtValue& a, const ExtValue& b);
/// Exact agreement: True when both are the same exact value or the same infinity.
Certificate agree(const ExtValue& a, const ExtValue& b);

/// Polynomial with rational coefficients, of degree at most one in each variable.
class MultilinearPoly {
 public:
  MultilinearPoly() = default;
  static MultilinearPoly constant(const BigRational& c);
  static MultilinearPoly variable(int index);

  const std::map<unsigned, BigRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Splits p = a x_i + b.
  std::pair<MultilinearPoly, MultilinearPoly> split(int index) const;

  MultilinearPoly operator+(const MultilinearPoly& o) const;
  MultilinearPoly operator-(const MultilinearPoly& o) const;
  MultilinearPoly operator*(const MultilinearPoly& o) const;  // throws when a variable would square
  bool operator==(const MultilinearPoly& o) const { return terms_ == o.terms_; }

 private:
  void add_term(unsigned mask, const BigRational& c);
  std::map<unsigned, BigRational> terms_;
};

MultilinearPoly operator*(const BigRational& c, const MultilinearPoly& p);

/// A bound num/den; infinite variables are resolved by iterated limits in index order.
struct RationalBound {
  MultilinearPoly num;
  MultilinearPoly den = MultilinearPoly::constant(1);
};

/// Variable slots: omega_d at index d, omega_hat_0 at n, omega_hat_{n-1} at n+1.
using Assignment = std::vector<std::optional<ExtValue>>;
Assignment assignment_of(const ExponentVector& e);
std::string variable_name(int index, int n);

/// Evaluates with limit conventions; flags collect LIMIT and BOUNDARY notes.
ExtValue evaluate(const RationalBound& b, const Assignment& values, std::vector<std::string>* flags = nullptr);

enum class Verdict { Holds, Violated, Undecided, Consistent, Inconclusive, Skipped };
const char* to_string(Verdict v);

/// The inequality lhs <= rhs; margin = rhs - lhs.
struct InequalityVerdict {
  std::string name;
  std::string statement;
  ExtValue lhs;
  ExtValue rhs;
  ExtValue margin;
  Verdict verdict = Verdict::Undecided;
  bool advisory = false;
  std::vector<std::string> flags;
};

struct CheckOptions {
  BigRational tolerance = BigRational(3, 20);  // one-sided slack for estimated vectors
  bool advisory = false;                       // entry independence unchecked
};

std::vector<InequalityVerdict> check_all(const ExponentVector& e, const CheckOptions& opts = {});

struct TraceStep {
  std::string label;
  ExtValue value;
};

struct ChainResult {
  ExtValue chained;
  ExtValue direct;
  Certificate agrees = Certificate::Undecided;
  std::vector<TraceStep> trace;
};

struct Theorem1Parts {
  InequalityVerdict lower;        // two-level lower bound on omega_0
  InequalityVerdict upper;        // solved form: omega_{n-1} >= ((n-1)omega_0 + hat0 + n-2)/(1-hat0)
  InequalityVerdict upper_printed;
  ChainResult lower_chain;        // level chain (0, n-2) after refined going-down
  ChainResult upper_chain;        // level chain (1, n-1) after refined going-up
  bool forms_equivalent = false;  // printed and solved upper forms agree as polynomials for hat0 < 1
};

Theorem1Parts theorem1_from_parts(const ExponentVector& e, const CheckOptions& opts = {});

struct LevelChainComposition {
  ChainResult lower;  // iterated going-down from d' to d
  ChainResult upper;  // iterated inverse going-up from d' to d
};

LevelChainComposition compose_level_chain(const ExponentVector& e, int d, int d_prime);

/// The level chain at (0, n-1) against both sides of Khintchine's bounds.
std::pair<Certificate, Certificate> level_chain_reproduces_khintchine(const ExponentVector& e);

}  // namespace dioph
