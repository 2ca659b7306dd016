#include "dioph/numerics.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include "dioph/polynomial.hpp"

namespace dioph {

BigInt floor_q(const BigRational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigInt ceil_q(const BigRational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigRational ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error("zero denominator");
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

BigRational pow2(int e) {
  BigInt p = 1;
  if (e >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return BigRational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return BigRational(BigInt(1), p);
}

BigRational floor_to_grid(const BigRational& q, int bits) {
  BigRational scale = pow2(bits);
  BigRational r(floor_q(q * scale));
  r /= scale;
  return r;
}

BigRational ceil_to_grid(const BigRational& q, int bits) {
  BigRational scale = pow2(bits);
  BigRational r(ceil_q(q * scale));
  r /= scale;
  return r;
}

BigRational abs_q(const BigRational& q) { return q < 0 ? BigRational(-q) : q; }

long ilog2(const BigRational& q) {
  BigRational a = abs_q(q);
  if (a == 0) throw Error("ilog2 of zero");
  long l = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 2));
  // 2^(l-1) < a < 2^(l+1); settle which side of 2^l it is.
  if (a >= pow2(static_cast<int>(l))) return l;
  return l - 1;
}

std::string to_string(const BigRational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

BigRational parse_rational(const std::string& raw) {
  std::string text;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) text.push_back(ch);
  if (text.empty()) throw InvalidDescription("empty rational literal");
  if (auto slash = text.find('/'); slash != std::string::npos) {
    BigInt num, den;
    if (num.set_str(text.substr(0, slash), 10) != 0 || den.set_str(text.substr(slash + 1), 10) != 0)
      throw InvalidDescription("malformed rational literal '" + raw + "'");
    if (den == 0) throw InvalidDescription("zero denominator in '" + raw + "'");
    BigRational q(num, den);
    q.canonicalize();
    return q;
  }
  return decimal_value(DecimalLiteral{text});
}

// ---------------------------------------------------------------------------

Enclosure::Enclosure(const BigRational& v) : lo_(v), hi_(v) {}

Enclosure::Enclosure(BigRational lo, BigRational hi, int precision_bits)
    : lo_(std::move(lo)), hi_(std::move(hi)), bits_(precision_bits) {
  if (lo_ > hi_) throw Error("enclosure with lower > upper");
}

Enclosure Enclosure::hull(const Enclosure& a, const Enclosure& b) {
  return Enclosure(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_), std::min(a.bits_, b.bits_));
}

Enclosure Enclosure::rounded(int bits) const {
  return Enclosure(floor_to_grid(lo_, bits), ceil_to_grid(hi_, bits), std::min(bits_, bits));
}

Enclosure Enclosure::rounded_relative(int bits) const {
  BigRational mag = std::max(abs_q(lo_), abs_q(hi_));
  if (mag == 0) return *this;
  long e = ilog2(mag);
  return Enclosure(floor_to_grid(lo_, bits - static_cast<int>(e)),
                   ceil_to_grid(hi_, bits - static_cast<int>(e)), bits_);
}

Enclosure Enclosure::operator-() const { return Enclosure(-hi_, -lo_, bits_); }

Enclosure& Enclosure::operator+=(const Enclosure& o) {
  lo_ += o.lo_;
  hi_ += o.hi_;
  bits_ = std::min(bits_, o.bits_);
  return *this;
}

Enclosure& Enclosure::operator-=(const Enclosure& o) {
  lo_ -= o.hi_;
  hi_ -= o.lo_;
  bits_ = std::min(bits_, o.bits_);
  return *this;
}

Enclosure& Enclosure::operator*=(const Enclosure& o) {
  if (is_exact() && o.is_exact()) {
    lo_ *= o.lo_;
    hi_ = lo_;
  } else {
    BigRational p[4] = {lo_ * o.lo_, lo_ * o.hi_, hi_ * o.lo_, hi_ * o.hi_};
    lo_ = *std::min_element(p, p + 4);
    hi_ = *std::max_element(p, p + 4);
  }
  bits_ = std::min(bits_, o.bits_);
  return *this;
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (b.contains_zero()) throw Error("division by an enclosure containing zero");
  Enclosure inv(BigRational(1) / b.upper(), BigRational(1) / b.lower(), b.precision_bits());
  return a * inv;
}

Enclosure abs(const Enclosure& e) {
  if (e.lower() >= 0) return e;
  if (e.upper() <= 0) return -e;
  return Enclosure(BigRational(0), std::max(BigRational(-e.lower()), e.upper()), e.precision_bits());
}

Enclosure max(const Enclosure& a, const Enclosure& b) {
  return Enclosure(std::max(a.lower(), b.lower()), std::max(a.upper(), b.upper()),
                   std::min(a.precision_bits(), b.precision_bits()));
}

Enclosure min(const Enclosure& a, const Enclosure& b) {
  return Enclosure(std::min(a.lower(), b.lower()), std::min(a.upper(), b.upper()),
                   std::min(a.precision_bits(), b.precision_bits()));
}

Enclosure square(const Enclosure& e) {
  Enclosure a = abs(e);
  return Enclosure(a.lower() * a.lower(), a.upper() * a.upper(), a.precision_bits());
}

Enclosure pow(const Enclosure& e, unsigned k) {
  if (k == 0) return Enclosure(BigRational(1));
  if (k % 2 == 0) {
    Enclosure h = pow(e, k / 2);
    return square(h);
  }
  return e * pow(e, k - 1);
}

Enclosure sqrt_q(const BigRational& q, int bits) {
  if (q < 0) throw Error("sqrt of a negative rational");
  BigRational scaled = q * pow2(2 * bits);
  BigInt f = floor_q(scaled);
  BigInt s;
  mpz_sqrt(s.get_mpz_t(), f.get_mpz_t());
  BigRational lo(s);
  lo /= pow2(bits);
  if (s * s == f && BigRational(f) == scaled) return Enclosure(lo, lo, bits);
  BigRational hi(s + 1);
  hi /= pow2(bits);
  return Enclosure(lo, hi, bits);
}

Enclosure sqrt(const Enclosure& e, int bits) {
  if (e.upper() < 0) throw Error("sqrt of a negative enclosure");
  BigRational lo = e.lower() > 0 ? sqrt_q(e.lower(), bits).lower() : BigRational(0);
  return Enclosure(lo, sqrt_q(e.upper(), bits).upper(), std::min(bits, e.precision_bits()));
}

Enclosure sqrt_relative(const Enclosure& e, int bits) {
  BigRational ref = e.lower() > 0 ? e.lower() : e.upper();
  if (ref <= 0) return sqrt(e, bits);
  long shift = -ilog2(ref) / 2 + 1;
  return sqrt(e, bits + static_cast<int>(std::max<long>(0, shift)));
}

namespace {

BigRational from_mpfr(const mpfr_t x) {
  BigInt m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
  BigRational r(m);
  r *= pow2(static_cast<int>(e));
  return r;
}

struct MpfrVar {
  explicit MpfrVar(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~MpfrVar() { mpfr_clear(v); }
  MpfrVar(const MpfrVar&) = delete;
  MpfrVar& operator=(const MpfrVar&) = delete;
  mpfr_t v;
};

template <class Fn>
Enclosure monotone_increasing(const Enclosure& e, int bits, Fn fn) {
  mpfr_prec_t prec = std::max(bits + 16, 64);
  MpfrVar x(prec), r(prec);
  mpfr_set_q(x.v, e.lower().get_mpq_t(), MPFR_RNDD);
  fn(r.v, x.v, MPFR_RNDD);
  BigRational lo = from_mpfr(r.v);
  mpfr_set_q(x.v, e.upper().get_mpq_t(), MPFR_RNDU);
  fn(r.v, x.v, MPFR_RNDU);
  BigRational hi = from_mpfr(r.v);
  return Enclosure(lo, hi, std::min(bits, e.precision_bits()));
}

}  // namespace

Enclosure log(const Enclosure& e, int bits) {
  if (!e.certainly_positive()) throw Error("log of an enclosure that is not positive");
  return monotone_increasing(e, bits, [](mpfr_t r, const mpfr_t x, mpfr_rnd_t rnd) { mpfr_log(r, x, rnd); });
}

Enclosure exp(const Enclosure& e, int bits) {
  return monotone_increasing(e, bits, [](mpfr_t r, const mpfr_t x, mpfr_rnd_t rnd) { mpfr_exp(r, x, rnd); });
}

Enclosure pi(int bits) {
  MpfrVar r(std::max(bits + 8, 64));
  mpfr_const_pi(r.v, MPFR_RNDD);
  BigRational lo = from_mpfr(r.v);
  mpfr_const_pi(r.v, MPFR_RNDU);
  return Enclosure(lo, from_mpfr(r.v), bits);
}

Enclosure pow_rational(const Enclosure& base, const BigRational& exponent, int bits) {
  if (exponent == 0) return Enclosure(BigRational(1));
  Enclosure l = log(base, bits + 32) * Enclosure(exponent);
  return exp(l, bits + 32).rounded_relative(bits);
}

std::ostream& operator<<(std::ostream& os, const Enclosure& e) {
  return os << "[" << e.lower().get_d() << ", " << e.upper().get_d() << "]";
}

const char* to_string(Certificate c) {
  switch (c) {
    case Certificate::True: return "TRUE";
    case Certificate::False: return "FALSE";
    case Certificate::Undecided: return "UNDECIDED";
  }
  return "?";
}

Certificate certify_le(const Enclosure& a, const Enclosure& b) {
  if (a.upper() <= b.lower()) return Certificate::True;
  if (a.lower() > b.upper()) return Certificate::False;
  return Certificate::Undecided;
}

Certificate certify_lt(const Enclosure& a, const Enclosure& b) {
  if (a.upper() < b.lower()) return Certificate::True;
  if (a.lower() >= b.upper()) return Certificate::False;
  return Certificate::Undecided;
}

const Enclosure& ExtendedReal::value() const {
  if (infinite_) throw Error("value() of an infinite extended real");
  return value_;
}

Certificate certify_le(const ExtendedReal& a, const ExtendedReal& b) {
  if (b.is_infinite()) return Certificate::True;
  if (a.is_infinite()) return Certificate::False;
  return certify_le(a.value(), b.value());
}

// ---------------------------------------------------------------------------
// Descriptions

std::optional<BigInt> Schedule::term(long k) const {
  switch (kind) {
    case Kind::Power: {
      BigInt r;
      mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(k));
      return r;
    }
    case Kind::Factorial: {
      BigInt r;
      mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
      return r;
    }
    case Kind::Affine: return BigInt(a * k + b);
    case Kind::Explicit:
      if (k >= 1 && static_cast<size_t>(k) <= terms.size()) return terms[static_cast<size_t>(k - 1)];
      return std::nullopt;
  }
  return std::nullopt;
}

std::string Schedule::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Power: os << "a_k = " << a.get_str() << "^k"; break;
    case Kind::Factorial: os << "a_k = k!"; break;
    case Kind::Affine: os << "a_k = " << a.get_str() << "k + " << b.get_str(); break;
    case Kind::Explicit:
      os << "a_k in {";
      for (size_t i = 0; i < terms.size(); ++i) os << (i ? "," : "") << terms[i].get_str();
      os << "}";
      break;
  }
  return os.str();
}

BigRational decimal_value(const DecimalLiteral& d) {
  const std::string& t = d.text;
  size_t i = 0;
  bool neg = false;
  if (i < t.size() && (t[i] == '-' || t[i] == '+')) neg = t[i++] == '-';
  BigInt num = 0;
  int frac_digits = 0;
  bool seen_dot = false, seen_digit = false;
  for (; i < t.size(); ++i) {
    char ch = t[i];
    if (ch == '.' && !seen_dot) {
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      num = num * 10 + (ch - '0');
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (ch == 'e' || ch == 'E') {
      break;
    } else {
      throw InvalidDescription("malformed decimal literal '" + t + "'");
    }
  }
  if (!seen_digit) throw InvalidDescription("malformed decimal literal '" + t + "'");
  long exp10 = -frac_digits;
  if (i < t.size()) {
    try {
      exp10 += std::stol(t.substr(i + 1));
    } catch (const std::exception&) {
      throw InvalidDescription("malformed exponent in '" + t + "'");
    }
  }
  BigInt p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  BigRational q = exp10 >= 0 ? BigRational(num * p10) : ratio(num, p10);
  q.canonicalize();
  return neg ? BigRational(-q) : q;
}

namespace {

void validate_schedule(const Schedule& s) {
  switch (s.kind) {
    case Schedule::Kind::Power:
      if (s.a < 2) throw InvalidDescription("power schedule needs base >= 2");
      return;
    case Schedule::Kind::Factorial: return;
    case Schedule::Kind::Affine:
      if (s.a < 1 || s.a + s.b < 1)
        throw InvalidDescription("affine schedule must be strictly increasing with a_1 >= 1");
      return;
    case Schedule::Kind::Explicit:
      if (s.terms.empty()) throw InvalidDescription("empty explicit schedule");
      if (s.terms.front() < 1) throw InvalidDescription("schedule must start at a_1 >= 1");
      for (size_t i = 1; i < s.terms.size(); ++i)
        if (s.terms[i] <= s.terms[i - 1])
          throw InvalidDescription("exponent schedule is not strictly increasing");
      return;
  }
}

Polynomial algebraic_poly(const AlgebraicNumber& a) {
  Polynomial p = Polynomial::from_integers(a.coeffs);
  if (p.degree() < 1) throw InvalidDescription("algebraic number needs a polynomial of degree >= 1");
  return p.squarefree_part();
}

int roots_in_closed(const Polynomial& p, const BigRational& lo, const BigRational& hi) {
  return p.count_roots(lo, hi) + (p(lo) == 0 ? 1 : 0);
}

int sign(const BigRational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

Enclosure eval_algebraic(const AlgebraicNumber& a, int bits) {
  if (a.lower > a.upper) throw InvalidDescription("isolating interval with lower > upper");
  Polynomial p = algebraic_poly(a);
  int roots = roots_in_closed(p, a.lower, a.upper);
  if (roots != 1)
    throw RefinementFailure("interval isolates " + std::to_string(roots) + " roots, expected 1");
  BigRational lo = a.lower, hi = a.upper;
  int slo = sign(p(lo)), shi = sign(p(hi));
  if (slo == 0) hi = lo;
  if (shi == 0) lo = hi;
  BigRational target = pow2(-(bits + 1));
  while (hi - lo > target) {
    BigRational mid = (lo + hi) / 2;
    int sm = sign(p(mid));
    if (sm == 0) {
      lo = hi = mid;
    } else if (sm == slo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Enclosure(lo, hi, bits).rounded(bits + 2);
}

Enclosure eval_lacunary(const LacunarySeries& s, int bits) {
  BigRational sum = 0;
  long log2_base = static_cast<long>(mpz_sizeinbase(s.base.get_mpz_t(), 2)) - 1;
  for (long k = 1;; ++k) {
    auto a = s.schedule.term(k);
    if (!a) return Enclosure(sum, sum, bits).rounded(bits + 2);
    BigInt denom;
    if (*a * log2_base >= bits + 2) {
      // tail <= 2 * base^-a_k (integer exponents strictly increase)
      mpz_pow_ui(denom.get_mpz_t(), s.base.get_mpz_t(), a->get_ui());
      BigRational tail(BigInt(2), denom);
      tail.canonicalize();
      return Enclosure(sum, sum + tail, bits).rounded(bits + 2);
    }
    mpz_pow_ui(denom.get_mpz_t(), s.base.get_mpz_t(), a->get_ui());
    BigRational term(BigInt(1), denom);
    term.canonicalize();
    sum += term;
  }
}

}  // namespace

void validate(const RealDescription& d) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AlgebraicNumber>) {
          (void)eval_algebraic(v, 8);
        } else if constexpr (std::is_same_v<T, LacunarySeries>) {
          if (v.base < 2) throw InvalidDescription("lacunary base must be >= 2");
          validate_schedule(v.schedule);
        } else if constexpr (std::is_same_v<T, DecimalLiteral>) {
          (void)decimal_value(v);
        }
      },
      d);
}

bool is_rational(const RealDescription& d) {
  if (std::holds_alternative<RationalLiteral>(d) || std::holds_alternative<DecimalLiteral>(d)) return true;
  if (auto* a = std::get_if<AlgebraicNumber>(&d)) return algebraic_poly(*a).degree() == 1;
  if (auto* l = std::get_if<LacunarySeries>(&d)) return l->schedule.kind == Schedule::Kind::Explicit;
  return false;
}

std::string describe(const RealDescription& d) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<T, RationalLiteral>) {
          os << "rational " << to_string(v.value);
        } else if constexpr (std::is_same_v<T, DecimalLiteral>) {
          os << "decimal " << v.text;
        } else if constexpr (std::is_same_v<T, AlgebraicNumber>) {
          os << "root of [";
          for (size_t i = 0; i < v.coeffs.size(); ++i) os << (i ? "," : "") << v.coeffs[i].get_str();
          os << "] in [" << to_string(v.lower) << ", " << to_string(v.upper) << "]";
        } else {
          os << "sum " << v.base.get_str() << "^-a_k, " << v.schedule.describe();
        }
        return os.str();
      },
      d);
}

Enclosure eval(const RealDescription& d, int bits) {
  if (bits < 1) throw InvalidDescription("precision_bits must be positive");
  return std::visit(
      [bits](const auto& v) -> Enclosure {
        using T = std::decay_t<decltype(v)>;
        // rational values stay exact so that zero errors can be certified
        if constexpr (std::is_same_v<T, RationalLiteral>) {
          return Enclosure(v.value);
        } else if constexpr (std::is_same_v<T, DecimalLiteral>) {
          return Enclosure(decimal_value(v));
        } else if constexpr (std::is_same_v<T, AlgebraicNumber>) {
          return eval_algebraic(v, bits);
        } else {
          if (v.base < 2) throw InvalidDescription("lacunary base must be >= 2");
          validate_schedule(v.schedule);
          return eval_lacunary(v, bits);
        }
      },
      d);
}

}  // namespace dioph
