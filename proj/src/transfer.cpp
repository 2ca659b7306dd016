#include "dioph/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "dioph/errors.hpp"

namespace dioph {

const char* to_string(Provenance p) { return p == Provenance::Estimated ? "ESTIMATED" : "ASSERTED"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "HOLDS";
    case Verdict::Violated: return "VIOLATED";
    case Verdict::Undecided: return "UNDECIDED";
    case Verdict::Consistent: return "CONSISTENT";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    case Verdict::Skipped: return "SKIPPED";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Extended values

ExtValue ExtValue::from(const ExtendedReal& x) {
  return x.is_infinite() ? plus_infinity() : finite(x.value());
}

double ExtValue::approx() const {
  switch (kind) {
    case Kind::Finite: return value.approx();
    case Kind::PlusInfinity: return HUGE_VAL;
    case Kind::MinusInfinity: return -HUGE_VAL;
    case Kind::Undefined: break;
  }
  return NAN;
}

std::string ExtValue::str() const {
  switch (kind) {
    case Kind::PlusInfinity: return "inf";
    case Kind::MinusInfinity: return "-inf";
    case Kind::Undefined: return "undefined";
    case Kind::Finite: break;
  }
  if (value.is_exact()) return to_string(value.lower());
  std::ostringstream os;
  os << std::setprecision(17) << '[' << value.lower().get_d() << ", " << value.upper().get_d() << ']';
  return os.str();
}

Certificate certify_le(const ExtValue& a, const ExtValue& b) {
  using K = ExtValue::Kind;
  if (a.kind == K::Undefined || b.kind == K::Undefined) return Certificate::Undecided;
  if (a.kind == K::MinusInfinity || b.kind == K::PlusInfinity) return Certificate::True;
  if (a.kind == K::PlusInfinity || b.kind == K::MinusInfinity) return Certificate::False;
  return certify_le(a.value, b.value);
}

ExtValue operator+(const ExtValue& a, const ExtValue& b) {
  using K = ExtValue::Kind;
  if (a.kind == K::Undefined || b.kind == K::Undefined) return ExtValue::undefined();
  if (a.is_finite() && b.is_finite()) return ExtValue::finite(a.value + b.value);
  if (a.is_finite()) return b;
  if (b.is_finite()) return a;
  return a.kind == b.kind ? a : ExtValue::undefined();
}

ExtValue operator-(const ExtValue& a, const ExtValue& b) {
  using K = ExtValue::Kind;
  ExtValue nb = b;
  if (b.kind == K::PlusInfinity) nb.kind = K::MinusInfinity;
  else if (b.kind == K::MinusInfinity) nb.kind = K::PlusInfinity;
  else if (b.is_finite()) nb.value = -b.value;
  return a + nb;
}

Certificate agree(const ExtValue& a, const ExtValue& b) {
  using K = ExtValue::Kind;
  if (a.kind == K::Undefined || b.kind == K::Undefined) return Certificate::Undecided;
  if (!a.is_finite() || !b.is_finite()) return a.kind == b.kind ? Certificate::True : Certificate::False;
  if (a.value.is_exact() && b.value.is_exact())
    return a.value.lower() == b.value.lower() ? Certificate::True : Certificate::False;
  if (a.value.upper() < b.value.lower() || b.value.upper() < a.value.lower()) return Certificate::False;
  return Certificate::Undecided;
}

// ---------------------------------------------------------------------------
// Multilinear polynomials

MultilinearPoly MultilinearPoly::constant(const BigRational& c) {
  MultilinearPoly p;
  p.add_term(0, c);
  return p;
}

MultilinearPoly MultilinearPoly::variable(int index) {
  if (index < 0 || index >= 32) throw Error("variable index out of range");
  MultilinearPoly p;
  p.add_term(1u << index, 1);
  return p;
}

void MultilinearPoly::add_term(unsigned mask, const BigRational& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(mask, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

std::pair<MultilinearPoly, MultilinearPoly> MultilinearPoly::split(int index) const {
  unsigned bit = 1u << index;
  MultilinearPoly a, b;
  for (const auto& [m, c] : terms_) {
    if (m & bit) a.add_term(m & ~bit, c);
    else b.add_term(m, c);
  }
  return {a, b};
}

MultilinearPoly MultilinearPoly::operator+(const MultilinearPoly& o) const {
  MultilinearPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

MultilinearPoly MultilinearPoly::operator-(const MultilinearPoly& o) const {
  MultilinearPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

MultilinearPoly MultilinearPoly::operator*(const MultilinearPoly& o) const {
  MultilinearPoly r;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) {
      if (m1 & m2) throw Error("product is not multilinear");
      r.add_term(m1 | m2, c1 * c2);
    }
  return r;
}

MultilinearPoly operator*(const BigRational& c, const MultilinearPoly& p) {
  return MultilinearPoly::constant(c) * p;
}

// ---------------------------------------------------------------------------
// Evaluation with limit conventions

Assignment assignment_of(const ExponentVector& e) {
  Assignment a(static_cast<std::size_t>(e.n + 2));
  for (const auto& [d, w] : e.omega) {
    if (d < 0 || d >= e.n) throw DimensionMismatch("exponent index outside 0..n-1");
    a[d] = ExtValue::from(w);
  }
  if (e.omega_hat_0) a[e.n] = ExtValue::from(*e.omega_hat_0);
  if (e.omega_hat_top) a[e.n + 1] = ExtValue::from(*e.omega_hat_top);
  return a;
}

std::string variable_name(int index, int n) {
  if (index < n) return "omega_" + std::to_string(index);
  if (index == n) return "omega_hat_0";
  return "omega_hat_" + std::to_string(n - 1);
}

namespace {

unsigned used_mask(const RationalBound& b) {
  unsigned m = 0;
  for (const auto& [mask, c] : b.num.terms()) m |= mask;
  for (const auto& [mask, c] : b.den.terms()) m |= mask;
  return m;
}

std::optional<int> missing_variable(const RationalBound& b, const Assignment& values) {
  unsigned m = used_mask(b);
  for (int i = 0; i < 32; ++i)
    if ((m >> i & 1u) && (i >= static_cast<int>(values.size()) || !values[i])) return i;
  return std::nullopt;
}

Enclosure evaluate_finite(const MultilinearPoly& p, const Assignment& values) {
  Enclosure s;
  for (const auto& [mask, c] : p.terms()) {
    Enclosure t{c};
    for (int i = 0; i < 32; ++i)
      if (mask >> i & 1u) t *= values[i]->value;
    s += t;
  }
  return s;
}

int sign_of(const ExtValue& v) {
  switch (v.kind) {
    case ExtValue::Kind::PlusInfinity: return 1;
    case ExtValue::Kind::MinusInfinity: return -1;
    case ExtValue::Kind::Undefined: return 0;
    case ExtValue::Kind::Finite: break;
  }
  if (v.value.certainly_positive()) return 1;
  if (v.value.certainly_negative()) return -1;
  return 0;
}

ExtValue signed_infinity(int s) {
  return s > 0 ? ExtValue::plus_infinity() : s < 0 ? ExtValue::minus_infinity() : ExtValue::undefined();
}

ExtValue eval_quotient(const MultilinearPoly& num, const MultilinearPoly& den, const Assignment& values,
                       std::vector<std::string>* flags) {
  unsigned m = 0;
  for (const auto& [mask, c] : num.terms()) m |= mask;
  for (const auto& [mask, c] : den.terms()) m |= mask;
  for (int i = 0; i < 32; ++i) {
    if (!(m >> i & 1u) || values[i]->is_finite()) continue;
    const ExtValue& x = *values[i];
    if (x.kind == ExtValue::Kind::Undefined) return ExtValue::undefined();
    if (flags) flags->push_back("LIMIT");
    int s = x.kind == ExtValue::Kind::PlusInfinity ? 1 : -1;
    auto [a, b] = num.split(i);
    auto [c, e] = den.split(i);
    if (!c.is_zero()) return eval_quotient(a, c, values, flags);
    if (a.is_zero()) return eval_quotient(b, e, values, flags);
    return signed_infinity(s * sign_of(eval_quotient(a, e, values, flags)));
  }
  Enclosure p = evaluate_finite(num, values), q = evaluate_finite(den, values);
  if (!q.contains_zero()) return ExtValue::finite(p / q);
  if (q.is_exact() && (p.certainly_positive() || p.certainly_negative())) {
    // denominator vanishing at the boundary: the one-sided limit from positive denominators
    if (flags) flags->push_back("BOUNDARY");
    return signed_infinity(p.certainly_positive() ? 1 : -1);
  }
  return ExtValue::undefined();
}

}  // namespace

ExtValue evaluate(const RationalBound& b, const Assignment& values, std::vector<std::string>* flags) {
  if (auto i = missing_variable(b, values)) throw Error("missing exponent value for variable " + std::to_string(*i));
  return eval_quotient(b.num, b.den, values, flags);
}

// ---------------------------------------------------------------------------
// The inequalities

namespace {

using P = MultilinearPoly;

P var(int i) { return P::variable(i); }
P cst(const BigRational& c) { return P::constant(c); }
RationalBound rb(P num, P den = cst(1)) { return {std::move(num), std::move(den)}; }

struct Bounds {
  int n;
  P w(int d) const { return var(d); }
  P top() const { return var(n - 1); }
  P hat0() const { return var(n); }
  P hat_top() const { return var(n + 1); }

  RationalBound k_lower() const { return rb(top(), BigRational(n - 1) * top() + cst(n)); }
  RationalBound k_upper() const { return rb(top() - cst(n - 1), cst(n)); }
  RationalBound t1_lower() const {
    return rb((hat_top() - cst(1)) * top(),
              (BigRational(n - 2) * hat_top() + cst(1)) * top() + BigRational(n - 1) * hat_top());
  }
  P t1_upper_printed_num() const { return (cst(1) - hat0()) * top() - cst(n - 2) - hat0(); }
  RationalBound t1_upper_printed() const { return rb(t1_upper_printed_num(), cst(n - 1)); }
  P t1_upper_solved_num() const { return BigRational(n - 1) * w(0) + hat0() + cst(n - 2); }
  RationalBound t1_upper_solved() const { return rb(t1_upper_solved_num(), cst(1) - hat0()); }
  RationalBound eq21(int d) const { return rb(BigRational(n - d) * w(d) + cst(1), cst(n - d - 1)); }
  RationalBound eq22() const { return rb(w(0) + hat0(), cst(1) - hat0()); }
  RationalBound eq23(int d) const { return rb(BigRational(d) * w(d), w(d) + cst(d + 1)); }
  RationalBound eq24() const { return rb((hat_top() - cst(1)) * top(), top() + hat_top()); }
  RationalBound c1_lower(int d, int dp) const {
    return rb(BigRational(d + 1) * w(dp), BigRational(dp - d) * w(dp) + cst(dp + 1));
  }
  RationalBound c1_upper(int d, int dp) const {
    return rb(BigRational(n - dp) * w(dp) - cst(dp - d), cst(n - d));
  }
};

std::string name_of(int i, int n) { return variable_name(i, n); }

InequalityVerdict decide(std::string name, std::string statement, const RationalBound& lhs, const RationalBound& rhs,
                         const Assignment& values, Provenance prov, const CheckOptions& opts) {
  InequalityVerdict v;
  v.name = std::move(name);
  v.statement = std::move(statement);
  v.advisory = opts.advisory;
  auto miss = missing_variable(lhs, values);
  if (!miss) miss = missing_variable(rhs, values);
  if (miss) {
    v.verdict = Verdict::Skipped;
    v.lhs = v.rhs = v.margin = ExtValue::undefined();
    v.flags.push_back("MISSING");
    return v;
  }
  v.lhs = evaluate(lhs, values, &v.flags);
  v.rhs = evaluate(rhs, values, &v.flags);
  v.margin = v.rhs - v.lhs;
  std::sort(v.flags.begin(), v.flags.end());
  v.flags.erase(std::unique(v.flags.begin(), v.flags.end()), v.flags.end());
  if (prov == Provenance::Asserted) {
    switch (certify_le(v.lhs, v.rhs)) {
      case Certificate::True: v.verdict = Verdict::Holds; break;
      case Certificate::False: v.verdict = Verdict::Violated; break;
      case Certificate::Undecided: v.verdict = Verdict::Undecided; break;
    }
  } else {
    Certificate c = certify_le(v.lhs, v.rhs + ExtValue::finite(Enclosure(opts.tolerance)));
    v.verdict = c == Certificate::False ? Verdict::Inconclusive : Verdict::Consistent;
  }
  return v;
}

InequalityVerdict skipped(std::string name, std::string statement, const CheckOptions& opts, const char* why) {
  InequalityVerdict v;
  v.name = std::move(name);
  v.statement = std::move(statement);
  v.lhs = v.rhs = v.margin = ExtValue::undefined();
  v.verdict = Verdict::Skipped;
  v.advisory = opts.advisory;
  v.flags.push_back(why);
  return v;
}

}  // namespace

std::vector<InequalityVerdict> check_all(const ExponentVector& e, const CheckOptions& opts) {
  int n = e.n;
  if (n < 1) throw DimensionMismatch("exponent vectors need n >= 1");
  Bounds b{n};
  Assignment a = assignment_of(e);
  auto w = [&](int d) { return rb(b.w(d)); };
  auto nm = [&](int i) { return name_of(i, n); };
  std::string top = nm(n - 1), h0 = nm(n), ht = nm(n + 1);
  std::vector<InequalityVerdict> out;
  auto add = [&](std::string name, std::string st, const RationalBound& l, const RationalBound& r) {
    out.push_back(decide(std::move(name), std::move(st), l, r, a, e.provenance, opts));
  };

  add("khintchine-lower", top + "/((n-1)" + top + "+n) <= omega_0", b.k_lower(), w(0));
  add("khintchine-upper", "omega_0 <= (" + top + "-n+1)/n", w(0), b.k_upper());

  std::string t1l = "(" + ht + "-1)" + top + "/(((n-2)" + ht + "+1)" + top + "+(n-1)" + ht + ") <= omega_0";
  std::string t1u = "omega_0 <= ((1-" + h0 + ")" + top + "-n+2-" + h0 + ")/(n-1)";
  std::string t1s = "((n-1)omega_0+" + h0 + "+n-2)/(1-" + h0 + ") <= " + top;
  if (n < 2) {
    out.push_back(skipped("two-level-lower", t1l, opts, "N<2"));
    out.push_back(skipped("two-level-upper", t1u, opts, "N<2"));
    out.push_back(skipped("two-level-upper-solved", t1s, opts, "N<2"));
    out.push_back(skipped("going-up-refined", "(omega_0+" + h0 + ")/(1-" + h0 + ") <= omega_1", opts, "N<2"));
    out.push_back(skipped("going-down-refined", "", opts, "N<2"));
  } else {
    add("two-level-lower", t1l, b.t1_lower(), w(0));
    add("two-level-upper", t1u, w(0), b.t1_upper_printed());
    add("two-level-upper-solved", t1s, b.t1_upper_solved(), rb(b.top()));
    for (int d = 0; d <= n - 2; ++d)
      add("going-up(d=" + std::to_string(d) + ")",
          "((n-d)" + nm(d) + "+1)/(n-d-1) <= " + nm(d + 1), b.eq21(d), w(d + 1));
    add("going-up-refined", "(omega_0+" + h0 + ")/(1-" + h0 + ") <= omega_1", b.eq22(), w(1));
    for (int d = 1; d <= n - 1; ++d)
      add("going-down(d=" + std::to_string(d) + ")",
          "d " + nm(d) + "/(" + nm(d) + "+d+1) <= " + nm(d - 1), b.eq23(d), w(d - 1));
    add("going-down-refined", "(" + ht + "-1)" + top + "/(" + top + "+" + ht + ") <= " + nm(n - 2), b.eq24(),
        w(n - 2));
  }
  for (int d = 0; d < n; ++d)
    for (int dp = d + 1; dp < n; ++dp) {
      std::string tag = "(d=" + std::to_string(d) + ",d'=" + std::to_string(dp) + ")";
      add("level-chain-lower" + tag, "(d+1)" + nm(dp) + "/((d'-d)" + nm(dp) + "+d'+1) <= " + nm(d),
          b.c1_lower(d, dp), w(d));
      add("level-chain-upper" + tag, nm(d) + " <= ((n-d')" + nm(dp) + "-d'+d)/(n-d)", w(d), b.c1_upper(d, dp));
    }
  for (int d = 0; d < n; ++d)
    add("dirichlet-floor(d=" + std::to_string(d) + ")", "(d+1)/(n-d) <= " + nm(d),
        rb(cst(ratio(d + 1, n - d))), w(d));
  add("uniform-floor-0", "1/n <= " + h0, rb(cst(ratio(1, n))), rb(b.hat0()));
  add("uniform-floor-top", "n <= " + ht, rb(cst(n)), rb(b.hat_top()));
  return out;
}

// ---------------------------------------------------------------------------
// Compositions

namespace {

// Applies x -> num(x)/den(x), with x in slot 0.
ExtValue apply_map(const RationalBound& f, const ExtValue& x) {
  Assignment one{x};
  return evaluate(f, one);
}

void require(const ExponentVector& e, std::initializer_list<int> slots) {
  Assignment a = assignment_of(e);
  for (int i : slots)
    if (!a[i]) throw Error("missing exponent value " + variable_name(i, e.n));
}

}  // namespace

Theorem1Parts theorem1_from_parts(const ExponentVector& e, const CheckOptions& opts) {
  int n = e.n;
  if (n < 2) throw DimensionMismatch("the two-level bounds need n >= 2");
  require(e, {0, n - 1, n, n + 1});
  Bounds b{n};
  Assignment a = assignment_of(e);
  Theorem1Parts t;
  std::string top = variable_name(n - 1, n);

  // upper side: refined going-up, then the level chain at (1, n-1) solved for omega_{n-1}
  ExtValue b22 = evaluate(b.eq22(), a);
  t.upper_chain.trace.push_back({"(omega_0+omega_hat_0)/(1-omega_hat_0) <= omega_1", b22});
  if (n == 2) {
    t.upper_chain.chained = b22;
    t.upper_chain.trace.push_back({"n = 2: no intermediate chain step", b22});
  } else {
    t.upper_chain.chained = apply_map(rb(BigRational(n - 1) * var(0) + cst(n - 2)), b22);
    t.upper_chain.trace.push_back({"(n-1)omega_1+n-2 <= " + top, t.upper_chain.chained});
  }
  t.upper_chain.direct = evaluate(b.t1_upper_solved(), a);
  t.upper_chain.trace.push_back({"direct ((n-1)omega_0+omega_hat_0+n-2)/(1-omega_hat_0)", t.upper_chain.direct});
  t.upper_chain.agrees = agree(t.upper_chain.chained, t.upper_chain.direct);

  // lower side: refined going-down, then the level chain at (0, n-2)
  ExtValue b24 = evaluate(b.eq24(), a);
  t.lower_chain.trace.push_back({"(omega_hat_top-1)" + top + "/(" + top + "+omega_hat_top) <= omega_{n-2}", b24});
  if (n == 2) {
    t.lower_chain.chained = b24;
    t.lower_chain.trace.push_back({"n = 2: no intermediate chain step", b24});
  } else {
    t.lower_chain.chained = apply_map(rb(var(0), BigRational(n - 2) * var(0) + cst(n - 1)), b24);
    t.lower_chain.trace.push_back({"omega_{n-2}/((n-2)omega_{n-2}+n-1) <= omega_0", t.lower_chain.chained});
  }
  t.lower_chain.direct = evaluate(b.t1_lower(), a);
  t.lower_chain.trace.push_back({"direct two-level lower bound", t.lower_chain.direct});
  t.lower_chain.agrees = agree(t.lower_chain.chained, t.lower_chain.direct);

  // (1-hat0) omega_{n-1} - solved numerator equals (n-1)(printed bound - omega_0) times (n-1)/(n-1)
  P lhs = (cst(1) - b.hat0()) * b.top() - b.t1_upper_solved_num();
  P rhs = b.t1_upper_printed_num() - BigRational(n - 1) * b.w(0);
  t.forms_equivalent = lhs == rhs;

  t.lower = decide("two-level-lower", "two-level lower bound <= omega_0", b.t1_lower(), rb(b.w(0)), a, e.provenance,
                   opts);
  t.upper = decide("two-level-upper-solved", "solved upper form <= " + top, b.t1_upper_solved(), rb(b.top()), a,
                   e.provenance, opts);
  t.upper_printed = decide("two-level-upper", "omega_0 <= printed upper bound", rb(b.w(0)), b.t1_upper_printed(),
                           a, e.provenance, opts);
  if (e.omega_hat_0 && !e.omega_hat_0->is_infinite() && e.omega_hat_0->value().contains(BigRational(1))) {
    t.upper.flags.push_back("HAT0-AT-ONE");
    t.upper_printed.flags.push_back("HAT0-AT-ONE");
  }
  return t;
}

LevelChainComposition compose_level_chain(const ExponentVector& e, int d, int dp) {
  int n = e.n;
  if (d < 0 || d >= dp || dp > n - 1) throw DimensionMismatch("level chains need 0 <= d < d' <= n-1");
  require(e, {dp});
  Bounds b{n};
  Assignment a = assignment_of(e);
  ExtValue start = *a[dp];
  LevelChainComposition c;

  ExtValue x = start;
  c.lower.trace.push_back({variable_name(dp, n), x});
  for (int k = dp; k > d; --k) {
    x = apply_map(rb(BigRational(k) * var(0), var(0) + cst(k + 1)), x);
    c.lower.trace.push_back({"going-down at d=" + std::to_string(k) + " bounds " + variable_name(k - 1, n), x});
  }
  c.lower.chained = x;
  c.lower.direct = evaluate(b.c1_lower(d, dp), a);
  c.lower.agrees = agree(c.lower.chained, c.lower.direct);

  x = start;
  c.upper.trace.push_back({variable_name(dp, n), x});
  for (int k = dp - 1; k >= d; --k) {
    x = apply_map(rb(BigRational(n - k - 1) * var(0) - cst(1), cst(n - k)), x);
    c.upper.trace.push_back({"inverse going-up at d=" + std::to_string(k) + " bounds " + variable_name(k, n), x});
  }
  c.upper.chained = x;
  c.upper.direct = evaluate(b.c1_upper(d, dp), a);
  c.upper.agrees = agree(c.upper.chained, c.upper.direct);
  return c;
}

std::pair<Certificate, Certificate> level_chain_reproduces_khintchine(const ExponentVector& e) {
  int n = e.n;
  if (n < 2) throw DimensionMismatch("level chains need n >= 2");
  Bounds b{n};
  Assignment a = assignment_of(e);
  auto c = compose_level_chain(e, 0, n - 1);
  ExtValue kl = evaluate(b.k_lower(), a), ku = evaluate(b.k_upper(), a);
  auto both = [](Certificate x, Certificate y) {
    if (x == Certificate::False || y == Certificate::False) return Certificate::False;
    if (x == Certificate::True && y == Certificate::True) return Certificate::True;
    return Certificate::Undecided;
  };
  Certificate lo = both(both(agree(c.lower.direct, kl), agree(c.lower.chained, kl)), c.lower.agrees);
  Certificate hi = both(both(agree(c.upper.direct, ku), agree(c.upper.chained, ku)), c.upper.agrees);
  return {lo, hi};
}

}  // namespace dioph
