#include "dioph/polynomial.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>

namespace dioph {

Polynomial::Polynomial(std::vector<BigRational> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::from_integers(const std::vector<BigInt>& coeffs) {
  std::vector<BigRational> c;
  c.reserve(coeffs.size());
  for (const auto& v : coeffs) c.emplace_back(v);
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

BigRational Polynomial::operator()(const BigRational& x) const {
  BigRational r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

Enclosure Polynomial::operator()(const Enclosure& x) const {
  Enclosure r(BigRational(0));
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + Enclosure(*it);
  return r;
}

Polynomial Polynomial::derivative() const {
  std::vector<BigRational> d;
  for (size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  std::vector<BigRational> c = c_;
  BigRational lc = c.back();
  for (auto& v : c) v /= lc;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-() const {
  std::vector<BigRational> c = c_;
  for (auto& v : c) v = -v;
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  std::vector<BigRational> c(a.c_.size() + b.c_.size() - 1, BigRational(0));
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) { return a - (-b); }

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<BigRational> c(std::max(a.c_.size(), b.c_.size()), BigRational(0));
  for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw Error("polynomial division by zero");
  std::vector<BigRational> r = a.c_;
  int db = b.degree();
  if (a.degree() < db) return {Polynomial(), a};
  std::vector<BigRational> q(static_cast<size_t>(a.degree() - db + 1), BigRational(0));
  for (int i = a.degree(); i >= db; --i) {
    BigRational f = r[static_cast<size_t>(i)] / b.leading();
    q[static_cast<size_t>(i - db)] = f;
    if (f == 0) continue;
    for (int j = 0; j <= db; ++j) r[static_cast<size_t>(i - db + j)] -= f * b.c_[static_cast<size_t>(j)];
  }
  r.resize(static_cast<size_t>(db));
  return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

Polynomial Polynomial::gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Polynomial Polynomial::squarefree_part() const {
  if (degree() < 1) return *this;
  Polynomial g = gcd(*this, derivative());
  return divmod(*this, g).first.monic();
}

namespace {

int sign_at(const Polynomial& p, const BigRational& x) {
  BigRational v = p(x);
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

int sign_changes(const std::vector<Polynomial>& seq, const BigRational& x) {
  int changes = 0, last = 0;
  for (const auto& p : seq) {
    int s = sign_at(p, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

int Polynomial::count_roots(const BigRational& lo, const BigRational& hi) const {
  if (degree() < 1) return 0;
  Polynomial p = squarefree_part();
  std::vector<Polynomial> seq{p, p.derivative()};
  while (seq.back().degree() > 0) {
    Polynomial r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  return sign_changes(seq, lo) - sign_changes(seq, hi);
}

// ---------------------------------------------------------------------------
// Irreducibility

namespace {

using ModPoly = std::vector<int64_t>;  // ascending, reduced mod p, trimmed

int64_t mod(const BigInt& v, int64_t p) {
  BigInt r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p));
  return static_cast<int64_t>(r.get_si());
}

void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int64_t inv_mod(int64_t a, int64_t p) {
  int64_t r = 1, e = p - 2;
  a %= p;
  while (e) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return r;
}

ModPoly poly_mod(ModPoly a, const ModPoly& b, int64_t p) {
  int64_t inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    int64_t f = a.back() * inv % p;
    size_t shift = a.size() - b.size();
    for (size_t j = 0; j < b.size(); ++j) a[shift + j] = ((a[shift + j] - f * b[j]) % p + p) % p;
    trim(a);
  }
  return a;
}

ModPoly poly_mulmod(const ModPoly& a, const ModPoly& b, const ModPoly& m, int64_t p) {
  if (a.empty() || b.empty()) return {};
  ModPoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  trim(c);
  return poly_mod(std::move(c), m, p);
}

ModPoly poly_gcd(ModPoly a, ModPoly b, int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    ModPoly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

ModPoly poly_divexact(ModPoly a, const ModPoly& b, int64_t p) {
  ModPoly q(a.size() - b.size() + 1, 0);
  int64_t inv = inv_mod(b.back(), p);
  while (a.size() >= b.size() && !a.empty()) {
    int64_t f = a.back() * inv % p;
    size_t shift = a.size() - b.size();
    q[shift] = f;
    for (size_t j = 0; j < b.size(); ++j) a[shift + j] = ((a[shift + j] - f * b[j]) % p + p) % p;
    a.pop_back();
    trim(a);
  }
  return q;
}

ModPoly derivative(const ModPoly& a, int64_t p) {
  ModPoly d;
  for (size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<int64_t>(i) % p);
  trim(d);
  return d;
}

/// Degrees of the irreducible factors of a squarefree f mod p.
std::vector<int> factor_degrees(ModPoly f, int64_t p) {
  std::vector<int> degs;
  ModPoly h{0, 1};  // x
  int i = 0;
  while (static_cast<int>(f.size()) - 1 >= 2 * (i + 1)) {
    ++i;
    // h <- h^p mod f
    ModPoly base = poly_mod(h, f, p), acc{1};
    int64_t e = p;
    while (e) {
      if (e & 1) acc = poly_mulmod(acc, base, f, p);
      base = poly_mulmod(base, base, f, p);
      e >>= 1;
    }
    h = acc;
    ModPoly hx = h;
    if (hx.size() < 2) hx.resize(2, 0);
    hx[1] = ((hx[1] - 1) % p + p) % p;
    trim(hx);
    ModPoly g = poly_gcd(f, hx, p);
    int dg = static_cast<int>(g.size()) - 1;
    if (dg > 0) {
      for (int k = 0; k < dg / i; ++k) degs.push_back(i);
      f = poly_divexact(f, g, p);
      h = poly_mod(h, f, p);
    }
  }
  if (f.size() > 1) degs.push_back(static_cast<int>(f.size()) - 1);
  return degs;
}

std::set<int> subset_sums(const std::vector<int>& degs) {
  std::set<int> sums{0};
  for (int d : degs) {
    std::set<int> next = sums;
    for (int s : sums) next.insert(s + d);
    sums = std::move(next);
  }
  return sums;
}

std::vector<BigInt> divisors(BigInt v) {
  if (v < 0) v = -v;
  std::vector<BigInt> out;
  if (v == 0) return out;
  BigInt d = 1;
  for (; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      if (d * d != v) out.push_back(v / d);
    }
  }
  return out;
}

/// Lagrange interpolation through integer points; nullopt unless all coefficients are integers.
std::optional<Polynomial> interpolate(const std::vector<BigInt>& xs, const std::vector<BigInt>& ys) {
  Polynomial result;
  for (size_t i = 0; i < xs.size(); ++i) {
    Polynomial basis(std::vector<BigRational>{BigRational(1)});
    BigRational denom = 1;
    for (size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      basis = basis * Polynomial(std::vector<BigRational>{BigRational(-xs[j]), BigRational(1)});
      denom *= BigRational(xs[i] - xs[j]);
    }
    std::vector<BigRational> c = basis.coeffs();
    for (auto& v : c) v = v * BigRational(ys[i]) / denom;
    result = result + Polynomial(std::move(c));
  }
  for (const auto& c : result.coeffs())
    if (c.get_den() != 1) return std::nullopt;
  return result;
}

bool kronecker_has_factor(const Polynomial& f, int k) {
  std::vector<BigInt> xs, vals;
  for (long x = 0; static_cast<int>(xs.size()) <= k && x < 1000; x = (x <= 0 ? -x + 1 : -x)) {
    BigRational v = f(BigRational(x));
    if (v == 0) return true;  // rational root
    xs.emplace_back(x);
    vals.push_back(v.get_num());
  }
  std::vector<std::vector<BigInt>> choices;
  size_t combos = 1;
  for (size_t i = 0; i < xs.size(); ++i) {
    std::vector<BigInt> ds = divisors(vals[i]);
    std::vector<BigInt> signed_ds;
    for (const auto& d : ds) {
      signed_ds.push_back(d);
      if (i > 0) signed_ds.push_back(-d);  // the first value fixes the overall sign
    }
    combos *= signed_ds.size();
    if (combos > 5'000'000) throw BudgetExceeded("Kronecker factor search too large");
    choices.push_back(std::move(signed_ds));
  }
  std::vector<size_t> idx(xs.size(), 0);
  std::vector<BigInt> ys(xs.size());
  while (true) {
    for (size_t i = 0; i < xs.size(); ++i) ys[i] = choices[i][idx[i]];
    if (auto g = interpolate(xs, ys); g && g->degree() == k) {
      if (Polynomial::divmod(f, *g).second.is_zero()) return true;
    }
    size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == choices[pos].size()) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  return false;
}

}  // namespace

bool is_irreducible_over_q(const std::vector<BigInt>& coeffs) {
  Polynomial f = Polynomial::from_integers(coeffs);
  int n = f.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  if (n > 8) throw InvalidDescription("irreducibility check limited to degree <= 8");
  if (f.squarefree_part().degree() != n) return false;

  std::vector<BigInt> ic;
  for (const auto& c : f.coeffs()) ic.push_back(c.get_num());

  std::set<int> possible;
  for (int d = 0; d <= n; ++d) possible.insert(d);
  int primes_used = 0;
  for (int64_t p = 3; p < 2000 && primes_used < 25; p += 2) {
    bool is_prime = true;
    for (int64_t q = 3; q * q <= p; q += 2)
      if (p % q == 0) is_prime = false;
    if (!is_prime || mod(ic.back(), p) == 0) continue;
    ModPoly fp;
    for (const auto& c : ic) fp.push_back(mod(c, p));
    trim(fp);
    if (poly_gcd(fp, derivative(fp, p), p).size() > 1) continue;  // not squarefree mod p
    ++primes_used;
    std::set<int> sums = subset_sums(factor_degrees(fp, p));
    std::set<int> keep;
    std::set_intersection(possible.begin(), possible.end(), sums.begin(), sums.end(),
                          std::inserter(keep, keep.begin()));
    possible = std::move(keep);
    if (possible.size() == 2) return true;  // only {0, n}
  }
  for (int k = 1; k <= n / 2; ++k) {
    if (!possible.count(k)) continue;
    if (kronecker_has_factor(f, k)) return false;
  }
  return true;
}

}  // namespace dioph
