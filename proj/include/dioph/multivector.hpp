#pragma once

// Exterior algebra of Q^m (m = n + 1) with exact coefficients.
//
// A basis monomial e_{i_1} ^ ... ^ e_{i_r} (i_1 < ... < i_r) is stored as the
// bitmask of its indices. Indices are zero-based internally; serialization
// uses the one-based convention (index 1 is the homogenizing coordinate).

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dioph/numerics.hpp"

namespace dioph {

using IndexMask = std::uint32_t;

inline constexpr int kMaxAmbientDim = 24;

int popcount(IndexMask m);
/// Sign of e_a ^ e_b relative to e_{a|b}; 0 when the index sets overlap.
int wedge_sign(IndexMask a, IndexMask b);
/// All k-subsets of {0..dim-1}, ordered lexicographically as index tuples.
const std::vector<IndexMask>& subsets(int dim, int k);
/// Position of a k-subset in subsets(dim, k).
std::size_t subset_rank(int dim, IndexMask mask);
std::vector<int> mask_indices(IndexMask m);
IndexMask full_mask(int dim);
std::size_t binomial(int n, int k);

/// Orders masks of equal size lexicographically by their index tuples.
struct LexMaskLess {
  bool operator()(IndexMask a, IndexMask b) const {
    if (a == b) return false;
    IndexMask diff = a ^ b;
    IndexMask low = diff & (~diff + 1);
    bool in_a = (a & low) != 0;
    IndexMask above = ~((low << 1) - 1);
    // a shorter tuple that is a prefix of the other sorts first
    if (in_a) return (b & above) != 0;
    return (a & above) == 0;
  }
};

template <class T>
class Multivector {
 public:
  using Terms = std::map<IndexMask, T, LexMaskLess>;

  Multivector() = default;
  Multivector(int ambient_dim, int degree) : dim_(ambient_dim), degree_(degree) {
    if (ambient_dim < 1 || ambient_dim > kMaxAmbientDim)
      throw DimensionMismatch("ambient dimension out of range");
    if (degree < 0) throw DimensionMismatch("negative degree");
  }

  static Multivector scalar(int dim, const T& v) {
    Multivector r(dim, 0);
    r.add(0, v);
    return r;
  }

  /// e_{i_1} ^ ... ^ e_{i_k} for zero-based indices in any order.
  static Multivector basis(int dim, const std::vector<int>& indices) {
    Multivector r = scalar(dim, T(1));
    for (int i : indices) r = wedge(r, unit(dim, i));
    return r;
  }

  static Multivector unit(int dim, int i) {
    if (i < 0 || i >= dim) throw DimensionMismatch("basis index out of range");
    Multivector r(dim, 1);
    r.add(IndexMask(1) << i, T(1));
    return r;
  }

  static Multivector vector(const std::vector<T>& coords) {
    Multivector r(static_cast<int>(coords.size()), 1);
    for (std::size_t i = 0; i < coords.size(); ++i) r.add(IndexMask(1) << i, coords[i]);
    return r;
  }

  static Multivector from_dense(int dim, int degree, const std::vector<T>& coords) {
    const auto& subs = subsets(dim, degree);
    if (coords.size() != subs.size()) throw DimensionMismatch("dense coordinate count mismatch");
    Multivector r(dim, degree);
    for (std::size_t i = 0; i < subs.size(); ++i) r.add(subs[i], coords[i]);
    return r;
  }

  int ambient_dim() const { return dim_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  T coeff(IndexMask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? T(0) : it->second;
  }

  void add(IndexMask m, const T& v) {
    if (popcount(m) != degree_) throw DimensionMismatch("monomial degree mismatch");
    if (v == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::vector<T> dense() const {
    const auto& subs = subsets(dim_, degree_);
    std::vector<T> out(subs.size(), T(0));
    for (const auto& [m, v] : terms_) out[subset_rank(dim_, m)] = v;
    return out;
  }

  Multivector& operator+=(const Multivector& o) {
    check_same(o);
    for (const auto& [m, v] : o.terms_) add(m, v);
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    check_same(o);
    for (const auto& [m, v] : o.terms_) add(m, T(-v));
    return *this;
  }
  Multivector& operator*=(const T& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, v] : terms_) v *= s;
    return *this;
  }
  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, const T& s) { return a *= s; }
  friend Multivector operator*(const T& s, Multivector a) { return a *= s; }
  Multivector operator-() const { return *this * T(-1); }
  friend bool operator==(const Multivector& a, const Multivector& b) {
    return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

  void check_same(const Multivector& o) const {
    if (dim_ != o.dim_) throw DimensionMismatch("ambient dimension mismatch");
    if (degree_ != o.degree_) throw DimensionMismatch("degree mismatch");
  }

 private:
  int dim_ = 1;
  int degree_ = 0;
  Terms terms_;
};

using IntegerMultivector = Multivector<BigInt>;
using RationalMultivector = Multivector<BigRational>;

template <class T>
Multivector<T> wedge(const Multivector<T>& x, const Multivector<T>& y) {
  if (x.ambient_dim() != y.ambient_dim()) throw DimensionMismatch("ambient dimension mismatch");
  Multivector<T> r(x.ambient_dim(), x.degree() + y.degree());
  if (x.degree() + y.degree() > x.ambient_dim()) return r;
  for (const auto& [a, u] : x.terms())
    for (const auto& [b, v] : y.terms()) {
      int s = wedge_sign(a, b);
      if (s == 0) continue;
      T p = u * v;
      if (s < 0) p = -p;
      r.add(a | b, p);
    }
  return r;
}

template <class T>
T dot(const Multivector<T>& x, const Multivector<T>& y) {
  x.check_same(y);
  T s = 0;
  const auto& small = x.terms().size() <= y.terms().size() ? x : y;
  const auto& large = &small == &x ? y : x;
  for (const auto& [m, v] : small.terms()) {
    auto it = large.terms().find(m);
    if (it != large.terms().end()) s += v * it->second;
  }
  return s;
}

template <class T>
T norm_sq(const Multivector<T>& x) {
  T s = 0;
  for (const auto& [m, v] : x.terms()) s += v * v;
  return s;
}

/// Internal product y _| x, the adjoint of z |-> z ^ y for the dot pairing.
template <class T>
Multivector<T> contract(const Multivector<T>& y, const Multivector<T>& x) {
  if (x.ambient_dim() != y.ambient_dim()) throw DimensionMismatch("ambient dimension mismatch");
  if (y.degree() > x.degree()) throw DimensionMismatch("contraction needs deg Y <= deg X");
  Multivector<T> r(x.ambient_dim(), x.degree() - y.degree());
  for (const auto& [j, u] : y.terms())
    for (const auto& [i, v] : x.terms()) {
      if ((j & i) != j) continue;
      IndexMask rest = i & ~j;
      T p = u * v;
      if (wedge_sign(rest, j) < 0) p = -p;
      r.add(rest, p);
    }
  return r;
}

template <class T>
Multivector<T> hodge(const Multivector<T>& x) {
  int m = x.ambient_dim();
  Multivector<T> r(m, m - x.degree());
  IndexMask full = full_mask(m);
  for (const auto& [i, v] : x.terms()) {
    IndexMask comp = full & ~i;
    r.add(comp, wedge_sign(comp, i) < 0 ? T(-v) : v);
  }
  return r;
}

/// Checks (Y ^ Y') _| X == Y _| (Y' _| X) exactly.
template <class T>
bool contraction_compose_check(const Multivector<T>& y, const Multivector<T>& y2, const Multivector<T>& x) {
  if (y.degree() + y2.degree() > x.degree()) throw DimensionMismatch("degree overflow in contraction law");
  return contract(wedge(y, y2), x) == contract(y, contract(y2, x));
}

BigInt content(const IntegerMultivector& x);
IntegerMultivector primitive_part(const IntegerMultivector& x);
/// Multiplies by -1 if needed so the first nonzero coefficient (lex order) is positive.
IntegerMultivector sign_normalized(const IntegerMultivector& x);
RationalMultivector to_rational(const IntegerMultivector& x);
/// Integer vector as a degree-1 multivector.
IntegerMultivector int_vector(const std::vector<BigInt>& v);

/// "[(1,2): 3, (2,3): -1]" with one-based index tuples.
std::string to_string(const IntegerMultivector& x);
std::string to_string(const RationalMultivector& x);

}  // namespace dioph
