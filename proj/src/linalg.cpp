#include "dioph/linalg.hpp"

#include <algorithm>
#include <functional>

namespace dioph {

namespace {

// Row echelon form in place; returns pivot columns.
std::vector<std::size_t> echelon(QMatrix& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  std::size_t cols = a[0].size(), row = 0;
  for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
    std::size_t p = row;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[row], a[p]);
    BigRational inv = 1 / a[row][c];
    for (auto& v : a[row]) v *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][c] == 0) continue;
      BigRational f = a[r][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

BigInt round_q(const BigRational& q) { return floor_q(q + BigRational(1, 2)); }

struct Gso {
  QMatrix mu;
  QVector b;
};

Gso gso_from_gram(const QMatrix& g) {
  std::size_t m = g.size();
  Gso r{QMatrix(m, QVector(m, 0)), QVector(m, 0)};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      BigRational s = g[i][j];
      for (std::size_t l = 0; l < j; ++l) s -= r.mu[j][l] * r.mu[i][l] * r.b[l];
      r.mu[i][j] = s / r.b[j];
    }
    BigRational s = g[i][i];
    for (std::size_t l = 0; l < i; ++l) s -= r.mu[i][l] * r.mu[i][l] * r.b[l];
    if (s <= 0) throw Error("Gram matrix is not positive definite");
    r.b[i] = s;
    r.mu[i][i] = 1;
  }
  return r;
}

QMatrix transformed_gram(const ZMatrix& t, const QMatrix& g0) {
  std::size_t m = t.size();
  QMatrix tg(m, QVector(m, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      if (t[i][k] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) tg[i][j] += t[i][k] * g0[k][j];
    }
  QMatrix out(m, QVector(m, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      BigRational s = 0;
      for (std::size_t k = 0; k < m; ++k)
        if (t[j][k] != 0) s += tg[i][k] * t[j][k];
      out[i][j] = out[j][i] = s;
    }
  return out;
}

}  // namespace

std::size_t rank(QMatrix rows) { return echelon(rows).size(); }

QMatrix to_rational(const ZMatrix& a) {
  QMatrix q;
  q.reserve(a.size());
  for (const auto& row : a) q.emplace_back(row.begin(), row.end());
  return q;
}

std::size_t rank(const ZMatrix& rows) { return rank(to_rational(rows)); }

std::vector<ZVector> kernel(const QMatrix& a, std::size_t cols) {
  QMatrix e = a;
  for (auto& row : e)
    if (row.size() != cols) throw DimensionMismatch("kernel: row length mismatch");
  auto pivots = echelon(e);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<ZVector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    QVector v(cols, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -e[r][f];
    BigInt l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    ZVector z(cols);
    for (std::size_t i = 0; i < cols; ++i) z[i] = BigInt(v[i] * l);
    basis.push_back(primitive_sign_normalized(std::move(z)));
  }
  return basis;
}

BigRational determinant(QMatrix a) {
  std::size_t m = a.size();
  BigRational det = 1;
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t p = c;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < m; ++r) {
      if (a[r][c] == 0) continue;
      BigRational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < m; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

ZVector primitive_sign_normalized(ZVector v) {
  BigInt g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g == 0) return v;
  auto first = std::find_if(v.begin(), v.end(), [](const BigInt& x) { return x != 0; });
  if (*first < 0) g = -g;
  for (auto& x : v) x /= g;
  return v;
}

bool lex_less(const ZVector& a, const ZVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const BigInt& x, const BigInt& y) { return x < y; });
}

BigRational quadratic_form(const QMatrix& g, const ZVector& x) {
  BigRational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    BigRational row = 0;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] != 0) row += g[i][j] * x[j];
    s += row * x[i];
  }
  return s;
}

ReducedBasis lll_gram(const QMatrix& gram, const BigRational& delta) {
  std::size_t m = gram.size();
  ZMatrix t(m, ZVector(m, 0));
  for (std::size_t i = 0; i < m; ++i) t[i][i] = 1;
  Gso g = gso_from_gram(gram);
  std::size_t k = 1;
  while (k < m) {
    for (std::size_t jj = k; jj-- > 0;) {
      BigInt q = round_q(g.mu[k][jj]);
      if (q == 0) continue;
      for (std::size_t c = 0; c < m; ++c) t[k][c] -= q * t[jj][c];
      for (std::size_t l = 0; l < jj; ++l) g.mu[k][l] -= q * g.mu[jj][l];
      g.mu[k][jj] -= q;
    }
    const BigRational& mu = g.mu[k][k - 1];
    if (g.b[k] >= (delta - mu * mu) * g.b[k - 1]) {
      ++k;
    } else {
      std::swap(t[k], t[k - 1]);
      g = gso_from_gram(transformed_gram(t, gram));
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return {t, transformed_gram(t, gram)};
}

std::vector<ZVector> short_vectors(const QMatrix& gram, const BigRational& bound, long node_budget) {
  std::size_t m = gram.size();
  std::vector<ZVector> out;
  if (m == 0 || bound <= 0) return out;
  ReducedBasis red = lll_gram(gram);
  Gso g = gso_from_gram(red.gram);
  ZVector c(m, 0);
  long nodes = 0;

  // level i picks c_i given c_{i+1..m-1}; partial = sum over higher levels
  std::function<void(std::size_t, const BigRational&, bool)> rec =
      [&](std::size_t i, const BigRational& partial, bool higher_zero) {
        if (++nodes > node_budget)
          throw BudgetExceeded("enumeration node budget of " + std::to_string(node_budget) + " exceeded");
        BigRational center = 0;
        for (std::size_t j = i + 1; j < m; ++j)
          if (c[j] != 0) center -= g.mu[j][i] * c[j];
        BigRational room = (bound - partial) / g.b[i];
        BigRational s = sqrt_q(room, 8).upper();
        BigInt lo = ceil_q(center - s), hi = floor_q(center + s);
        if (higher_zero && lo < 0) lo = 0;
        for (BigInt v = lo; v <= hi; ++v) {
          BigRational dev = BigRational(v) - center;
          BigRational next = partial + dev * dev * g.b[i];
          if (next > bound) continue;
          c[i] = v;
          bool zero_here = higher_zero && v == 0;
          if (i == 0) {
            if (zero_here) continue;
            ZVector x(m, 0);
            for (std::size_t r = 0; r < m; ++r)
              if (c[r] != 0)
                for (std::size_t col = 0; col < m; ++col) x[col] += c[r] * red.transform[r][col];
            auto first = std::find_if(x.begin(), x.end(), [](const BigInt& e) { return e != 0; });
            if (*first < 0)
              for (auto& e : x) e = -e;
            out.push_back(std::move(x));
          } else {
            rec(i - 1, next, zero_here);
          }
        }
        c[i] = 0;
      };
  rec(m - 1, BigRational(0), true);
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

}  // namespace dioph
