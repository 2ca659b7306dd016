#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dioph/linalg.hpp"
#include "dioph/multivector.hpp"

using namespace dioph;

namespace {

// Oracles independent of the library: Leibniz determinants and permutation signs.

int sign_of(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

BigInt leibniz(const std::vector<std::vector<BigInt>>& a) {
  std::size_t n = a.size();
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  BigInt total = 0;
  do {
    BigInt term = sign_of(p);
    for (std::size_t i = 0; i < n; ++i) term *= a[i][p[i]];
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

std::vector<std::vector<int>> index_subsets(int m, int r) {
  std::vector<std::vector<int>> out;
  std::vector<bool> pick(m, false);
  std::fill(pick.begin(), pick.begin() + r, true);
  do {
    std::vector<int> s;
    for (int i = 0; i < m; ++i)
      if (pick[i]) s.push_back(i);
    out.push_back(s);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

IndexMask mask_of(const std::vector<int>& s) {
  IndexMask m = 0;
  for (int i : s) m |= IndexMask(1) << i;
  return m;
}

// Coefficient of v_1 ^ ... ^ v_r on e_S is the r x r minor on columns S.
BigInt minor(const std::vector<ZVector>& vs, const std::vector<int>& cols) {
  std::vector<std::vector<BigInt>> a;
  for (const auto& v : vs) {
    std::vector<BigInt> row;
    for (int c : cols) row.push_back(v[c]);
    a.push_back(row);
  }
  return leibniz(a);
}

IntegerMultivector wedge_of(int m, const std::vector<ZVector>& vs) {
  IntegerMultivector x = IntegerMultivector::scalar(m, BigInt(1));
  for (const auto& v : vs) x = wedge(x, int_vector(v));
  return x;
}

std::vector<ZVector> random_vectors(std::mt19937_64& g, int count, int m) {
  std::vector<ZVector> out(count, ZVector(m));
  for (auto& v : out)
    for (auto& c : v) c = static_cast<long>(g() % 11) - 5;
  return out;
}

}  // namespace

TEST_CASE("wedge coefficients are minors") {
  std::mt19937_64 g(7);
  for (int m = 2; m <= 5; ++m)
    for (int r = 1; r <= m; ++r)
      for (int rep = 0; rep < 5; ++rep) {
        auto vs = random_vectors(g, r, m);
        IntegerMultivector x = wedge_of(m, vs);
        for (const auto& s : index_subsets(m, r)) CHECK(x.coeff(mask_of(s)) == minor(vs, s));
      }
}

TEST_CASE("dot of decomposables is the Gram determinant") {
  std::mt19937_64 g(11);
  for (int m = 3; m <= 6; ++m)
    for (int r = 1; r <= m; ++r) {
      auto xs = random_vectors(g, r, m), ys = random_vectors(g, r, m);
      std::vector<std::vector<BigInt>> gram(r, std::vector<BigInt>(r));
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
          for (int k = 0; k < m; ++k) gram[i][j] += xs[i][k] * ys[j][k];
      CHECK(dot(wedge_of(m, xs), wedge_of(m, ys)) == leibniz(gram));
    }
}

TEST_CASE("hodge star on basis monomials") {
  for (int m = 1; m <= 6; ++m)
    for (int r = 0; r <= m; ++r)
      for (const auto& s : index_subsets(m, r)) {
        std::vector<int> comp;
        for (int i = 0; i < m; ++i)
          if (!std::count(s.begin(), s.end(), i)) comp.push_back(i);
        std::vector<int> seq = comp;
        seq.insert(seq.end(), s.begin(), s.end());
        IntegerMultivector e(m, r);
        e.add(mask_of(s), 1);
        IntegerMultivector expected(m, m - r);
        expected.add(mask_of(comp), sign_of(seq));
        CHECK(hodge(e) == expected);
        // the star maps e_S to the complement with e_comp ^ e_S = sign * e_1..m
        CHECK(wedge(hodge(e), e).coeff(full_mask(m)) == 1);
      }
}

TEST_CASE("contraction of vectors is the dot product") {
  std::mt19937_64 g(3);
  for (int m = 2; m <= 6; ++m) {
    auto vs = random_vectors(g, 2, m);
    IntegerMultivector c = contract(int_vector(vs[0]), int_vector(vs[1]));
    BigInt d = 0;
    for (int k = 0; k < m; ++k) d += vs[0][k] * vs[1][k];
    CHECK(c.degree() == 0);
    CHECK(c.coeff(0) == d);
  }
}

TEST_CASE("contraction by a vector is a derivation") {
  // y _| (x_1 ^ ... ^ x_r) = sum_k (-1)^{r-k} (y.x_k) x_1 ^ .. x_k omitted .. ^ x_r
  std::mt19937_64 g(5);
  for (int m = 3; m <= 5; ++m)
    for (int r = 1; r <= m; ++r) {
      auto xs = random_vectors(g, r, m);
      auto y = random_vectors(g, 1, m)[0];
      IntegerMultivector expected(m, r - 1);
      for (int k = 0; k < r; ++k) {
        BigInt d = 0;
        for (int c = 0; c < m; ++c) d += y[c] * xs[k][c];
        std::vector<ZVector> rest;
        for (int i = 0; i < r; ++i)
          if (i != k) rest.push_back(xs[i]);
        expected += wedge_of(m, rest) * BigInt(((r - 1 - k) % 2 ? -1 : 1) * d);
      }
      CHECK(contract(int_vector(y), wedge_of(m, xs)) == expected);
    }
}

TEST_CASE("alternation and dependence") {
  ZVector a{1, 2, 3}, b{2, 4, 6}, c{0, 1, 5};
  CHECK(wedge(int_vector(a), int_vector(b)).is_zero());
  CHECK_FALSE(wedge(int_vector(a), int_vector(c)).is_zero());
  CHECK(wedge_of(3, {a, c, a}).is_zero());
  // degree overflow gives zero
  CHECK(wedge(wedge_of(3, {a, c}), wedge_of(3, {c, b})).is_zero());
}

TEST_CASE("content and normalization") {
  IntegerMultivector x(4, 2);
  x.add(mask_of({0, 1}), -6);
  x.add(mask_of({1, 3}), 9);
  CHECK(content(x) == 3);
  IntegerMultivector p = sign_normalized(primitive_part(x));
  CHECK(p.coeff(mask_of({0, 1})) == 2);
  CHECK(p.coeff(mask_of({1, 3})) == -3);
  CHECK(to_string(p) == "[(1,2): 2, (2,4): -3]");
}

TEST_CASE("subset enumeration is lexicographic") {
  const auto& s = subsets(4, 2);
  std::vector<std::vector<int>> got;
  for (IndexMask m : s) got.push_back(mask_indices(m));
  CHECK(got == index_subsets(4, 2));
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(subset_rank(4, s[i]) == i);
  CHECK(binomial(6, 3) == 20);
}

TEST_CASE("linear algebra helpers") {
  QMatrix a{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  CHECK(rank(a) == 2);
  CHECK(determinant(a) == 0);
  auto ker = kernel(a, 3);
  REQUIRE(ker.size() == 1);
  for (const auto& row : a) {
    BigRational s = 0;
    for (int i = 0; i < 3; ++i) s += row[i] * BigRational(ker[0][i]);
    CHECK(s == 0);
  }
  QMatrix b{{2, 1}, {1, 3}};
  CHECK(determinant(b) == 5);
  CHECK(primitive_sign_normalized({-4, 6, 0}) == ZVector{2, -3, 0});
}

TEST_CASE("short vectors match brute force") {
  QMatrix g{{BigRational(5, 2), 1, 0}, {1, 3, BigRational(1, 2)}, {0, BigRational(1, 2), 1}};
  BigRational bound = 12;
  auto got = short_vectors(g, bound, 1'000'000);
  std::vector<ZVector> expected;
  for (long a = -6; a <= 6; ++a)
    for (long b = -6; b <= 6; ++b)
      for (long c = -6; c <= 6; ++c) {
        ZVector z{a, b, c};
        if (a == 0 && b == 0 && c == 0) continue;
        if (quadratic_form(g, z) > bound) continue;
        bool first_positive = z[0] > 0 || (z[0] == 0 && (z[1] > 0 || (z[1] == 0 && z[2] > 0)));
        if (first_positive) expected.push_back(z);
      }
  std::sort(expected.begin(), expected.end(), lex_less);
  CHECK(got == expected);
  CHECK_THROWS_AS(short_vectors(g, BigRational(1000), 10), BudgetExceeded);
}

TEST_CASE("lll keeps the lattice and shortens") {
  // basis (1, 0), (7, 1) has Gram [[1, 7], [7, 50]]
  QMatrix skew{{1, 7}, {7, 50}};
  auto red = lll_gram(skew);
  CHECK(std::abs(static_cast<long>(leibniz({{red.transform[0][0], red.transform[0][1]},
                                            {red.transform[1][0], red.transform[1][1]}})
                                       .get_si())) == 1);
  for (const auto& row : red.gram)
    for (const auto& v : row) CHECK(abs_q(v) <= 1);
}
