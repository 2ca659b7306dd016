#include "dioph/selftest.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "dioph/linalg.hpp"

namespace dioph {

namespace {

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  long range(long lo, long hi) { return lo + static_cast<long>(g() % static_cast<std::uint64_t>(hi - lo + 1)); }
  BigRational rational(long num_bound, long den_bound) { return ratio(range(-num_bound, num_bound), range(1, den_bound)); }
};

IntegerMultivector random_multivector(Rng& rng, int m, int r) {
  IntegerMultivector x(m, r);
  bool dense = rng.range(0, 1) == 0;
  for (IndexMask s : subsets(m, r))
    if (dense || rng.range(0, 2) == 0) x.add(s, BigInt(rng.range(-4, 4)));
  return x;
}

ZVector random_vector(Rng& rng, int m, long bound = 5) {
  ZVector v(m);
  for (auto& c : v) c = rng.range(-bound, bound);
  return v;
}

IntegerMultivector wedge_all(int m, const std::vector<ZVector>& vs) {
  IntegerMultivector x = IntegerMultivector::scalar(m, BigInt(1));
  for (const auto& v : vs) x = wedge(x, int_vector(v));
  return x;
}

BigInt dot_vec(const ZVector& a, const ZVector& b) {
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

IntegerMultivector scaled(IntegerMultivector x, long s) {
  IntegerMultivector r(x.ambient_dim(), x.degree());
  for (const auto& [m, v] : x.terms()) r.add(m, v * s);
  return r;
}

int permutation_sign(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

// Y _| X for decomposables by the shuffle sum over sigma with sigma(1) < ... < sigma(r-s).
IntegerMultivector shuffle_contraction(int m, const std::vector<ZVector>& ys, const std::vector<ZVector>& xs) {
  int r = static_cast<int>(xs.size()), s = static_cast<int>(ys.size());
  IntegerMultivector out(m, r - s);
  for (IndexMask head : subsets(r, r - s)) {
    std::vector<int> first = mask_indices(head), tail;
    for (int i = 0; i < r; ++i)
      if (!(head >> i & 1u)) tail.push_back(i);
    do {
      std::vector<int> sigma = first;
      sigma.insert(sigma.end(), tail.begin(), tail.end());
      BigInt c = permutation_sign(sigma);
      for (int k = 0; k < s; ++k) c *= dot_vec(ys[k], xs[tail[k]]);
      if (c == 0) continue;
      std::vector<ZVector> kept;
      for (int i : first) kept.push_back(xs[i]);
      IntegerMultivector w = wedge_all(m, kept);
      for (const auto& [mask, v] : w.terms()) out.add(mask, v * c);
    } while (std::next_permutation(tail.begin(), tail.end()));
  }
  return out;
}

class Tally {
 public:
  void record(const std::string& law, bool ok) {
    auto& c = counts_[law];
    c.law = law;
    ++c.checked;
    if (ok) ++c.passed;
  }
  std::vector<LawCount> result() const {
    std::vector<LawCount> out;
    for (const auto& [k, v] : counts_) out.push_back(v);
    return out;
  }

 private:
  std::map<std::string, LawCount> counts_;
};

}  // namespace

bool AlgebraSelftest::all_passed() const {
  return std::all_of(laws.begin(), laws.end(), [](const LawCount& l) { return l.checked == l.passed; });
}

AlgebraSelftest algebra_selftest(std::uint64_t seed, int per_case) {
  Rng rng(seed);
  Tally t;
  AlgebraSelftest out;
  out.seed = seed;
  for (int m = 3; m <= 6; ++m) {
    for (int r = 0; r <= m; ++r) {
      for (int rep = 0; rep < per_case; ++rep) {
        IntegerMultivector x = random_multivector(rng, m, r);
        ++out.samples;
        int sign = (r * (m - r)) % 2 ? -1 : 1;
        t.record("hodge involution", hodge(hodge(x)) == scaled(x, sign));
        IntegerMultivector x2 = random_multivector(rng, m, r);
        ++out.samples;
        t.record("hodge isometry", dot(hodge(x), hodge(x2)) == dot(x, x2));

        ZVector v = random_vector(rng, m);
        t.record("alternation", wedge(int_vector(v), int_vector(v)).is_zero());

        if (r >= 1) {
          std::vector<ZVector> xs, ys;
          for (int i = 0; i < r; ++i) xs.push_back(random_vector(rng, m, 3));
          for (int i = 0; i < r; ++i) ys.push_back(random_vector(rng, m, 3));
          QMatrix gram(r, QVector(r));
          for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) gram[i][j] = BigRational(dot_vec(xs[i], ys[j]));
          t.record("gram determinant", BigRational(dot(wedge_all(m, xs), wedge_all(m, ys))) == determinant(gram));
          for (int s = 1; s <= r; ++s) {
            std::vector<ZVector> yy(ys.begin(), ys.begin() + s);
            t.record("shuffle sum",
                     contract(wedge_all(m, yy), wedge_all(m, xs)) == shuffle_contraction(m, yy, xs));
          }
          // the kernel of v -> v ^ *X is the orthogonal complement of the frame
          IntegerMultivector frame = wedge_all(m, xs);
          if (!frame.is_zero()) {
            IntegerMultivector star = hodge(frame);
            QMatrix a(binomial(m, m - r + 1), QVector(m));
            for (int i = 0; i < m; ++i) {
              auto col = wedge(IntegerMultivector::unit(m, i), star).dense();
              for (std::size_t row = 0; row < col.size(); ++row) a[row][i] = BigRational(col[row]);
            }
            auto ker = kernel(a, m);
            bool ok = static_cast<int>(ker.size()) + r == m;
            for (const auto& w : ker)
              for (const auto& xi : xs) ok = ok && dot_vec(w, xi) == 0;
            t.record("orthogonal complement", ok);
          }
        }

        for (int s = 0; s <= m; ++s) {
          IntegerMultivector y = random_multivector(rng, m, s);
          ++out.samples;
          int gs = (r * s) % 2 ? -1 : 1;
          if (r + s <= m) {
            t.record("graded anticommutativity", wedge(x, y) == scaled(wedge(y, x), gs));
            t.record("hodge duality", hodge(wedge(y, x)) == contract(y, hodge(x)));
            for (int u = 0; r + s + u <= m; ++u) {
              IntegerMultivector w = random_multivector(rng, m, u);
              t.record("associativity", wedge(wedge(x, y), w) == wedge(x, wedge(y, w)));
            }
          }
          if (s <= r) {
            IntegerMultivector z = random_multivector(rng, m, r - s);
            ++out.samples;
            t.record("adjointness", dot(z, contract(y, x)) == dot(wedge(z, y), x));
            for (int s2 = 0; s + s2 <= r; ++s2) {
              IntegerMultivector y2 = random_multivector(rng, m, s2);
              t.record("contraction composition", contraction_compose_check(y, y2, x));
            }
          }
        }
      }
    }
  }
  out.laws = t.result();
  return out;
}

LawCount hodge_duality_selftest(std::uint64_t seed, int samples) {
  Rng rng(seed);
  LawCount c{"hodge dual equivalence", 0, 0};
  for (int i = 0; i < samples; ++i) {
    int m = static_cast<int>(rng.range(3, 6));
    int r = static_cast<int>(rng.range(1, m));
    RationalMultivector x = to_rational(random_multivector(rng, m, r));
    std::vector<BigRational> yc(m);
    for (auto& q : yc) q = rng.rational(9, 7);
    RationalMultivector y = RationalMultivector::vector(yc);
    bool ok = norm_sq(contract(y, x)) == norm_sq(wedge(y, hodge(x))) && norm_sq(hodge(x)) == norm_sq(x);
    ++c.checked;
    if (ok) ++c.passed;
  }
  return c;
}

namespace {

ThetaPoint random_theta(Rng& rng, int n) {
  std::vector<ThetaCoordinate> cs;
  for (int i = 0; i < n; ++i) cs.push_back({RationalLiteral{ratio(rng.range(-4096, 4096), 1021)}, 1});
  return ThetaPoint(std::move(cs));
}

BigRational random_scale(Rng& rng, long lo_exp, long hi_exp) {
  return pow2(static_cast<int>(rng.range(lo_exp, hi_exp))) * ratio(rng.range(8, 15), 8);
}

BodySpec random_body(Rng& rng, int m, int kind) {
  int n = m - 1;
  if (kind == 0) {
    std::vector<BigRational> w(m);
    for (auto& x : w) x = random_scale(rng, -2, 1);
    return box_body(w);
  }
  BigRational U = random_scale(rng, 1, 2);
  BigRational V = std::min(U, random_scale(rng, -2, 0));
  ThetaPoint th = random_theta(rng, n);
  return kind == 1 ? primal_body(th, U, V) : dual_body(th, U, V);
}

}  // namespace

MinimaSelftest minima_selftest(std::uint64_t seed, int bodies, int mahler_bodies, long node_budget) {
  Rng rng(seed);
  MinimaSelftest out;
  out.seed = seed;
  for (int i = 0; i < bodies; ++i) {
    int m = 2 + i % 3;
    BodySpec b = random_body(rng, m, (i / 3) % 3);
    MinimaCase c;
    c.body = b.describe();
    auto p = minima_exhaustive(b, node_budget);
    c.lambdas = p.lambdas;
    c.check = minkowski_check(b, p);
    c.passed = c.check.lower_ok == Certificate::True && c.check.upper_ok == Certificate::True;
    if (c.passed) ++out.passed;
    out.cases.push_back(std::move(c));
  }
  for (int i = 0; i < mahler_bodies; ++i) {
    int n = 2 + i % 2;
    BodySpec b = random_body(rng, n + 1, 1);
    for (int k = 1; k <= n; ++k) mahler_check(b, k, node_budget, &out.mahler);
  }
  return out;
}

}  // namespace dioph
