#include <doctest.h>

#include <cmath>
#include <random>

#include "dioph/catalog.hpp"
#include "dioph/transfer.hpp"
#include "dioph/witness.hpp"

using namespace dioph;

namespace {

ExponentVector vec(int n, std::vector<ExtendedReal> omega, ExtendedReal hat0, ExtendedReal hat_top,
                   Provenance p = Provenance::Asserted) {
  ExponentVector e;
  e.n = n;
  for (int d = 0; d < n; ++d) e.omega[d] = omega[d];
  e.omega_hat_0 = hat0;
  e.omega_hat_top = hat_top;
  e.provenance = p;
  return e;
}

bool is_exactly(const ExtValue& v, const BigRational& q) {
  return v.kind == ExtValue::Kind::Finite && v.value.is_exact() && v.value.lower() == q;
}

const InequalityVerdict& find(const std::vector<InequalityVerdict>& vs, const std::string& name) {
  for (const auto& v : vs)
    if (v.name == name) return v;
  FAIL("no verdict named " << name);
  return vs.front();
}

// Closed forms written out directly, independent of the library's polynomial evaluator.
BigRational khintchine_lower(int n, const BigRational& top) { return top / (BigRational(n - 1) * top + n); }
BigRational khintchine_upper(int n, const BigRational& top) { return (top - n + 1) / BigRational(n); }

BigRational solved_upper(int n, const BigRational& w0, const BigRational& h0) {
  return (BigRational(n - 1) * w0 + h0 + n - 2) / (1 - h0);
}

BigRational two_level_lower(int n, const BigRational& top, const BigRational& ht) {
  return (ht - 1) * top / ((BigRational(n - 2) * ht + 1) * top + BigRational(n - 1) * ht);
}

struct RandomVector {
  ExponentVector e;
  std::vector<BigRational> w;
  BigRational h0, ht;
};

// Rational values on or above the floors, with omega_hat_0 < 1.
RandomVector random_vector(std::mt19937_64& g, int n) {
  RandomVector r;
  for (int d = 0; d < n; ++d) r.w.push_back(ratio(d + 1, n - d) + ratio(static_cast<long>(g() % 40), 7));
  r.h0 = ratio(1, n) + ratio(static_cast<long>(g() % 10), 10) * (1 - ratio(1, n));
  r.ht = BigRational(n) + ratio(static_cast<long>(g() % 30), 11);
  std::vector<ExtendedReal> om(r.w.begin(), r.w.end());
  r.e = vec(n, om, r.h0, r.ht);
  return r;
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("worked instance at n = 2 holds everywhere") {
  BigRational half(1, 2);
  ExponentVector e = vec(2, {half, BigRational(2)}, half, BigRational(2));
  auto vs = check_all(e);
  CHECK(vs.size() >= 14);
  for (const auto& v : vs) {
    INFO(v.name);
    CHECK(v.verdict == Verdict::Holds);
  }
  CHECK(is_exactly(find(vs, "khintchine-lower").lhs, half));
  CHECK(is_exactly(find(vs, "khintchine-upper").rhs, half));
  CHECK(is_exactly(find(vs, "going-up-refined").lhs, BigRational(2)));
  CHECK(is_exactly(find(vs, "going-down-refined").lhs, half));

  auto t = theorem1_from_parts(e);
  CHECK(t.lower_chain.agrees == Certificate::True);
  CHECK(t.upper_chain.agrees == Certificate::True);
  CHECK(t.forms_equivalent);
  CHECK(is_exactly(t.upper_chain.direct, BigRational(2)));
  CHECK(is_exactly(t.lower_chain.direct, half));
}

TEST_CASE("a broken asserted vector is violated") {
  ExponentVector e = vec(2, {BigRational(1, 10), BigRational(2)}, BigRational(1, 2), BigRational(2));
  auto vs = check_all(e);
  CHECK(find(vs, "khintchine-lower").verdict == Verdict::Violated);
  CHECK(find(vs, "dirichlet-floor(d=0)").verdict == Verdict::Violated);
  CHECK(find(vs, "khintchine-upper").verdict == Verdict::Holds);
}

TEST_CASE("estimated vectors get one-sided verdicts") {
  ExponentVector e = vec(2, {BigRational(2, 5), BigRational(2)}, BigRational(1, 2), BigRational(2));
  e.provenance = Provenance::Estimated;
  auto vs = check_all(e);
  // 1/2 - 2/5 is inside the tolerance 3/20
  CHECK(find(vs, "khintchine-lower").verdict == Verdict::Consistent);
  e.omega[0] = BigRational(1, 5);
  CHECK(find(check_all(e), "khintchine-lower").verdict == Verdict::Inconclusive);
  for (const auto& v : check_all(e)) CHECK(v.verdict != Verdict::Violated);
}

TEST_CASE("missing values are skipped") {
  ExponentVector e;
  e.n = 3;
  e.omega[0] = BigRational(1, 3);
  auto vs = check_all(e);
  CHECK(find(vs, "dirichlet-floor(d=0)").verdict == Verdict::Holds);
  CHECK(find(vs, "khintchine-lower").verdict == Verdict::Skipped);
  CHECK(find(vs, "uniform-floor-0").verdict == Verdict::Skipped);
}

TEST_CASE("n = 1 skips the two-level checks") {
  ExponentVector e = vec(1, {BigRational(1)}, BigRational(1), BigRational(1));
  auto vs = check_all(e);
  CHECK(find(vs, "two-level-lower").verdict == Verdict::Skipped);
  CHECK_THROWS_AS(theorem1_from_parts(e), DimensionMismatch);
}

TEST_CASE("limit conventions at infinity") {
  for (int n = 2; n <= 5; ++n) {
    std::vector<ExtendedReal> om;
    for (int d = 0; d < n - 1; ++d) om.push_back(ratio(d + 1, n - d));
    om.push_back(ExtendedReal::infinity());
    ExponentVector e = vec(n, om, ratio(1, n), BigRational(n));
    auto vs = check_all(e);
    CHECK(is_exactly(find(vs, "khintchine-lower").lhs, ratio(1, n - 1)));
    CHECK(find(vs, "khintchine-upper").rhs.kind == ExtValue::Kind::PlusInfinity);
    auto [lo, hi] = level_chain_reproduces_khintchine(e);
    CHECK(lo == Certificate::True);
    CHECK(hi == Certificate::True);
    auto t = theorem1_from_parts(e);
    CHECK(t.lower_chain.agrees == Certificate::True);
    CHECK(t.upper_chain.agrees == Certificate::True);
  }
  // every ordinary exponent infinite (omega_hat_0 <= 1 always): nothing is violated
  ExponentVector inf = vec(2, {ExtendedReal::infinity(), ExtendedReal::infinity()}, BigRational(1, 2),
                           ExtendedReal::infinity());
  for (const auto& v : check_all(inf)) {
    INFO(v.name);
    CHECK(v.verdict != Verdict::Violated);
  }
}

TEST_CASE("random vectors reproduce the closed forms exactly") {
  std::mt19937_64 g(2024);
  for (int rep = 0; rep < 60; ++rep) {
    int n = 2 + rep % 4;
    RandomVector r = random_vector(g, n);
    const BigRational& top = r.w[n - 1];

    auto [lo, hi] = level_chain_reproduces_khintchine(r.e);
    CHECK(lo == Certificate::True);
    CHECK(hi == Certificate::True);
    auto c = compose_level_chain(r.e, 0, n - 1);
    CHECK(is_exactly(c.lower.chained, khintchine_lower(n, top)));
    CHECK(is_exactly(c.upper.chained, khintchine_upper(n, top)));
    CHECK(c.lower.trace.size() == static_cast<std::size_t>(n));

    auto t = theorem1_from_parts(r.e);
    CHECK(t.forms_equivalent);
    CHECK(t.upper_chain.agrees == Certificate::True);
    CHECK(t.lower_chain.agrees == Certificate::True);
    CHECK(is_exactly(t.upper_chain.direct, solved_upper(n, r.w[0], r.h0)));
    CHECK(is_exactly(t.lower_chain.direct, two_level_lower(n, top, r.ht)));
  }
}

TEST_CASE("lower bounds are monotone in their argument") {
  std::mt19937_64 g(99);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 2 + rep % 3;
    RandomVector r = random_vector(g, n);
    ExponentVector bigger = r.e;
    bigger.omega[n - 1] = BigRational(r.w[n - 1] + 1);
    ExtValue a = find(check_all(r.e), "khintchine-lower").lhs;
    ExtValue b = find(check_all(bigger), "khintchine-lower").lhs;
    CHECK(certify_le(a, b) == Certificate::True);
  }
}

TEST_CASE("going-up and going-down witnesses are valid records") {
  CatalogEntry cubic = builtin_entry("cubic");
  double a = 1.3247179572447460;
  double y[3] = {1, a, a * a};

  auto up = record_search_primal(cubic.theta, 0, 200);
  REQUIRE(up.records.size() >= 2);
  for (std::size_t i = 1; i < up.records.size(); ++i) {
    TransferWitness w = going_up_witness(cubic.theta, up.records[i]);
    CHECK(w.direction == Direction::Up);
    CHECK(w.output.X.degree() == 2);
    CHECK_FALSE(w.output.X.is_zero());
    auto x = w.output.X.dense();  // (01, 02, 12)
    double err = std::fabs(y[0] * x[2].get_d() - y[1] * x[1].get_d() + y[2] * x[0].get_d());
    CHECK(w.output.error.lower().get_d() <= err * (1 + 1e-9) + 1e-300);
    CHECK(w.output.error.upper().get_d() >= err * (1 - 1e-9));
    for (const auto& [k, v] : w.constants_log) CHECK(v.upper() < BigRational(1000000));
  }

  auto down = record_search_dual(cubic.theta, 1, 200);
  REQUIRE(down.records.size() >= 2);
  for (std::size_t i = 1; i < down.records.size(); ++i) {
    TransferWitness w = going_down_witness(cubic.theta, down.records[i]);
    CHECK(w.direction == Direction::Down);
    CHECK(w.output.X.degree() == 2);
    auto x = w.output.X.dense();
    // y _| X' up to sign, X' antisymmetric with X'_01, X'_02, X'_12
    double m[3][3] = {{0, x[0].get_d(), x[1].get_d()}, {-x[0].get_d(), 0, x[2].get_d()},
                      {-x[1].get_d(), -x[2].get_d(), 0}};
    std::vector<double> v(3, 0);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i) v[k] += y[i] * m[i][k];
    double err = norm(v);
    CHECK(w.output.error.lower().get_d() <= err * (1 + 1e-9));
    CHECK(w.output.error.upper().get_d() >= err * (1 - 1e-9));
  }
}
