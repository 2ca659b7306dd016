#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>

#include "dioph/catalog.hpp"
#include "dioph/exponents.hpp"

using namespace dioph;

namespace {

// Plastic number, real root of x^3 - x - 1, to double precision.
const double kAlpha = 1.3247179572447460;

struct Point {
  std::vector<long> z;
  long norm_sq;
  double error;
};

// Brute-force staircase over integer vectors of R^3 with |z| <= H: smallest error per
// norm, kept when it beats every smaller norm.
std::vector<Point> brute_staircase(long H, const std::function<double(const std::vector<long>&)>& err) {
  std::map<long, Point> best;
  for (long a = -H; a <= H; ++a)
    for (long b = -H; b <= H; ++b)
      for (long c = -H; c <= H; ++c) {
        long n2 = a * a + b * b + c * c;
        if (n2 == 0 || n2 > H * H) continue;
        Point p{{a, b, c}, n2, err({a, b, c})};
        auto it = best.find(n2);
        if (it == best.end() || p.error < it->second.error) best[n2] = p;
      }
  std::vector<Point> out;
  for (const auto& [n2, p] : best)
    if (out.empty() || p.error < out.back().error) out.push_back(p);
  return out;
}

double simultaneous_error(const std::vector<long>& z) {
  // |y ^ z| with y = (1, a, a^2)
  double y[3] = {1, kAlpha, kAlpha * kAlpha};
  double s = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      double c = y[i] * z[j] - y[j] * z[i];
      s += c * c;
    }
  return std::sqrt(s);
}

double linear_form_error(const std::vector<long>& z) {
  return std::fabs(z[0] + z[1] * kAlpha + z[2] * kAlpha * kAlpha);
}

// X in Lambda^2 with coordinates on (01, 02, 12): y ^ X = y0 X12 - y1 X02 + y2 X01.
double bivector_error(const std::vector<long>& x) {
  return std::fabs(x[2] - kAlpha * x[1] + kAlpha * kAlpha * x[0]);
}

std::vector<long> as_longs(const ApproximationRecord& r) {
  std::vector<long> out;
  for (const auto& c : r.X.dense()) out.push_back(c.get_si());
  return out;
}

bool same_up_to_sign(std::vector<long> a, const std::vector<long>& b) {
  if (a == b) return true;
  for (auto& x : a) x = -x;
  return a == b;
}

void compare(const RecordSearch& s, const std::vector<Point>& expected) {
  REQUIRE(s.records.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(s.records[i].norm_sq == expected[i].norm_sq);
    CHECK(same_up_to_sign(as_longs(s.records[i]), expected[i].z));
    double e = expected[i].error;
    CHECK(s.records[i].error.lower().get_d() <= e * (1 + 1e-9));
    CHECK(s.records[i].error.upper().get_d() >= e * (1 - 1e-9));
  }
}

}  // namespace

TEST_CASE("exhaustive staircases match brute force on the cubic point") {
  CatalogEntry cubic = builtin_entry("cubic");
  const long H = 40;
  SUBCASE("simultaneous, d = 0") {
    compare(record_search_primal(cubic.theta, 0, H), brute_staircase(H, simultaneous_error));
  }
  SUBCASE("linear form, dual d = 1") {
    compare(record_search_dual(cubic.theta, 1, H), brute_staircase(H, linear_form_error));
  }
  SUBCASE("planes, d = 1") {
    compare(record_search_primal(cubic.theta, 1, H), brute_staircase(H, bivector_error));
  }
}

TEST_CASE("staircase at height 1000 has several records and a CSV") {
  CatalogEntry cubic = builtin_entry("cubic");
  auto s = record_search_primal(cubic.theta, 0, 1000);
  CHECK(s.records.size() >= 3);
  for (std::size_t i = 1; i < s.records.size(); ++i) {
    CHECK(s.records[i - 1].norm_sq < s.records[i].norm_sq);
    CHECK(s.records[i].error.upper() < s.records[i - 1].error.lower());
  }
  std::string csv = staircase_csv(s.records);
  CHECK(csv.rfind("log_norm,log_error,instant_exponent\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == s.records.size() + 1);

  auto est = estimate_omega(s);
  CHECK_FALSE(est.lower_bound.is_infinite());
  CHECK(est.lower_bound.value().lower() > BigRational(2, 5));
  CHECK(est.lower_bound.value().upper() < BigRational(3, 5));
}

TEST_CASE("reduced search gives records with valid errors") {
  CatalogEntry cubic = builtin_entry("cubic");
  SearchOptions o;
  o.mode = SearchMode::Reduced;
  auto s = record_search_primal(cubic.theta, 0, 10000, o);
  REQUIRE_FALSE(s.records.empty());
  for (const auto& r : s.records) {
    std::vector<long> z = as_longs(r);
    double e = simultaneous_error(z);
    CHECK(r.error.lower().get_d() <= e * (1 + 1e-9));
    CHECK(r.error.upper().get_d() >= e * (1 - 1e-9));
  }
}

TEST_CASE("uniform grid minima match brute force") {
  CatalogEntry cubic = builtin_entry("cubic");
  std::vector<BigRational> grid{4, 8, 16, 32};
  auto est = estimate_uniform(cubic.theta, false, grid);
  REQUIRE(est.grid.size() == grid.size());
  for (const auto& g : est.grid) {
    long X = g.X.get_num().get_si();
    double best = 1e300;
    for (long q = 1; q <= X; ++q)
      for (long a = -X; a <= X; ++a)
        for (long b = -X; b <= X; ++b)
          best = std::min(best, std::max(std::fabs(q * kAlpha - a), std::fabs(q * kAlpha * kAlpha - b)));
    CHECK(g.minimum.lower().get_d() <= best * (1 + 1e-12));
    CHECK(g.minimum.upper().get_d() >= best * (1 - 1e-12));
  }
  CHECK(std::find(est.flags.begin(), est.flags.end(), "HEURISTIC-UNIFORM") != est.flags.end());
}

TEST_CASE("body parameters satisfy their identities") {
  BigRational H = 1000, w = BigRational(1, 2);
  auto [U, V] = primal_parameters(H, w, 0);
  // U V^d = H and V^{d+1} = H^{-w} at d = 0
  CHECK(std::fabs(U.get_d() - 1000.0) < 1e-6);
  CHECK(std::fabs(V.get_d() - std::pow(1000.0, -0.5)) < 1e-9);
  auto [U2, V2] = dual_parameters(H, BigRational(2), 2, 1);
  CHECK(std::fabs(U2.get_d() - 1000.0) < 1e-6);
  CHECK(std::fabs(V2.get_d() - std::pow(1000.0, -2.0)) < 1e-12);
  CHECK(dirichlet_floor(2, 0) == BigRational(1, 2));
  CHECK(dirichlet_floor(3, 2) == BigRational(3));
}

TEST_CASE("height grid") {
  auto g = height_grid(10, 2);
  std::vector<BigRational> expected{1, 2, 4, 8, 10};
  CHECK(g == expected);
  CHECK_THROWS(height_grid(BigRational(1, 2), 2));
  CHECK_THROWS(height_grid(10, 1));
}

TEST_CASE("rational points are flagged degenerate") {
  CatalogEntry e = user_point("half", {RationalLiteral{BigRational(1, 2)}, RationalLiteral{BigRational(1, 3)}});
  auto s = record_search_primal(e.theta, 0, 100);
  CHECK(s.degenerate);
  auto est = estimate_omega(s);
  CHECK(est.lower_bound.is_infinite());
}

TEST_CASE("level preconditions") {
  CatalogEntry cubic = builtin_entry("cubic");
  CHECK_THROWS_AS(record_search_primal(cubic.theta, 2, 10), DimensionMismatch);
  CHECK_THROWS_AS(record_search_dual(cubic.theta, -1, 10), DimensionMismatch);
}
