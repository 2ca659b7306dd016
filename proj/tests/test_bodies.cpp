#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "dioph/bodies.hpp"
#include "dioph/linalg.hpp"

using namespace dioph;

namespace {

ThetaPoint rational_point(std::vector<BigRational> qs) {
  std::vector<ThetaCoordinate> cs;
  for (auto& q : qs) cs.push_back({RationalLiteral{q}, 1});
  return ThetaPoint(std::move(cs));
}

// Squared gauge of the degree-1 primal or dual body at a rational point, computed exactly.
BigRational gauge_sq(const std::vector<BigRational>& y, const ZVector& z, const BigRational& U, const BigRational& V,
                     bool primal) {
  std::size_t m = y.size();
  BigRational zz = 0, err = 0;
  for (std::size_t i = 0; i < m; ++i) zz += BigRational(z[i] * z[i]);
  if (primal) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        BigRational c = y[i] * BigRational(z[j]) - y[j] * BigRational(z[i]);
        err += c * c;
      }
  } else {
    BigRational s = 0;
    for (std::size_t i = 0; i < m; ++i) s += y[i] * BigRational(z[i]);
    err = s * s;
  }
  return std::max(zz / (U * U), err / (V * V));
}

// Successive minima squared by enumerating the cube [-B, B]^m.
std::vector<BigRational> brute_minima_sq(int m, long B, const std::function<BigRational(const ZVector&)>& g) {
  std::vector<std::pair<BigRational, ZVector>> pts;
  ZVector z(m, -B);
  while (true) {
    bool zero = std::all_of(z.begin(), z.end(), [](const BigInt& c) { return c == 0; });
    if (!zero) pts.emplace_back(g(z), z);
    int i = 0;
    while (i < m && z[i] == B) z[i++] = -B;
    if (i == m) break;
    ++z[i];
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<BigRational> out;
  QMatrix picked;
  for (const auto& [v, p] : pts) {
    QMatrix trial = picked;
    trial.emplace_back(p.begin(), p.end());
    if (rank(trial) == picked.size()) continue;
    picked = std::move(trial);
    out.push_back(v);
    if (static_cast<int>(out.size()) == m) break;
  }
  return out;
}

bool encloses_sqrt(const Enclosure& e, const BigRational& sq) {
  return e.lower() * e.lower() <= sq && sq <= e.upper() * e.upper() && e.lower() >= 0;
}

}  // namespace

TEST_CASE("box minima are the sorted reciprocal widths") {
  BodySpec b = box_body({BigRational(3), BigRational(1, 2), BigRational(5, 4)});
  auto p = minima_exhaustive(b);
  REQUIRE(p.lambdas.size() == 3);
  CHECK(p.lambdas[0].contains(BigRational(1, 3)));
  CHECK(p.lambdas[1].contains(BigRational(4, 5)));
  CHECK(p.lambdas[2].contains(BigRational(2)));
  auto mk = minkowski_check(b, p);
  CHECK(mk.volume.contains(BigRational(15)));
  CHECK(mk.lower_ok == Certificate::True);
  CHECK(mk.upper_ok == Certificate::True);
}

TEST_CASE("primal and dual minima match brute force") {
  struct Case {
    std::vector<BigRational> theta;
    BigRational U, V;
  };
  std::vector<Case> cases = {
      {{BigRational(1, 3)}, 2, BigRational(1, 2)},
      {{BigRational(-5, 7)}, BigRational(3, 2), BigRational(3, 4)},
      {{BigRational(2, 5), BigRational(-1, 4)}, 2, BigRational(1, 2)},
      {{BigRational(7, 9), BigRational(1, 6)}, BigRational(5, 4), 1},
  };
  for (const auto& c : cases) {
    ThetaPoint th = rational_point(c.theta);
    std::vector<BigRational> y{1};
    y.insert(y.end(), c.theta.begin(), c.theta.end());
    int m = static_cast<int>(y.size());
    for (bool primal : {true, false}) {
      auto g = [&](const ZVector& z) { return gauge_sq(y, z, c.U, c.V, primal); };
      // the unit vectors bound lambda_m, hence every minimum lies in |z| <= sqrt(max g(e_i)) U
      BigRational top = 0;
      for (int i = 0; i < m; ++i) {
        ZVector e(m, 0);
        e[i] = 1;
        top = std::max(top, g(e));
      }
      long B = static_cast<long>(std::ceil(std::sqrt(top.get_d()) * c.U.get_d())) + 1;
      auto expected = brute_minima_sq(m, B, g);
      BodySpec body = primal ? primal_body(th, c.U, c.V) : dual_body(th, c.U, c.V);
      auto p = minima_exhaustive(body);
      REQUIRE(p.lambdas.size() == expected.size());
      for (int i = 0; i < m; ++i) CHECK(encloses_sqrt(p.lambdas[i], expected[i]));
      auto r = minima_reduced(body);
      for (int i = 0; i < m; ++i) {
        CHECK(r.lambdas[i].lower() <= p.lambdas[i].upper());
        CHECK(p.lambdas[i].lower() <= r.lambdas[i].upper());
      }
      auto mk = minkowski_check(body, p);
      CHECK(mk.lower_ok == Certificate::True);
      CHECK(mk.upper_ok == Certificate::True);
    }
  }
}

TEST_CASE("planar primal area matches the disc-strip formula") {
  // |z| <= U and |y ^ z| <= V: a disc of radius U cut by a strip of half-width h = V/|y|
  BigRational theta(3, 5), U(3), V(1, 2);
  BodySpec b = primal_body(rational_point({theta}), U, V);
  double ny = std::sqrt(1 + theta.get_d() * theta.get_d());
  double h = V.get_d() / ny, u = U.get_d();
  double area = 2 * (h * std::sqrt(u * u - h * h) + u * u * std::asin(h / u));
  Enclosure vol = body_volume(b);
  CHECK(vol.lower() <= area + 1e-9);
  CHECK(vol.upper() >= area - 1e-9);
  CHECK(vol.width() < 1e-2);
}

TEST_CASE("mahler comparability on a small primal body") {
  BodySpec b = primal_body(rational_point({BigRational(2, 7), BigRational(-3, 5)}), 2, BigRational(1, 2));
  ComparabilityReport rep;
  for (int k = 1; k <= 2; ++k) {
    auto inst = mahler_check(b, k, kDefaultEnumerationBudget, &rep);
    CHECK(inst.ratio.lower() > 0);
    CHECK(inst.ratio.upper() < 100);
    CHECK(inst.ratio.lower() > BigRational(1, 100));
  }
  CHECK(rep.instances.size() == 2);
  CHECK(rep.kappa_observed >= 1);
}

TEST_CASE("degree-1 compound of a box is the box") {
  BodySpec b = box_body({BigRational(2), BigRational(1, 3)});
  auto base = minima_exhaustive(b);
  auto comp = first_minimum(compound_body(b, 1));
  CHECK(comp.lambdas.size() == 1);
  CHECK(comp.lambdas[0].contains(base.lambdas[0].midpoint()));
}
