#include <doctest.h>

#include <cmath>

#include "dioph/catalog.hpp"
#include "dioph/polynomial.hpp"

using namespace dioph;

TEST_CASE("irreducibility over Q") {
  CHECK(is_irreducible_over_q({-2, 0, 1}));
  CHECK(is_irreducible_over_q({-1, -1, 0, 1}));
  CHECK_FALSE(is_irreducible_over_q({-1, 0, 1}));
  // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2) has no rational root
  CHECK_FALSE(is_irreducible_over_q({4, 0, 0, 0, 1}));
  // x^4 - 10x^2 + 1, the minimal polynomial of sqrt2 + sqrt3, is reducible modulo every prime
  CHECK(is_irreducible_over_q({1, 0, -10, 0, 1}));
  CHECK_FALSE(is_irreducible_over_q({-4, 0, 0, 0, 1}));
  CHECK_FALSE(is_irreducible_over_q({0, 1, 1}));
}

TEST_CASE("algebraic points validate their inputs") {
  CHECK_THROWS_AS(algebraic_point("r", {-4, 0, 0, 0, 1}, 1, 2, {1}), InvalidDescription);
  CHECK_THROWS_AS(algebraic_point("lin", {-2, 1}, 1, 3, {1}), InvalidDescription);
  CHECK_THROWS_AS(algebraic_point("pow", {-1, -1, 0, 1}, 1, 2, {3}), InvalidDescription);
  CHECK_THROWS_AS(algebraic_point("rep", {-1, -1, 0, 1}, 1, 2, {1, 1}), InvalidDescription);
  CatalogEntry q = algebraic_point("q", {1, 0, -10, 0, 1}, 3, 4, {1, 2, 3});
  CHECK(q.theta.n() == 3);
  CHECK(q.certificate == IndependenceCertificate::AlgebraicProof);
  // sqrt2 + sqrt3 = 3.14626436994197234232...
  Enclosure t = q.theta.theta(1, 96);
  CHECK(t.lower() > parse_rational("3.14626436994197234231"));
  CHECK(t.upper() < parse_rational("3.14626436994197234233"));
}

TEST_CASE("builtin entries") {
  for (const auto& name : builtin_names()) {
    CatalogEntry e = builtin_entry(name);
    CHECK(e.name == name);
    CHECK(e.theta.n() >= 1);
  }
  CHECK_THROWS_AS(builtin_entry("nope"), ConfigError);
  CatalogEntry cubic = builtin_entry("cubic");
  REQUIRE(cubic.expected);
  CHECK(cubic.expected->omega.at(0).value().contains(BigRational(1, 2)));
  CHECK(cubic.expected->omega.at(1).value().contains(BigRational(2)));
}

TEST_CASE("lacunary schedules must at least double") {
  Schedule slow;
  slow.kind = Schedule::Kind::Explicit;
  slow.terms = {1, 2, 3};
  CHECK_THROWS_AS(liouville_point("x", 2, slow, 2), InvalidDescription);
  Schedule affine;
  affine.kind = Schedule::Kind::Affine;
  affine.a = 5;
  CHECK_THROWS_AS(liouville_point("x", 2, affine, 2), InvalidDescription);
  Schedule two;
  two.kind = Schedule::Kind::Power;
  two.a = 2;
  CHECK_NOTHROW(liouville_point("x", 2, two, 2));
  CHECK_THROWS_AS(liouville_point("x", 1, two, 2), InvalidDescription);
  CHECK_THROWS_AS(liouville_point("x", 2, two, 3), InvalidDescription);
}

TEST_CASE("designed truncations of sum 2^-3^k verify") {
  CatalogEntry xi = builtin_entry("liouville3");
  auto ws = truncation_witnesses(xi, BigRational(BigInt(1) << 27));
  REQUIRE(ws.size() == 3);
  // q = 2^{3^K}, p = q * sum_{k <= K} 2^{-3^k}
  BigInt expected_q[3] = {8, 512, BigInt(1) << 27};
  BigInt expected_p[3] = {1, 65, (BigInt(1) << 24) + (BigInt(1) << 18) + 1};
  for (int i = 0; i < 3; ++i) {
    CHECK(ws[i].K == i + 1);
    CHECK(ws[i].q == expected_q[i]);
    CHECK(ws[i].p == expected_p[i]);
    CHECK(ws[i].verified);
    CHECK(ws[i].error.upper() <= ws[i].designed_bound);
    // |q xi - p| is about q^-2, so the exponent sits just below 2
    CHECK(ws[i].exponent.lower() > BigRational(19, 10));
    CHECK(ws[i].exponent.lower() < 2);
    CHECK(ws[i].record.d == 0);
    CHECK(ws[i].record.X.dense()[0] == expected_q[i] * expected_q[i]);
  }
  CHECK_THROWS(truncation_witnesses(builtin_entry("cubic"), 100));
}

TEST_CASE("random points are reproducible from their seed") {
  CatalogEntry a = random_point("r", 3, 17), b = random_point("r", 3, 17), c = random_point("r", 3, 18);
  for (int i = 1; i <= 3; ++i) CHECK(a.theta.theta(i, 64).lower() == b.theta.theta(i, 64).lower());
  CHECK(a.theta.theta(1, 64).lower() != c.theta.theta(1, 64).lower());
  CHECK(a.certificate == IndependenceCertificate::Unchecked);
  CHECK_THROWS_AS(random_point("r", 0, 1), InvalidDescription);
}
