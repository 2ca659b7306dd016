#include <doctest.h>

#include "dioph/numerics.hpp"

using namespace dioph;

namespace {

BigRational dec(const std::string& s) { return parse_rational(s); }

}  // namespace

TEST_CASE("rationals are canonical") {
  CHECK(to_string(ratio(4, 6)) == "2/3");
  CHECK(to_string(ratio(-4, -2)) == "2");
  CHECK(to_string(ratio(3, -9)) == "-1/3");
  CHECK_THROWS(ratio(1, 0));
  CHECK(parse_rational("0.125") == BigRational(1, 8));
  CHECK(parse_rational("-7/21") == BigRational(-1, 3));
  CHECK(parse_rational("12") == BigRational(12));
}

TEST_CASE("dyadic grids round in the stated direction") {
  BigRational third(1, 3);
  BigRational lo = floor_to_grid(third, 10), hi = ceil_to_grid(third, 10);
  CHECK(lo <= third);
  CHECK(third <= hi);
  CHECK(hi - lo == pow2(-10));
  CHECK(floor_to_grid(BigRational(-1, 3), 4) == BigRational(-3, 8));
  CHECK(ilog2(BigRational(1, 3)) == -2);
  CHECK(ilog2(BigRational(1024)) == 10);
}

TEST_CASE("elementary enclosures contain reference decimals") {
  // reference values to 30 digits
  Enclosure r2 = sqrt_q(2, 128);
  CHECK(r2.lower() > dec("1.414213562373095048801688724209"));
  CHECK(r2.upper() < dec("1.414213562373095048801688724210"));
  Enclosure l2 = log(Enclosure(BigRational(2)), 128);
  CHECK(l2.lower() > dec("0.693147180559945309417232121458"));
  CHECK(l2.upper() < dec("0.693147180559945309417232121459"));
  Enclosure p = pi(128);
  CHECK(p.lower() > dec("3.141592653589793238462643383279"));
  CHECK(p.upper() < dec("3.141592653589793238462643383280"));
  Enclosure e = exp(Enclosure(BigRational(1)), 128);
  CHECK(e.lower() > dec("2.718281828459045235360287471352"));
  CHECK(e.upper() < dec("2.718281828459045235360287471353"));
}

TEST_CASE("rational powers") {
  Enclosure c = pow_rational(Enclosure(BigRational(8)), BigRational(2, 3), 96);
  CHECK(c.contains(BigRational(4)));
  CHECK(c.width() < pow2(-80));
  Enclosure s = pow_rational(Enclosure(BigRational(2)), BigRational(-1, 2), 96);
  CHECK(s.lower() > dec("0.70710678118654752440084"));
  CHECK(s.upper() < dec("0.70710678118654752440085"));
}

TEST_CASE("interval arithmetic is outward") {
  Enclosure a(BigRational(1), BigRational(2), 64), b(BigRational(-3), BigRational(1), 64);
  Enclosure prod = a * b;
  CHECK(prod.lower() == -6);
  CHECK(prod.upper() == 2);
  Enclosure q = Enclosure(BigRational(1)) / Enclosure(BigRational(3));
  CHECK(q.contains(BigRational(1, 3)));
  CHECK(abs(b).lower() == 0);
  CHECK(abs(b).upper() == 3);
}

TEST_CASE("certification is three-valued") {
  Enclosure a(BigRational(1), BigRational(2), 64), b(BigRational(3), BigRational(4), 64);
  Enclosure c(BigRational(3, 2), BigRational(5, 2), 64);
  CHECK(certify_le(a, b) == Certificate::True);
  CHECK(certify_le(b, a) == Certificate::False);
  CHECK(certify_le(a, c) == Certificate::Undecided);
  CHECK(certify_lt(Enclosure(BigRational(1)), Enclosure(BigRational(1))) == Certificate::False);
  CHECK(certify_le(Enclosure(BigRational(1)), Enclosure(BigRational(1))) == Certificate::True);
  CHECK(certify_le(ExtendedReal(BigRational(5)), ExtendedReal::infinity()) == Certificate::True);
  CHECK(certify_le(ExtendedReal::infinity(), ExtendedReal(BigRational(5))) == Certificate::False);
}

TEST_CASE("real descriptions evaluate to tight enclosures") {
  // real root of x^3 - x - 1
  AlgebraicNumber plastic{{-1, -1, 0, 1}, 1, 2};
  Enclosure e = eval(plastic, 128);
  CHECK(e.lower() > dec("1.324717957244746025960908854478"));
  CHECK(e.upper() < dec("1.324717957244746025960908854479"));

  Schedule s;
  s.kind = Schedule::Kind::Power;
  s.a = 3;
  LacunarySeries xi{2, s};
  BigRational partial = pow2(-3) + pow2(-9) + pow2(-27) + pow2(-81);
  Enclosure x = eval(xi, 300);
  CHECK(x.lower() > partial);
  CHECK(x.upper() < partial + pow2(-242));

  CHECK(eval(DecimalLiteral{"0.25"}, 64).contains(BigRational(1, 4)));
  CHECK(is_rational(RationalLiteral{BigRational(1, 7)}));
  CHECK_FALSE(is_rational(plastic));
}

TEST_CASE("invalid descriptions are rejected") {
  CHECK_THROWS(validate(AlgebraicNumber{{-2, 0, 1}, -2, 2}));  // two roots in the interval
  CHECK_THROWS(validate(AlgebraicNumber{{-2, 0, 1}, 2, 3}));   // no root
  Schedule s;
  s.kind = Schedule::Kind::Explicit;
  s.terms = {3, 2};
  CHECK_THROWS(validate(LacunarySeries{2, s}));  // not increasing
  CHECK_THROWS(validate(DecimalLiteral{"0.1.2"}));
}
