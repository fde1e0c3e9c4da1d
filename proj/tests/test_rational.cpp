#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "opencore/rational.hpp"

using opencore::Rational;
using opencore::between;
using opencore::v2_denominator;

namespace {

Rational rnd_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-10000, 10000);
  std::uniform_int_distribution<long> den(1, 10000);
  return Rational::make(num(rng), den(rng));
}

}  // namespace

TEST_CASE("canonical lowest-terms form") {
  CHECK(Rational::make(2, 4) == Rational::make(1, 2));
  CHECK(Rational::make(2, 4).str() == "1/2");
  CHECK(Rational::make(3, -6).str() == "-1/2");
  CHECK(Rational::make(0, 7).str() == "0");
  CHECK(Rational::make(0, 7).denominator() == 1);
  CHECK(Rational::make(-4, -8).str() == "1/2");
  CHECK_THROWS_AS(Rational::make(1, 0), std::invalid_argument);
}

TEST_CASE("scaling invariance of make") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-50, 50);
  for (int i = 0; i < 10000; ++i) {
    long n = d(rng), den = d(rng), k = d(rng);
    if (den == 0 || k == 0) continue;
    CHECK(Rational::make(n, den) == Rational::make(k * n, k * den));
  }
}

TEST_CASE("compare is the cross-multiplication order") {
  CHECK(Rational::compare(Rational::make(1, 2), Rational::make(2, 3)) < 0);
  CHECK(Rational::compare(Rational::make(-1, 2), Rational::make(-1, 2)) == 0);
  CHECK(Rational::compare(Rational(0), Rational::make(-1, 3)) > 0);
}

TEST_CASE("compare: antisymmetric and transitive on random triples") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    Rational a = rnd_rational(rng), b = rnd_rational(rng), c = rnd_rational(rng);
    CHECK(Rational::compare(a, b) == -Rational::compare(b, a));
    if (a <= b && b <= c) CHECK(a <= c);
    if (a < b && b < c) CHECK(a < c);
  }
}

TEST_CASE("between returns the midpoint and stays strictly inside") {
  CHECK(between(Rational(0), Rational(1)) == Rational::make(1, 2));
  CHECK(between(Rational(-1), Rational::make(-1, 2)) == Rational::make(-3, 4));
  CHECK(between(Rational::make(1, 3), Rational::make(2, 3)) == Rational::make(1, 2));
  CHECK_THROWS_AS(between(Rational(1), Rational(1)), std::invalid_argument);
  CHECK_THROWS_AS(between(Rational(2), Rational(1)), std::invalid_argument);

  std::mt19937_64 rng(13);
  for (int i = 0; i < 10000; ++i) {
    Rational a = rnd_rational(rng), b = rnd_rational(rng);
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    Rational m = between(a, b);
    CHECK(a < m);
    CHECK(m < b);
  }
}

TEST_CASE("v2 of the denominator") {
  CHECK(v2_denominator(Rational::make(-1, 2)) == 1);
  CHECK(v2_denominator(Rational::make(-3, 1)) == 0);
  CHECK(v2_denominator(Rational::make(-5, 12)) == 2);
  CHECK(v2_denominator(Rational::make(7, 96)) == 5);
}

TEST_CASE("arithmetic") {
  CHECK(Rational::make(1, 2) + Rational::make(1, 3) == Rational::make(5, 6));
  CHECK(Rational::make(1, 6) - Rational::make(1, 2) == Rational::make(-1, 3));
  CHECK((-Rational::make(2, 4)).str() == "-1/2");
  CHECK(Rational::make(-7, 3).floor() == -3);
  CHECK(Rational::make(7, 3).floor() == 2);
}

TEST_CASE("huge dyadic denominators stay exact without materializing") {
  mpz_class e = (mpz_class(1) << 65) - 1;  // 2^65 - 1
  Rational w = Rational::neg_inv_pow2(e);
  CHECK(w.is_negative());
  CHECK(v2_denominator(w) == e);
  CHECK(w < Rational(0));
  CHECK(Rational::make(-1, 2) < w);  // -1/2 is far below -1/2^huge
  CHECK_THROWS_AS(w.denominator(), std::overflow_error);
  CHECK(w.str() == "-1/2^36893488147419103231");
  CHECK(Rational::parse(w.str()) == w);

  Rational w2 = Rational::neg_inv_pow2(e - 1);
  CHECK(w2 < w);  // |w2| = 1/2^(e-1) is the larger magnitude
  CHECK(w2 != w);
  CHECK(Rational::neg_inv_pow2(3) == Rational::make(-1, 8));
}

TEST_CASE("parse and print round trip") {
  for (const char* s : {"0", "5", "-5", "1/2", "-3/4", "123456789123456789/2"}) {
    CHECK(Rational::parse(s).str() == s);
  }
  CHECK(Rational::parse("4/2") == Rational(2));
  CHECK(Rational::parse("+3") == Rational(3));
  CHECK_THROWS_AS(Rational::parse("a/2"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
}
