#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cga/rat.hpp"

using namespace cga;

TEST_CASE("factorial and binomial") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(3) == 6);
  CHECK(factorial(6) == 720);
  CHECK(binomial(3, 1) == 3);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(0, 0) == 1);
  CHECK_THROWS_AS(factorial(-1), std::domain_error);
}

TEST_CASE("structure constant I_m") {
  HalfInt l32(3), l52(5);
  CHECK(structure_constant_I(1, l32) == Rat(-2));
  CHECK(structure_constant_I(3, l52) == Rat(12));
  CHECK(structure_constant_I(2, l52) == Rat(-12));
  CHECK(structure_constant_I(0, l32) == Rat(6));
  CHECK_THROWS_AS(structure_constant_I(4, l32), std::domain_error);
  CHECK_THROWS_AS(structure_constant_I(-1, l32), std::domain_error);
}

TEST_CASE("I_m * I_{2l-m} = -((2l-m)! m!)^2 for all ell <= 11/2") {
  for (int twice = 3; twice <= 11; twice += 2) {
    HalfInt ell(twice);
    for (int m = 0; m <= twice; ++m) {
      Rat lhs = structure_constant_I(m, ell) * structure_constant_I(twice - m, ell);
      Int f = factorial(twice - m) * factorial(m);
      CHECK(lhs == Rat(Int(-(f * f))));
    }
  }
}

TEST_CASE("a_ell, b_ell, lambda_k") {
  HalfInt l52(5), l72(7);
  CHECK(a_ell(l52) == Rat(4));
  CHECK(b_ell(l52) == Rat(36));
  CHECK(lambda_k(2, l52) == Rat(4));
  CHECK(b_ell(l72) == Rat(576));
  CHECK_THROWS_AS(lambda_k(0, l52), std::domain_error);
  CHECK_THROWS_AS(lambda_k(6, l52), std::domain_error);
}

TEST_CASE("HalfInt parsing and bounds") {
  CHECK(HalfInt::from_string("3/2").twice() == 3);
  CHECK(HalfInt::from_string("9/2").k() == 5);
  CHECK(HalfInt(5).to_string() == "5/2");
  CHECK_THROWS_AS(HalfInt(1), std::invalid_argument);  // Schroedinger case out of scope
  CHECK_THROWS_AS(HalfInt(4), std::invalid_argument);
  CHECK_THROWS_AS(HalfInt::from_string("5/3"), std::invalid_argument);
}

TEST_CASE("Rat canonical form and text round-trip") {
  Rat r(6, -8);
  CHECK(r.numerator() == -3);
  CHECK(r.denominator() == 4);
  CHECK(r.to_string() == "-3/4");
  CHECK(Rat::from_string("-3/4") == r);
  CHECK(Rat::from_string("10/2").to_string() == "5");
  CHECK_THROWS_AS(Rat::from_string("1/0"), std::domain_error);
  CHECK_THROWS_AS(Rat::from_string("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
}

TEST_CASE("Rat field axioms on random values") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 30);
  auto rnd = [&] { return Rat(num(rng), den(rng)); };
  for (int i = 0; i < 1000; ++i) {
    Rat a = rnd(), b = rnd(), c = rnd();
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Rat(0));
    if (!a.is_zero()) {
      CHECK(a * a.inv() == Rat(1));
      CHECK(b / a * a == b);
    }
    CHECK(Rat::from_string(a.to_string()) == a);
  }
}

TEST_CASE("Rat pow") {
  CHECK(Rat(2, 3).pow(3) == Rat(8, 27));
  CHECK(Rat(2, 3).pow(-2) == Rat(9, 4));
  CHECK(Rat(5).pow(0) == Rat(1));
  CHECK_THROWS_AS(Rat(0).pow(-1), std::domain_error);
}
