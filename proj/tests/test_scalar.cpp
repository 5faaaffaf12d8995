#include "doctest.h"

#include <random>

#include "rigmon/scalar.hpp"

using namespace rigmon;

namespace {

// Random element of Q(zeta_N) with small coefficients.
Scalar random_exact(ScalarField f, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  Scalar s = f.zero();
  for (unsigned j = 0; j < f.degree(); ++j)
    s += f.rational(mpq_class(coef(rng), den(rng))) * f.root_of_unity(f.conductor(), j);
  return s;
}

Scalar random_approx(ScalarField f, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-50, 50);
  return f.rational(mpq_class(coef(rng), 7)) + f.rational(mpq_class(coef(rng), 3)) * f.parse("i");
}

std::vector<long> coefficients(const Scalar& s) {
  const ExactValue& v = *s.exact();
  std::vector<long> out(s.field().degree(), 0);
  for (std::size_t i = 0; i < v.num.size(); ++i) out[i] = v.num[i].get_si();
  return out;
}

}  // namespace

TEST_CASE("cyclotomic polynomials match hand-computed tables") {
  CHECK(cyclotomic_polynomial(1) == std::vector<long>{-1, 1});
  CHECK(cyclotomic_polynomial(2) == std::vector<long>{1, 1});
  CHECK(cyclotomic_polynomial(3) == std::vector<long>{1, 1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<long>{1, 0, 1});
  CHECK(cyclotomic_polynomial(5) == std::vector<long>{1, 1, 1, 1, 1});
  CHECK(cyclotomic_polynomial(6) == std::vector<long>{1, -1, 1});
  CHECK(cyclotomic_polynomial(12) == std::vector<long>{1, 0, -1, 0, 1});
  // Phi_105 is the first with a coefficient of absolute value 2.
  auto p105 = cyclotomic_polynomial(105);
  CHECK(p105.size() == 49);
  CHECK(*std::min_element(p105.begin(), p105.end()) == -2);
  for (std::uint32_t n = 1; n <= 60; ++n) CHECK(cyclotomic_polynomial(n).size() - 1 == euler_phi(n));
}

TEST_CASE("parse_scalar examples") {
  ScalarField q5 = ScalarField::exact(5);
  SUBCASE("zeta(5)^2 is the basis element z^2") {
    CHECK(coefficients(q5.parse("zeta(5)^2")) == std::vector<long>{0, 0, 1, 0});
  }
  SUBCASE("-1 is the rational embedding") {
    Scalar m = q5.parse("-1");
    CHECK(coefficients(m) == std::vector<long>{-1, 0, 0, 0});
    CHECK(m == -q5.root_of_unity(5, 0));
  }
  SUBCASE("zeta(12) is not in Q(zeta_5)") { CHECK_THROWS_AS(q5.parse("1/2 + 3*zeta(12)"), ConductorMismatch); }
  SUBCASE("i needs 4 | N") {
    CHECK_THROWS_AS(q5.parse("i"), ConductorMismatch);
    ScalarField q4 = ScalarField::exact(4);
    CHECK(q4.parse("i^2") == q4.integer(-1));
  }
  SUBCASE("syntax errors") {
    CHECK_THROWS_AS(q5.parse("1 +"), ParseError);
    CHECK_THROWS_AS(q5.parse("foo"), ParseError);
    CHECK_THROWS_AS(q5.parse("(1"), ParseError);
    CHECK_THROWS_AS(q5.parse("1/0"), ParseError);
    CHECK_THROWS_AS(q5.parse("0.5"), ParseError);  // decimals are approx-only
    CHECK_THROWS_AS(q5.parse("zeta(0)"), ParseError);
  }
  SUBCASE("operator precedence") {
    CHECK(q5.parse("-2^2") == q5.integer(-4));
    CHECK(q5.parse("1 - 2*3") == q5.integer(-5));
    CHECK(q5.parse("(1 - 2)*3") == q5.integer(-3));
    CHECK(q5.parse("zeta(5)^-1") == q5.root_of_unity(5, 4));
    CHECK(q5.parse("zeta(5)^(-2)") == q5.root_of_unity(5, 3));
    CHECK(q5.parse("(1+zeta(5))^-1 * (1+zeta(5))") == q5.one());
  }
}

TEST_CASE("root_of_unity examples") {
  ScalarField q5 = ScalarField::exact(5);
  CHECK(coefficients(q5.root_of_unity(5, 1)) == std::vector<long>{0, 1, 0, 0});
  CHECK(q5.root_of_unity(1, 0).is_one());
  // In Q(zeta_6), zeta_3^2 = zeta_6^4 = -zeta_6 (reduce z^4 mod z^2 - z + 1 by hand).
  ScalarField q6 = ScalarField::exact(6);
  Scalar w = q6.root_of_unity(3, 2);
  CHECK(coefficients(w) == std::vector<long>{0, -1});
  CHECK(w.pow(3).is_one());
  CHECK_THROWS_AS(q5.root_of_unity(3, 1), ConductorMismatch);
}

TEST_CASE("field arithmetic examples") {
  ScalarField q3 = ScalarField::exact(3);
  CHECK(q3.root_of_unity(3, 1) + q3.root_of_unity(3, 2) == q3.integer(-1));
  ScalarField q5 = ScalarField::exact(5);
  Scalar a = q5.one() + q5.root_of_unity(5, 1);
  CHECK((a / a).is_one());
  // z * z^4 = z^5 = 1; z^4 itself is -1 - z - z^2 - z^3 in the power basis.
  Scalar z4 = q5.root_of_unity(5, 4);
  CHECK(coefficients(z4) == std::vector<long>{-1, -1, -1, -1});
  CHECK((q5.root_of_unity(5, 1) * z4).is_one());
  CHECK_THROWS_AS(a / q5.zero(), DivisionByZero);
  CHECK_THROWS_AS(a + ScalarField::exact(10).one(), FieldMismatch);
}

TEST_CASE("exact field axioms on random samples") {
  std::mt19937 rng(20240611);
  for (std::uint32_t n : {1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u, 9u, 10u, 12u, 15u, 20u, 24u, 30u}) {
    ScalarField f = ScalarField::exact(n);
    for (int t = 0; t < 8; ++t) {
      Scalar a = random_exact(f, rng), b = random_exact(f, rng), c = random_exact(f, rng);
      CHECK((a * b) * c == a * (b * c));
      CHECK((a + b) + c == a + (b + c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a * b == b * a);
      CHECK((a - a).is_zero());
      if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
    }
  }
}

TEST_CASE("roots of unity have the stated order exactly") {
  for (std::uint32_t n : {1u, 4u, 5u, 6u, 9u, 12u, 15u, 20u, 28u, 30u}) {
    ScalarField f = ScalarField::exact(n);
    for (std::uint32_t d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      for (std::uint32_t j = 0; j < d; ++j) CHECK(f.root_of_unity(d, j).pow(d).is_one());
    }
  }
}

TEST_CASE("render and parse round-trip in exact mode") {
  std::mt19937 rng(7);
  for (std::uint32_t n : {1u, 3u, 4u, 5u, 8u, 12u, 21u}) {
    ScalarField f = ScalarField::exact(n);
    for (int t = 0; t < 20; ++t) {
      Scalar s = random_exact(f, rng);
      CHECK(f.parse(s.render()) == s);
    }
  }
  ScalarField q5 = ScalarField::exact(5);
  CHECK(q5.zero().render() == "0");
  CHECK(q5.parse("-1/2*zeta(5)^3").render() == "-1/2*zeta(5)^3");
  CHECK(q5.parse("zeta(5)").render() == "zeta(5)");
  CHECK(q5.parse("2 - zeta(5)^2").render() == "2 - zeta(5)^2");
}

TEST_CASE("approx mode") {
  ScalarField f = ScalarField::approx(200);
  SUBCASE("decimals and roots") {
    Scalar x = f.parse("0.25 + 1.5e1*i");
    CHECK(x == f.rational(mpq_class(1, 4)) + f.integer(15) * f.parse("i"));
    CHECK(f.root_of_unity(7, 3).pow(7) == f.one());
    CHECK(f.parse("zeta(3) + zeta(3)^2") == f.integer(-1));
  }
  SUBCASE("tolerance semantics") {
    ScalarField loose = ScalarField::approx(64, std::optional<long>(-10));
    CHECK(loose.parse("1 + 0.0001") == loose.one());
    CHECK(loose.parse("1 + 0.01") != loose.one());
    CHECK(ScalarField::approx(64, std::string("1e-3")) == ScalarField::approx(64, std::string("1e-3")));
  }
  SUBCASE("field axioms within tolerance") {
    std::mt19937 rng(11);
    for (int t = 0; t < 20; ++t) {
      Scalar a = random_approx(f, rng), b = random_approx(f, rng), c = random_approx(f, rng);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      if (!a.is_zero()) CHECK(a * a.inverse() == f.one());
    }
  }
  SUBCASE("render round-trip") {
    Scalar s = f.root_of_unity(9, 2) * f.rational(mpq_class(-3, 7));
    CHECK(f.parse(s.render()) == s);
  }
  CHECK_THROWS_AS(f.one() / f.zero(), DivisionByZero);
}

TEST_CASE("literal root orders") {
  CHECK(literal_root_orders("1/2 + 3*zeta(12)") == std::vector<std::uint32_t>{12});
  CHECK(literal_root_orders("i*zeta(5)^2 - zeta(3)") == std::vector<std::uint32_t>{4, 5, 3});
  CHECK(literal_root_orders("-7/3").empty());
  CHECK_THROWS_AS(literal_root_orders("zeta(x)"), ParseError);
}

TEST_CASE("k-th roots inside the field") {
  ScalarField q10 = ScalarField::exact(10);
  Scalar eps = q10.root_of_unity(5, 1);
  auto roots = kth_roots(eps, 2);
  REQUIRE(roots.has_value());
  CHECK(roots->size() == 2);
  for (const auto& r : *roots) CHECK(r.pow(2) == eps);
  CHECK((*roots)[0] != (*roots)[1]);
  // Q(zeta_5) holds -1 = zeta_10^5, so square roots of zeta_5 exist there too.
  ScalarField q5 = ScalarField::exact(5);
  auto r5 = kth_roots(q5.root_of_unity(5, 1), 2);
  REQUIRE(r5.has_value());
  for (const auto& r : *r5) CHECK(r.pow(2) == q5.root_of_unity(5, 1));
  // Cube roots of zeta_5 need zeta_15.
  CHECK_FALSE(kth_roots(q5.root_of_unity(5, 1), 3).has_value());
  CHECK_FALSE(kth_roots(q5.integer(2), 2).has_value());
  CHECK(root_of_unity_order(q5.integer(-1)) == 2u);
  CHECK(root_of_unity_order(q5.root_of_unity(5, 2)) == 5u);
  CHECK(root_of_unity_order(-q5.root_of_unity(5, 2)) == 10u);
  CHECK(root_of_unity_order(q5.one()) == 1u);
  CHECK_FALSE(root_of_unity_order(q5.integer(2)).has_value());

  ScalarField f = ScalarField::approx(128);
  auto ar = kth_roots(f.parse("3 + 4*i"), 3);
  REQUIRE(ar.has_value());
  for (const auto& r : *ar) CHECK(r.pow(3) == f.parse("3 + 4*i"));
}
