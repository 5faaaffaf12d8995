#include "doctest.h"

#include "rigmon/pochhammer.hpp"
#include "rigmon/rigidity.hpp"

using namespace rigmon;

namespace {

// lambda_1..lambda_n in Q(zeta_N) with eta_2 forced by the product relation.
SphereLocalData sphere_data(ScalarField f, const std::vector<std::string>& lambdas, const std::string& eta1) {
  SphereLocalData d;
  for (const auto& l : lambdas) d.lambdas.push_back(f.parse(l));
  d.eta1 = f.parse(eta1);
  Scalar prod = f.one();
  for (const auto& l : d.lambdas) prod *= l;
  d.eta2 = prod / d.eta1.pow(static_cast<long>(lambdas.size()) - 1);
  return d;
}

}  // namespace

TEST_CASE("build_dsp_tuple matches the displayed two-point tuple") {
  ScalarField q5 = ScalarField::exact(5);
  SphereLocalData d = sphere_data(q5, {"-1", "-zeta(5)^3"}, "-zeta(5)^2");
  CHECK(d.eta2 == q5.parse("-zeta(5)"));
  PochhammerTuple t = build_dsp_tuple(d);
  Scalar l1 = d.lambdas[0], l2 = d.lambdas[1], e1 = d.eta1;
  CHECK(t.a[0] == Matrix::from_rows(q5, {{l1, q5.zero()}, {l2 - e1, q5.one()}}));
  CHECK(t.a[1] == Matrix::from_rows(q5, {{q5.one(), (l1 - e1) / e1}, {q5.zero(), l2}}));
  CHECK(t.a_inf == t.a[0] * t.a[1]);
  CHECK(check_sphere_rigid_shape(t.a_inf, d.eta1, d.eta2));
}

TEST_CASE("build_dsp_tuple with one point") {
  ScalarField q5 = ScalarField::exact(5);
  SphereLocalData d;
  d.lambdas = {q5.parse("zeta(5)")};
  d.eta1 = q5.parse("zeta(5)^2");
  d.eta2 = q5.parse("zeta(5)");
  PochhammerTuple t = build_dsp_tuple(d);
  CHECK(t.a[0] == Matrix::scalar(q5, 1, d.lambdas[0]));
  CHECK(t.a_inf == t.a[0]);
}

TEST_CASE("build_dsp_tuple with three points and eta_1 = i") {
  ScalarField q4 = ScalarField::exact(4);
  SphereLocalData d = sphere_data(q4, {"-1", "-1", "-1"}, "i");
  // -1 = i^2 eta_2 forces eta_2 = 1.
  CHECK(d.eta2.is_one());
  PochhammerTuple t = build_dsp_tuple(d);
  CHECK(verify_semisimple_spectrum(t.a_inf, {{q4.parse("i"), 2}, {q4.one(), 1}}).ok);
}

TEST_CASE("build_dsp_tuple rejects bad data with the condition named") {
  ScalarField q5 = ScalarField::exact(5);
  auto expect_failure = [](const SphereLocalData& d, const std::string& id) {
    try {
      build_dsp_tuple(d);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK_MESSAGE(e.report().failed(id), e.what());
    }
  };
  SphereLocalData unit = sphere_data(q5, {"1", "-zeta(5)^3"}, "-zeta(5)^2");
  expect_failure(unit, "lambda_not_one");
  SphereLocalData eq = sphere_data(q5, {"-zeta(5)^2", "-zeta(5)^3"}, "-zeta(5)^2");
  expect_failure(eq, "lambda_not_eta1");
  SphereLocalData broken = sphere_data(q5, {"-1", "-zeta(5)^3"}, "-zeta(5)^2");
  broken.eta2 = broken.eta2 * q5.parse("zeta(5)");
  expect_failure(broken, "product_relation");
  SphereLocalData same = sphere_data(q5, {"zeta(5)", "zeta(5)^3"}, "zeta(5)^2");
  CHECK(same.eta2 == same.eta1);
  expect_failure(same, "eta_distinct");
}

TEST_CASE("Pochhammer condition") {
  ScalarField q5 = ScalarField::exact(5);
  CHECK(check_pochhammer_condition({Matrix::scalar(q5, 3, q5.integer(2))}).ok);
  auto ids = check_pochhammer_condition({Matrix::identity(q5, 2), Matrix::identity(q5, 2)});
  CHECK_FALSE(ids.ok);
  CHECK(ids.codim_sum == 0);
  PochhammerTuple t = build_dsp_tuple(sphere_data(q5, {"-1", "-zeta(5)^3"}, "-zeta(5)^2"));
  auto r = check_pochhammer_condition(t.a);
  CHECK(r.ok);
  CHECK(r.codims == std::vector<std::size_t>{1, 1});
  CHECK(r.intersection_dim == 0);
  // Two pseudo-reflections on the same column share a kernel.
  Matrix x = Matrix::diagonal(q5, {q5.integer(2), q5.one()});
  Matrix y = Matrix::diagonal(q5, {q5.integer(3), q5.one()});
  auto shared = check_pochhammer_condition({x, y});
  CHECK(shared.codim_sum == 2);
  CHECK(shared.intersection_dim == 1);
  CHECK_FALSE(shared.ok);
}

TEST_CASE("sphere rigid shape") {
  ScalarField q5 = ScalarField::exact(5);
  Scalar e1 = q5.parse("zeta(5)"), e2 = q5.parse("zeta(5)^2");
  CHECK(check_sphere_rigid_shape(Matrix::diagonal(q5, {e1, e1, e2}), e1, e2));
  CHECK_FALSE(check_sphere_rigid_shape(Matrix::diagonal(q5, {e1, e2, e2}), e1, e2));
}

TEST_CASE("built tuples: determinant, Pochhammer condition, rigidity index 2") {
  struct Case {
    std::uint32_t conductor;
    std::vector<std::string> lambdas;
    std::string eta1;
  };
  std::vector<Case> cases = {
      {5, {"-1", "-zeta(5)^3"}, "-zeta(5)^2"},
      {12, {"zeta(12)", "zeta(12)^5", "-1"}, "zeta(12)^3"},
      {7, {"zeta(7)", "zeta(7)^2", "zeta(7)^4", "2"}, "zeta(7)^3"},
      {1, {"2", "3", "5", "7"}, "11"},
  };
  for (const auto& c : cases) {
    ScalarField f = ScalarField::exact(c.conductor);
    SphereLocalData d = sphere_data(f, c.lambdas, c.eta1);
    PochhammerTuple t = build_dsp_tuple(d);
    const std::size_t n = c.lambdas.size();
    Scalar prod = f.one();
    for (const auto& l : d.lambdas) prod *= l;
    CHECK(t.a_inf.determinant() == prod);
    CHECK(t.a_inf.determinant() == d.eta1.pow(static_cast<long>(n) - 1) * d.eta2);
    CHECK(check_pochhammer_condition(t.a).ok);
    CHECK(check_sphere_rigid_shape(t.a_inf, d.eta1, d.eta2));
    std::vector<Matrix> local = t.a;
    local.push_back(t.a_inf);
    CHECK(rigidity_index(local, static_cast<long>(n) - 1, n) == 2);
  }
}
