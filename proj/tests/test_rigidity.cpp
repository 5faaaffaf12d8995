#include "doctest.h"

#include <algorithm>
#include <random>

#include "rigmon/rigidity.hpp"

using namespace rigmon;

namespace {

TurbineRepresentation cusp_model() {
  ScalarField q3 = ScalarField::exact(3);
  TurbineRepresentation rep;
  rep.params = TurbineParams::make(3, 2, 1, false, Variant::curve);
  rep.field = q3;
  rep.dim = 2;
  rep.omega0 = Matrix::parse(q3, {{"0", "1"}, {"1", "0"}});
  rep.alpha = {Matrix(), Matrix::parse(q3, {{"1", "-1"}, {"0", "-1"}})};
  rep.delta = Matrix::identity(q3, 2);
  rep.omega_inf = rep.alpha[1].inverse() * rep.omega0;
  return rep;
}

Matrix standard_pseudo_reflection(const Vector& u, std::size_t c) {
  RankOneDecomposition d;
  d.u = u;
  d.selector = c;
  return d.reconstruct();
}

}  // namespace

TEST_CASE("rigidity index examples") {
  ScalarField q5 = ScalarField::exact(5);
  for (long l = 1; l <= 4; ++l) {
    std::vector<Matrix> scalars(l + 2, Matrix::scalar(q5, 1, q5.parse("zeta(5)")));
    CHECK(rigidity_index(scalars, l, 1) == 2);
  }
  TurbineRepresentation cusp = cusp_model();
  auto b = rigidity_breakdown(local_monodromies(cusp), 1, 2);
  CHECK(b.centralizer_dims == std::vector<std::size_t>{2, 2, 2});
  CHECK(b.index == 2);
  CHECK_THROWS_AS(rigidity_index({Matrix::identity(q5, 2)}, 1, 3), DimensionMismatch);
}

TEST_CASE("rigidity index cross-checks claimed spectra") {
  TurbineRepresentation cusp = cusp_model();
  ScalarField f = cusp.field;
  std::vector<std::optional<std::vector<SpectrumClaim>>> claims = {
      std::vector<SpectrumClaim>{{f.one(), 1}, {f.integer(-1), 1}},
      std::vector<SpectrumClaim>{{f.one(), 1}, {f.integer(-1), 1}},
      std::vector<SpectrumClaim>{{f.parse("zeta(3)"), 1}, {f.parse("zeta(3)^2"), 1}},
  };
  auto b = rigidity_breakdown(local_monodromies(cusp), 1, 2, claims);
  CHECK(b.closed_forms[2] == std::size_t{2});
  claims[2] = std::vector<SpectrumClaim>{{f.one(), 1}, {f.integer(-1), 1}};
  CHECK_THROWS_AS(rigidity_breakdown(local_monodromies(cusp), 1, 2, claims), RigidityError);
}

TEST_CASE("rigidity index is conjugation invariant") {
  std::mt19937 rng(4);
  TurbineRepresentation cusp = cusp_model();
  ScalarField f = cusp.field;
  std::uniform_int_distribution<int> c(-3, 3);
  for (int t = 0; t < 5; ++t) {
    Matrix p(f, 2, 2);
    do {
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) p(i, j) = f.integer(c(rng)) + f.integer(c(rng)) * f.parse("zeta(3)");
    } while (p.determinant().is_zero());
    std::vector<Matrix> conj;
    for (const auto& m : local_monodromies(cusp)) conj.push_back(p * m * p.inverse());
    CHECK(rigidity_index(conj, 1, 2) == 2);
  }
}

TEST_CASE("is_rigid") {
  TurbineRepresentation cusp = cusp_model();
  auto r = is_rigid(cusp, true);
  CHECK(r.verdict == RigidityVerdict::rigid);
  CHECK(r.pochhammer);
  CHECK_THROWS_AS(is_rigid(cusp, false), RigidityError);

  // Direct sum of two rank-one systems: index 12 - 4 = 8 for l = 1, but the
  // criterion is only stated for irreducible systems.
  ScalarField q = ScalarField::exact(1);
  std::vector<Matrix> scalars(3, Matrix::identity(q, 2));
  CHECK(rigidity_index(scalars, 1, 2) == 8);

  // A no-shaft representation whose loops fail the Pochhammer condition.
  TurbineRepresentation trivial;
  trivial.params = TurbineParams::make(3, 2, 1, false);
  trivial.field = q;
  trivial.dim = 2;
  trivial.omega0 = Matrix::identity(q, 2);
  trivial.alpha = {Matrix(), Matrix::identity(q, 2)};
  trivial.omega_inf = Matrix::identity(q, 2);
  trivial.delta = Matrix::identity(q, 2);
  CHECK(is_rigid(trivial, true).verdict == RigidityVerdict::inconclusive);
}

TEST_CASE("strong connectivity") {
  CHECK(strongly_connected(1, {}));
  CHECK_FALSE(strongly_connected(2, {{0, 1}}));
  CHECK(strongly_connected(2, {{0, 1}, {1, 0}}));
  CHECK(strongly_connected(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
  CHECK_FALSE(strongly_connected(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}}));
  CHECK_FALSE(strongly_connected(3, {{0, 1}, {1, 2}}));
}

TEST_CASE("irreducibility certificate on the cusp model") {
  TurbineRepresentation cusp = cusp_model();
  auto loops = transversal_loop_images(cusp);
  REQUIRE(loops.size() == 2);
  CHECK(loops[0] == cusp.omega0 * cusp.alpha[1] * cusp.omega0.inverse());
  CHECK(loops[1] == cusp.alpha[1]);
  auto cert = irreducibility_certificate(cusp);
  CHECK(cert.vertex_count == 2);
  CHECK(cert.arcs.size() == 2);
  CHECK(cert.strongly_connected);
  CHECK(cert.product_rank == 2);
  CHECK(cert.verdict);
  CHECK_FALSE(cert.basis_changed);
  CHECK(cert.verdict == burnside_oracle(loops));
}

TEST_CASE("irreducibility certificate on a direct sum") {
  ScalarField q5 = ScalarField::exact(5);
  Vector u1 = {q5.integer(2), q5.zero(), q5.zero()};
  Vector u2 = {q5.zero(), q5.integer(3), q5.integer(1)};
  Vector u3 = {q5.zero(), q5.integer(1), q5.integer(-1)};
  std::vector<Matrix> gens = {standard_pseudo_reflection(u1, 0), standard_pseudo_reflection(u2, 1),
                              standard_pseudo_reflection(u3, 2)};
  auto cert = irreducibility_certificate(gens);
  CHECK_FALSE(cert.strongly_connected);
  CHECK_FALSE(cert.verdict);
  CHECK_FALSE(burnside_oracle(gens));
}

TEST_CASE("irreducibility certificate after a basis change") {
  ScalarField q5 = ScalarField::exact(5);
  TurbineRepresentation cusp = cusp_model();
  ScalarField q3 = cusp.field;
  Matrix p = Matrix::parse(q3, {{"1", "2"}, {"1", "3"}});
  std::vector<Matrix> conj;
  for (const auto& g : transversal_loop_images(cusp)) conj.push_back(p * g * p.inverse());
  auto cert = irreducibility_certificate(conj);
  CHECK(cert.basis_changed);
  CHECK(cert.verdict);
  CHECK_THROWS_AS(irreducibility_certificate({Matrix::identity(q5, 2)}), RigidityError);
  // Two copies of the same reflection cannot be brought to standard form.
  Matrix x = standard_pseudo_reflection({q5.integer(2), q5.integer(1)}, 0);
  CHECK_THROWS_AS(irreducibility_certificate({x, x}), RigidityError);
}

TEST_CASE("Burnside oracle examples") {
  ScalarField q5 = ScalarField::exact(5);
  CHECK_FALSE(burnside_oracle({Matrix::scalar(q5, 2, q5.integer(3))}));
  CHECK_FALSE(burnside_oracle({Matrix::identity(q5, 3)}));
  CHECK(burnside_oracle({Matrix::identity(q5, 1)}));
  TurbineRepresentation cusp = cusp_model();
  CHECK(burnside_oracle(transversal_loop_images(cusp)));
  ScalarField approx = ScalarField::approx(128);
  CHECK(burnside_oracle({Matrix::parse(approx, {{"0", "1"}, {"1", "0"}}), Matrix::parse(approx, {{"1", "-1"}, {"0", "-1"}})}));
  CHECK_FALSE(burnside_oracle({Matrix::parse(approx, {{"1", "0.5"}, {"0", "2"}})}));
}

TEST_CASE("certificate and Burnside oracle agree on random standard-form tuples") {
  std::mt19937 rng(2024);
  ScalarField q5 = ScalarField::exact(5);
  std::uniform_int_distribution<int> coin(0, 2);
  std::uniform_int_distribution<int> c(-2, 2);
  int irreducible = 0, reducible = 0;
  for (int t = 0; t < 40; ++t) {
    const std::size_t m = 1 + t % 4;
    std::vector<std::size_t> dirs(m);
    for (std::size_t i = 0; i < m; ++i) dirs[i] = i;
    std::shuffle(dirs.begin(), dirs.end(), rng);
    std::vector<Matrix> gens;
    for (std::size_t i = 0; i < m; ++i) {
      Vector u(m, q5.zero());
      for (std::size_t r = 0; r < m; ++r)
        if (coin(rng) == 0) u[r] = q5.integer(c(rng)) + q5.integer(c(rng)) * q5.parse("zeta(5)");
      if (u[dirs[i]].is_zero() || u[dirs[i]].is_one()) u[dirs[i]] = q5.parse("1 - zeta(5)");
      gens.push_back(standard_pseudo_reflection(u, dirs[i]));
    }
    auto cert = irreducibility_certificate(gens);
    bool oracle = burnside_oracle(gens);
    CHECK(cert.verdict == oracle);
    (oracle ? irreducible : reducible)++;
  }
  CHECK(irreducible > 0);
  CHECK(reducible > 0);
}
