#include "doctest.h"

#include <random>

#include "rigmon/linalg.hpp"

using namespace rigmon;

namespace {

Matrix mat(ScalarField f, const std::vector<std::vector<std::string>>& rows) { return Matrix::parse(f, rows); }

Scalar small_random(ScalarField f, std::mt19937& rng, int spread = 3) {
  std::uniform_int_distribution<int> coef(-spread, spread);
  Scalar s = f.integer(coef(rng));
  if (f.is_exact() && f.degree() > 1) s += f.integer(coef(rng)) * f.root_of_unity(f.conductor(), 1);
  return s;
}

Matrix random_matrix(ScalarField f, std::size_t n, std::mt19937& rng, int spread = 3) {
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = small_random(f, rng, spread);
  return m;
}

Matrix random_invertible(ScalarField f, std::size_t n, std::mt19937& rng) {
  while (true) {
    Matrix m = random_matrix(f, n, rng);
    if (!m.determinant().is_zero()) return m;
  }
}

}  // namespace

TEST_CASE("rank examples") {
  ScalarField q = ScalarField::exact(1);
  CHECK(rank(Matrix::identity(q, 3)) == 3);
  CHECK(rank(Matrix::zero(q, 4)) == 0);
  Matrix a1 = mat(q, {{"1", "-1"}, {"0", "-1"}});
  CHECK(rank(a1 - Matrix::identity(q, 2)) == 1);
}

TEST_CASE("kernel examples") {
  ScalarField q = ScalarField::exact(1);
  CHECK(kernel_basis(Matrix::identity(q, 3)).empty());
  auto k0 = kernel_basis(Matrix::zero(q, 2));
  REQUIRE(k0.size() == 2);
  CHECK(rank(Matrix::from_columns(q, k0)) == 2);
  // A_1 - I = [[0,-1],[0,-2]]: kernel is spanned by (1, 0).
  auto k = kernel_basis(mat(q, {{"0", "-1"}, {"0", "-2"}}));
  REQUIRE(k.size() == 1);
  CHECK(k[0][0] == q.one());
  CHECK(k[0][1].is_zero());
}

TEST_CASE("pseudo-reflection examples") {
  ScalarField q = ScalarField::exact(1);
  CHECK_FALSE(is_pseudo_reflection(Matrix::identity(q, 3)).has_value());
  auto d = is_pseudo_reflection(Matrix::diagonal(q, {q.integer(5), q.one(), q.one()}));
  REQUIRE(d.has_value());
  CHECK(d->selector == std::size_t{0});
  CHECK(d->special_eigenvalue == q.integer(5));
  // [[1,-1],[0,-1]] - I = -(1,2) e_2^T, det = -1.
  auto a = is_pseudo_reflection(mat(q, {{"1", "-1"}, {"0", "-1"}}));
  REQUIRE(a.has_value());
  CHECK(a->selector == std::size_t{1});
  CHECK(a->u == Vector{q.integer(1), q.integer(2)});
  CHECK(a->special_eigenvalue == q.integer(-1));
  // General rank-one form: M - I supported on two columns.
  Matrix g = mat(q, {{"2", "1"}, {"2", "3"}});  // I + (1,2)^T (1,1)
  auto gd = is_pseudo_reflection(g);
  REQUIRE(gd.has_value());
  CHECK_FALSE(gd->selector.has_value());
  CHECK(gd->reconstruct() == g);
  CHECK(gd->special_eigenvalue == g.determinant());
  // Transvections (det 1) and rank-two perturbations are rejected.
  CHECK_FALSE(is_pseudo_reflection(mat(q, {{"1", "1"}, {"0", "1"}})).has_value());
  CHECK_FALSE(is_pseudo_reflection(Matrix::diagonal(q, {q.integer(2), q.integer(3)})).has_value());
  CHECK_THROWS_AS(is_pseudo_reflection(Matrix::diagonal(q, {q.integer(0), q.integer(1)})), SingularMatrix);
}

TEST_CASE("centralizer dimension examples") {
  ScalarField q = ScalarField::exact(5);
  for (std::size_t n = 1; n <= 4; ++n) CHECK(centralizer_dim(Matrix::identity(q, n)) == n * n);
  Scalar eta1 = q.parse("-zeta(5)^2"), eta2 = q.parse("-zeta(5)");
  for (std::size_t n = 2; n <= 5; ++n) {
    Vector diag(n - 1, eta1);
    diag.push_back(eta2);
    CHECK(centralizer_dim(Matrix::diagonal(q, diag)) == (n - 1) * (n - 1) + 1);
  }
  CHECK(centralizer_dim(mat(q, {{"zeta(5)", "1"}, {"0", "zeta(5)"}})) == 2);
}

TEST_CASE("spectrum verification examples") {
  ScalarField q3 = ScalarField::exact(3);
  CHECK(verify_semisimple_spectrum(Matrix::identity(q3, 2), {{q3.one(), 2}}).ok);
  auto jordan = verify_semisimple_spectrum(mat(q3, {{"2", "1"}, {"0", "2"}}), {{q3.integer(2), 2}});
  CHECK_FALSE(jordan.ok);
  CHECK_FALSE(jordan.annihilated);
  Matrix omega_inf = mat(q3, {{"-1", "1"}, {"-1", "0"}});
  CHECK(verify_semisimple_spectrum(omega_inf, {{q3.parse("zeta(3)"), 1}, {q3.parse("zeta(3)^2"), 1}}).ok);
  CHECK_FALSE(verify_semisimple_spectrum(omega_inf, {{q3.parse("zeta(3)"), 1}, {q3.one(), 1}}).ok);
  CHECK_THROWS_AS(verify_semisimple_spectrum(omega_inf, {{q3.one(), 1}}), LinalgError);
  CHECK_THROWS_AS(verify_semisimple_spectrum(omega_inf, {{q3.one(), 1}, {q3.one(), 1}}), LinalgError);
}

TEST_CASE("eigenspace basis examples") {
  ScalarField q5 = ScalarField::exact(5);
  auto b = eigenspace_basis(Matrix::identity(q5, 2), q5.one());
  REQUIRE(b.size() == 2);
  CHECK(b[0] == Vector{q5.one(), q5.zero()});
  CHECK(b[1] == Vector{q5.zero(), q5.one()});
  CHECK(eigenspace_basis(Matrix::diagonal(q5, {q5.integer(2), q5.integer(3)}), q5.integer(5)).empty());
  // Worked-example Pochhammer pair at lambda = (-1, -zeta^3), eta = (-zeta^2, -zeta).
  Scalar l1 = q5.integer(-1), l2 = q5.parse("-zeta(5)^3"), eta1 = q5.parse("-zeta(5)^2");
  Matrix a1 = Matrix::from_rows(q5, {{l1, q5.zero()}, {l2 - eta1, q5.one()}});
  Matrix a2 = Matrix::from_rows(q5, {{q5.one(), (l1 - eta1) / eta1}, {q5.zero(), l2}});
  auto e = eigenspace_basis(a1 * a2, eta1);
  REQUIRE(e.size() == 1);
  CHECK(e[0][0] == q5.one());
  CHECK(e[0][1] == -eta1 / l1);
}

TEST_CASE("block assembly examples") {
  ScalarField q5 = ScalarField::exact(5);
  Matrix i2 = Matrix::identity(q5, 2);
  CHECK(direct_sum({i2, i2}) == Matrix::identity(q5, 4));
  // Cyclic block matrix with identity above and epsilon*I below.
  Scalar eps = q5.one();
  Matrix omega0 = block_assemble(q5, {2, 2}, {2, 2}, {{ZeroBlock{}, ScalarBlock{q5.one()}}, {ScalarBlock{eps}, ZeroBlock{}}});
  CHECK(omega0 == mat(q5, {{"0", "0", "1", "0"}, {"0", "0", "0", "1"}, {"1", "0", "0", "0"}, {"0", "1", "0", "0"}}));
  Matrix p = mat(q5, {{"1", "1"}, {"zeta(5)", "2"}});
  Matrix s = direct_sum({Matrix::identity(q5, 1), p, p});
  CHECK(s.rows() == 5);
  CHECK(s.block(1, 1, 2, 2) == p);
  CHECK(s.block(3, 3, 2, 2) == p);
  CHECK(s.block(1, 3, 2, 2).is_zero());
  CHECK(s(0, 0).is_one());
  CHECK_THROWS_AS(block_assemble(q5, {2}, {2}, {{Matrix::identity(q5, 3)}}), DimensionMismatch);
}

TEST_CASE("rank-nullity and inverse on random matrices") {
  std::mt19937 rng(3);
  for (std::uint32_t n : {1u, 5u, 12u}) {
    ScalarField f = ScalarField::exact(n);
    for (int t = 0; t < 15; ++t) {
      std::size_t dim = 1 + t % 5;
      Matrix m = random_matrix(f, dim, rng, 1);
      if (t % 3 == 0 && dim > 1) m.set_column(0, m.column(dim - 1));  // force a dependency
      auto k = kernel_basis(m);
      CHECK(rank(m) + k.size() == dim);
      for (const auto& v : k) {
        Vector image = m * v;
        CHECK(std::all_of(image.begin(), image.end(), [](const Scalar& x) { return x.is_zero(); }));
      }
      if (!m.determinant().is_zero()) {
        CHECK((m * m.inverse()).is_identity());
        CHECK(rank(m) == dim);
      } else {
        CHECK_THROWS_AS(m.inverse(), SingularMatrix);
      }
    }
  }
}

TEST_CASE("determinant is multiplicative") {
  std::mt19937 rng(5);
  ScalarField f = ScalarField::exact(7);
  for (int t = 0; t < 10; ++t) {
    Matrix a = random_matrix(f, 4, rng), b = random_matrix(f, 4, rng);
    CHECK((a * b).determinant() == a.determinant() * b.determinant());
  }
}

TEST_CASE("centralizer dimension equals the sum of squared multiplicities") {
  std::mt19937 rng(8);
  ScalarField f = ScalarField::exact(12);
  for (int t = 0; t < 10; ++t) {
    std::uniform_int_distribution<int> mult(1, 3);
    std::vector<std::size_t> d;
    Vector diag;
    std::size_t expected = 0;
    for (std::size_t j = 0; j < 3 && diag.size() < 5; ++j) {
      std::size_t mj = std::min<std::size_t>(mult(rng), 5 - diag.size());
      d.push_back(mj);
      expected += mj * mj;
      for (std::size_t r = 0; r < mj; ++r) diag.push_back(f.root_of_unity(12, static_cast<long>(j) * 5 + 1));
    }
    Matrix p = random_invertible(f, diag.size(), rng);
    Matrix m = p * Matrix::diagonal(f, diag) * p.inverse();
    CHECK(centralizer_dim(m) == expected);
  }
}

TEST_CASE("pseudo-reflection decompositions reconstruct and carry the determinant") {
  std::mt19937 rng(9);
  ScalarField f = ScalarField::exact(5);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 4;
    RankOneDecomposition d;
    d.u = Vector(n, f.zero());
    for (auto& x : d.u) x = small_random(f, rng);
    std::size_t e = t % n;
    if (d.u[e].is_zero() || d.u[e].is_one()) d.u[e] = f.parse("2 + zeta(5)");
    d.selector = e;
    Matrix m = d.reconstruct();
    auto got = is_pseudo_reflection(m);
    REQUIRE(got.has_value());
    CHECK(got->special_eigenvalue == m.determinant());
    CHECK(got->special_eigenvalue == f.one() - d.u[e]);
    CHECK(got->reconstruct() == m);
    // Conjugating moves it out of standard form but keeps it a pseudo-reflection.
    Matrix p = random_invertible(f, n, rng);
    auto conj = is_pseudo_reflection(p * m * p.inverse());
    REQUIRE(conj.has_value());
    CHECK(conj->reconstruct() == p * m * p.inverse());
    CHECK(conj->special_eigenvalue == m.determinant());
  }
}

TEST_CASE("factorization into standard pseudo-reflections") {
  std::mt19937 rng(10);
  ScalarField f = ScalarField::exact(5);
  SUBCASE("single factor is read off the column") {
    Matrix a = mat(f, {{"1", "3"}, {"0", "zeta(5)"}});
    auto fac = factor_pseudo_reflections(a, {1}, {f.parse("zeta(5)")});
    REQUIRE(fac.size() == 1);
    CHECK(fac[0].reconstruct() == a);
  }
  SUBCASE("random products are recovered") {
    for (int t = 0; t < 10; ++t) {
      const std::size_t n = 4;
      std::vector<std::size_t> dirs = {2, 3};
      std::vector<Matrix> xs;
      Vector lambdas;
      for (auto c : dirs) {
        RankOneDecomposition d;
        d.u = Vector(n, f.zero());
        for (auto& x : d.u) x = small_random(f, rng);
        if (d.u[c].is_zero() || d.u[c].is_one()) d.u[c] = f.parse("1 - zeta(5)^2");
        d.selector = c;
        xs.push_back(d.reconstruct());
        lambdas.push_back(f.one() - d.u[c]);
      }
      Matrix a = xs[0] * xs[1];
      auto fac = factor_pseudo_reflections(a, dirs, lambdas);
      REQUIRE(fac.size() == 2);
      CHECK(fac[0].reconstruct() == xs[0]);
      CHECK(fac[1].reconstruct() == xs[1]);
      CHECK(fac[0].reconstruct() * fac[1].reconstruct() == a);
    }
  }
  SUBCASE("wrong shape or eigenvalue is rejected") {
    Matrix a = mat(f, {{"2", "3"}, {"0", "zeta(5)"}});
    CHECK_THROWS_AS(factor_pseudo_reflections(a, {1}, {f.parse("zeta(5)")}), LinalgError);
    Matrix b = mat(f, {{"1", "3"}, {"0", "zeta(5)"}});
    CHECK_THROWS_AS(factor_pseudo_reflections(b, {1}, {f.parse("zeta(5)^2")}), LinalgError);
  }
}

TEST_CASE("approx mode elimination") {
  ScalarField f = ScalarField::approx(128);
  Matrix m = Matrix::parse(f, {{"0.5", "1"}, {"1", "2"}});
  CHECK(rank(m) == 1);
  Matrix inv = Matrix::parse(f, {{"0.1", "2.5"}, {"3", "i"}}).inverse();
  CHECK((Matrix::parse(f, {{"0.1", "2.5"}, {"3", "i"}}) * inv).is_identity());
  CHECK(centralizer_dim(Matrix::diagonal(f, {f.parse("0.3"), f.parse("0.3"), f.parse("2")})) == 5);
}
