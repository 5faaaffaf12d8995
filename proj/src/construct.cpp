#include "rigmon/construct.hpp"

#include <algorithm>
#include <numeric>

#include "rigmon/rigidity.hpp"

namespace rigmon {

namespace {

Scalar sign_power(ScalarField f, long e) { return (e % 2 == 0) ? f.one() : f.integer(-1); }

Scalar product_of(ScalarField f, const Vector& xs) {
  Scalar p = f.one();
  for (const auto& x : xs) p *= x;
  return p;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
  return out;
}

// Count and shape problems that make the data unusable by any builder.
std::string structural_problem(const LocalData& d) {
  const TurbineParams& p = d.params;
  try {
    p.validate();
  } catch (const GroupError& e) {
    return e.what();
  }
  if (d.b.has_value() != p.shaft) return p.shaft ? "b is required with a shaft" : "b is only allowed with a shaft";
  if (static_cast<long>(d.lambdas.size()) != p.l)
    return "expected " + std::to_string(p.l) + " special eigenvalues, got " + std::to_string(d.lambdas.size());
  if (d.mults.size() != d.xis.size()) return "xis and mults differ in length";
  if (d.xis.empty()) return "no eigenvalues at infinity";
  const ScalarField f = d.field();
  auto same = [&](const Scalar& s) { return s.field() == f; };
  bool ok = (!d.b || same(*d.b));
  for (const auto& s : d.lambdas) ok = ok && same(s);
  for (const auto& s : d.xis) ok = ok && same(s);
  if (!ok) return "scalars live in different fields";
  return {};
}

void require_structure(const LocalData& d, bool shaft, bool ell_one) {
  ConditionReport report;
  std::string problem = structural_problem(d);
  if (problem.empty() && d.params.shaft != shaft) problem = shaft ? "builder needs a shaft" : "builder needs no shaft";
  if (problem.empty() && ell_one && d.params.l != 1) problem = "builder needs l = 1";
  if (problem.empty() && d.mults != rigid_multiplicities(d.params)) problem = "multiplicities are not the rigid shape";
  if (!problem.empty()) {
    report.add("structure", "data match the builder's shape", false, problem);
    throw ValidationError(report);
  }
}

void validate_or_throw(const LocalData& d, const BuildOptions& options) {
  if (!options.validate) return;
  ConditionReport report = validate_local_data(d);
  if (!report.ok()) throw ValidationError(report);
}

void finish(Construction& c, const LocalData& d, const BuildOptions& options) {
  if (!options.verify) return;
  ConditionReport recognition = extract_and_verify_local_data(c.rep, d);
  for (auto& cond : recognition.conditions) c.verification.conditions.push_back(std::move(cond));
  if (!c.verification.ok()) throw CertificationError(c.verification);
}

Scalar poly_eval(const Vector& coeffs, const Scalar& z) {
  Scalar acc = z.field().zero();
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
  return acc;
}

Vector poly_mul(const Vector& a, const Vector& b) {
  ScalarField f = a.front().field();
  Vector out(a.size() + b.size() - 1, f.zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Omega_0 is semisimple with eigenvalues the k-th roots of eps^r, each of
// multiplicity l, plus b with a shaft: (W^k - eps^r)(W - b) = 0 (separable)
// and det(zI - W) = (z^k - eps^r)^l (z - b) at m + 1 points.
std::pair<bool, std::string> omega0_spectrum_ok(const Matrix& w, const Scalar& eps_r, const std::optional<Scalar>& b,
                                                long k, long l) {
  const ScalarField f = w.field();
  const std::size_t m = w.rows();
  Matrix ann = w.pow(k) - Matrix::scalar(f, m, eps_r);
  if (b) ann = ann * (w - Matrix::scalar(f, m, *b));
  if (!ann.is_zero()) return {false, "(W^k - eps^r)" + std::string(b ? "(W - b)" : "") + " != 0"};
  Vector base(static_cast<std::size_t>(k) + 1, f.zero());
  base[0] = -eps_r;
  base[static_cast<std::size_t>(k)] = f.one();
  Vector poly = {f.one()};
  for (long i = 0; i < l; ++i) poly = poly_mul(poly, base);
  if (b) poly = poly_mul(poly, {-*b, f.one()});
  if (poly.size() != m + 1) return {false, "dimension does not match k l (+1)"};
  for (std::size_t z = 0; z <= m; ++z) {
    Scalar zz = f.integer(static_cast<long>(z));
    if (characteristic_value(w, zz) != poly_eval(poly, zz))
      return {false, "characteristic polynomial differs at z = " + std::to_string(z)};
  }
  return {true, {}};
}

Vector sub_vector(const Vector& v, std::size_t from, std::size_t to) {
  return Vector(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(to));
}

}  // namespace

LocalData LocalData::rigid(const TurbineParams& params, Scalar epsilon, std::optional<Scalar> b, Vector lambdas,
                           Vector xis) {
  LocalData d;
  d.params = params;
  d.epsilon = std::move(epsilon);
  d.b = std::move(b);
  d.lambdas = std::move(lambdas);
  d.xis = std::move(xis);
  d.mults = rigid_multiplicities(params);
  return d;
}

std::vector<long> rigid_multiplicities(const TurbineParams& p) {
  if (p.shaft) {
    std::vector<long> m(static_cast<std::size_t>(p.k), p.l);
    m.push_back(1);
    return m;
  }
  if (p.l == 1) return std::vector<long>(static_cast<std::size_t>(p.k), 1);
  std::vector<long> m(static_cast<std::size_t>(p.k - 1), p.l);
  m.push_back(p.l - 1);
  m.push_back(1);
  return m;
}

Scalar fuchs_rhs(const LocalData& d) {
  const TurbineParams& p = d.params;
  Scalar rhs = sign_power(d.field(), (p.k - 1) * p.l) * d.epsilon.pow(p.r * p.l);
  if (d.b) rhs *= *d.b;
  return rhs;
}

std::pair<Scalar, Scalar> derived_etas(const LocalData& d) {
  const TurbineParams& p = d.params;
  const std::size_t k = static_cast<std::size_t>(p.k);
  if (d.xis.size() != k + 1) throw ScalarError("derived eta values need k + 1 eigenvalues at infinity");
  const ScalarField f = d.field();
  Scalar num = sign_power(f, p.k - 1) * d.epsilon.pow(p.r);
  Scalar first_k = product_of(f, sub_vector(d.xis, 0, k));
  Scalar eta1 = num / first_k;
  Scalar eta2 = d.b ? num * *d.b / (first_k * d.xis[k])
                    : num / (product_of(f, sub_vector(d.xis, 0, k - 1)) * d.xis[k]);
  return {eta1, eta2};
}

ConditionReport validate_local_data(const LocalData& d) {
  ConditionReport report;
  std::string problem = structural_problem(d);
  report.add("structure", "parameters, counts and fields are consistent", problem.empty(), problem);
  if (!problem.empty()) return report;

  const TurbineParams& p = d.params;
  const ScalarField f = d.field();
  bool nonzero = !d.epsilon.is_zero() && (!d.b || !d.b->is_zero());
  for (const auto& s : d.lambdas) nonzero = nonzero && !s.is_zero();
  for (const auto& s : d.xis) nonzero = nonzero && !s.is_zero();
  report.add("nonzero", "all scalars are nonzero", nonzero);
  if (!nonzero) return report;
  const Scalar er = d.epsilon.pow(p.r);

  for (std::size_t i = 0; i < d.lambdas.size(); ++i)
    report.add("lambda_not_one", "special eigenvalues lambda_i != 1", !d.lambdas[i].is_one(),
               "lambda_" + std::to_string(i + 1) + " = 1");

  bool distinct = true;
  std::string dup;
  for (std::size_t i = 0; i < d.xis.size(); ++i)
    for (std::size_t j = i + 1; j < d.xis.size(); ++j)
      if (d.xis[i] == d.xis[j]) {
        distinct = false;
        dup = "xi_" + std::to_string(i + 1) + " = xi_" + std::to_string(j + 1);
      }
  report.add("xi_distinct", "eigenvalues at infinity xi_j are pairwise distinct", distinct, dup);

  bool mults_positive = std::all_of(d.mults.begin(), d.mults.end(), [](long v) { return v > 0; });
  long sum = std::accumulate(d.mults.begin(), d.mults.end(), 0L);
  long expected = p.k * p.l + (p.shaft ? 1 : 0);
  report.add("mult_sum", "multiplicities are positive and sum to k l (+1 with a shaft)", mults_positive && sum == expected,
             "sum " + std::to_string(sum) + ", expected " + std::to_string(expected));
  bool shape = d.mults == rigid_multiplicities(p);
  report.add("rigid_shape", p.shaft ? "multiplicities (l, ..., l, 1)"
                                    : (p.l == 1 ? "multiplicities (1, ..., 1) with nu = k"
                                                : "multiplicities (l, ..., l, l-1, 1)"),
             shape);

  for (std::size_t i = 0; i < d.xis.size(); ++i)
    report.add("xi_power", "xi_j^k != eps^r", d.xis[i].pow(p.k) != er,
               "xi_" + std::to_string(i + 1) + "^k = eps^r = " + er.render());
  if (d.b) report.add("b_power", "b^k != eps^r", d.b->pow(p.k) != er, "b^k = " + er.render());

  Scalar lhs = product_of(f, d.lambdas);
  for (std::size_t j = 0; j < d.xis.size(); ++j) lhs *= d.xis[j].pow(d.mults[j]);
  Scalar rhs = fuchs_rhs(d);
  report.add("fuchs", "Fuchs relation lambda_1...lambda_l prod xi_j^{m_j} = (-1)^{(k-1)l} (b) eps^{rl}", lhs == rhs,
             "lhs " + lhs.render() + ", rhs " + rhs.render());

  if (!shape) return report;
  const std::size_t k = static_cast<std::size_t>(p.k);

  if (p.shaft) {
    for (std::size_t i = 0; i < d.xis.size(); ++i)
      report.add("xi_not_b", "generic condition xi_j != b", d.xis[i] != *d.b, "xi_" + std::to_string(i + 1) + " = b");
    if (p.l >= 2) {
      Scalar s = f.zero();
      for (std::size_t i = 0; i < k; ++i) s += d.xis[i];
      report.add("xi_sum", "xi_1 + ... + xi_k != 0", !s.is_zero());
    }
  } else {
    Scalar s = f.zero();
    for (std::size_t i = 0; i < k; ++i) s += d.xis[i];
    report.add("xi_sum", "xi_1 + ... + xi_k != 0", !s.is_zero());
    if (p.l >= 2) {
      Scalar t = s - d.xis[k - 1] + d.xis[k];
      report.add("xi_sum_alt", "xi_1 + ... + xi_{k-1} + xi_{k+1} != 0", !t.is_zero());
    }
  }

  if (p.l >= 2) {
    auto [eta1, eta2] = derived_etas(d);
    report.add("eta_not_one", "eta_1 != 1", !eta1.is_one(), "eta_1 = 1");
    report.add("eta_not_one", "eta_2 != 1", !eta2.is_one(), "eta_2 = 1");
    report.add("eta_distinct", "eta_1 != eta_2", eta1 != eta2, "both equal " + eta1.render());
    for (std::size_t i = 0; i < d.lambdas.size(); ++i)
      report.add("lambda_not_eta1", "lambda_i != eta_1", d.lambdas[i] != eta1,
                 "lambda_" + std::to_string(i + 1) + " = eta_1 = " + eta1.render());
  }

  if (p.variant == Variant::curve) {
    const Scalar es = d.epsilon.pow(p.s);
    for (std::size_t i = 0; i < d.xis.size(); ++i)
      report.add("curve", "curve condition xi_j^n = eps^s", d.xis[i].pow(p.n) == es,
                 "xi_" + std::to_string(i + 1) + "^n = " + d.xis[i].pow(p.n).render() + ", eps^s = " + es.render());
  }
  return report;
}

Vector monic_from_roots(ScalarField field, const Vector& roots) {
  Vector c = {field.one()};
  for (const auto& r : roots) c = poly_mul(c, {-r, field.one()});
  return c;
}

Vector shaft_recurrence(const Scalar& eps_r, const Scalar& b, const Scalar& lambda, const Vector& xis) {
  const ScalarField f = b.field();
  const std::size_t k = xis.size() - 1;
  Vector c = monic_from_roots(f, xis);
  Vector a(k + 1, f.zero());
  a[0] = f.integer(-1);
  const Scalar ratio = lambda / eps_r;
  const Scalar b_inv = b.inverse();
  for (std::size_t j = 1; j < k; ++j) a[j] = (a[j - 1] - ratio * c[j]) * b_inv;
  a[k] = lambda * (c[k] + b) - eps_r * a[k - 1];
  return a;
}

CoefficientSolution solve_shaft_coefficients(const LocalData& data) {
  require_structure(data, true, true);
  ConditionReport report = validate_local_data(data);
  if (!report.ok()) throw ValidationError(report);
  CoefficientSolution sol;
  sol.a = shaft_recurrence(data.epsilon.pow(data.params.r), *data.b, data.lambdas[0], data.xis);
  if (sol.a.back().is_zero()) {
    report.add("a_k_nonzero", "a_k != 0", false, "b equals some xi_j");
    throw ValidationError(report);
  }
  return sol;
}

CoefficientSolution solve_extension_coefficients(const LocalData& d) {
  const TurbineParams& p = d.params;
  const ScalarField f = d.field();
  const std::size_t k = static_cast<std::size_t>(p.k);
  CoefficientSolution sol;
  if (p.l == 1 && !p.shaft) {
    Vector full = monic_from_roots(f, d.xis);
    sol.a = sub_vector(full, 0, k);
    Scalar scale = d.lambdas[0] / d.epsilon.pow(p.r);
    for (const auto& ai : sol.a) sol.b.push_back(scale * ai);
    return sol;
  }
  if (p.l == 1) {
    sol.a = shaft_recurrence(d.epsilon.pow(p.r), *d.b, d.lambdas[0], d.xis);
    return sol;
  }
  auto [eta1, eta2] = derived_etas(d);
  sol.eta1 = eta1;
  sol.eta2 = eta2;
  Vector first = sub_vector(monic_from_roots(f, sub_vector(d.xis, 0, k)), 0, k);
  auto normalized = [&](const Vector& coeffs) {
    Vector out(k, f.zero());
    Scalar inv = coeffs[0].inverse();
    for (std::size_t i = 1; i < k; ++i) out[i] = -coeffs[i] * inv;
    return out;
  };
  if (p.shaft) {
    sol.a = shaft_recurrence(d.epsilon.pow(p.r), *d.b, eta2, d.xis);
    sol.b = first;
    sol.e = normalized(first);
  } else {
    Vector alt = sub_vector(d.xis, 0, k - 1);
    alt.push_back(d.xis[k]);
    sol.a = first;
    sol.b = sub_vector(monic_from_roots(f, alt), 0, k);
    sol.e = normalized(sol.a);
    sol.f = normalized(sol.b);
  }
  return sol;
}

Construction build_ell1_without_shaft(const LocalData& data, const BuildOptions& options) {
  require_structure(data, false, true);
  validate_or_throw(data, options);
  const TurbineParams& p = data.params;
  const ScalarField f = data.field();
  const std::size_t k = static_cast<std::size_t>(p.k);
  const Scalar er = data.epsilon.pow(p.r);

  Construction c;
  c.coefficients = solve_extension_coefficients(data);
  Matrix omega0(f, k, k);
  for (std::size_t j = 0; j + 1 < k; ++j) omega0(j, j + 1) = f.one();
  omega0(k - 1, 0) = er;
  Matrix a1 = Matrix::identity(f, k);
  for (std::size_t j = 0; j + 1 < k; ++j) a1(j, k - 1) = c.coefficients.b[k - 1 - j];
  a1(k - 1, k - 1) = data.lambdas[0];

  c.rep.params = p;
  c.rep.field = f;
  c.rep.dim = k;
  c.rep.alpha = {Matrix(), a1};
  c.rep.omega0 = omega0;
  c.rep.delta = Matrix::scalar(f, k, data.epsilon);
  c.rep.omega_inf = a1.inverse() * omega0;
  finish(c, data, options);
  return c;
}

Construction build_ell1_with_shaft(const LocalData& data, const BuildOptions& options) {
  require_structure(data, true, true);
  validate_or_throw(data, options);
  const TurbineParams& p = data.params;
  const ScalarField f = data.field();
  const std::size_t k = static_cast<std::size_t>(p.k);
  const std::size_t m = k + 1;
  const Scalar er = data.epsilon.pow(p.r);

  Construction c;
  c.coefficients.a = shaft_recurrence(er, *data.b, data.lambdas[0], data.xis);
  const Vector& a = c.coefficients.a;
  Matrix omega0(f, m, m);
  omega0(0, 0) = *data.b;
  for (std::size_t j = 1; j < k; ++j) omega0(j, j + 1) = f.one();
  omega0(k, 0) = f.one();
  omega0(k, 1) = er;
  Matrix a1 = Matrix::identity(f, m);
  a1(0, k) = a[k];
  for (std::size_t j = 1; j < k; ++j) a1(j, k) = a[k - j];
  a1(k, k) = data.lambdas[0];

  c.rep.params = p;
  c.rep.field = f;
  c.rep.dim = m;
  c.rep.alpha = {er * omega0.pow(-p.k), a1};
  c.rep.omega0 = omega0;
  c.rep.delta = Matrix::scalar(f, m, data.epsilon);
  c.rep.omega_inf = a1.inverse() * omega0;
  finish(c, data, options);
  return c;
}

namespace {

Construction build_extension(const LocalData& data, const BuildOptions& options) {
  const TurbineParams& p = data.params;
  require_structure(data, p.shaft, false);
  validate_or_throw(data, options);
  const ScalarField f = data.field();
  const std::size_t k = static_cast<std::size_t>(p.k);
  const std::size_t l = static_cast<std::size_t>(p.l);
  const std::size_t s = p.shaft ? 1 : 0;
  const std::size_t m = k * l + s;
  const Scalar er = data.epsilon.pow(p.r);
  auto idx = [&](std::size_t j, std::size_t i) { return s + l * j + i; };

  Construction c;
  c.coefficients = solve_extension_coefficients(data);
  const CoefficientSolution& sol = c.coefficients;
  const Scalar eta1 = *sol.eta1, eta2 = *sol.eta2;

  // Block matrices: omega_0 cyclic with eps^r I_l, A_bullet with C_{k-1-j}
  // in the last block column and C_0 = eta_1 I_{l-1} + eta_2 on the diagonal.
  auto coefficient = [&](std::size_t t, std::size_t i) -> Scalar {
    if (t == 0) return i + 1 < l ? eta1 : eta2;
    if (i + 1 < l) return sol.e[t];
    return p.shaft ? sol.a[t] : sol.f[t];
  };
  Matrix omega0(f, m, m);
  Matrix a_bullet = Matrix::identity(f, m);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j + 1 < k; ++j) omega0(idx(j, i), idx(j + 1, i)) = f.one();
    omega0(idx(k - 1, i), idx(0, i)) = er;
    for (std::size_t j = 0; j < k; ++j) a_bullet(idx(j, i), idx(k - 1, i)) = coefficient(k - 1 - j, i);
  }
  if (p.shaft) {
    omega0(0, 0) = *data.b;
    omega0(idx(k - 1, l - 1), 0) = f.one();
    a_bullet(0, idx(k - 1, l - 1)) = sol.a[k];
  }
  c.block_omega0 = omega0;
  c.block_a_bullet = a_bullet;

  // Pochhammer tuple for (lambda; eta_1, eta_2) and its pinned eigenbasis.
  SphereLocalData sphere{data.lambdas, eta1, eta2};
  c.sphere = build_dsp_tuple(sphere);
  std::vector<Vector> columns = eigenspace_basis(c.sphere->a_inf, eta1);
  std::vector<Vector> second = eigenspace_basis(c.sphere->a_inf, eta2);
  ConditionReport& checks = c.verification;
  if (columns.size() != l - 1 || second.size() != 1) {
    checks.add("eigenbasis", "A_1...A_l has eigenspaces of dimensions l-1 and 1", false,
               std::to_string(columns.size()) + " and " + std::to_string(second.size()));
    throw CertificationError(checks);
  }
  columns.push_back(second.front());
  Matrix e = Matrix::from_columns(f, columns);
  Vector c0_diag(l, eta1);
  c0_diag[l - 1] = eta2;
  checks.add("eigenbasis", "E^{-1} (A_1...A_l) E = eta_1 I_{l-1} + eta_2",
             e.inverse() * c.sphere->a_inf * e == Matrix::diagonal(f, c0_diag));
  c.eigenbasis = e;

  std::vector<Matrix> q_blocks;
  if (p.shaft) q_blocks.push_back(Matrix::identity(f, 1));
  for (std::size_t j = 0; j < k; ++j) q_blocks.push_back(e);
  Matrix q = direct_sum(q_blocks);
  Matrix q_inv = q.inverse();
  Matrix conj_a = q * a_bullet * q_inv;
  Matrix conj_omega0 = q * omega0 * q_inv;
  if (!p.shaft) checks.add("omega0_fixed", "conjugation leaves the block omega_0 unchanged", conj_omega0 == omega0);

  std::vector<std::size_t> directions;
  for (std::size_t i = 0; i < l; ++i) directions.push_back(idx(k - 1, i));
  std::vector<Matrix> xs;
  try {
    for (const auto& d : factor_pseudo_reflections(conj_a, directions, data.lambdas)) xs.push_back(d.reconstruct());
  } catch (const LinalgError& err) {
    checks.add("factorization", "conjugated A_bullet factors into pseudo-reflections X_1...X_l", false, err.what());
    throw CertificationError(checks);
  }
  Matrix x_prod = product(f, m, xs);
  checks.add("factorization", "X_1...X_l equals the conjugated A_bullet", x_prod == conj_a);

  c.rep.params = p;
  c.rep.field = f;
  c.rep.dim = m;
  c.rep.alpha.clear();
  c.rep.alpha.push_back(p.shaft ? er * conj_omega0.pow(-p.k) : Matrix());
  for (auto& x : xs) c.rep.alpha.push_back(std::move(x));
  c.rep.omega0 = conj_omega0;
  c.rep.delta = Matrix::scalar(f, m, data.epsilon);
  c.rep.omega_inf = x_prod.inverse() * conj_omega0;

  // Before conjugation the pair (omega_0, A_bullet) is a coordinate
  // permutation of F^{+(l-1)} + G (G* with a shaft), built independently by
  // the l = 1 builders.
  if (options.verify) {
    std::string detail;
    bool decomposes = false;
    try {
      TurbineParams sub = TurbineParams::with_pair(p.n, p.k, 1, false, p.variant, p.r, p.s);
      BuildOptions sub_options{options.validate, options.verify};
      Construction fc = build_ell1_without_shaft(
          LocalData::rigid(sub, data.epsilon, std::nullopt, {eta1}, sub_vector(data.xis, 0, k)), sub_options);
      Construction gc;
      if (p.shaft) {
        TurbineParams sub_star = TurbineParams::with_pair(p.n, p.k, 1, true, p.variant, p.r, p.s);
        gc = build_ell1_with_shaft(LocalData::rigid(sub_star, data.epsilon, data.b, {eta2}, data.xis), sub_options);
      } else {
        Vector alt = sub_vector(data.xis, 0, k - 1);
        alt.push_back(data.xis[k]);
        gc = build_ell1_without_shaft(LocalData::rigid(sub, data.epsilon, std::nullopt, {eta2}, alt), sub_options);
      }
      std::vector<Matrix> om_blocks(l - 1, fc.rep.omega0), a_blocks(l - 1, fc.rep.alpha[1]);
      om_blocks.push_back(gc.rep.omega0);
      a_blocks.push_back(gc.rep.alpha[1]);
      Matrix d_om = direct_sum(om_blocks), d_a = direct_sum(a_blocks);
      std::vector<std::size_t> pi(m);
      for (std::size_t copy = 0; copy + 1 < l; ++copy)
        for (std::size_t j = 0; j < k; ++j) pi[copy * k + j] = idx(j, copy);
      const std::size_t g0 = (l - 1) * k;
      if (p.shaft) {
        pi[g0] = 0;
        for (std::size_t j = 0; j < k; ++j) pi[g0 + 1 + j] = idx(j, l - 1);
      } else {
        for (std::size_t j = 0; j < k; ++j) pi[g0 + j] = idx(j, l - 1);
      }
      decomposes = true;
      for (std::size_t x = 0; x < m && decomposes; ++x)
        for (std::size_t y = 0; y < m && decomposes; ++y)
          decomposes = omega0(pi[x], pi[y]) == d_om(x, y) && a_bullet(pi[x], pi[y]) == d_a(x, y);
      if (!decomposes) detail = "block matrices differ from the permuted direct sum";
    } catch (const std::exception& err) {
      detail = err.what();
    }
    checks.add("direct_sum", p.shaft ? "block data = F^{+(l-1)} + G* up to a coordinate permutation"
                                     : "block data = F^{+(l-1)} + G up to a coordinate permutation",
               decomposes, detail);
  }
  finish(c, data, options);
  return c;
}

}  // namespace

Construction build_extension_with_shaft(const LocalData& data, const BuildOptions& options) {
  if (data.params.l == 1) return build_ell1_with_shaft(data, options);
  if (!data.params.shaft) require_structure(data, true, false);
  return build_extension(data, options);
}

Construction build_extension_without_shaft(const LocalData& data, const BuildOptions& options) {
  if (data.params.l == 1) return build_ell1_without_shaft(data, options);
  if (data.params.shaft) require_structure(data, false, false);
  return build_extension(data, options);
}

Construction build_representation(const LocalData& data, const BuildOptions& options) {
  return data.params.shaft ? build_extension_with_shaft(data, options) : build_extension_without_shaft(data, options);
}

ConditionReport extract_and_verify_local_data(const TurbineRepresentation& rep, const LocalData& claimed) {
  ConditionReport report;
  const TurbineParams& p = claimed.params;
  const TurbineParams& q = rep.params;
  report.add("params", "representation parameters match the claimed data",
             p.n == q.n && p.k == q.k && p.l == q.l && p.shaft == q.shaft && p.r == q.r && p.s == q.s,
             "representation " + q.describe() + ", claimed " + p.describe());
  if (!report.ok()) return report;
  std::string problem = structural_problem(claimed);
  const std::size_t m = rep.dim;
  long expected = std::accumulate(claimed.mults.begin(), claimed.mults.end(), 0L);
  bool dims = problem.empty() && static_cast<long>(m) == expected && rep.alpha.size() == static_cast<std::size_t>(p.l) + 1;
  auto square = [&](const Matrix& x) { return x.rows() == m && x.cols() == m; };
  dims = dims && square(rep.omega0) && square(rep.omega_inf) && square(rep.delta);
  for (std::size_t i = 1; dims && i < rep.alpha.size(); ++i) dims = square(rep.alpha[i]);
  if (dims && p.shaft) dims = square(rep.alpha[0]);
  report.add("dimension", "matrix sizes equal sum m_j", dims, problem.empty() ? "" : problem);
  if (!dims) return report;
  if (!(rep.field == claimed.field())) {
    report.add("field", "matrices and data share a field", false, rep.field.describe() + " vs " + claimed.field().describe());
    return report;
  }

  const ScalarField f = rep.field;
  const Scalar er = claimed.epsilon.pow(p.r);
  report.add("delta_scalar", "rho(delta) = eps I", rep.delta == Matrix::scalar(f, m, claimed.epsilon));

  auto reflection_check = [&](const Matrix& x, const Scalar& lambda) -> std::pair<bool, std::string> {
    try {
      auto d = is_pseudo_reflection(x);
      if (!d) return {false, "not a pseudo-reflection"};
      if (d->special_eigenvalue != lambda)
        return {false, "special eigenvalue " + d->special_eigenvalue.render() + ", expected " + lambda.render()};
      return {true, {}};
    } catch (const SingularMatrix&) {
      return {false, "singular"};
    }
  };
  for (std::size_t i = 1; i < rep.alpha.size(); ++i) {
    auto [ok, why] = reflection_check(rep.alpha[i], claimed.lambdas[i - 1]);
    report.add("alpha_pseudo_reflection", "rho(alpha_" + std::to_string(i) + ") is a pseudo-reflection with eigenvalue lambda_" +
                                              std::to_string(i),
               ok, why);
  }
  if (p.shaft) {
    Scalar lambda0 = er / claimed.b->pow(p.k);
    auto [ok, why] = reflection_check(rep.alpha[0], lambda0);
    report.add("alpha0_pseudo_reflection", "rho(alpha_0) is a pseudo-reflection with eigenvalue eps^r b^{-k}", ok, why);
  }

  auto [om_ok, om_why] = omega0_spectrum_ok(rep.omega0, er, claimed.b, p.k, p.l);
  report.add("omega0_spectrum",
             p.shaft ? "rho(omega_0) semisimple: k-th roots of eps^r (mult l) and b" : "rho(omega_0) semisimple: k-th roots of eps^r (mult l)",
             om_ok, om_why);

  {
    std::vector<SpectrumClaim> spectrum;
    for (std::size_t j = 0; j < claimed.xis.size(); ++j)
      spectrum.push_back({claimed.xis[j], static_cast<std::size_t>(std::max(0L, claimed.mults[j]))});
    bool ok = false;
    std::string why;
    try {
      SpectrumReport sr = verify_semisimple_spectrum(rep.omega_inf, spectrum);
      ok = sr.ok;
      why = sr.detail;
    } catch (const LinalgError& err) {
      why = err.what();
    }
    report.add("omega_inf_spectrum", "rho(omega_inf) semisimple with eigenvalues xi_j of multiplicity m_j", ok, why);
  }

  {
    Scalar det = rep.omega_inf.determinant();
    for (std::size_t i = 1; i < rep.alpha.size(); ++i) det *= rep.alpha[i].determinant();
    Scalar rhs = fuchs_rhs(claimed);
    Scalar lhs = product_of(f, claimed.lambdas);
    for (std::size_t j = 0; j < claimed.xis.size(); ++j) lhs *= claimed.xis[j].pow(claimed.mults[j]);
    report.add("fuchs_determinant",
               "prod det rho(alpha_i) * det rho(omega_inf) = prod lambda_i prod xi_j^{m_j} = (-1)^{(k-1)l} (b) eps^{rl}",
               det == rhs && lhs == det,
               "determinants give " + det.render() + ", data give " + lhs.render() + ", expected " + rhs.render());
  }

  PresentationReport pres = verify_presentation(rep);
  std::vector<std::string> failed;
  for (const auto& r : pres.relations)
    if (!r.passed) failed.push_back(r.name);
  report.add("presentation", "all presentation relations hold", failed.empty(), join_ids(failed));

  {
    bool ok = true;
    std::string why;
    try {
      std::vector<Matrix> loops = transversal_loop_images(rep);
      for (std::size_t i = 0; i < loops.size() && ok; ++i)
        if (!is_pseudo_reflection(loops[i])) {
          ok = false;
          why = "loop image " + std::to_string(i) + " is not a pseudo-reflection";
        }
      if (ok) {
        PochhammerReport pr = check_pochhammer_condition(loops);
        ok = pr.ok;
        if (!ok)
          why = "codimension sum " + std::to_string(pr.codim_sum) + ", joint fixed space " + std::to_string(pr.intersection_dim);
      }
    } catch (const std::exception& err) {
      ok = false;
      why = err.what();
    }
    report.add("pochhammer_loops", "transversal loop images are pseudo-reflections satisfying the Pochhammer condition", ok,
               why);
  }
  return report;
}

std::vector<std::optional<std::vector<SpectrumClaim>>> local_spectrum_claims(const LocalData& d) {
  const TurbineParams& p = d.params;
  const ScalarField f = d.field();
  const std::size_t m = static_cast<std::size_t>(p.rigid_dimension());
  std::vector<std::optional<std::vector<SpectrumClaim>>> claims;
  const Scalar er = d.epsilon.pow(p.r);
  std::optional<std::vector<SpectrumClaim>> omega0;
  if (auto roots = kth_roots(er, static_cast<unsigned>(p.k))) {
    std::vector<SpectrumClaim> spectrum;
    for (const auto& z : *roots) spectrum.push_back({z, static_cast<std::size_t>(p.l)});
    bool clash = d.b && std::any_of(roots->begin(), roots->end(), [&](const Scalar& z) { return z == *d.b; });
    if (d.b) spectrum.push_back({*d.b, 1});
    if (!clash) omega0 = spectrum;
  }
  claims.push_back(omega0);
  for (const auto& lambda : d.lambdas) {
    std::vector<SpectrumClaim> spectrum;
    if (m > 1) spectrum.push_back({f.one(), m - 1});
    spectrum.push_back({lambda, 1});
    claims.push_back(spectrum);
  }
  std::vector<SpectrumClaim> inf;
  for (std::size_t j = 0; j < d.xis.size(); ++j) inf.push_back({d.xis[j], static_cast<std::size_t>(d.mults[j])});
  claims.push_back(inf);
  return claims;
}

AlphaInfinityCheck check_alpha_infinity(const TurbineRepresentation& rep) {
  DistinguishedWords words = distinguished_words(rep.params);
  AlphaInfinityCheck check;
  check.value = evaluate_word(rep, words.alpha_infinity);
  check.words_agree = check.value == evaluate_word(rep, words.factorized);
  check.rank_minus_identity = rank(check.value - Matrix::identity(rep.field, rep.dim));
  check.ok = check.words_agree && check.rank_minus_identity == rep.dim;
  return check;
}

std::vector<Matrix> sphere_projection(const TurbineRepresentation& rep) {
  std::vector<Matrix> tuple = {rep.omega0.inverse()};
  for (std::size_t i = 1; i < rep.alpha.size(); ++i) tuple.push_back(rep.alpha[i]);
  tuple.push_back(rep.omega_inf);
  return tuple;
}

Scalar characteristic_value(const Matrix& m, const Scalar& z) {
  return (Matrix::scalar(m.field(), m.rows(), z) - m).determinant();
}

}  // namespace rigmon
