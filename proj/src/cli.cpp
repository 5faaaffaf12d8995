#include "rigmon/cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "rigmon/rigidity.hpp"

namespace rigmon::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- parsing

std::string literal(const json& v, const std::string& what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw UsageError(what + ": expected a scalar literal string");
}

const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw UsageError(std::string("missing field \"") + key + "\"");
  return doc.at(key);
}

long require_long(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_number_integer()) throw UsageError(std::string("field \"") + key + "\" must be an integer");
  return v.get<long>();
}

Scalar parse_scalar_at(const json& v, ScalarField f, const std::string& what) {
  try {
    return f.parse(literal(v, what));
  } catch (const ParseError& e) {
    throw UsageError(what + ": " + e.what());
  } catch (const ScalarError& e) {
    throw UsageError(what + ": " + e.what());
  }
}

Vector parse_scalar_list(const json& doc, const char* key, ScalarField f) {
  const json& arr = require(doc, key);
  if (!arr.is_array()) throw UsageError(std::string("field \"") + key + "\" must be an array");
  Vector out;
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(parse_scalar_at(arr[i], f, std::string(key) + "[" + std::to_string(i) + "]"));
  return out;
}

void collect_literals(const json& v, std::vector<std::string>& out) {
  if (v.is_string())
    out.push_back(v.get<std::string>());
  else if (v.is_array())
    for (const auto& x : v) collect_literals(x, out);
}

std::uint32_t auto_conductor(const json& doc) {
  std::vector<std::string> literals;
  for (const char* key : {"epsilon", "b", "lambdas", "xis"})
    if (doc.contains(key)) collect_literals(doc.at(key), literals);
  if (doc.contains("matrices") && doc.at("matrices").is_object())
    for (const auto& [name, value] : doc.at("matrices").items()) collect_literals(value, literals);
  std::uint64_t n = 1;
  for (const auto& text : literals) {
    try {
      for (std::uint32_t order : literal_root_orders(text)) n = std::lcm(n, static_cast<std::uint64_t>(order));
    } catch (const ParseError& e) {
      throw UsageError("literal \"" + text + "\": " + e.what());
    }
  }
  if (n > 100000) throw UsageError("auto conductor " + std::to_string(n) + " is too large");
  return static_cast<std::uint32_t>(n);
}

// ---------------------------------------------------------------- reports

json conditions_json(const ConditionReport& report) {
  json arr = json::array();
  for (const auto& c : report.conditions) {
    json item = {{"id", c.id}, {"description", c.description}, {"passed", c.passed}};
    if (!c.passed && !c.detail.empty()) item["detail"] = c.detail;
    arr.push_back(item);
  }
  return arr;
}

json vector_json(const Vector& v) {
  json arr = json::array();
  for (const auto& s : v) arr.push_back(s.render());
  return arr;
}

json field_json(ScalarField f) {
  if (f.mode() == FieldMode::exact) return {{"mode", "exact"}, {"conductor", f.conductor()}};
  return {{"mode", "approx"}, {"precision", f.precision()}, {"description", f.describe()}};
}

json data_json(const LocalData& d) {
  const TurbineParams& p = d.params;
  json j = {{"n", p.n},           {"k", p.k},   {"l", p.l},   {"shaft", p.shaft}, {"variant", to_string(p.variant)},
            {"r", p.r},           {"s", p.s},   {"epsilon", d.epsilon.render()},  {"lambdas", vector_json(d.lambdas)},
            {"xis", vector_json(d.xis)}, {"mults", d.mults}};
  if (d.b) j["b"] = d.b->render();
  j["field"] = field_json(d.field());
  return j;
}

json representation_json(const TurbineRepresentation& rep) {
  json m = {{"omega0", matrix_to_json(rep.omega0)}, {"omega_inf", matrix_to_json(rep.omega_inf)},
            {"delta", matrix_to_json(rep.delta)}};
  json alphas = json::array();
  for (std::size_t i = 1; i < rep.alpha.size(); ++i) alphas.push_back(matrix_to_json(rep.alpha[i]));
  m["alpha"] = alphas;
  if (rep.params.shaft && !rep.alpha.empty() && !rep.alpha[0].empty()) m["alpha0"] = matrix_to_json(rep.alpha[0]);
  return m;
}

json coefficients_json(const CoefficientSolution& c) {
  json j = json::object();
  if (!c.a.empty()) j["a"] = vector_json(c.a);
  if (!c.b.empty()) j["b"] = vector_json(c.b);
  if (!c.e.empty()) j["e"] = vector_json(c.e);
  if (!c.f.empty()) j["f"] = vector_json(c.f);
  if (c.eta1) j["eta1"] = c.eta1->render();
  if (c.eta2) j["eta2"] = c.eta2->render();
  return j;
}

json certificate_json(const IrreducibilityCertificate& c) {
  json arcs = json::array();
  for (const auto& [from, to] : c.arcs) arcs.push_back({from, to});
  return {{"labels", c.labels},
          {"directions", c.directions},
          {"basis_changed", c.basis_changed},
          {"vertex_count", c.vertex_count},
          {"arcs", arcs},
          {"strongly_connected", c.strongly_connected},
          {"product_rank", c.product_rank},
          {"invertible", c.invertible},
          {"verdict", c.verdict}};
}

json rigidity_json(const RigidityResult& r) {
  json closed = json::array();
  for (const auto& c : r.breakdown.closed_forms) closed.push_back(c ? json(*c) : json(nullptr));
  return {{"centralizer_dims", r.breakdown.centralizer_dims},
          {"closed_forms", closed},
          {"punctures", r.breakdown.punctures},
          {"rank", r.breakdown.rank},
          {"index", r.breakdown.index},
          {"pochhammer", r.pochhammer},
          {"verdict", to_string(r.verdict)},
          {"reason", r.reason}};
}

// Irreducibility certificate, Burnside cross-check, rigidity and alpha_inf;
// returns true iff everything certifies.
bool certify(const TurbineRepresentation& rep, const std::vector<std::optional<std::vector<SpectrumClaim>>>& claims,
             json& report) {
  bool ok = true;
  std::vector<Matrix> loops = transversal_loop_images(rep);
  bool irreducible = false;
  try {
    IrreducibilityCertificate cert = irreducibility_certificate(rep);
    report["certificate"] = certificate_json(cert);
    irreducible = cert.verdict;
  } catch (const std::exception& e) {
    report["certificate"] = {{"error", e.what()}, {"verdict", false}};
  }
  bool burnside = burnside_oracle(loops);
  report["burnside"] = burnside;
  if (report["certificate"].contains("labels") && burnside != irreducible) {
    report["oracle_disagreement"] = true;
    ok = false;
  }
  if (!irreducible) ok = false;
  if (irreducible) {
    RigidityResult rr = is_rigid(rep, true, claims);
    report["rigidity"] = rigidity_json(rr);
    if (rr.verdict != RigidityVerdict::rigid) ok = false;
  } else {
    RigidityBreakdown b = rigidity_breakdown(local_monodromies(rep), rep.params.l, rep.dim);
    report["rigidity"] = {{"centralizer_dims", b.centralizer_dims}, {"punctures", b.punctures}, {"rank", b.rank},
                          {"index", b.index}, {"verdict", "not applicable (not certified irreducible)"}};
  }
  AlphaInfinityCheck ai = check_alpha_infinity(rep);
  report["alpha_infinity"] = {
      {"words_agree", ai.words_agree}, {"rank_minus_identity", ai.rank_minus_identity}, {"ok", ai.ok}};
  if (!ai.ok) ok = false;
  return ok;
}

JobResult finish(json report, int code) {
  static const char* names[] = {"ok", "usage_error", "validation_failed", "certification_failed"};
  report["exit_code"] = code;
  report["status"] = names[code];
  return {code, std::move(report)};
}

// ---------------------------------------------------------------- golden data

struct Golden {
  Matrix omega0, x1, x2;
};

// The displayed worked example, evaluated at (eps; lambda_1, lambda_2; xi_1, xi_2).
Golden displayed_y522(ScalarField f, const Scalar& eps, const Scalar& l1, const Scalar& l2, const Scalar& x1,
                      const Scalar& x2) {
  Golden g{Matrix(f, 4, 4), Matrix::identity(f, 4), Matrix::identity(f, 4)};
  g.omega0(0, 2) = f.one();
  g.omega0(1, 3) = f.one();
  g.omega0(2, 0) = eps;
  g.omega0(3, 1) = eps;
  g.x1(0, 2) = -(l1 - eps * x1 * x1) / (eps * x1);
  g.x1(1, 2) = -(l2 + eps * x1 * x2) / (eps * x1);
  g.x1(2, 2) = l1;
  g.x1(3, 2) = l2 + eps * x1 * x2;
  g.x2(0, 3) = (l1 + eps * x1 * x2) / (eps * x2);
  g.x2(1, 3) = -(l2 - eps * x1 * x1) / (eps * x1);
  g.x2(2, 3) = -(l1 + eps * x1 * x2) / (eps * x1 * x2);
  g.x2(3, 3) = l2;
  return g;
}

// The displayed conjugate Q A_* Q^-1 in terms of (lambda, eta, e_1, f_1).
Matrix displayed_conjugate(ScalarField f, const Scalar& l1, const Scalar& l2, const Scalar& h1, const Scalar& h2,
                           const Scalar& e1, const Scalar& f1) {
  Matrix m = Matrix::identity(f, 4);
  const Scalar d = h2 - h1;
  m(0, 2) = ((l1 - h1) * f1 - (l1 - h2) * h1) / d;
  m(0, 3) = l1 * (l1 - h1) * (f1 - e1) / (h1 * d);
  m(1, 2) = (l2 - h1) * (f1 - e1) / d;
  m(1, 3) = (l1 * (h2 - l1) * f1 - (h1 - l1) * e1) / d;
  m(2, 2) = l1;
  m(2, 3) = l1 * (l1 - h1) / h1;
  m(3, 2) = l2 - h1;
  m(3, 3) = -l1 + h2 + h1;
  return m;
}

std::vector<std::string> differing_entries(const Matrix& a, const Matrix& b) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) out.push_back("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
  return out;
}

}  // namespace

// ---------------------------------------------------------------- public parsing

ScalarField resolve_field(const json& doc, const FieldRequest& request) {
  json spec = doc.contains("field") ? doc.at("field") : json::object();
  if (!spec.is_object()) throw UsageError("field \"field\" must be an object");
  std::string mode = spec.value("mode", std::string("exact"));
  if (request.precision || request.tolerance) mode = "approx";
  if (mode == "approx") {
    long bits = request.precision ? *request.precision : spec.value("precision", 128L);
    if (bits < 16 || bits > 100000) throw UsageError("precision must be between 16 and 100000 bits");
    std::optional<std::string> tol = request.tolerance;
    if (!tol && spec.contains("tolerance")) tol = literal(spec.at("tolerance"), "field.tolerance");
    try {
      return tol ? ScalarField::approx(static_cast<unsigned>(bits), *tol) : ScalarField::approx(static_cast<unsigned>(bits));
    } catch (const ScalarError& e) {
      throw UsageError(std::string("tolerance: ") + e.what());
    }
  }
  if (mode != "exact") throw UsageError("field.mode must be \"exact\" or \"approx\"");
  std::optional<std::string> conductor = request.conductor;
  if (!conductor && spec.contains("conductor")) {
    const json& c = spec.at("conductor");
    conductor = c.is_string() ? c.get<std::string>() : std::to_string(c.get<long long>());
  }
  if (!conductor || *conductor == "auto") return ScalarField::exact(auto_conductor(doc));
  long n = 0;
  try {
    std::size_t used = 0;
    n = std::stol(*conductor, &used);
    if (used != conductor->size()) n = 0;
  } catch (const std::exception&) {
    n = 0;
  }
  if (n <= 0 || n > 100000) throw UsageError("conductor must be \"auto\" or an integer in 1..100000");
  return ScalarField::exact(static_cast<std::uint32_t>(n));
}

TurbineParams parse_params(const json& doc) {
  long n = require_long(doc, "n"), k = require_long(doc, "k"), l = require_long(doc, "l");
  const json& shaft = require(doc, "shaft");
  if (!shaft.is_boolean()) throw UsageError("field \"shaft\" must be a boolean");
  Variant variant = Variant::turbine;
  if (doc.contains("variant")) {
    try {
      variant = parse_variant(doc.at("variant").get<std::string>());
    } catch (const std::exception& e) {
      throw UsageError(std::string("variant: ") + e.what());
    }
  }
  try {
    if (doc.contains("r") || doc.contains("s"))
      return TurbineParams::with_pair(n, k, l, shaft.get<bool>(), variant, require_long(doc, "r"), require_long(doc, "s"));
    return TurbineParams::make(n, k, l, shaft.get<bool>(), variant);
  } catch (const GroupError& e) {
    throw UsageError(std::string("parameters: ") + e.what());
  }
}

LocalData parse_local_data(const json& doc, ScalarField f) {
  LocalData d;
  d.params = parse_params(doc);
  d.epsilon = parse_scalar_at(require(doc, "epsilon"), f, "epsilon");
  if (doc.contains("b") && !doc.at("b").is_null()) d.b = parse_scalar_at(doc.at("b"), f, "b");
  d.lambdas = parse_scalar_list(doc, "lambdas", f);
  d.xis = parse_scalar_list(doc, "xis", f);
  if (doc.contains("mults")) {
    const json& m = doc.at("mults");
    if (!m.is_array()) throw UsageError("field \"mults\" must be an array");
    for (const auto& v : m) {
      if (!v.is_number_integer()) throw UsageError("mults must be integers");
      d.mults.push_back(v.get<long>());
    }
  } else {
    d.mults = rigid_multiplicities(d.params);
  }
  return d;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).render());
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const json& rows, ScalarField f) {
  if (!rows.is_array() || rows.empty()) throw UsageError("matrix must be a non-empty array of rows");
  std::vector<std::vector<std::string>> text;
  for (const auto& row : rows) {
    if (!row.is_array()) throw UsageError("matrix rows must be arrays");
    std::vector<std::string> r;
    for (const auto& v : row) r.push_back(literal(v, "matrix entry"));
    if (!text.empty() && r.size() != text.front().size()) throw UsageError("matrix rows differ in length");
    text.push_back(std::move(r));
  }
  try {
    return Matrix::parse(f, text);
  } catch (const ScalarError& e) {
    throw UsageError(std::string("matrix entry: ") + e.what());
  }
}

TurbineRepresentation parse_representation(const json& doc, ScalarField f, const std::optional<Scalar>& epsilon) {
  TurbineRepresentation rep;
  rep.params = parse_params(doc);
  rep.field = f;
  const json& mats = require(doc, "matrices");
  rep.omega0 = matrix_from_json(require(mats, "omega0"), f);
  if (!rep.omega0.is_square()) throw UsageError("omega0 must be square");
  rep.dim = rep.omega0.rows();
  const json& alphas = require(mats, "alpha");
  if (!alphas.is_array() || static_cast<long>(alphas.size()) != rep.params.l)
    throw UsageError("matrices.alpha must list alpha_1..alpha_l");
  rep.alpha.push_back(Matrix());
  for (const auto& a : alphas) rep.alpha.push_back(matrix_from_json(a, f));
  for (std::size_t i = 1; i < rep.alpha.size(); ++i)
    if (rep.alpha[i].rows() != rep.dim || rep.alpha[i].cols() != rep.dim)
      throw UsageError("alpha_" + std::to_string(i) + " has the wrong size");
  try {
    if (mats.contains("delta")) {
      rep.delta = matrix_from_json(mats.at("delta"), f);
    } else if (epsilon) {
      rep.delta = Matrix::scalar(f, rep.dim, *epsilon);
    } else {
      throw UsageError("matrices.delta or epsilon is required");
    }
    if (rep.delta.rows() != rep.dim || rep.delta.cols() != rep.dim) throw UsageError("delta has the wrong size");
    if (rep.params.shaft) {
      if (mats.contains("alpha0")) {
        rep.alpha[0] = matrix_from_json(mats.at("alpha0"), f);
      } else {
        auto eps = rep.delta.as_scalar();
        if (!eps) throw UsageError("alpha0 is required when delta is not scalar");
        rep.alpha[0] = eps->pow(rep.params.r) * rep.omega0.pow(-rep.params.k);
      }
      if (rep.alpha[0].rows() != rep.dim || rep.alpha[0].cols() != rep.dim) throw UsageError("alpha0 has the wrong size");
    }
    if (mats.contains("omega_inf")) {
      rep.omega_inf = matrix_from_json(mats.at("omega_inf"), f);
      if (rep.omega_inf.rows() != rep.dim || rep.omega_inf.cols() != rep.dim)
        throw UsageError("omega_inf has the wrong size");
    } else {
      std::vector<Matrix> as(rep.alpha.begin() + 1, rep.alpha.end());
      rep.omega_inf = product(f, rep.dim, as).inverse() * rep.omega0;
    }
  } catch (const SingularMatrix& e) {
    throw UsageError(std::string("cannot complete the representation: ") + e.what());
  }
  return rep;
}

// ---------------------------------------------------------------- commands

JobResult cmd_construct(const JobSpec& job) {
  ScalarField f = resolve_field(job.document, job.field);
  LocalData data = parse_local_data(job.document, f);
  json report = data_json(data);
  report["command"] = "construct";
  ConditionReport validation = validate_local_data(data);
  report["validation"] = conditions_json(validation);
  if (!validation.ok()) return finish(report, exit_validation);
  Construction c;
  try {
    c = build_representation(data);
  } catch (const ValidationError& e) {
    report["validation"] = conditions_json(e.report());
    return finish(report, exit_validation);
  } catch (const CertificationError& e) {
    report["verification"] = conditions_json(e.report());
    return finish(report, exit_certification);
  }
  report["coefficients"] = coefficients_json(c.coefficients);
  if (c.eigenbasis) report["eigenbasis"] = matrix_to_json(*c.eigenbasis);
  report["matrices"] = representation_json(c.rep);
  report["verification"] = conditions_json(c.verification);
  bool ok = certify(c.rep, local_spectrum_claims(data), report);
  return finish(report, ok ? exit_ok : exit_certification);
}

JobResult cmd_verify(const JobSpec& job) {
  ScalarField f = resolve_field(job.document, job.field);
  LocalData data = parse_local_data(job.document, f);
  TurbineRepresentation rep = parse_representation(job.document, f, data.epsilon);
  json report = data_json(data);
  report["command"] = "verify";
  report["matrices"] = representation_json(rep);
  ConditionReport validation = validate_local_data(data);
  report["validation"] = conditions_json(validation);
  ConditionReport recognition = extract_and_verify_local_data(rep, data);
  report["verification"] = conditions_json(recognition);
  if (!recognition.ok()) return finish(report, exit_certification);
  if (!validation.ok()) return finish(report, exit_validation);
  bool ok = certify(rep, local_spectrum_claims(data), report);
  return finish(report, ok ? exit_ok : exit_certification);
}

JobResult cmd_classify(const JobSpec& job) {
  ScalarField f = resolve_field(job.document, job.field);
  std::optional<Scalar> eps;
  if (job.document.contains("epsilon")) eps = parse_scalar_at(job.document.at("epsilon"), f, "epsilon");
  TurbineRepresentation rep = parse_representation(job.document, f, eps);
  json report = {{"command", "classify"}, {"params", rep.params.describe()}, {"field", field_json(f)}};
  report["matrices"] = representation_json(rep);
  ConditionReport checks;
  auto scalar_delta = rep.delta_scalar();
  checks.add("delta_scalar", "rho(delta) is scalar", scalar_delta.has_value());
  PresentationReport pres = verify_presentation(rep);
  for (const auto& r : pres.relations) checks.add(r.name, r.description, r.passed);
  for (std::size_t i = rep.params.shaft ? 0 : 1; i < rep.alpha.size(); ++i) {
    bool reflection = false;
    std::string detail;
    try {
      auto d = is_pseudo_reflection(rep.alpha[i]);
      reflection = d.has_value();
      if (d) detail = d->special_eigenvalue.render();
    } catch (const SingularMatrix&) {
      detail = "singular";
    }
    checks.add("alpha_pseudo_reflection", "rho(alpha_" + std::to_string(i) + ") is a pseudo-reflection", reflection, detail);
  }
  report["checks"] = conditions_json(checks);
  std::vector<Matrix> loops = transversal_loop_images(rep);
  bool burnside = burnside_oracle(loops);
  report["burnside"] = burnside;
  std::optional<bool> certified;
  try {
    IrreducibilityCertificate cert = irreducibility_certificate(rep);
    report["certificate"] = certificate_json(cert);
    certified = cert.verdict;
  } catch (const std::exception& e) {
    report["certificate"] = {{"error", e.what()}};
  }
  // The digraph certificate decides when it applies; otherwise the algebra
  // dimension (also a proof) decides.
  const bool irreducible = certified.value_or(burnside);
  std::string verdict;
  if (!checks.ok()) {
    verdict = "invalid";
  } else if (!irreducible) {
    verdict = "reducible";
    RigidityBreakdown b = rigidity_breakdown(local_monodromies(rep), rep.params.l, rep.dim);
    report["rigidity"] = {{"centralizer_dims", b.centralizer_dims}, {"index", b.index},
                          {"verdict", "not applicable (reducible)"}};
  } else {
    RigidityResult rr = is_rigid(rep, true);
    report["rigidity"] = rigidity_json(rr);
    verdict = to_string(rr.verdict);
  }
  report["irreducible"] = irreducible;
  report["verdict"] = verdict;
  return finish(report, verdict == "rigid" ? exit_ok : exit_certification);
}

JobResult cmd_example(const JobSpec&) {
  ScalarField f = ScalarField::exact(5);
  const Scalar z = f.parse("zeta(5)");
  TurbineParams params = TurbineParams::with_pair(5, 2, 2, false, Variant::curve, 1, 2);
  LocalData data = LocalData::rigid(params, f.one(), std::nullopt, {f.integer(-1), -z.pow(3)}, {z, z.pow(2), z.pow(3)});
  json report = data_json(data);
  report["command"] = "example";
  report["curve"] = "y^4 - x^10 = 0 (components y^2 +- x^5)";
  ConditionReport validation = validate_local_data(data);
  report["validation"] = conditions_json(validation);
  if (!validation.ok()) return finish(report, exit_validation);
  Construction c = build_extension_without_shaft(data);
  report["coefficients"] = coefficients_json(c.coefficients);
  report["eigenbasis"] = matrix_to_json(*c.eigenbasis);
  report["matrices"] = representation_json(c.rep);
  report["verification"] = conditions_json(c.verification);
  bool certified = certify(c.rep, local_spectrum_claims(data), report);

  const Scalar& eps = data.epsilon;
  const Scalar &l1 = data.lambdas[0], &l2 = data.lambdas[1];
  const Scalar &x1 = data.xis[0], &x2 = data.xis[1];
  Golden golden = displayed_y522(f, eps, l1, l2, x1, x2);
  json comparison = json::object();
  auto compare = [&](const char* name, const Matrix& built, const Matrix& expected) {
    std::vector<std::string> diff = differing_entries(built, expected);
    comparison[name] = {{"match", diff.empty()}, {"differing_entries", diff}, {"golden", matrix_to_json(expected)}};
    return diff.empty();
  };
  bool golden_ok = compare("omega0", c.rep.omega0, golden.omega0);
  golden_ok = compare("X1", c.rep.alpha[1], golden.x1) && golden_ok;
  golden_ok = compare("X2", c.rep.alpha[2], golden.x2) && golden_ok;
  report["golden"] = comparison;

  // Diagnostics on the displayed data themselves.
  json diag = json::object();
  diag["golden_omega0_squared_is_eps"] = golden.omega0.pow(2) == Matrix::scalar(f, 4, eps);
  const Scalar eta1 = *c.coefficients.eta1, eta2 = *c.coefficients.eta2;
  Matrix golden_product = golden.x1 * golden.x2;
  Matrix lower = golden_product.block(2, 2, 2, 2);
  bool lower_spectrum = false;
  try {
    lower_spectrum = verify_semisimple_spectrum(lower, {{eta1, 1}, {eta2, 1}}).ok;
  } catch (const LinalgError&) {
  }
  diag["golden_product_identity_block"] = golden_product.block(0, 0, 2, 2).is_identity() &&
                                          golden_product.block(2, 0, 2, 2).is_zero();
  diag["golden_product_spectrum_eta"] = lower_spectrum;
  Matrix conj = displayed_conjugate(f, l1, l2, eta1, eta2, c.coefficients.e[1], c.coefficients.f[1]);
  Matrix built_conj = *c.block_a_bullet;
  {
    Matrix q = direct_sum({*c.eigenbasis, *c.eigenbasis});
    built_conj = q * built_conj * q.inverse();
  }
  diag["displayed_conjugate_differing_entries"] = differing_entries(built_conj, conj);
  diag["golden_product_equals_displayed_conjugate"] = golden_product == conj;
  TurbineRepresentation golden_rep = c.rep;
  golden_rep.alpha[1] = golden.x1;
  golden_rep.alpha[2] = golden.x2;
  golden_rep.omega_inf = golden_product.inverse() * golden.omega0;
  diag["golden_recognition_failures"] = extract_and_verify_local_data(golden_rep, data).failures();
  Golden inverted = displayed_y522(f, eps, l1, l2, x1.inverse(), x2.inverse());
  diag["built_equals_golden_with_inverted_xi"] = inverted.x1 == c.rep.alpha[1] && inverted.x2 == c.rep.alpha[2];
  report["diagnostics"] = diag;
  report["golden_match"] = golden_ok;
  return finish(report, golden_ok && certified ? exit_ok : exit_certification);
}

JobResult run_job(const JobSpec& job) {
  try {
    if (job.command == "construct") return cmd_construct(job);
    if (job.command == "verify") return cmd_verify(job);
    if (job.command == "classify") return cmd_classify(job);
    if (job.command == "example") return cmd_example(job);
    throw UsageError("unknown command \"" + job.command + "\"");
  } catch (const UsageError& e) {
    return finish({{"command", job.command}, {"error", e.what()}}, exit_usage);
  } catch (const json::exception& e) {
    return finish({{"command", job.command}, {"error", std::string("document: ") + e.what()}}, exit_usage);
  }
}

// ---------------------------------------------------------------- rendering

namespace {

void render_matrix(std::ostream& os, const std::string& name, const json& rows) {
  os << "  " << name << " =\n";
  std::size_t width = 0;
  for (const auto& row : rows)
    for (const auto& v : row) width = std::max(width, v.get<std::string>().size());
  for (const auto& row : rows) {
    os << "    [";
    bool first = true;
    for (const auto& v : row) {
      std::string s = v.get<std::string>();
      os << (first ? " " : "  ") << std::string(width - s.size(), ' ') << s;
      first = false;
    }
    os << " ]\n";
  }
}

void render_conditions(std::ostream& os, const std::string& title, const json& conds) {
  std::size_t passed = 0;
  for (const auto& c : conds) passed += c.at("passed").get<bool>() ? 1 : 0;
  os << title << ": " << passed << "/" << conds.size() << " passed\n";
  for (const auto& c : conds)
    if (!c.at("passed").get<bool>()) {
      os << "  FAILED " << c.at("id").get<std::string>() << " (" << c.at("description").get<std::string>() << ")";
      if (c.contains("detail")) os << ": " << c.at("detail").get<std::string>();
      os << "\n";
    }
}

}  // namespace

std::string render_human(const json& r) {
  std::ostringstream os;
  os << r.value("command", std::string("?")) << ": " << r.value("status", std::string("?")) << " (exit "
     << r.value("exit_code", -1) << ")\n";
  if (r.contains("error")) os << "error: " << r.at("error").get<std::string>() << "\n";
  if (r.contains("n"))
    os << "parameters: n=" << r.at("n") << " k=" << r.at("k") << " l=" << r.at("l")
       << " shaft=" << r.at("shaft") << " variant=" << r.at("variant").get<std::string>() << " r=" << r.at("r")
       << " s=" << r.at("s") << "\n";
  if (r.contains("params")) os << "parameters: " << r.at("params").get<std::string>() << "\n";
  if (r.contains("validation")) render_conditions(os, "validation", r.at("validation"));
  if (r.contains("checks")) render_conditions(os, "checks", r.at("checks"));
  if (r.contains("verification")) render_conditions(os, "verification", r.at("verification"));
  if (r.contains("coefficients"))
    for (const auto& [name, value] : r.at("coefficients").items()) os << "  " << name << " = " << value.dump() << "\n";
  if (r.contains("matrices")) {
    os << "matrices:\n";
    const json& m = r.at("matrices");
    render_matrix(os, "rho(omega_0)", m.at("omega0"));
    if (m.contains("alpha0")) render_matrix(os, "rho(alpha_0)", m.at("alpha0"));
    for (std::size_t i = 0; i < m.at("alpha").size(); ++i)
      render_matrix(os, "rho(alpha_" + std::to_string(i + 1) + ")", m.at("alpha")[i]);
    render_matrix(os, "rho(omega_inf)", m.at("omega_inf"));
  }
  if (r.contains("certificate")) {
    const json& c = r.at("certificate");
    if (c.contains("error")) {
      os << "irreducibility certificate: unavailable (" << c.at("error").get<std::string>() << ")\n";
    } else {
      os << "irreducibility certificate: " << (c.at("verdict").get<bool>() ? "irreducible" : "not certified")
         << " (vertices " << c.at("vertex_count") << ", arcs " << c.at("arcs").size() << ", strongly connected "
         << c.at("strongly_connected") << ", rank(I - product) " << c.at("product_rank") << ")\n";
    }
  }
  if (r.contains("burnside")) os << "burnside oracle: " << (r.at("burnside").get<bool>() ? "irreducible" : "reducible") << "\n";
  if (r.contains("rigidity")) {
    const json& g = r.at("rigidity");
    os << "rigidity index: " << g.at("index") << " (centralizers " << g.at("centralizer_dims").dump() << ") -> "
       << g.at("verdict").get<std::string>() << "\n";
  }
  if (r.contains("alpha_infinity")) {
    const json& a = r.at("alpha_infinity");
    os << "alpha_inf: words agree " << a.at("words_agree") << ", rank(alpha_inf - I) " << a.at("rank_minus_identity")
       << "\n";
  }
  if (r.contains("verdict")) os << "verdict: " << r.at("verdict").get<std::string>() << "\n";
  if (r.contains("golden")) {
    os << "golden comparison:\n";
    for (const auto& [name, cmp] : r.at("golden").items()) {
      os << "  " << name << ": " << (cmp.at("match").get<bool>() ? "match" : "MISMATCH");
      if (!cmp.at("match").get<bool>()) os << " at " << cmp.at("differing_entries").dump();
      os << "\n";
    }
    for (const auto& [name, value] : r.at("diagnostics").items()) os << "  " << name << ": " << value.dump() << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------- entry point

namespace {

json read_document(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path);
    if (!file) throw UsageError("cannot open " + path);
    in = &file;
  }
  try {
    return json::parse(*in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("malformed document: ") + e.what());
  }
}

int run_sweep(const std::string& command, const std::string& path, const FieldRequest& field, Format format,
              std::ostream& out, std::ostream& err) {
  std::ifstream file(path);
  if (!file) {
    err << "error: cannot open " << path << "\n";
    return exit_usage;
  }
  std::vector<std::string> lines;
  for (std::string line; std::getline(file, line);)
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);

  std::mutex out_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<int> worst{exit_ok};
  auto worker = [&]() {
    for (std::size_t i = next++; i < lines.size(); i = next++) {
      JobResult result;
      try {
        JobSpec job{command, json::parse(lines[i]), field};
        if (job.document.contains("command")) job.command = job.document.at("command").get<std::string>();
        result = run_job(job);
      } catch (const std::exception& e) {
        result = finish({{"command", command}, {"error", std::string("malformed line: ") + e.what()}}, exit_usage);
      }
      result.report["job"] = i + 1;
      int seen = worst.load();
      while (result.exit_code > seen && !worst.compare_exchange_weak(seen, result.exit_code)) {
      }
      std::lock_guard<std::mutex> lock(out_mutex);
      if (format == Format::json) {
        out << result.report.dump() << "\n";
      } else {
        out << "job " << (i + 1) << ": " << result.report.value("status", std::string("?")) << " (exit "
            << result.exit_code << ")";
        if (result.report.contains("rigidity")) out << ", index " << result.report.at("rigidity").at("index");
        if (result.report.contains("error")) out << ": " << result.report.at("error").get<std::string>();
        out << "\n";
      }
    }
  };
  unsigned threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8u));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return worst.load();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Construct and certify rigid Pochhammer representations of turbine groups"};
  app.require_subcommand(1);
  std::string input = "-", format_name = "human", conductor, tolerance, sweep;
  long precision = 0;
  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) {
      sub->add_option("--input", input, "job document (JSON; - for stdin)");
      sub->add_option("--sweep", sweep, "file with one job document per line");
    }
    sub->add_option("--format", format_name, "output format")->check(CLI::IsMember({"human", "json"}));
    sub->add_option("--conductor", conductor, "exact field Q(zeta_N): N or auto");
    sub->add_option("--precision", precision, "approximate mode with this many bits");
    sub->add_option("--tol", tolerance, "approximate-mode equality tolerance, e.g. 1e-30");
  };
  add_common(app.add_subcommand("construct", "validate local data, build and certify a representation"), true);
  add_common(app.add_subcommand("verify", "check explicit matrices against claimed local data"), true);
  add_common(app.add_subcommand("classify", "certify irreducibility and rigidity of explicit matrices"), true);
  add_common(app.add_subcommand("example", "run the built-in Y(5,2,2) example against its golden matrices"), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return exit_usage;
  }

  std::string command = app.get_subcommands().front()->get_name();
  FieldRequest field;
  if (!conductor.empty()) field.conductor = conductor;
  if (precision > 0) field.precision = precision;
  if (!tolerance.empty()) field.tolerance = tolerance;
  Format format = format_name == "json" ? Format::json : Format::human;

  if (!sweep.empty()) return run_sweep(command, sweep, field, format, out, err);

  JobResult result;
  try {
    JobSpec job{command, command == "example" ? json::object() : read_document(input), field};
    result = run_job(job);
  } catch (const UsageError& e) {
    result = finish({{"command", command}, {"error", e.what()}}, exit_usage);
  }
  if (format == Format::json)
    out << result.report.dump(2) << "\n";
  else
    out << render_human(result.report);
  return result.exit_code;
}

}  // namespace rigmon::cli
