#include "rigmon/group.hpp"

#include <numeric>
#include <sstream>

namespace rigmon {

std::string to_string(Variant v) { return v == Variant::curve ? "curve" : "turbine"; }

Variant parse_variant(const std::string& text) {
  if (text == "turbine") return Variant::turbine;
  if (text == "curve") return Variant::curve;
  throw GroupError("variant must be 'turbine' or 'curve', got '" + text + "'");
}

namespace {

long floor_mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

// x with a x = 1 mod m, for gcd(a, m) = 1.
long inverse_mod(long a, long m) {
  long old_r = floor_mod(a, m), r = m, old_x = 1, x = 0;
  while (r != 0) {
    long q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_x, x) = std::make_pair(x, old_x - q * x);
  }
  return floor_mod(old_x, m);
}

void check_nk(long n, long k) {
  if (k < 1 || n <= k) throw GroupError("need n > k >= 1, got n=" + std::to_string(n) + ", k=" + std::to_string(k));
  if (std::gcd(n, k) != 1) throw GroupError("n and k must be coprime, got gcd=" + std::to_string(std::gcd(n, k)));
}

}  // namespace

std::pair<long, long> bezout_rs(long n, long k) {
  check_nk(n, k);
  // r n = k s + 1  <=>  k s = -1 mod n.
  long s = floor_mod(-inverse_mod(k, n), n);
  long r = (k * s + 1) / n;
  return {r, s};
}

TurbineParams TurbineParams::make(long n, long k, long l, bool shaft, Variant variant) {
  auto [r, s] = bezout_rs(n, k);
  return with_pair(n, k, l, shaft, variant, r, s);
}

TurbineParams TurbineParams::with_pair(long n, long k, long l, bool shaft, Variant variant, long r, long s) {
  TurbineParams p;
  p.n = n;
  p.k = k;
  p.l = l;
  p.shaft = shaft;
  p.variant = variant;
  p.r = r;
  p.s = s;
  p.validate();
  return p;
}

void TurbineParams::validate() const {
  check_nk(n, k);
  if (l < 1) throw GroupError("l must be at least 1");
  if (r * n != k * s + 1)
    throw GroupError("(r, s) = (" + std::to_string(r) + ", " + std::to_string(s) + ") does not satisfy r n = k s + 1");
}

long TurbineParams::twist_from_canonical() const {
  auto [rc, sc] = bezout_rs(n, k);
  // All solutions are (rc + t k, sc + t n).
  return (s - sc) / n;
}

TurbineParams TurbineParams::twisted(long t) const {
  TurbineParams p = *this;
  p.r += t * k;
  p.s += t * n;
  return p;
}

std::string TurbineParams::describe() const {
  std::ostringstream os;
  os << "(n,k,l)=(" << n << "," << k << "," << l << "), " << (shaft ? "shaft" : "no shaft") << ", "
     << to_string(variant) << ", (r,s)=(" << r << "," << s << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Words

std::string Generator::name() const {
  switch (kind) {
    case GeneratorKind::alpha:
      return "a" + std::to_string(index);
    case GeneratorKind::omega0:
      return "w0";
    case GeneratorKind::omega_inf:
      return "winf";
    case GeneratorKind::delta:
      return "d";
  }
  return "?";
}

GroupWord::GroupWord(std::vector<Letter> l) {
  for (auto& x : l)
    if (x.exponent != 0) letters.push_back(x);
}

GroupWord GroupWord::of(Generator g, long exponent) { return GroupWord({Letter{g, exponent}}); }

GroupWord& GroupWord::operator*=(const GroupWord& other) {
  letters.insert(letters.end(), other.letters.begin(), other.letters.end());
  return *this;
}

GroupWord GroupWord::inverse() const {
  GroupWord w;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.push_back({it->generator, -it->exponent});
  return w;
}

std::string GroupWord::render() const {
  if (letters.empty()) return "1";
  std::string out;
  for (const auto& x : letters) {
    if (!out.empty()) out += " ";
    out += x.generator.name();
    // Loop generators print bare at exponent 1; the framing generators always
    // carry their exponent so conjugation depth stays visible.
    if (x.exponent != 1 || x.generator.kind != GeneratorKind::alpha) out += "^" + std::to_string(x.exponent);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Representations

const Matrix& TurbineRepresentation::image(const Generator& g) const {
  switch (g.kind) {
    case GeneratorKind::alpha:
      if (g.index < 0 || g.index > params.l) throw GroupError("generator " + g.name() + " does not exist for l=" + std::to_string(params.l));
      if (g.index == 0 && !params.shaft) throw GroupError("a0 is only defined for turbines with a shaft");
      if (static_cast<std::size_t>(g.index) >= alpha.size() || alpha[g.index].empty())
        throw GroupError("generator " + g.name() + " is not assigned");
      return alpha[g.index];
    case GeneratorKind::omega0:
      if (omega0.empty()) throw GroupError("generator w0 is not assigned");
      return omega0;
    case GeneratorKind::omega_inf:
      if (omega_inf.empty()) throw GroupError("generator winf is not assigned");
      return omega_inf;
    case GeneratorKind::delta:
      if (delta.empty()) throw GroupError("generator d is not assigned");
      return delta;
  }
  throw GroupError("unknown generator");
}

Matrix evaluate_word(const TurbineRepresentation& rep, const GroupWord& w) {
  Matrix result = Matrix::identity(rep.field, rep.dim);
  for (const auto& x : w.letters) {
    const Matrix& g = rep.image(x.generator);
    if (g.rows() != rep.dim || g.cols() != rep.dim)
      throw DimensionMismatch("image of " + x.generator.name() + " has the wrong size");
    result = result * g.pow(x.exponent);
  }
  return result;
}

bool PresentationReport::all_passed() const {
  for (const auto& r : relations)
    if (!r.passed) return false;
  return true;
}

PresentationReport verify_presentation(const TurbineRepresentation& rep) {
  const TurbineParams& p = rep.params;
  PresentationReport report;
  GroupWord alphas;
  for (long i = 1; i <= p.l; ++i) alphas *= GroupWord::of(Generator::alpha(i));

  auto equal = [&](const GroupWord& lhs, const GroupWord& rhs) {
    return evaluate_word(rep, lhs) == evaluate_word(rep, rhs);
  };

  report.relations.push_back({"R1", "a1...al winf = w0",
                              equal(alphas * GroupWord::of(Generator::omega_inf()), GroupWord::of(Generator::omega0()))});

  std::vector<Generator> gens;
  if (p.shaft) gens.push_back(Generator::alpha(0));
  for (long i = 1; i <= p.l; ++i) gens.push_back(Generator::alpha(i));
  gens.push_back(Generator::omega0());
  gens.push_back(Generator::omega_inf());
  bool central = true;
  const Matrix& d = rep.image(Generator::delta());
  for (const auto& g : gens) {
    const Matrix& m = rep.image(g);
    if (m * d != d * m) central = false;
  }
  report.relations.push_back({"R2", "d commutes with every generator", central});

  GroupWord delta_r = GroupWord::of(Generator::delta(), p.r);
  if (p.shaft)
    report.relations.push_back({"R3", "a0 w0^k = d^r",
                                equal(GroupWord::of(Generator::alpha(0)) * GroupWord::of(Generator::omega0(), p.k), delta_r)});
  else
    report.relations.push_back({"R3", "w0^k = d^r", equal(GroupWord::of(Generator::omega0(), p.k), delta_r)});

  if (p.variant == Variant::curve)
    report.relations.push_back(
        {"R4", "winf^n = d^s", equal(GroupWord::of(Generator::omega_inf(), p.n), GroupWord::of(Generator::delta(), p.s))});
  return report;
}

DistinguishedWords distinguished_words(const TurbineParams& params) {
  params.validate();
  DistinguishedWords out;
  out.alpha_infinity = GroupWord::of(Generator::delta(), params.r) * GroupWord::of(Generator::omega_inf(), -params.k);
  long nu = 0;
  if (params.shaft) {
    GroupWord g0 = GroupWord::of(Generator::alpha(0));
    out.loops.push_back({"0", nu++, g0});
    out.factorized *= g0;
  }
  for (long j = 0; j < params.k; ++j) {
    const long depth = params.k - 1 - j;
    for (long i = 1; i <= params.l; ++i) {
      GroupWord g = GroupWord::of(Generator::omega0(), depth) * GroupWord::of(Generator::alpha(i)) *
                    GroupWord::of(Generator::omega0(), -depth);
      out.loops.push_back({"(" + std::to_string(j) + "," + std::to_string(i) + ")", nu++, g});
      out.factorized *= g;
    }
  }
  return out;
}

TurbineRepresentation twist(const TurbineRepresentation& rep, long t) {
  TurbineRepresentation out = rep;
  out.params = rep.params.twisted(t);
  Matrix dt = rep.delta.pow(t);
  out.omega0 = rep.omega0 * dt;
  out.omega_inf = rep.omega_inf * dt;
  return out;
}

}  // namespace rigmon
