#pragma once

// Turbine fundamental groups as executable data. Generators are
// alpha_0 (shaft only), alpha_1..alpha_l, omega_0, omega_inf and the central
// delta; relations:
//   R1  alpha_1 ... alpha_l omega_inf = omega_0
//   R2  delta is central
//   R3  alpha_0 omega_0^k = delta^r   (shaft)   /   omega_0^k = delta^r
//   R4  omega_inf^n = delta^s         (curve variant only)
// where r n = k s + 1.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rigmon/linalg.hpp"

namespace rigmon {

class GroupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Variant { turbine, curve };

std::string to_string(Variant v);
Variant parse_variant(const std::string& text);

// The pair with r n = k s + 1 and 0 <= s < n. Throws GroupError unless
// gcd(n, k) = 1 and n > k >= 1.
std::pair<long, long> bezout_rs(long n, long k);

struct TurbineParams {
  long n = 0;
  long k = 0;
  long l = 0;
  bool shaft = false;
  Variant variant = Variant::turbine;
  long r = 0;
  long s = 0;

  // Canonical Bezout pair.
  static TurbineParams make(long n, long k, long l, bool shaft, Variant variant = Variant::turbine);
  // Explicit Bezout pair; must satisfy r n = k s + 1.
  static TurbineParams with_pair(long n, long k, long l, bool shaft, Variant variant, long r, long s);

  // Throws GroupError on violated invariants.
  void validate() const;
  // t with (r, s) = (r_c + t k, s_c + t n) relative to the canonical pair.
  long twist_from_canonical() const;
  TurbineParams twisted(long t) const;
  // Representation dimension for the rigid shape: k l (+1 with shaft).
  long rigid_dimension() const { return k * l + (shaft ? 1 : 0); }
  std::string describe() const;
};

enum class GeneratorKind { alpha, omega0, omega_inf, delta };

struct Generator {
  GeneratorKind kind = GeneratorKind::delta;
  long index = 0;  // alpha index 0..l; unused otherwise

  static Generator alpha(long i) { return {GeneratorKind::alpha, i}; }
  static Generator omega0() { return {GeneratorKind::omega0, 0}; }
  static Generator omega_inf() { return {GeneratorKind::omega_inf, 0}; }
  static Generator delta() { return {GeneratorKind::delta, 0}; }
  std::string name() const;
};

struct Letter {
  Generator generator;
  long exponent = 1;
};

// Unreduced word; evaluation is its only semantics.
struct GroupWord {
  std::vector<Letter> letters;

  GroupWord() = default;
  explicit GroupWord(std::vector<Letter> l);
  static GroupWord of(Generator g, long exponent = 1);

  GroupWord& operator*=(const GroupWord& other);
  friend GroupWord operator*(GroupWord a, const GroupWord& b) { return a *= b; }
  GroupWord inverse() const;
  bool empty() const { return letters.empty(); }
  // Letters like "w0^1 a1 w0^-1"; the empty word renders as "1".
  std::string render() const;
};

struct TurbineRepresentation {
  TurbineParams params;
  ScalarField field = ScalarField::exact(1);
  std::size_t dim = 0;
  std::vector<Matrix> alpha;  // index 0..l; alpha[0] is empty (0x0) without a shaft
  Matrix omega0;
  Matrix omega_inf;
  Matrix delta;

  const Matrix& image(const Generator& g) const;
  // Scalar epsilon with delta = epsilon * I, if delta is scalar.
  std::optional<Scalar> delta_scalar() const { return delta.as_scalar(); }
};

// Ordered product of generator images raised to the exponents.
Matrix evaluate_word(const TurbineRepresentation& rep, const GroupWord& w);

struct RelationCheck {
  std::string name;         // R1..R4
  std::string description;  // relation in words
  bool passed = false;
};

struct PresentationReport {
  std::vector<RelationCheck> relations;
  bool all_passed() const;
};

PresentationReport verify_presentation(const TurbineRepresentation& rep);

struct TransversalLoop {
  std::string label;  // "0" or "(j,i)"
  long nu = 0;        // vertex index in the digraph ordering
  GroupWord word;
};

struct DistinguishedWords {
  GroupWord alpha_infinity;  // delta^r omega_inf^-k
  GroupWord factorized;      // g_0 (g_{0,1}...g_{0,l}) ... (g_{k-1,1}...g_{k-1,l})
  std::vector<TransversalLoop> loops;
};

DistinguishedWords distinguished_words(const TurbineParams& params);

// omega_i -> omega_i delta^t with (r, s) -> (r + t k, s + t n).
TurbineRepresentation twist(const TurbineRepresentation& rep, long t);

}  // namespace rigmon
