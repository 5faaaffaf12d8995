#pragma once

// Scalars for monodromy matrices.
//
// Two backends share one value type:
//   exact  - elements of the cyclotomic field Q(zeta_N), stored in the power
//            basis 1, z, ..., z^(phi(N)-1) modulo the N-th cyclotomic
//            polynomial with integer numerators over a common denominator.
//   approx - complex numbers with MPFR real and imaginary parts at a fixed
//            precision; equality means |a - b| < tolerance.
//
// A Scalar always belongs to one ScalarField. Mixing fields is an error.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

namespace rigmon {

class ScalarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ScalarError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : ScalarError(what + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class ConductorMismatch : public ScalarError {
 public:
  using ScalarError::ScalarError;
};

class DivisionByZero : public ScalarError {
 public:
  DivisionByZero() : ScalarError("division by zero") {}
};

class FieldMismatch : public ScalarError {
 public:
  FieldMismatch() : ScalarError("scalars belong to different fields") {}
};

enum class FieldMode { exact, approx };

namespace detail {
struct FieldData;
}

class Scalar;

// Handle to an interned, immutable field description. Copying is free and
// two handles compare equal iff they describe the same field.
class ScalarField {
 public:
  static ScalarField exact(std::uint32_t conductor);
  // tolerance_log2: tau = 2^tolerance_log2; defaults to -precision/2.
  static ScalarField approx(unsigned precision_bits, std::optional<long> tolerance_log2 = {});
  // Tolerance given as a decimal literal such as "1e-30".
  static ScalarField approx(unsigned precision_bits, const std::string& tolerance);

  FieldMode mode() const;
  bool is_exact() const { return mode() == FieldMode::exact; }
  std::uint32_t conductor() const;
  // phi(N) in exact mode, 1 otherwise.
  unsigned degree() const;
  unsigned precision() const;
  std::string describe() const;

  Scalar zero() const;
  Scalar one() const;
  Scalar integer(long value) const;
  Scalar rational(const mpq_class& value) const;
  // zeta_order^power. Exact mode requires order | N.
  Scalar root_of_unity(std::uint32_t order, long power) const;
  Scalar parse(std::string_view text) const;

  friend bool operator==(ScalarField a, ScalarField b) { return a.data_ == b.data_; }
  friend bool operator!=(ScalarField a, ScalarField b) { return a.data_ != b.data_; }

  const detail::FieldData* data() const { return data_; }

 private:
  explicit ScalarField(const detail::FieldData* d) : data_(d) {}
  const detail::FieldData* data_ = nullptr;
  friend class Scalar;
};

// RAII MPFR value with an explicit precision.
class BigFloat {
 public:
  explicit BigFloat(unsigned precision = 64);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(value_)); }

 private:
  mpfr_t value_;
};

struct ExactValue {
  // Empty numerator means zero. Otherwise size == phi(N), den > 0 and
  // gcd(numerators, den) == 1.
  std::vector<mpz_class> num;
  mpz_class den = 1;
};

struct ApproxValue {
  BigFloat re;
  BigFloat im;
};

class Scalar {
 public:
  Scalar() = default;  // detached zero; only valid as an assignment target

  ScalarField field() const { return ScalarField(field_); }
  bool attached() const { return field_ != nullptr; }

  bool is_zero() const;
  bool is_one() const;

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b);
  Scalar& operator-=(const Scalar& b);
  Scalar& operator*=(const Scalar& b);
  Scalar& operator/=(const Scalar& b);

  Scalar inverse() const;
  Scalar pow(long exponent) const;

  // Exact: canonical-form equality. Approx: |a - b| < tau.
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // Literal in the scalar grammar; parse(render()) == *this in exact mode.
  std::string render() const;

  // Rough bit size, used for pivot choice in exact elimination.
  std::size_t size_hint() const;
  // |value| as a double (approx pivoting, diagnostics).
  double magnitude() const;

  const ExactValue* exact() const { return std::get_if<ExactValue>(&value_); }
  const ApproxValue* approx() const { return std::get_if<ApproxValue>(&value_); }

  // Rational value if the element lies in Q.
  std::optional<mpq_class> as_rational() const;

  static Scalar from_exact(ScalarField f, ExactValue v);
  static Scalar from_approx(ScalarField f, ApproxValue v);

 private:
  const detail::FieldData* field_ = nullptr;
  std::variant<ExactValue, ApproxValue> value_;
};

// Free-function forms of the field operations.
Scalar parse_scalar(ScalarField field, std::string_view text);
Scalar root_of_unity(ScalarField field, std::uint32_t order, long power);

// Orders M of every zeta(M) in the literal (4 for `i`). Throws ParseError
// only on lexical errors.
std::vector<std::uint32_t> literal_root_orders(std::string_view text);

// The N-th cyclotomic polynomial, lowest degree first.
std::vector<long> cyclotomic_polynomial(std::uint32_t n);
unsigned euler_phi(std::uint32_t n);

// All x in the field with x^k == value, if the field holds k distinct ones.
// Exact mode searches the roots of unity +-zeta_N^j (so `value` must itself
// be a root of unity); approx mode takes principal root times zeta_k^j.
std::optional<std::vector<Scalar>> kth_roots(const Scalar& value, unsigned k);

// Smallest d > 0 with value^d == 1, searching d | lcm(2, N); nullopt if none.
std::optional<std::uint32_t> root_of_unity_order(const Scalar& value);

}  // namespace rigmon
