#include "rigmon/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

namespace rigmon {

namespace detail {

struct FieldData {
  FieldMode mode = FieldMode::exact;

  // exact mode
  std::uint32_t conductor = 1;
  unsigned phi = 1;
  std::vector<long> cyclotomic;  // monic, lowest degree first, size phi + 1
  // reduction[e] = x^e mod Phi_N for 0 <= e < N, as (index, coefficient) pairs
  std::vector<std::vector<std::pair<unsigned, long>>> reduction;
  std::vector<std::uint32_t> units;  // (Z/N)^*, used for Galois conjugates

  // approx mode
  unsigned precision = 0;
  BigFloat tolerance{64};
  std::string tolerance_text;
};

}  // namespace detail

using detail::FieldData;

// ---------------------------------------------------------------------------
// BigFloat

BigFloat::BigFloat(unsigned precision) { mpfr_init2(value_, std::max<unsigned>(precision, MPFR_PREC_MIN)); mpfr_set_zero(value_, 1); }

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

// ---------------------------------------------------------------------------
// Cyclotomic polynomials

unsigned euler_phi(std::uint32_t n) {
  unsigned result = n;
  std::uint32_t m = n;
  for (std::uint32_t p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      result -= result / p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

std::vector<long> cyclotomic_polynomial(std::uint32_t n) {
  if (n == 0) throw ScalarError("cyclotomic polynomial of order 0");
  // x^n - 1 divided by Phi_d for every proper divisor d.
  std::vector<long> poly(n + 1, 0);
  poly[0] = -1;
  poly[n] = 1;
  for (std::uint32_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    std::vector<long> divisor = cyclotomic_polynomial(d);
    std::size_t dd = divisor.size() - 1;
    std::size_t pd = poly.size() - 1;
    std::vector<long> quotient(pd - dd + 1, 0);
    for (std::size_t i = pd + 1; i-- > dd;) {
      long c = poly[i];  // divisor is monic
      quotient[i - dd] = c;
      if (c != 0)
        for (std::size_t j = 0; j <= dd; ++j) poly[i - dd + j] -= c * divisor[j];
    }
    poly = std::move(quotient);
  }
  return poly;
}

// ---------------------------------------------------------------------------
// Field registry

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::tuple<int, std::uint32_t, std::string>, std::unique_ptr<FieldData>>& registry() {
  static std::map<std::tuple<int, std::uint32_t, std::string>, std::unique_ptr<FieldData>> r;
  return r;
}

std::unique_ptr<FieldData> make_exact_field(std::uint32_t n) {
  auto data = std::make_unique<FieldData>();
  data->mode = FieldMode::exact;
  data->conductor = n;
  data->cyclotomic = cyclotomic_polynomial(n);
  data->phi = static_cast<unsigned>(data->cyclotomic.size() - 1);
  const unsigned phi = data->phi;
  // Dense reduction rows, then sparsify.
  std::vector<std::vector<long>> dense(n, std::vector<long>(phi, 0));
  for (std::uint32_t e = 0; e < n; ++e) {
    if (e < phi) {
      dense[e][e] = 1;
      continue;
    }
    // x^e = x * x^(e-1); the overflow coefficient folds back via x^phi = -sum Phi_i x^i
    const std::vector<long>& prev = dense[e - 1];
    long top = prev[phi - 1];
    for (unsigned i = phi; i-- > 1;) dense[e][i] = prev[i - 1];
    dense[e][0] = 0;
    for (unsigned i = 0; i < phi; ++i) dense[e][i] -= top * data->cyclotomic[i];
  }
  data->reduction.resize(n);
  for (std::uint32_t e = 0; e < n; ++e)
    for (unsigned i = 0; i < phi; ++i)
      if (dense[e][i] != 0) data->reduction[e].emplace_back(i, dense[e][i]);
  for (std::uint32_t j = 1; j <= n; ++j)
    if (std::gcd(j % n, n) == 1 || n == 1) {
      data->units.push_back(j % n);
      if (n == 1) break;
    }
  return data;
}

const FieldData* intern(std::tuple<int, std::uint32_t, std::string> key,
                        const std::function<std::unique_ptr<FieldData>()>& make) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto& r = registry();
  auto it = r.find(key);
  if (it != r.end()) return it->second.get();
  auto data = make();
  const FieldData* raw = data.get();
  r.emplace(std::move(key), std::move(data));
  return raw;
}

std::string tolerance_key(const BigFloat& tau) {
  mpfr_exp_t exponent = 0;
  char* digits = mpfr_get_str(nullptr, &exponent, 16, 0, tau.get(), MPFR_RNDN);
  std::string key = std::string(digits) + "p" + std::to_string(exponent);
  mpfr_free_str(digits);
  return key;
}

}  // namespace

ScalarField ScalarField::exact(std::uint32_t conductor) {
  if (conductor == 0) throw ScalarError("conductor must be positive");
  return ScalarField(intern({0, conductor, ""}, [&] { return make_exact_field(conductor); }));
}

ScalarField ScalarField::approx(unsigned precision_bits, std::optional<long> tolerance_log2) {
  if (precision_bits < 16) throw ScalarError("approx precision must be at least 16 bits");
  long e = tolerance_log2.value_or(-static_cast<long>(precision_bits / 2));
  BigFloat tau(precision_bits);
  mpfr_set_ui_2exp(tau.get(), 1, e, MPFR_RNDN);
  std::string text = "2^" + std::to_string(e);
  return ScalarField(intern({1, precision_bits, tolerance_key(tau)}, [&] {
    auto data = std::make_unique<FieldData>();
    data->mode = FieldMode::approx;
    data->precision = precision_bits;
    data->tolerance = tau;
    data->tolerance_text = text;
    return data;
  }));
}

ScalarField ScalarField::approx(unsigned precision_bits, const std::string& tolerance) {
  if (precision_bits < 16) throw ScalarError("approx precision must be at least 16 bits");
  BigFloat tau(precision_bits);
  if (mpfr_set_str(tau.get(), tolerance.c_str(), 10, MPFR_RNDN) != 0 || mpfr_sgn(tau.get()) <= 0)
    throw ScalarError("tolerance must be a positive decimal number: '" + tolerance + "'");
  return ScalarField(intern({1, precision_bits, tolerance_key(tau)}, [&] {
    auto data = std::make_unique<FieldData>();
    data->mode = FieldMode::approx;
    data->precision = precision_bits;
    data->tolerance = tau;
    data->tolerance_text = tolerance;
    return data;
  }));
}

FieldMode ScalarField::mode() const { return data_->mode; }
std::uint32_t ScalarField::conductor() const { return data_->conductor; }
unsigned ScalarField::degree() const { return data_->mode == FieldMode::exact ? data_->phi : 1; }
unsigned ScalarField::precision() const { return data_->precision; }

std::string ScalarField::describe() const {
  if (data_->mode == FieldMode::exact) return "Q(zeta_" + std::to_string(data_->conductor) + ")";
  return "C[" + std::to_string(data_->precision) + " bits, tol " + data_->tolerance_text + "]";
}

// ---------------------------------------------------------------------------
// Exact helpers

namespace {

void canonicalize(ExactValue& v) {
  if (v.num.empty()) {
    v.den = 1;
    return;
  }
  if (v.den == 0) throw DivisionByZero();
  if (v.den < 0) {
    v.den = -v.den;
    for (auto& c : v.num) c = -c;
  }
  mpz_class g = v.den;
  bool all_zero = true;
  for (const auto& c : v.num) {
    if (c == 0) continue;
    all_zero = false;
    if (g != 1) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  }
  if (all_zero) {
    v.num.clear();
    v.den = 1;
    return;
  }
  if (g != 1) {
    for (auto& c : v.num)
      if (c != 0) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(v.den.get_mpz_t(), v.den.get_mpz_t(), g.get_mpz_t());
  }
}

bool is_rational_value(const ExactValue& v) {
  for (std::size_t i = 1; i < v.num.size(); ++i)
    if (v.num[i] != 0) return false;
  return true;
}

// Product of integer vectors reduced mod Phi_N.
std::vector<mpz_class> multiply_reduce(const FieldData& f, const std::vector<mpz_class>& a,
                                       const std::vector<mpz_class>& b) {
  const unsigned phi = f.phi;
  std::vector<mpz_class> raw(2 * phi - 1);
  for (unsigned i = 0; i < phi; ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; j < phi; ++j) {
      if (b[j] == 0) continue;
      mpz_addmul(raw[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  std::vector<mpz_class> out(phi);
  for (unsigned e = 0; e < phi; ++e) out[e] = std::move(raw[e]);
  for (unsigned e = phi; e < raw.size(); ++e) {
    if (raw[e] == 0) continue;
    for (const auto& [idx, c] : f.reduction[e % f.conductor]) {
      if (c > 0)
        mpz_addmul_ui(out[idx].get_mpz_t(), raw[e].get_mpz_t(), static_cast<unsigned long>(c));
      else
        mpz_submul_ui(out[idx].get_mpz_t(), raw[e].get_mpz_t(), static_cast<unsigned long>(-c));
    }
  }
  return out;
}

// sigma_j: x -> x^j, reduced mod Phi_N.
std::vector<mpz_class> galois_conjugate(const FieldData& f, const std::vector<mpz_class>& a,
                                        std::uint32_t j) {
  std::vector<mpz_class> out(f.phi);
  for (unsigned i = 0; i < f.phi; ++i) {
    if (a[i] == 0) continue;
    std::uint32_t e = static_cast<std::uint32_t>((static_cast<std::uint64_t>(i) * j) % f.conductor);
    for (const auto& [idx, c] : f.reduction[e]) {
      if (c > 0)
        mpz_addmul_ui(out[idx].get_mpz_t(), a[i].get_mpz_t(), static_cast<unsigned long>(c));
      else
        mpz_submul_ui(out[idx].get_mpz_t(), a[i].get_mpz_t(), static_cast<unsigned long>(-c));
    }
  }
  return out;
}

ExactValue exact_rational(const FieldData& f, const mpq_class& q) {
  ExactValue v;
  if (q == 0) return v;
  v.num.assign(f.phi, 0);
  v.num[0] = q.get_num();
  v.den = q.get_den();
  return v;
}

ExactValue exact_root(const FieldData& f, std::uint64_t exponent) {
  ExactValue v;
  v.num.assign(f.phi, 0);
  for (const auto& [idx, c] : f.reduction[exponent % f.conductor]) v.num[idx] = c;
  canonicalize(v);
  return v;
}

ExactValue exact_add(const FieldData& f, const ExactValue& a, const ExactValue& b, bool subtract) {
  if (b.num.empty()) return a;
  if (a.num.empty()) {
    ExactValue r = b;
    if (subtract)
      for (auto& c : r.num) c = -c;
    return r;
  }
  ExactValue r;
  r.num.resize(f.phi);
  if (a.den == b.den) {
    for (unsigned i = 0; i < f.phi; ++i) r.num[i] = subtract ? mpz_class(a.num[i] - b.num[i]) : mpz_class(a.num[i] + b.num[i]);
    r.den = a.den;
  } else {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.den.get_mpz_t(), b.den.get_mpz_t());
    mpz_class fa = b.den / g;  // multiplier for a
    mpz_class fb = a.den / g;  // multiplier for b
    for (unsigned i = 0; i < f.phi; ++i) {
      r.num[i] = a.num[i] * fa;
      if (subtract)
        mpz_submul(r.num[i].get_mpz_t(), b.num[i].get_mpz_t(), fb.get_mpz_t());
      else
        mpz_addmul(r.num[i].get_mpz_t(), b.num[i].get_mpz_t(), fb.get_mpz_t());
    }
    r.den = a.den * fa;
  }
  canonicalize(r);
  return r;
}

ExactValue exact_mul(const FieldData& f, const ExactValue& a, const ExactValue& b) {
  if (a.num.empty() || b.num.empty()) return {};
  ExactValue r;
  if (is_rational_value(a) || is_rational_value(b)) {
    const ExactValue& q = is_rational_value(a) ? a : b;
    const ExactValue& o = is_rational_value(a) ? b : a;
    r.num.resize(f.phi);
    for (unsigned i = 0; i < f.phi; ++i)
      if (o.num[i] != 0) r.num[i] = o.num[i] * q.num[0];
  } else {
    r.num = multiply_reduce(f, a.num, b.num);
  }
  r.den = a.den * b.den;
  canonicalize(r);
  return r;
}

ExactValue exact_inverse(const FieldData& f, const ExactValue& a) {
  if (a.num.empty()) throw DivisionByZero();
  ExactValue r;
  if (is_rational_value(a)) {
    r.num.assign(f.phi, 0);
    r.num[0] = a.den;
    r.den = a.num[0];
    canonicalize(r);
    return r;
  }
  // p = product of the non-trivial conjugates; a * p is the (rational) norm.
  std::vector<mpz_class> p(f.phi, 0);
  p[0] = 1;
  for (std::uint32_t j : f.units) {
    if (j == 1 % f.conductor) continue;
    p = multiply_reduce(f, p, galois_conjugate(f, a.num, j));
  }
  std::vector<mpz_class> norm = multiply_reduce(f, a.num, p);
  for (unsigned i = 1; i < f.phi; ++i)
    if (norm[i] != 0) throw ScalarError("internal: norm is not rational");
  if (norm[0] == 0) throw DivisionByZero();
  // a = A/d, A p = c  =>  a^-1 = d p / c
  r.num = std::move(p);
  for (auto& c : r.num) c *= a.den;
  r.den = norm[0];
  canonicalize(r);
  return r;
}

// ---------------------------------------------------------------------------
// Approx helpers

ApproxValue approx_zero(unsigned prec) { return ApproxValue{BigFloat(prec), BigFloat(prec)}; }

ApproxValue approx_from_mpq(unsigned prec, const mpq_class& q) {
  ApproxValue v = approx_zero(prec);
  mpfr_set_q(v.re.get(), q.get_mpq_t(), MPFR_RNDN);
  return v;
}

ApproxValue approx_root(unsigned prec, std::uint32_t order, long power) {
  ApproxValue v = approx_zero(prec);
  long reduced = power % static_cast<long>(order);
  if (reduced < 0) reduced += order;
  // Exact values at the quarter turns keep i^2 == -1 free of rounding.
  if (reduced == 0) {
    mpfr_set_ui(v.re.get(), 1, MPFR_RNDN);
    return v;
  }
  if (2 * reduced == static_cast<long>(order)) {
    mpfr_set_si(v.re.get(), -1, MPFR_RNDN);
    return v;
  }
  if (4 * reduced == static_cast<long>(order)) {
    mpfr_set_ui(v.im.get(), 1, MPFR_RNDN);
    return v;
  }
  if (4 * reduced == 3 * static_cast<long>(order)) {
    mpfr_set_si(v.im.get(), -1, MPFR_RNDN);
    return v;
  }
  BigFloat angle(prec + 32);
  mpfr_const_pi(angle.get(), MPFR_RNDN);
  mpfr_mul_ui(angle.get(), angle.get(), 2 * static_cast<unsigned long>(reduced), MPFR_RNDN);
  mpfr_div_ui(angle.get(), angle.get(), order, MPFR_RNDN);
  mpfr_sin_cos(v.im.get(), v.re.get(), angle.get(), MPFR_RNDN);
  return v;
}

void approx_abs(BigFloat& out, const ApproxValue& v) { mpfr_hypot(out.get(), v.re.get(), v.im.get(), MPFR_RNDN); }

ApproxValue approx_add(unsigned prec, const ApproxValue& a, const ApproxValue& b, bool subtract) {
  ApproxValue r = approx_zero(prec);
  if (subtract) {
    mpfr_sub(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_sub(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  } else {
    mpfr_add(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_add(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  }
  return r;
}

ApproxValue approx_mul(unsigned prec, const ApproxValue& a, const ApproxValue& b) {
  ApproxValue r = approx_zero(prec);
  BigFloat t(prec);
  mpfr_mul(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_sub(r.re.get(), r.re.get(), t.get(), MPFR_RNDN);
  mpfr_mul(r.im.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), r.im.get(), t.get(), MPFR_RNDN);
  return r;
}

ApproxValue approx_inverse(const FieldData& f, const ApproxValue& a) {
  const unsigned prec = f.precision;
  BigFloat magnitude(prec);
  approx_abs(magnitude, a);
  if (mpfr_cmp(magnitude.get(), f.tolerance.get()) < 0) throw DivisionByZero();
  BigFloat norm(prec);
  mpfr_sqr(norm.get(), magnitude.get(), MPFR_RNDN);
  ApproxValue r = approx_zero(prec);
  mpfr_div(r.re.get(), a.re.get(), norm.get(), MPFR_RNDN);
  mpfr_div(r.im.get(), a.im.get(), norm.get(), MPFR_RNDN);
  mpfr_neg(r.im.get(), r.im.get(), MPFR_RNDN);
  return r;
}

std::string render_bigfloat(const BigFloat& x) {
  // Enough decimal digits to round-trip the binary precision.
  int digits = static_cast<int>(std::ceil(x.precision() * 0.30103)) + 2;
  char* buffer = nullptr;
  mpfr_asprintf(&buffer, "%.*Rg", digits, x.get());
  std::string s(buffer);
  mpfr_free_str(buffer);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Scalar construction

Scalar Scalar::from_exact(ScalarField f, ExactValue v) {
  if (!f.is_exact()) throw FieldMismatch();
  Scalar s;
  s.field_ = f.data();
  canonicalize(v);
  if (!v.num.empty() && v.num.size() != f.degree()) throw ScalarError("coefficient vector length differs from phi(N)");
  s.value_ = std::move(v);
  return s;
}

Scalar Scalar::from_approx(ScalarField f, ApproxValue v) {
  if (f.is_exact()) throw FieldMismatch();
  Scalar s;
  s.field_ = f.data();
  s.value_ = std::move(v);
  return s;
}

Scalar ScalarField::zero() const { return integer(0); }
Scalar ScalarField::one() const { return integer(1); }
Scalar ScalarField::integer(long value) const { return rational(mpq_class(value)); }

Scalar ScalarField::rational(const mpq_class& value) const {
  if (is_exact()) return Scalar::from_exact(*this, exact_rational(*data_, value));
  return Scalar::from_approx(*this, approx_from_mpq(data_->precision, value));
}

Scalar ScalarField::root_of_unity(std::uint32_t order, long power) const {
  if (order == 0) throw ScalarError("root of unity of order 0");
  if (!is_exact()) return Scalar::from_approx(*this, approx_root(data_->precision, order, power));
  if (data_->conductor % order != 0)
    throw ConductorMismatch("zeta(" + std::to_string(order) + ") is not in Q(zeta_" +
                            std::to_string(data_->conductor) + ")");
  long reduced = power % static_cast<long>(order);
  if (reduced < 0) reduced += order;
  std::uint64_t exponent = static_cast<std::uint64_t>(reduced) * (data_->conductor / order);
  return Scalar::from_exact(*this, exact_root(*data_, exponent));
}

Scalar root_of_unity(ScalarField field, std::uint32_t order, long power) {
  return field.root_of_unity(order, power);
}

// ---------------------------------------------------------------------------
// Scalar arithmetic

namespace {

const FieldData* common_field(const Scalar& a, const Scalar& b) {
  if (!a.attached() || !b.attached() || a.field() != b.field()) throw FieldMismatch();
  return a.field().data();
}

}  // namespace

bool Scalar::is_zero() const {
  if (const auto* e = exact()) return e->num.empty();
  const auto* a = approx();
  BigFloat m(field_->precision);
  approx_abs(m, *a);
  return mpfr_cmp(m.get(), field_->tolerance.get()) < 0;
}

bool Scalar::is_one() const {
  if (const auto* e = exact()) {
    if (e->num.empty() || e->den != 1 || e->num[0] != 1) return false;
    return is_rational_value(*e);
  }
  return *this == field().one();
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  if (auto* e = std::get_if<ExactValue>(&r.value_)) {
    for (auto& c : e->num) c = -c;
  } else {
    auto& a = std::get<ApproxValue>(r.value_);
    mpfr_neg(a.re.get(), a.re.get(), MPFR_RNDN);
    mpfr_neg(a.im.get(), a.im.get(), MPFR_RNDN);
  }
  return r;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  const FieldData* f = common_field(a, b);
  Scalar r;
  r.field_ = f;
  if (f->mode == FieldMode::exact)
    r.value_ = exact_add(*f, *a.exact(), *b.exact(), false);
  else
    r.value_ = approx_add(f->precision, *a.approx(), *b.approx(), false);
  return r;
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  const FieldData* f = common_field(a, b);
  Scalar r;
  r.field_ = f;
  if (f->mode == FieldMode::exact)
    r.value_ = exact_add(*f, *a.exact(), *b.exact(), true);
  else
    r.value_ = approx_add(f->precision, *a.approx(), *b.approx(), true);
  return r;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  const FieldData* f = common_field(a, b);
  Scalar r;
  r.field_ = f;
  if (f->mode == FieldMode::exact)
    r.value_ = exact_mul(*f, *a.exact(), *b.exact());
  else
    r.value_ = approx_mul(f->precision, *a.approx(), *b.approx());
  return r;
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  common_field(a, b);
  return a * b.inverse();
}

Scalar& Scalar::operator+=(const Scalar& b) { return *this = *this + b; }
Scalar& Scalar::operator-=(const Scalar& b) { return *this = *this - b; }
Scalar& Scalar::operator*=(const Scalar& b) { return *this = *this * b; }
Scalar& Scalar::operator/=(const Scalar& b) { return *this = *this / b; }

Scalar Scalar::inverse() const {
  if (!attached()) throw FieldMismatch();
  Scalar r;
  r.field_ = field_;
  if (const auto* e = exact())
    r.value_ = exact_inverse(*field_, *e);
  else
    r.value_ = approx_inverse(*field_, *approx());
  return r;
}

Scalar Scalar::pow(long exponent) const {
  if (!attached()) throw FieldMismatch();
  Scalar base = exponent < 0 ? inverse() : *this;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-(exponent + 1)) + 1UL : static_cast<unsigned long>(exponent);
  Scalar result = field().one();
  while (e > 0) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

bool operator==(const Scalar& a, const Scalar& b) {
  const FieldData* f = common_field(a, b);
  if (f->mode == FieldMode::exact) {
    const ExactValue& x = *a.exact();
    const ExactValue& y = *b.exact();
    return x.den == y.den && x.num == y.num;
  }
  ApproxValue d = approx_add(f->precision, *a.approx(), *b.approx(), true);
  BigFloat m(f->precision);
  approx_abs(m, d);
  return mpfr_cmp(m.get(), f->tolerance.get()) < 0;
}

std::optional<mpq_class> Scalar::as_rational() const {
  const ExactValue* e = exact();
  if (!e) return std::nullopt;
  if (e->num.empty()) return mpq_class(0);
  if (!is_rational_value(*e)) return std::nullopt;
  mpq_class q(e->num[0], e->den);
  q.canonicalize();
  return q;
}

std::size_t Scalar::size_hint() const {
  if (const auto* e = exact()) {
    if (e->num.empty()) return 0;
    std::size_t bits = mpz_sizeinbase(e->den.get_mpz_t(), 2);
    for (const auto& c : e->num)
      if (c != 0) bits += mpz_sizeinbase(c.get_mpz_t(), 2);
    return bits;
  }
  return 1;
}

double Scalar::magnitude() const {
  if (const auto* e = exact()) {
    if (e->num.empty()) return 0.0;
    const double n = static_cast<double>(field_->conductor);
    double re = 0, im = 0;
    const double den = e->den.get_d();
    for (unsigned i = 0; i < e->num.size(); ++i) {
      if (e->num[i] == 0) continue;
      double c = e->num[i].get_d() / den;
      re += c * std::cos(2 * M_PI * i / n);
      im += c * std::sin(2 * M_PI * i / n);
    }
    return std::hypot(re, im);
  }
  BigFloat m(field_->precision);
  approx_abs(m, *approx());
  return mpfr_get_d(m.get(), MPFR_RNDN);
}

std::string Scalar::render() const {
  if (!attached()) return "<detached>";
  if (const auto* e = exact()) {
    if (e->num.empty()) return "0";
    std::string out;
    const std::string zeta = "zeta(" + std::to_string(field_->conductor) + ")";
    for (unsigned i = 0; i < e->num.size(); ++i) {
      if (e->num[i] == 0) continue;
      mpq_class c(e->num[i], e->den);
      c.canonicalize();
      bool negative = c < 0;
      if (negative) c = -c;
      if (out.empty())
        out += negative ? "-" : "";
      else
        out += negative ? " - " : " + ";
      std::string power = i == 0 ? "" : (i == 1 ? zeta : zeta + "^" + std::to_string(i));
      if (power.empty())
        out += c.get_str();
      else if (c == 1)
        out += power;
      else
        out += c.get_str() + "*" + power;
    }
    return out;
  }
  const ApproxValue& a = *approx();
  std::string re = render_bigfloat(a.re);
  if (mpfr_zero_p(a.im.get())) return re;
  BigFloat im_abs = a.im;
  mpfr_abs(im_abs.get(), im_abs.get(), MPFR_RNDN);
  const char* sign = mpfr_sgn(a.im.get()) < 0 ? " - " : " + ";
  if (mpfr_zero_p(a.re.get())) return (mpfr_sgn(a.im.get()) < 0 ? "-" : "") + render_bigfloat(im_abs) + "*i";
  return re + sign + render_bigfloat(im_abs) + "*i";
}

// ---------------------------------------------------------------------------
// Literal parser
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := ('+' | '-') factor | power
//   power   := primary ('^' exponent)?
//   exponent:= ('+' | '-')? integer | '(' ('+' | '-')? integer ')'
//   primary := integer | decimal | 'i' | 'zeta' '(' integer ')' | '(' expr ')'

namespace {

class LiteralParser {
 public:
  LiteralParser(std::string_view text, const ScalarField* field) : text_(text), field_(field) {}

  Scalar parse_all() {
    Scalar v = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

  // Lexical scan for zeta orders, without evaluating.
  std::vector<std::uint32_t> scan_orders() {
    std::vector<std::uint32_t> orders;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string word = identifier();
        if (word == "i") {
          orders.push_back(4);
        } else if (word == "zeta") {
          expect('(');
          orders.push_back(small_integer());
          expect(')');
        } else {
          fail("unknown identifier '" + word + "'");
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        number_text();
      } else if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
        ++pos_;
      } else {
        fail("unexpected character '" + std::string(1, c) + "'");
      }
    }
    return orders;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint32_t small_integer() {
    skip_space();
    std::string d = digits();
    if (d.empty()) fail("expected a positive integer");
    if (d.size() > 9) fail("integer too large");
    unsigned long v = std::stoul(d);
    if (v == 0) fail("root order must be positive");
    return static_cast<std::uint32_t>(v);
  }

  // Returns the numeric token and whether it is a decimal (has '.' or exponent).
  std::pair<std::string, bool> number_text() {
    std::size_t start = pos_;
    bool decimal = false;
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      decimal = true;
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits().empty())
        pos_ = save;
      else
        decimal = true;
    }
    std::string token(text_.substr(start, pos_ - start));
    if (token == "." || token.empty()) fail("malformed number");
    return {token, decimal};
  }

  Scalar expr() {
    Scalar v = term();
    while (true) {
      if (accept('+'))
        v += term();
      else if (accept('-'))
        v -= term();
      else
        return v;
    }
  }

  Scalar term() {
    Scalar v = factor();
    while (true) {
      if (accept('*')) {
        v *= factor();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Scalar d = factor();
        if (d.is_zero()) throw ParseError("division by zero", at);
        v /= d;
      } else {
        return v;
      }
    }
  }

  Scalar factor() {
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    return power();
  }

  long exponent() {
    bool paren = accept('(');
    bool negative = false;
    if (accept('-'))
      negative = true;
    else
      accept('+');
    skip_space();
    std::string d = digits();
    if (d.empty()) fail("expected an integer exponent");
    if (d.size() > 12) fail("exponent too large");
    long e = std::stol(d);
    if (paren) expect(')');
    return negative ? -e : e;
  }

  Scalar power() {
    skip_space();
    std::size_t at = pos_;
    // zeta(M)^j is evaluated directly to avoid repeated multiplication.
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      std::string word = identifier();
      std::uint32_t order = 0;
      if (word == "i") {
        order = 4;
      } else if (word == "zeta") {
        expect('(');
        order = small_integer();
        expect(')');
      } else {
        pos_ = at;
        fail("unknown identifier '" + word + "'");
      }
      long e = accept('^') ? exponent() : 1;
      if (field_->is_exact() && field_->conductor() % order != 0) {
        throw ConductorMismatch(std::string(word == "i" ? "i" : "zeta(" + std::to_string(order) + ")") +
                                " is not in Q(zeta_" + std::to_string(field_->conductor()) + ")");
      }
      return field_->root_of_unity(order, e);
    }
    Scalar base = primary();
    if (accept('^')) {
      std::size_t eat = pos_;
      long e = exponent();
      if (e < 0 && base.is_zero()) throw ParseError("division by zero", eat);
      return base.pow(e);
    }
    return base;
  }

  Scalar primary() {
    skip_space();
    if (accept('(')) {
      Scalar v = expr();
      expect(')');
      return v;
    }
    if (pos_ < text_.size() &&
        (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      std::size_t at = pos_;
      auto [token, decimal] = number_text();
      if (decimal) {
        if (field_->is_exact()) throw ParseError("decimal literal '" + token + "' requires approx mode", at);
        ApproxValue v{BigFloat(field_->precision()), BigFloat(field_->precision())};
        mpfr_set_str(v.re.get(), token.c_str(), 10, MPFR_RNDN);
        return Scalar::from_approx(*field_, std::move(v));
      }
      return field_->rational(mpq_class(mpz_class(token)));
    }
    if (pos_ >= text_.size()) fail("unexpected end of literal");
    fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
  }

  std::string_view text_;
  const ScalarField* field_;
  std::size_t pos_ = 0;
};

}  // namespace

Scalar ScalarField::parse(std::string_view text) const {
  LiteralParser parser(text, this);
  return parser.parse_all();
}

Scalar parse_scalar(ScalarField field, std::string_view text) { return field.parse(text); }

std::vector<std::uint32_t> literal_root_orders(std::string_view text) {
  LiteralParser parser(text, nullptr);
  return parser.scan_orders();
}

// ---------------------------------------------------------------------------
// Roots of unity inside the field

namespace {

// Exact mode: if value = zeta_L^t with L = lcm(2, N), return (L, t).
std::optional<std::pair<std::uint32_t, std::uint32_t>> unit_index(const Scalar& value) {
  const ScalarField f = value.field();
  const std::uint32_t n = f.conductor();
  const ExactValue& v = *value.exact();
  if (v.num.empty() || v.den != 1) return std::nullopt;
  const std::uint32_t big = n % 2 == 0 ? n : 2 * n;
  for (std::uint32_t j = 0; j < n; ++j) {
    Scalar z = f.root_of_unity(n, j);
    if (z == value) return std::make_pair(big, n % 2 == 0 ? j : 2 * j);
    if (n % 2 == 1 && -z == value) return std::make_pair(big, (2 * j + n) % big);
  }
  return std::nullopt;
}

Scalar unit_value(ScalarField f, std::uint32_t big, std::uint32_t u) {
  const std::uint32_t n = f.conductor();
  if (big == n) return f.root_of_unity(n, u);
  // big = 2n with n odd
  if (u % 2 == 0) return f.root_of_unity(n, u / 2);
  return -f.root_of_unity(n, ((u + n) / 2) % n);
}

}  // namespace

std::optional<std::vector<Scalar>> kth_roots(const Scalar& value, unsigned k) {
  if (k == 0) throw ScalarError("k-th root with k = 0");
  const ScalarField f = value.field();
  if (value.is_zero()) return std::nullopt;
  if (f.is_exact()) {
    auto idx = unit_index(value);
    if (!idx) return std::nullopt;
    auto [big, t] = *idx;
    if (big % k != 0) return std::nullopt;
    std::vector<Scalar> roots;
    for (std::uint32_t u = 0; u < big; ++u)
      if ((static_cast<std::uint64_t>(u) * k) % big == t) roots.push_back(unit_value(f, big, u));
    if (roots.size() != k) return std::nullopt;
    return roots;
  }
  const ApproxValue& a = *value.approx();
  const unsigned prec = f.precision();
  BigFloat radius(prec), angle(prec);
  approx_abs(radius, a);
  mpfr_atan2(angle.get(), a.im.get(), a.re.get(), MPFR_RNDN);
  mpfr_rootn_ui(radius.get(), radius.get(), k, MPFR_RNDN);
  mpfr_div_ui(angle.get(), angle.get(), k, MPFR_RNDN);
  ApproxValue principal = approx_zero(prec);
  mpfr_sin_cos(principal.im.get(), principal.re.get(), angle.get(), MPFR_RNDN);
  mpfr_mul(principal.re.get(), principal.re.get(), radius.get(), MPFR_RNDN);
  mpfr_mul(principal.im.get(), principal.im.get(), radius.get(), MPFR_RNDN);
  Scalar p = Scalar::from_approx(f, std::move(principal));
  std::vector<Scalar> roots;
  for (unsigned j = 0; j < k; ++j) roots.push_back(p * f.root_of_unity(k, j));
  return roots;
}

std::optional<std::uint32_t> root_of_unity_order(const Scalar& value) {
  const ScalarField f = value.field();
  if (f.is_exact()) {
    auto idx = unit_index(value);
    if (!idx) return std::nullopt;
    auto [big, t] = *idx;
    return big / std::gcd(big, t == 0 ? big : t);
  }
  Scalar power = value;
  for (std::uint32_t d = 1; d <= 4096; ++d) {
    if (power.is_one()) return d;
    power *= value;
  }
  return std::nullopt;
}

}  // namespace rigmon
