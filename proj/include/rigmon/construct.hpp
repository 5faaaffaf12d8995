#pragma once

// Builders for rigid Pochhammer representations of turbine groups from
// numerical local data (epsilon; b; lambda_i; xi_j; m_j), together with the
// recognition checks that certify their output.
//
// Coordinates: without a shaft the representation space is indexed by
// (j, i), 0 <= j < k, 0 <= i < l, at position l j + i; a shaft adds the
// coordinate 0 in front and shifts everything by one.

#include <optional>
#include <vector>

#include "rigmon/group.hpp"
#include "rigmon/linalg.hpp"
#include "rigmon/pochhammer.hpp"
#include "rigmon/report.hpp"

namespace rigmon {

struct LocalData {
  TurbineParams params;
  Scalar epsilon;
  std::optional<Scalar> b;  // present iff params.shaft
  Vector lambdas;           // lambda_1..lambda_l
  Vector xis;               // xi_1..xi_nu
  std::vector<long> mults;  // m_1..m_nu

  ScalarField field() const { return epsilon.field(); }
  // Fills `mults` with the rigid shape for the parameters.
  static LocalData rigid(const TurbineParams& params, Scalar epsilon, std::optional<Scalar> b, Vector lambdas,
                         Vector xis);
};

// Rigid multiplicity shape: shaft (l, ..., l, 1) with nu = k + 1; no shaft
// (l, ..., l, l - 1, 1) with nu = k + 1, or (1, ..., 1) with nu = k when l = 1.
std::vector<long> rigid_multiplicities(const TurbineParams& params);

// (-1)^{(k-1) l} (b) epsilon^{r l}: the value of lambda_1...lambda_l prod xi_j^{m_j}.
Scalar fuchs_rhs(const LocalData& data);

// eta_1 = (-1)^{k-1} eps^r / (xi_1...xi_k);
// eta_2 = (-1)^{k-1} eps^r b / (xi_1...xi_{k+1})            (shaft)
//       = (-1)^{k-1} eps^r / (xi_1...xi_{k-1} xi_{k+1})    (no shaft).
// Requires nu = k + 1 and nonzero xis.
std::pair<Scalar, Scalar> derived_etas(const LocalData& data);

// Every hypothesis of the applicable construction as a named condition.
// Never throws on mathematical failures; structural problems (wrong counts)
// are reported as the "structure" condition.
ConditionReport validate_local_data(const LocalData& data);

struct CoefficientSolution {
  // Shaft: the recurrence a[0] = -1 (convention), a[1..k] column entries,
  // with lambda = lambda_1 (l = 1) or eta_2 (l >= 2).
  // No shaft: a[0..k-1] with z^k + sum a_i z^i = prod_{i<=k}(z - xi_i).
  Vector a;
  // No shaft, l = 1: the column entries b_i = eps^{-r} lambda_1 a_i.
  // No shaft, l >= 2: b[0..k-1] for (z - xi_{k+1}) prod_{i<k}(z - xi_i).
  // Shaft, l >= 2: b[0..k-1] for prod_{i<=k}(z - xi_i).
  Vector b;
  Vector e;  // e_i = -a_i / a_0 (index 0 unused, left zero)
  Vector f;  // f_i = -b_i / b_0
  std::optional<Scalar> eta1;
  std::optional<Scalar> eta2;
};

// Monic polynomial coefficients of prod (z - roots), lowest degree first.
Vector monic_from_roots(ScalarField field, const Vector& roots);

// a_0 = -1, a_1..a_k for the shaft matrices with l = 1 and special eigenvalue
// lambda, such that the built omega_inf has characteristic polynomial
// prod (z - xi_i). Does not check a_k != 0.
Vector shaft_recurrence(const Scalar& eps_r, const Scalar& b, const Scalar& lambda, const Vector& xis);

// Validated solve for l = 1 with shaft. Throws ValidationError when the
// data fail validation or a_k vanishes (b = some xi_i).
CoefficientSolution solve_shaft_coefficients(const LocalData& data);
// Coefficients for the l >= 2 extensions (and l = 1 without shaft).
CoefficientSolution solve_extension_coefficients(const LocalData& data);

struct BuildOptions {
  bool validate = true;  // reject invalid data before building
  bool verify = true;    // run recognition checks before returning
};

struct Construction {
  TurbineRepresentation rep;
  CoefficientSolution coefficients;
  ConditionReport verification;
  // Extensions only: the block matrices before conjugation, the Pochhammer
  // tuple for (lambda; eta_1, eta_2) and the pinned eigenbasis E with
  // E^{-1} (A_1...A_l) E = C_0.
  std::optional<Matrix> block_omega0;
  std::optional<Matrix> block_a_bullet;
  std::optional<PochhammerTuple> sphere;
  std::optional<Matrix> eigenbasis;
};

Construction build_ell1_with_shaft(const LocalData& data, const BuildOptions& options = {});
Construction build_ell1_without_shaft(const LocalData& data, const BuildOptions& options = {});
// l = 1 inputs delegate to the direct builders.
Construction build_extension_with_shaft(const LocalData& data, const BuildOptions& options = {});
Construction build_extension_without_shaft(const LocalData& data, const BuildOptions& options = {});
// Dispatch on shaft.
Construction build_representation(const LocalData& data, const BuildOptions& options = {});

// Recognition: delta = eps I, alpha_i pseudo-reflections with eigenvalues
// lambda_i (alpha_0 with eps^r b^{-k}), omega_0 / omega_inf spectra,
// determinant form of the Fuchs relation, presentation relations and the
// Pochhammer condition on the transversal loops.
ConditionReport extract_and_verify_local_data(const TurbineRepresentation& rep, const LocalData& claimed);

// Claimed semisimple spectra for omega_0, alpha_1..alpha_l, omega_inf (the
// omega_0 entry is empty when the k-th roots of eps^r are not in the field).
std::vector<std::optional<std::vector<SpectrumClaim>>> local_spectrum_claims(const LocalData& data);

struct AlphaInfinityCheck {
  Matrix value;        // delta^r omega_inf^{-k}
  bool words_agree = false;  // equals the product of the transversal loops
  std::size_t rank_minus_identity = 0;
  bool ok = false;  // words agree and no eigenvalue 1
};
AlphaInfinityCheck check_alpha_infinity(const TurbineRepresentation& rep);

// (omega_0^{-1}, alpha_1, ..., alpha_l, omega_inf): product is the identity.
std::vector<Matrix> sphere_projection(const TurbineRepresentation& rep);

// det(z I - M) evaluated at z.
Scalar characteristic_value(const Matrix& m, const Scalar& z);

}  // namespace rigmon
