#pragma once

// Pochhammer tuples on the punctured sphere: n pseudo-reflections A_1..A_n
// whose product A_inf is conjugate to eta_1 I_{n-1} + eta_2.

#include <vector>

#include "rigmon/linalg.hpp"
#include "rigmon/report.hpp"

namespace rigmon {

struct SphereLocalData {
  Vector lambdas;  // special eigenvalues lambda_1..lambda_n
  Scalar eta1;
  Scalar eta2;
};

struct PochhammerTuple {
  std::vector<Matrix> a;  // A_1..A_n
  Matrix a_inf;           // A_1 ... A_n
  SphereLocalData data;
};

// Checks the hypotheses: nonzero scalars, lambda_i != 1, lambda_i != eta_1,
// eta_1 != eta_2 and lambda_1...lambda_n = eta_1^(n-1) eta_2. For n = 1 only
// the conditions mentioning eta_2 apply (eta_1 I_0 is empty).
ConditionReport validate_sphere_data(const SphereLocalData& data);

// A_i is the identity outside column i; column i holds
// (lambda_j - eta_1)/eta_1 above the diagonal, lambda_i on it and
// lambda_j - eta_1 below. Throws ValidationError on bad data and
// CertificationError if the product fails the rigid-shape check.
PochhammerTuple build_dsp_tuple(const SphereLocalData& data);

struct PochhammerReport {
  bool ok = false;
  std::vector<std::size_t> codims;  // m - dim ker(M_i - I)
  std::size_t codim_sum = 0;
  std::size_t intersection_dim = 0;  // dim of the joint kernel
};

// sum codim ker(M_i - I) = m and the kernels intersect trivially.
PochhammerReport check_pochhammer_condition(const std::vector<Matrix>& monodromies);

// A_inf conjugate to eta_1 I_{n-1} + eta_2 (semisimple, verified).
bool check_sphere_rigid_shape(const Matrix& a_inf, const Scalar& eta1, const Scalar& eta2);

}  // namespace rigmon
