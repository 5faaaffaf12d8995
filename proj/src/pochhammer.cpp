#include "rigmon/pochhammer.hpp"

namespace rigmon {

ConditionReport validate_sphere_data(const SphereLocalData& data) {
  ConditionReport report;
  const std::size_t n = data.lambdas.size();
  if (n == 0) {
    report.add("nonempty", "at least one special eigenvalue", false);
    return report;
  }
  const ScalarField f = data.eta2.field();
  bool nonzero = !data.eta2.is_zero() && (n == 1 || !data.eta1.is_zero());
  for (const auto& l : data.lambdas) nonzero = nonzero && !l.is_zero();
  report.add("nonzero", "all scalars are nonzero", nonzero);

  for (std::size_t i = 0; i < n; ++i)
    report.add("lambda_not_one", "special eigenvalue lambda_" + std::to_string(i + 1) + " != 1",
               !data.lambdas[i].is_one(), "lambda_" + std::to_string(i + 1) + " = " + data.lambdas[i].render());
  if (n >= 2) {
    for (std::size_t i = 0; i < n; ++i)
      report.add("lambda_not_eta1", "lambda_" + std::to_string(i + 1) + " != eta_1", data.lambdas[i] != data.eta1,
                 "both equal " + data.eta1.render());
    report.add("eta_distinct", "eta_1 != eta_2", data.eta1 != data.eta2, "both equal " + data.eta1.render());
  }
  Scalar lhs = f.one();
  for (const auto& l : data.lambdas) lhs *= l;
  Scalar rhs = (n >= 2 ? data.eta1.pow(static_cast<long>(n) - 1) : f.one()) * data.eta2;
  report.add("product_relation", "lambda_1...lambda_n = eta_1^(n-1) eta_2", lhs == rhs,
             "lhs " + lhs.render() + ", rhs " + rhs.render());
  return report;
}

PochhammerTuple build_dsp_tuple(const SphereLocalData& data) {
  ConditionReport report = validate_sphere_data(data);
  if (!report.ok()) throw ValidationError(report);
  const std::size_t n = data.lambdas.size();
  const ScalarField f = data.eta2.field();
  PochhammerTuple t;
  t.data = data;
  Scalar eta1_inv = n >= 2 ? data.eta1.inverse() : f.one();
  for (std::size_t c = 0; c < n; ++c) {
    Matrix a = Matrix::identity(f, n);
    for (std::size_t j = 0; j < n; ++j) {
      if (j < c)
        a(j, c) = (data.lambdas[j] - data.eta1) * eta1_inv;
      else if (j == c)
        a(j, c) = data.lambdas[j];
      else
        a(j, c) = data.lambdas[j] - data.eta1;
    }
    t.a.push_back(std::move(a));
  }
  t.a_inf = product(f, n, t.a);
  ConditionReport post;
  post.add("rigid_shape", "A_inf conjugate to eta_1 I_(n-1) + eta_2",
           check_sphere_rigid_shape(t.a_inf, data.eta1, data.eta2));
  for (std::size_t i = 0; i < n; ++i) {
    auto d = is_pseudo_reflection(t.a[i]);
    post.add("pseudo_reflection", "A_" + std::to_string(i + 1) + " is a pseudo-reflection with special eigenvalue lambda_" +
                                      std::to_string(i + 1),
             d && d->special_eigenvalue == data.lambdas[i]);
  }
  if (!post.ok()) throw CertificationError(post);
  return t;
}

PochhammerReport check_pochhammer_condition(const std::vector<Matrix>& monodromies) {
  PochhammerReport report;
  if (monodromies.empty()) return report;
  const std::size_t m = monodromies.front().rows();
  const ScalarField f = monodromies.front().field();
  std::vector<Matrix> shifted;
  for (const auto& mat : monodromies) {
    if (mat.rows() != m || mat.cols() != m) throw DimensionMismatch("monodromies differ in dimension");
    Matrix d = mat - Matrix::identity(f, m);
    std::size_t codim = rank(d);
    report.codims.push_back(codim);
    report.codim_sum += codim;
    shifted.push_back(std::move(d));
  }
  report.intersection_dim = m - rank(stack(shifted));
  report.ok = report.codim_sum == m && report.intersection_dim == 0;
  return report;
}

bool check_sphere_rigid_shape(const Matrix& a_inf, const Scalar& eta1, const Scalar& eta2) {
  const std::size_t n = a_inf.rows();
  if (n == 0) return false;
  if (n == 1) return verify_semisimple_spectrum(a_inf, {{eta2, 1}}).ok;
  if (eta1 == eta2) throw LinalgError("check_sphere_rigid_shape needs eta_1 != eta_2");
  return verify_semisimple_spectrum(a_inf, {{eta1, n - 1}, {eta2, 1}}).ok;
}

}  // namespace rigmon
