#include "rigmon/rigidity.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>

#include "rigmon/pochhammer.hpp"

namespace rigmon {

// ---------------------------------------------------------------------------
// Rigidity index

RigidityBreakdown rigidity_breakdown(const std::vector<Matrix>& local_monodromies, long punctures, std::size_t m,
                                     const std::vector<std::optional<std::vector<SpectrumClaim>>>& claims) {
  if (!claims.empty() && claims.size() != local_monodromies.size())
    throw RigidityError("spectrum claims must match the monodromy list");
  RigidityBreakdown b;
  b.punctures = punctures;
  b.rank = m;
  long total = 0;
  for (std::size_t i = 0; i < local_monodromies.size(); ++i) {
    const Matrix& mat = local_monodromies[i];
    if (mat.rows() != m || mat.cols() != m) throw DimensionMismatch("local monodromy has the wrong size");
    std::size_t z = centralizer_dim(mat);
    b.centralizer_dims.push_back(z);
    total += static_cast<long>(z);
    std::optional<std::size_t> closed;
    if (!claims.empty() && claims[i]) {
      SpectrumReport s = verify_semisimple_spectrum(mat, *claims[i]);
      if (!s.ok) throw RigidityError("local monodromy " + std::to_string(i) + " fails its claimed spectrum: " + s.detail);
      std::size_t sum = 0;
      for (const auto& c : *claims[i]) sum += c.multiplicity * c.multiplicity;
      if (sum != z)
        throw RigidityError("centralizer cross-check failed for local monodromy " + std::to_string(i) + ": Sylvester " +
                            std::to_string(z) + " vs closed form " + std::to_string(sum));
      closed = sum;
    }
    b.closed_forms.push_back(closed);
  }
  b.index = total - punctures * static_cast<long>(m * m);
  return b;
}

long rigidity_index(const std::vector<Matrix>& local_monodromies, long punctures, std::size_t m) {
  return rigidity_breakdown(local_monodromies, punctures, m).index;
}

std::vector<Matrix> local_monodromies(const TurbineRepresentation& rep) {
  std::vector<Matrix> out;
  out.push_back(rep.omega0);
  for (long i = 1; i <= rep.params.l; ++i) out.push_back(rep.alpha.at(i));
  out.push_back(rep.omega_inf);
  return out;
}

std::string to_string(RigidityVerdict v) {
  switch (v) {
    case RigidityVerdict::rigid:
      return "rigid";
    case RigidityVerdict::not_rigid:
      return "not_rigid";
    case RigidityVerdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

std::vector<Matrix> transversal_loop_images(const TurbineRepresentation& rep) {
  std::vector<Matrix> out;
  for (const auto& loop : distinguished_words(rep.params).loops) out.push_back(evaluate_word(rep, loop.word));
  return out;
}

RigidityResult is_rigid(const TurbineRepresentation& rep, bool irreducible,
                        const std::vector<std::optional<std::vector<SpectrumClaim>>>& claims) {
  if (!irreducible)
    throw RigidityError("the rigidity criterion is stated for irreducible local systems only");
  RigidityResult result;
  result.breakdown = rigidity_breakdown(local_monodromies(rep), rep.params.l, rep.dim, claims);
  result.pochhammer = check_pochhammer_condition(transversal_loop_images(rep)).ok;
  const bool two = result.breakdown.index == 2;
  if (rep.params.shaft || result.pochhammer) {
    result.verdict = two ? RigidityVerdict::rigid : RigidityVerdict::not_rigid;
    result.reason = "rigidity index " + std::to_string(result.breakdown.index);
  } else {
    result.verdict = RigidityVerdict::inconclusive;
    result.reason = "no shaft and the transversal loops fail the Pochhammer condition; index " +
                    std::to_string(result.breakdown.index) + " does not decide rigidity";
  }
  return result;
}

// ---------------------------------------------------------------------------
// Strong connectivity (Tarjan)

bool strongly_connected(std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& arcs) {
  if (vertices == 0) return true;
  std::vector<std::vector<std::size_t>> adj(vertices);
  for (auto [a, b] : arcs) {
    if (a >= vertices || b >= vertices) throw RigidityError("arc endpoint out of range");
    adj[a].push_back(b);
  }
  std::vector<long> index(vertices, -1), low(vertices, 0);
  std::vector<bool> on_stack(vertices, false);
  std::vector<std::size_t> stack;
  long counter = 0;
  std::size_t components = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : adj[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      ++components;
      while (true) {
        std::size_t w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        if (w == v) break;
      }
    }
  };
  for (std::size_t v = 0; v < vertices; ++v)
    if (index[v] < 0) visit(v);
  return components == 1;
}

// ---------------------------------------------------------------------------
// Irreducibility certificate

IrreducibilityCertificate irreducibility_certificate(const std::vector<Matrix>& generators,
                                                     std::vector<std::string> labels) {
  if (generators.empty()) throw RigidityError("no generators");
  const std::size_t m = generators.front().rows();
  const ScalarField f = generators.front().field();
  if (labels.empty())
    for (std::size_t i = 0; i < generators.size(); ++i) labels.push_back(std::to_string(i + 1));

  IrreducibilityCertificate cert;
  cert.labels = labels;
  std::vector<RankOneDecomposition> decs;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    auto d = is_pseudo_reflection(generators[i]);
    if (!d) throw RigidityError("generator " + labels[i] + " is not a pseudo-reflection");
    decs.push_back(std::move(*d));
  }

  std::vector<bool> seen(m, false);
  bool standard = true;
  for (const auto& d : decs) {
    if (!d.selector || seen[*d.selector]) {
      standard = false;
      break;
    }
    seen[*d.selector] = true;
  }

  std::vector<Matrix> working = generators;
  if (!standard) {
    // Rows of T are the covectors v_i of M_i = I - u_i v_i^T; then
    // T M_i T^-1 = I - (T u_i) e_i^T.
    if (decs.size() != m)
      throw RigidityError("standard-form basis change needs exactly " + std::to_string(m) + " generators, got " +
                          std::to_string(decs.size()));
    std::vector<Vector> rows;
    for (const auto& d : decs) {
      if (d.selector) {
        Vector e(m, f.zero());
        e[*d.selector] = f.one();
        rows.push_back(std::move(e));
      } else {
        rows.push_back(d.row);
      }
    }
    Matrix t = Matrix::from_rows(f, rows);
    Matrix t_inv;
    try {
      t_inv = t.inverse();
    } catch (const SingularMatrix&) {
      throw RigidityError("standard-form basis change failed: the generator covectors are linearly dependent");
    }
    cert.basis_changed = true;
    for (std::size_t i = 0; i < decs.size(); ++i) {
      working[i] = t * generators[i] * t_inv;
      auto d = is_pseudo_reflection(working[i]);
      if (!d || !d->selector || *d->selector != i)
        throw RigidityError("standard-form basis change failed for generator " + labels[i]);
      decs[i] = std::move(*d);
    }
  }

  cert.vertex_count = decs.size();
  for (const auto& d : decs) cert.directions.push_back(*d.selector);
  for (std::size_t i = 0; i < decs.size(); ++i)
    for (std::size_t j = 0; j < decs.size(); ++j)
      if (i != j && !decs[j].u[cert.directions[i]].is_zero()) cert.arcs.emplace_back(i, j);
  cert.generators = decs;
  cert.strongly_connected = strongly_connected(cert.vertex_count, cert.arcs);
  Matrix prod = product(f, m, working);
  cert.product_rank = rank(Matrix::identity(f, m) - prod);
  cert.invertible = cert.product_rank == m;
  cert.verdict = cert.strongly_connected && cert.invertible;
  return cert;
}

IrreducibilityCertificate irreducibility_certificate(const TurbineRepresentation& rep) {
  std::vector<std::string> labels;
  for (const auto& loop : distinguished_words(rep.params).loops) labels.push_back(loop.label);
  return irreducibility_certificate(transversal_loop_images(rep), labels);
}

// ---------------------------------------------------------------------------
// Burnside oracle

namespace {

using u64 = std::uint64_t;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

// A prime p = 1 mod N together with an element of exact order N.
struct ModularEmbedding {
  u64 p = 0;
  u64 root = 0;
};

ModularEmbedding find_embedding(std::uint32_t n, u64 start) {
  std::vector<u64> prime_factors;
  for (u64 q = 2, x = n; x > 1; ++q)
    if (x % q == 0) {
      prime_factors.push_back(q);
      while (x % q == 0) x /= q;
    }
  u64 t = start / n;
  while (true) {
    u64 p = t * n + 1;
    --t;
    mpz_class candidate(std::to_string(p));
    if (mpz_probab_prime_p(candidate.get_mpz_t(), 30) == 0) continue;
    for (u64 h = 2; h < p; ++h) {
      u64 w = powmod(h, (p - 1) / n, p);
      bool primitive = true;
      for (u64 q : prime_factors)
        if (powmod(w, n / q, p) == 1) primitive = false;
      if (primitive) return {p, w};
    }
  }
}

std::optional<u64> reduce_mod(const Scalar& s, const ModularEmbedding& e) {
  const ExactValue& v = *s.exact();
  if (v.num.empty()) return 0;
  mpz_class pz(std::to_string(e.p));
  mpz_class d = v.den % pz;
  if (d == 0) return std::nullopt;
  u64 acc = 0, power = 1;
  for (const auto& c : v.num) {
    mpz_class r = c % pz;
    if (r < 0) r += pz;
    acc = (acc + mulmod(static_cast<u64>(r.get_ui()), power, e.p)) % e.p;
    power = mulmod(power, e.root, e.p);
  }
  return mulmod(acc, powmod(static_cast<u64>(d.get_ui()), e.p - 2, e.p), e.p);
}

// Spin the identity under left multiplication by the generators and count
// the dimension of the span, over F_p.
std::optional<std::size_t> algebra_dim_mod_p(const std::vector<Matrix>& gens, const ModularEmbedding& e) {
  const std::size_t m = gens.front().rows();
  const u64 p = e.p;
  std::vector<std::vector<u64>> g;
  for (const auto& mat : gens) {
    std::vector<u64> flat(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        auto r = reduce_mod(mat(i, j), e);
        if (!r) return std::nullopt;
        flat[i * m + j] = *r;
      }
    g.push_back(std::move(flat));
  }
  std::vector<std::vector<u64>> basis;  // echelon rows, pivot normalized to 1
  std::vector<std::size_t> pivots;
  std::vector<std::vector<u64>> queue;
  auto insert = [&](std::vector<u64> v) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      u64 c = v[pivots[b]];
      if (c == 0) continue;
      for (std::size_t x = 0; x < v.size(); ++x)
        if (basis[b][x]) v[x] = (v[x] + p - mulmod(c, basis[b][x], p)) % p;
    }
    std::size_t piv = 0;
    while (piv < v.size() && v[piv] == 0) ++piv;
    if (piv == v.size()) return false;
    u64 inv = powmod(v[piv], p - 2, p);
    for (auto& x : v) x = mulmod(x, inv, p);
    basis.push_back(v);
    pivots.push_back(piv);
    return true;
  };
  std::vector<u64> id(m * m, 0);
  for (std::size_t i = 0; i < m; ++i) id[i * m + i] = 1;
  insert(id);
  queue.push_back(id);
  while (!queue.empty() && basis.size() < m * m) {
    std::vector<u64> b = std::move(queue.back());
    queue.pop_back();
    for (const auto& gen : g) {
      std::vector<u64> prod(m * m, 0);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) {
          u64 a = gen[i * m + k];
          if (!a) continue;
          for (std::size_t j = 0; j < m; ++j) prod[i * m + j] = (prod[i * m + j] + mulmod(a, b[k * m + j], p)) % p;
        }
      if (insert(prod)) queue.push_back(std::move(prod));
      if (basis.size() == m * m) break;
    }
  }
  return basis.size();
}

std::size_t algebra_dim_exact(const std::vector<Matrix>& gens) {
  const std::size_t m = gens.front().rows();
  const ScalarField f = gens.front().field();
  std::vector<Vector> basis;
  std::vector<std::size_t> pivots;
  auto flatten = [&](const Matrix& a) {
    Vector v;
    v.reserve(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) v.push_back(a(i, j));
    return v;
  };
  auto insert = [&](Vector v) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (v[pivots[b]].is_zero()) continue;
      Scalar c = v[pivots[b]];
      for (std::size_t x = 0; x < v.size(); ++x)
        if (!basis[b][x].is_zero()) v[x] -= c * basis[b][x];
      v[pivots[b]] = f.zero();
    }
    std::size_t piv = 0;
    while (piv < v.size() && v[piv].is_zero()) ++piv;
    if (piv == v.size()) return false;
    Scalar inv = v[piv].inverse();
    for (auto& x : v)
      if (!x.is_zero()) x *= inv;
    v[piv] = f.one();
    basis.push_back(std::move(v));
    pivots.push_back(piv);
    return true;
  };
  Matrix id = Matrix::identity(f, m);
  insert(flatten(id));
  std::vector<Matrix> queue{id};
  while (!queue.empty() && basis.size() < m * m) {
    Matrix b = std::move(queue.back());
    queue.pop_back();
    for (const auto& gen : gens) {
      Matrix prod = gen * b;
      if (insert(flatten(prod))) queue.push_back(std::move(prod));
      if (basis.size() == m * m) break;
    }
  }
  return basis.size();
}

}  // namespace

bool burnside_oracle(const std::vector<Matrix>& generators) {
  if (generators.empty()) return false;
  const std::size_t m = generators.front().rows();
  for (const auto& g : generators)
    if (g.rows() != m || g.cols() != m) throw DimensionMismatch("generators differ in dimension");
  const ScalarField f = generators.front().field();
  if (f.is_exact()) {
    // Independence of the reductions mod p implies independence over the
    // field, so reaching m^2 modulo a prime settles the question.
    u64 start = (u64{1} << 31) - 1;
    for (int attempt = 0; attempt < 2; ++attempt) {
      ModularEmbedding e = find_embedding(f.conductor(), start);
      auto dim = algebra_dim_mod_p(generators, e);
      if (dim && *dim == m * m) return true;
      start = e.p - 1;
    }
  }
  return algebra_dim_exact(generators) == m * m;
}

}  // namespace rigmon
