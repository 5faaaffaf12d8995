#pragma once

// Certification: rigidity index from centralizer dimensions, the rig = 2
// criterion for irreducible systems, the digraph criterion for groups
// generated by pseudo-reflections, and an independent Burnside oracle.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rigmon/group.hpp"
#include "rigmon/linalg.hpp"
#include "rigmon/report.hpp"

namespace rigmon {

class RigidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RigidityBreakdown {
  std::vector<std::size_t> centralizer_dims;
  long punctures = 0;  // l
  std::size_t rank = 0;
  long index = 0;
  // For each matrix with a claimed spectrum: the closed form sum d_i^2.
  std::vector<std::optional<std::size_t>> closed_forms;
};

// sum_i z(M_i) - l m^2. `claims`, when given, holds for each matrix an
// optional claimed semisimple spectrum; those are verified and their
// closed-form centralizer dimension sum d_i^2 is cross-checked against the
// Sylvester rank (mismatch throws RigidityError).
RigidityBreakdown rigidity_breakdown(const std::vector<Matrix>& local_monodromies, long punctures, std::size_t m,
                                     const std::vector<std::optional<std::vector<SpectrumClaim>>>& claims = {});
long rigidity_index(const std::vector<Matrix>& local_monodromies, long punctures, std::size_t m);

// Local monodromies of a turbine representation: omega_0, alpha_1..alpha_l, omega_inf.
std::vector<Matrix> local_monodromies(const TurbineRepresentation& rep);

enum class RigidityVerdict { rigid, not_rigid, inconclusive };
std::string to_string(RigidityVerdict v);

struct RigidityResult {
  RigidityVerdict verdict = RigidityVerdict::inconclusive;
  RigidityBreakdown breakdown;
  bool pochhammer = false;  // transversal loops satisfy the Pochhammer condition
  std::string reason;
};

// Requires irreducible = true (throws RigidityError otherwise). With a shaft
// the index criterion applies directly; without one it applies to
// Pochhammer systems and is inconclusive for other inputs.
RigidityResult is_rigid(const TurbineRepresentation& rep, bool irreducible,
                        const std::vector<std::optional<std::vector<SpectrumClaim>>>& claims = {});

// Tarjan's algorithm: true iff a single strongly connected component covers
// all vertices.
bool strongly_connected(std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& arcs);

struct IrreducibilityCertificate {
  std::vector<std::string> labels;                  // generator labels, vertex order
  std::vector<RankOneDecomposition> generators;     // standard forms I - v e_c^T
  std::vector<std::size_t> directions;              // c for each vertex
  bool basis_changed = false;                       // a standard-form basis change was applied
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;  // i -> j iff e_{c_i}^T v_j != 0
  bool strongly_connected = false;
  std::size_t product_rank = 0;  // rank(I - M_1 ... M_t)
  bool invertible = false;
  bool verdict = false;
};

// Digraph certificate over the transversal loop images (omega_0 conjugates of
// the alpha_i, plus alpha_0 with a shaft), in loop order. Throws
// RigidityError when a loop image is not a pseudo-reflection or no
// standard-form basis exists.
IrreducibilityCertificate irreducibility_certificate(const TurbineRepresentation& rep);
// Same for a bare generator tuple (labels "1".."t").
IrreducibilityCertificate irreducibility_certificate(const std::vector<Matrix>& generators,
                                                     std::vector<std::string> labels = {});

// Images of the transversal loops, in loop order.
std::vector<Matrix> transversal_loop_images(const TurbineRepresentation& rep);

// True iff the algebra generated by the matrices is all of M_m.
bool burnside_oracle(const std::vector<Matrix>& generators);

}  // namespace rigmon
