#pragma once

// Command-line driver: JSON job documents in, structured reports out.
//
// Document schema (all scalars as literal strings):
//   {n, k, l, shaft, variant, r?, s?, epsilon, b?, lambdas: [..], xis: [..],
//    mults?: [..], field?: {mode, conductor? | precision?, tolerance?},
//    matrices?: {omega0, alpha: [alpha_1..alpha_l], alpha0?, omega_inf?, delta?}}
// Matrices are row-major arrays of scalar literals. A construct report is a
// valid verify document.

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "rigmon/construct.hpp"

namespace rigmon::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_validation = 2, exit_certification = 3 };

enum class Format { human, json };

// Raised for malformed documents and unusable options (exit code 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Field selection from the command line; unset members defer to the document.
struct FieldRequest {
  std::optional<std::string> conductor;  // "auto" or a positive integer
  std::optional<long> precision;         // bits; selects approx mode
  std::optional<std::string> tolerance;  // e.g. "1e-30"; selects approx mode
};

struct JobSpec {
  std::string command;  // construct | verify | classify | example
  nlohmann::json document;
  FieldRequest field;
};

struct JobResult {
  int exit_code = exit_ok;
  nlohmann::json report;
};

// Exact conductor or approx precision from flags, then the document's
// "field" object, then auto = lcm of every root order in the literals.
ScalarField resolve_field(const nlohmann::json& document, const FieldRequest& request);

TurbineParams parse_params(const nlohmann::json& document);
LocalData parse_local_data(const nlohmann::json& document, ScalarField field);
// Missing alpha0 / omega_inf / delta are completed from the relations
// (alpha0 = eps^r omega0^-k, omega_inf = (alpha_1...alpha_l)^-1 omega0,
// delta = eps I) when the needed data are present.
TurbineRepresentation parse_representation(const nlohmann::json& document, ScalarField field,
                                           const std::optional<Scalar>& epsilon);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& rows, ScalarField field);

JobResult cmd_construct(const JobSpec& job);
JobResult cmd_verify(const JobSpec& job);
JobResult cmd_classify(const JobSpec& job);
JobResult cmd_example(const JobSpec& job);
// Dispatch on job.command; converts parse errors into exit code 1.
JobResult run_job(const JobSpec& job);

std::string render_human(const nlohmann::json& report);

// Full command line: `rigmon <command> [--input PATH] [--format human|json]
// [--conductor N|auto] [--precision BITS] [--tol EPS] [--sweep PATH]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rigmon::cli
