#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfc/solution.hpp"

namespace sfc {

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;  // +infinity when unbounded
  bool integer = false;

  bool operator==(const Variable&) const = default;
};

struct Term {
  std::size_t var = 0;
  double coef = 0.0;

  bool operator==(const Term&) const = default;
};

enum class Sense : std::uint8_t { LessEqual, GreaterEqual, Equal };

/// Family id of the budget row added by ModelOptions::max_servers.
inline constexpr int kBudgetFamily = 0;

struct Constraint {
  std::string name;
  int family = 0;  // 9..21 and 23, or kBudgetFamily
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;

  bool operator==(const Constraint&) const = default;
};

/// What a model variable stands for; lets solver values be mapped back onto
/// a Provisioning. Not part of the interchange formats.
struct VariableRole {
  enum class Kind : std::uint8_t { Placement, Assignment, Transition, Traffic, MaxUtilization, Deployment };
  Kind kind = Kind::MaxUtilization;
  std::size_t chain = 0;
  std::size_t position = 0;  // 0-based
  NodeIndex node = 0;        // server for x/y, origin for z, node for b
  NodeIndex to = 0;          // destination for z
  VnfIndex vnf = 0;
};

struct MipModel {
  std::string name = "sfc";
  bool maximize = false;
  std::vector<Variable> variables;
  std::vector<Term> objective;
  std::vector<Constraint> constraints;
  std::vector<VariableRole> roles;  // empty for parsed models

  std::optional<std::size_t> find(std::string_view variable) const;

  /// Structural equality: everything except roles.
  bool operator==(const MipModel& other) const {
    return name == other.name && maximize == other.maximize && variables == other.variables &&
           objective == other.objective && constraints == other.constraints;
  }
};

struct ModelOptions {
  double beta = 0.0;
  bool priority_extension = false;
  TrafficMode mode = TrafficMode::Physical;
  std::optional<std::size_t> max_servers;  // optional budget row on sum of x
};

/// Big-M used by the per-server utilization rows. At least 1 + max gamma,
/// and large enough that a row for a VNF type not placed on the server never
/// binds.
double big_m(const VnfCatalog& catalog);

/// Builds the placement/routing MIP for an instance.
MipModel build_model(const Instance& instance, const ModelOptions& options);

/// Row and column counts implied by the instance dimensions.
struct ModelCounts {
  std::size_t x = 0, y = 0, z = 0, b = 0, rho = 1, d = 0;
  std::map<int, std::size_t> rows;  // family -> count

  std::size_t variables() const { return x + y + z + b + rho + d; }
  std::size_t constraints() const;
};
ModelCounts expected_counts(const Instance& instance, const ModelOptions& options);

/// Replaces characters outside [A-Za-z0-9_] with '_'.
std::string sanitize_name(std::string_view id);

enum class ModelFormat : std::uint8_t { Lp, Mps };
ModelFormat parse_model_format(std::string_view text);

std::string export_model(const MipModel& model, ModelFormat format);
std::string export_lp(const MipModel& model);
std::string export_mps(const MipModel& model);
MipModel parse_lp(std::string_view text);
MipModel parse_mps(std::string_view text);

using VariableValues = std::map<std::string, double>;

/// Reads solver output: one "name value" pair per line (blank lines and
/// lines starting with '#' are skipped), or a JSON object name -> value.
VariableValues parse_values(std::string_view text);
std::string values_json(const VariableValues& values);

/// Raised when solver values do not describe a feasible provisioning.
class FeasibilityMismatch : public InputError {
 public:
  FeasibilityMismatch(const std::string& message, std::vector<int> constraints)
      : InputError(message), constraints_(std::move(constraints)) {}
  const std::vector<int>& constraints() const noexcept { return constraints_; }

 private:
  std::vector<int> constraints_;
};

/// Maps solver values of a built model back to a Provisioning and validates
/// it: every model variable must be present, the result must be feasible,
/// and the solver's rho must match the recomputed maximum utilization.
Provisioning ingest_solution(const MipModel& model, const Instance& instance, const ModelOptions& options,
                             const VariableValues& values);

/// Full start vector (every model variable) for a feasible provisioning.
VariableValues warm_start(const MipModel& model, const Instance& instance, const ModelOptions& options,
                          const Provisioning& p);

/// Objective value of a value assignment under the model's objective row.
double evaluate_objective(const MipModel& model, const VariableValues& values);

enum class SolveStatus : std::uint8_t { Optimal, Feasible, Infeasible, Timeout };
std::string_view to_string(SolveStatus status);

struct SolverResult {
  SolveStatus status = SolveStatus::Infeasible;
  VariableValues values;
  double objective = 0.0;
  double wall_time = 0.0;
};

/// An out-of-process (or test) solver: takes a model, returns values.
using MipBackend = std::function<SolverResult(const MipModel&)>;

/// Priority-aware two-phase solve through a backend: first maximize the
/// number of deployed chains, then minimize the weighted objective with the
/// deployment flags fixed.
Provisioning two_phase_solve(const Instance& instance, double beta, TrafficMode mode, const MipBackend& backend);

}  // namespace sfc
