#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conicopf/network.hpp"
#include "conicopf/relaxations.hpp"
#include "conicopf/solve.hpp"

namespace conicopf {

/// Optimality gap in percent: 100 (1 - lb/ub). Negative values indicate a
/// lower bound above the reference and are reported as-is. Throws
/// std::domain_error when ub <= 0.
double gap_percent(double lb, double ub);

/// Largest second-to-first eigenvalue ratio over the relaxation's Hermitian
/// blocks; values at or below ~1e-5 indicate a numerically rank-one
/// solution.
double rank_diagnostic(const LiftedModel& model, const Eigen::VectorXd& primal);

/// Reference upper bounds keyed by (case id, objective mode).
class ReferenceBounds {
 public:
  static ReferenceBounds load(const std::string& path);
  void set(const std::string& case_id, ObjectiveMode mode, double ub);
  std::optional<double> find(const std::string& case_id,
                             ObjectiveMode mode) const;

 private:
  std::map<std::pair<std::string, int>, double> bounds_;
};

struct RelaxationResult {
  std::string case_id;
  RelaxationKind kind = RelaxationKind::SDR;
  ObjectiveMode mode = ObjectiveMode::GenerationCost;
  double lower_bound = 0.0;  // $/h in cost mode, MW in loss mode
  std::optional<double> upper_bound;
  double gap = std::numeric_limits<double>::quiet_NaN();  // percent
  double rank_ratio = std::numeric_limits<double>::quiet_NaN();
  double build_seconds = 0.0;
  double solve_seconds = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::Error;
  std::string message;
};

/// Build and solve one relaxation of a validated network. A stalled default
/// SOCR solve is retried with the 3x3 block encoding. The model is returned
/// through `model_out` when provided (for diagnostics beyond the result).
RelaxationResult solve_relaxation(const Network& net, RelaxationKind kind,
                                  ObjectiveMode mode,
                                  const SolverSettings& settings,
                                  std::optional<double> upper_bound,
                                  const RelaxationOptions& options = {},
                                  LiftedModel* model_out = nullptr,
                                  Solution* solution_out = nullptr);

struct BatchRequest {
  std::vector<std::string> case_paths;
  std::vector<RelaxationKind> kinds;
  std::vector<ObjectiveMode> modes;
  SolverSettings settings;
  ReferenceBounds bounds;
  RelaxationOptions options;
};

/// Solve every (case, kind, mode) combination, emitting an aligned text
/// table to `table_out` and, when given, CSV rows to `csv_out`. Failures are
/// isolated per case. Returns 0 on success, 1 if any solve failed.
int run_batch(const BatchRequest& request, std::ostream& table_out,
              std::ostream* csv_out = nullptr,
              std::vector<RelaxationResult>* results_out = nullptr);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const RelaxationResult& r);

}  // namespace conicopf
