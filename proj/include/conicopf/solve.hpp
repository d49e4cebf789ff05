#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "conicopf/conic_program.hpp"
#include "conicopf/conic_solver.hpp"

namespace conicopf {

/// Backend settings, defaulting to the interior-point tolerance used for
/// all reported runs.
struct SolverSettings {
  double tolerance = 1.49e-8;
  int max_iterations = 200;
  bool verify_directions = false;
};

enum class SolveStatus { Optimal, NearOptimal, Infeasible, Unbounded, Error };

const char* to_string(SolveStatus s);

struct Solution {
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;  // model objective, offset included
  Eigen::VectorXd primal;  // one value per ConicProgram variable
  Eigen::VectorXd equality_duals;           // per model equality row
  std::vector<Eigen::VectorXd> cone_duals;  // per model cone block
  int iterations = 0;
  double solve_seconds = 0.0;
  double rel_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::string message;

  bool usable() const {
    return status == SolveStatus::Optimal || status == SolveStatus::NearOptimal;
  }
};

/// Solve a frozen ConicProgram with the built-in conic interior-point
/// backend (nonnegative, second-order, rotated second-order and PSD cones).
/// Near-optimal terminations return the best iterate and are flagged in the
/// status, never upgraded to optimal.
Solution solve(const ConicProgram& prog, const SolverSettings& settings = {});

/// Conversion used by solve(); exposed for tests.
struct StandardFormMap {
  StandardProblem problem;
  std::vector<std::vector<std::pair<int, double>>> reads;  // var -> coords
  int model_equalities = 0;
};
StandardFormMap to_standard_form(const ConicProgram& prog);

}  // namespace conicopf
