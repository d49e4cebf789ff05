#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

namespace conicopf {

/// Cone layout of the variable vector x = [free | nonneg | soc... | psd...].
/// PSD blocks are stored as scaled lower triangles (svec: column-major,
/// off-diagonals times sqrt(2)) so that dot products match trace inner
/// products.
struct ConeLayout {
  int n_free = 0;
  int n_nonneg = 0;
  std::vector<int> soc;  // dimension of each second-order cone (>= 2)
  std::vector<int> psd;  // side of each PSD block

  int cone_dim() const;
  int total_dim() const { return n_free + cone_dim(); }
  int barrier_degree() const;
};

/// min c'x  s.t.  A x = b,  x_cone in K.
struct StandardProblem {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  ConeLayout cones;
};

struct IpmSettings {
  double tolerance = 1.49e-8;
  int max_iterations = 200;
  bool verify_directions = false;  // assert Newton system residuals (tests)
  bool equilibrate = true;
  bool trace = false;  // per-iteration log on stderr
};

enum class IpmStatus {
  Optimal,
  NearOptimal,
  PrimalInfeasible,
  DualInfeasible,
  IterationLimit,
  NumericalError,
};

struct IpmResult {
  IpmStatus status = IpmStatus::NumericalError;
  Eigen::VectorXd x;  // de-homogenized primal (certificate ray if infeasible)
  Eigen::VectorXd y;  // equality duals
  Eigen::VectorXd z;  // cone duals (cone coordinates only)
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double rel_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  std::string message;
};

IpmResult solve_standard(const StandardProblem& problem,
                         const IpmSettings& settings = {});

/// svec/mat helpers shared with diagnostics code.
Eigen::MatrixXd mat_of_svec(const Eigen::VectorXd& v, int side);
Eigen::VectorXd svec_of_mat(const Eigen::MatrixXd& M);

}  // namespace conicopf
