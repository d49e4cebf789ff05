#include "conicopf/report.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "conicopf/matpower.hpp"

namespace conicopf {

double gap_percent(double lb, double ub) {
  if (!(ub > 0.0))
    throw std::domain_error("gap requires a positive upper bound");
  return 100.0 * (1.0 - lb / ub);
}

double rank_diagnostic(const LiftedModel& model,
                       const Eigen::VectorXd& primal) {
  double worst = 0.0;
  for (const auto& blk : model.herm_blocks) {
    if (blk.vertices.size() < 2) continue;
    Eigen::MatrixXcd H = assemble_block(model, blk, primal);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
        H, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();  // ascending
    const int s = static_cast<int>(ev.size());
    double top = ev[s - 1], second = std::max(0.0, ev[s - 2]);
    if (top <= 0.0) continue;
    worst = std::max(worst, std::min(1.0, second / top));
  }
  return worst;
}

ReferenceBounds ReferenceBounds::load(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open reference bounds file: " + path);
  nlohmann::json j;
  in >> j;
  ReferenceBounds rb;
  for (auto mode : {ObjectiveMode::GenerationCost, ObjectiveMode::ActiveLoss}) {
    const char* key = mode == ObjectiveMode::GenerationCost ? "cost" : "loss";
    if (!j.contains(key)) continue;
    for (auto it = j[key].begin(); it != j[key].end(); ++it)
      rb.set(it.key(), mode, it.value().get<double>());
  }
  return rb;
}

void ReferenceBounds::set(const std::string& case_id, ObjectiveMode mode,
                          double ub) {
  bounds_[{case_id, static_cast<int>(mode)}] = ub;
}

std::optional<double> ReferenceBounds::find(const std::string& case_id,
                                            ObjectiveMode mode) const {
  auto it = bounds_.find({case_id, static_cast<int>(mode)});
  if (it == bounds_.end()) return std::nullopt;
  return it->second;
}

namespace {

const char* mode_name(ObjectiveMode m) {
  return m == ObjectiveMode::GenerationCost ? "cost" : "loss";
}

}  // namespace

RelaxationResult solve_relaxation(const Network& net, RelaxationKind kind,
                                  ObjectiveMode mode,
                                  const SolverSettings& settings,
                                  std::optional<double> upper_bound,
                                  const RelaxationOptions& options,
                                  LiftedModel* model_out,
                                  Solution* solution_out) {
  RelaxationResult r;
  r.case_id = net.name;
  r.kind = kind;
  r.mode = mode;
  r.upper_bound = upper_bound;

  auto t0 = std::chrono::steady_clock::now();
  ObjectiveSpec obj = apply_objective(net, mode);
  CliqueDecomposition cliques;
  const CliqueDecomposition* cl = nullptr;
  if (kind == RelaxationKind::CHR) {
    cliques = decompose(build_graph(net));
    cl = &cliques;
  }
  LiftedModel model = build(kind, net, obj, cl, options);
  r.build_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  Solution sol = solve(model.program, settings);
  // A stalled plain SOCR solve is retried with the equivalent 3x3 blocks.
  if (kind == RelaxationKind::SOCR && !options.socr_3x3 && !sol.usable()) {
    RelaxationOptions alt = options;
    alt.socr_3x3 = true;
    auto t1 = std::chrono::steady_clock::now();
    LiftedModel model2 = build(kind, net, obj, cl, alt);
    r.build_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t1)
            .count();
    Solution sol2 = solve(model2.program, settings);
    if (sol2.usable()) {
      model = std::move(model2);
      sol = std::move(sol2);
      r.message = "retried with 3x3 encoding; ";
    }
  }

  r.status = sol.status;
  r.message += sol.message;
  r.iterations = sol.iterations;
  r.solve_seconds = sol.solve_seconds;
  if (sol.usable()) {
    double scale = mode == ObjectiveMode::ActiveLoss ? net.base_mva : 1.0;
    r.lower_bound = sol.objective * scale;
    r.rank_ratio = rank_diagnostic(model, sol.primal);
    if (upper_bound) r.gap = gap_percent(r.lower_bound, *upper_bound);
  }
  if (model_out) *model_out = std::move(model);
  if (solution_out) *solution_out = std::move(sol);
  return r;
}

void write_csv_header(std::ostream& out) {
  out << "case,relaxation,objective,lower_bound,upper_bound,gap_percent,"
         "rank_ratio,build_s,solve_s,status\n";
}

void write_csv_row(std::ostream& out, const RelaxationResult& r) {
  out << r.case_id << ',' << to_string(r.kind) << ',' << mode_name(r.mode)
      << ',';
  out << std::setprecision(12) << r.lower_bound << ',';
  if (r.upper_bound) out << *r.upper_bound;
  out << ',';
  if (std::isfinite(r.gap)) out << std::setprecision(6) << r.gap;
  out << ',';
  if (std::isfinite(r.rank_ratio)) out << std::setprecision(4) << r.rank_ratio;
  out << ',' << std::setprecision(4) << r.build_seconds << ','
      << r.solve_seconds << ',' << to_string(r.status) << "\n";
}

int run_batch(const BatchRequest& request, std::ostream& table_out,
              std::ostream* csv_out,
              std::vector<RelaxationResult>* results_out) {
  int exit_code = 0;
  if (csv_out) write_csv_header(*csv_out);
  std::vector<RelaxationResult> all;

  for (ObjectiveMode mode : request.modes) {
    table_out << (mode == ObjectiveMode::GenerationCost
                      ? "Cost minimization [$/h]"
                      : "Loss minimization [MW]")
              << "\n";
    table_out << std::left << std::setw(16) << "case" << std::right
              << std::setw(14) << "ub";
    for (auto kind : request.kinds)
      table_out << std::setw(10) << (std::string(to_string(kind)) + " gap");
    for (auto kind : request.kinds)
      table_out << std::setw(10) << (std::string(to_string(kind)) + " s");
    table_out << "\n";

    for (const auto& path : request.case_paths) {
      std::string case_id = path;
      std::vector<RelaxationResult> row;
      try {
        Network net = validate(load_case(path));
        case_id = net.name;
        for (auto kind : request.kinds) {
          auto ub = request.bounds.find(net.name, mode);
          RelaxationResult r =
              solve_relaxation(net, kind, mode, request.settings, ub,
                               request.options);
          if (!r.message.empty() && r.status == SolveStatus::Error)
            exit_code = 1;
          if (r.status == SolveStatus::Error ||
              r.status == SolveStatus::Infeasible ||
              r.status == SolveStatus::Unbounded)
            exit_code = 1;
          row.push_back(r);
        }
      } catch (const std::exception& e) {
        RelaxationResult r;
        r.case_id = case_id;
        r.mode = mode;
        r.status = SolveStatus::Error;
        r.message = e.what();
        row.assign(1, r);
        exit_code = 1;
      }
      table_out << std::left << std::setw(16) << case_id << std::right;
      if (!row.empty() && row.front().upper_bound)
        table_out << std::setw(14) << std::fixed << std::setprecision(2)
                  << *row.front().upper_bound;
      else
        table_out << std::setw(14) << "-";
      for (const auto& r : row) {
        if (std::isfinite(r.gap))
          table_out << std::setw(10) << std::fixed << std::setprecision(2)
                    << r.gap;
        else
          table_out << std::setw(10)
                    << (r.status == SolveStatus::Error ? "err" : "-");
      }
      for (const auto& r : row)
        table_out << std::setw(10) << std::fixed << std::setprecision(2)
                  << (r.build_seconds + r.solve_seconds);
      table_out << "\n";
      table_out.unsetf(std::ios::fixed);
      if (csv_out)
        for (const auto& r : row) write_csv_row(*csv_out, r);
      all.insert(all.end(), row.begin(), row.end());
    }
    table_out << "\n";
  }
  if (results_out) *results_out = std::move(all);
  return exit_code;
}

}  // namespace conicopf
