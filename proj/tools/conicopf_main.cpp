#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "conicopf/report.hpp"

namespace {

using namespace conicopf;

int cmd_solve(const std::string& case_path, const std::string& relaxation,
              const std::string& objective, bool socr_3x3, double tol,
              const std::string& out_csv, const std::string& bounds_path,
              const std::string& dump_path) {
  Network net;
  RelaxationKind kind;
  ObjectiveMode mode;
  ReferenceBounds bounds;
  try {
    net = validate(load_case(case_path));
    kind = relaxation_from_string(relaxation);
    if (objective == "cost")
      mode = ObjectiveMode::GenerationCost;
    else if (objective == "loss")
      mode = ObjectiveMode::ActiveLoss;
    else
      throw std::invalid_argument("unknown objective: " + objective);
    if (!bounds_path.empty()) bounds = ReferenceBounds::load(bounds_path);
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& w : net.warnings) std::cerr << "warning: " << w << "\n";

  SolverSettings settings;
  settings.tolerance = tol;
  RelaxationOptions options;
  options.socr_3x3 = socr_3x3;

  LiftedModel model;
  Solution sol;
  RelaxationResult r =
      solve_relaxation(net, kind, mode, settings,
                       bounds.find(net.name, mode), options, &model, &sol);

  if (!dump_path.empty()) {
    std::ofstream dump(dump_path);
    model.program.write_text(dump);
  }
  std::cout << "case " << r.case_id << ", " << to_string(kind) << ", "
            << objective << "\n";
  std::cout << "  status       " << to_string(r.status);
  if (!r.message.empty()) std::cout << "  (" << r.message << ")";
  std::cout << "\n";
  if (sol.usable()) {
    const char* unit = mode == ObjectiveMode::ActiveLoss ? " MW" : " $/h";
    std::cout << "  lower bound  " << std::setprecision(10) << r.lower_bound
              << unit << "\n";
    if (r.upper_bound) {
      std::cout << "  upper bound  " << *r.upper_bound << unit << "\n";
      std::cout << "  gap          " << std::setprecision(4) << r.gap
                << " %\n";
    }
    std::cout << "  rank ratio   " << std::setprecision(3) << r.rank_ratio
              << "\n";
    std::cout << "  iterations   " << r.iterations << "\n";
    std::cout << "  time         " << std::setprecision(3)
              << r.build_seconds << " s build, " << r.solve_seconds
              << " s solve\n";
  }
  if (!out_csv.empty()) {
    std::ofstream csv(out_csv);
    write_csv_header(csv);
    write_csv_row(csv, r);
  }
  return sol.usable() ? 0 : 1;
}

int cmd_batch(const std::string& manifest_path) {
  BatchRequest req;
  std::string csv_path;
  try {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest");
    nlohmann::json j;
    in >> j;
    for (const auto& c : j.at("cases")) req.case_paths.push_back(c);
    if (j.contains("relaxations"))
      for (const auto& k : j["relaxations"])
        req.kinds.push_back(relaxation_from_string(k));
    else
      req.kinds = {RelaxationKind::SOCR, RelaxationKind::TCR,
                   RelaxationKind::STCR, RelaxationKind::CHR,
                   RelaxationKind::SDR, RelaxationKind::NSDR};
    if (j.contains("objectives")) {
      for (const auto& o : j["objectives"])
        req.modes.push_back(o == "loss" ? ObjectiveMode::ActiveLoss
                                        : ObjectiveMode::GenerationCost);
    } else {
      req.modes = {ObjectiveMode::GenerationCost};
    }
    if (j.contains("bounds"))
      req.bounds = ReferenceBounds::load(j["bounds"]);
    if (j.contains("tol")) req.settings.tolerance = j["tol"];
    if (j.contains("socr_3x3")) req.options.socr_3x3 = j["socr_3x3"];
    if (j.contains("csv")) csv_path = j["csv"];
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  std::ofstream csv;
  if (!csv_path.empty()) csv.open(csv_path);
  return run_batch(req, std::cout, csv_path.empty() ? nullptr : &csv);
}

int cmd_cliques(const std::string& case_path, const std::string& dot_path) {
  try {
    Network net = validate(load_case(case_path));
    SparsityGraph g = build_graph(net);
    CliqueDecomposition dec = decompose(g);
    std::cout << "vertices " << g.n << ", edges " << g.edge_count()
              << ", fill " << dec.fill_edges.size() << ", cliques "
              << dec.cliques.size() << "\n";
    std::size_t largest = 0;
    for (const auto& K : dec.cliques) largest = std::max(largest, K.size());
    std::cout << "largest clique " << largest << "\n";
    for (const auto& K : dec.cliques) {
      std::cout << " ";
      for (int v : K) std::cout << " " << net.buses[v].id;
      std::cout << "\n";
    }
    if (!dot_path.empty()) {
      std::ofstream dot(dot_path);
      write_dot(g, dec, dot);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conic relaxations of AC optimal power flow"};
  app.require_subcommand(1);

  std::string case_path, relaxation = "sdr", objective = "cost";
  std::string out_csv, bounds_path, dump_path, manifest_path, dot_path;
  bool socr_3x3 = false;
  double tol = 1.49e-8;

  auto* solve_cmd = app.add_subcommand("solve", "solve one relaxation");
  solve_cmd->add_option("--case", case_path, "MATPOWER case file")
      ->required();
  solve_cmd->add_option("--relaxation", relaxation,
                        "sdr|chr|socr|nsdr|tcr|stcr");
  solve_cmd->add_option("--objective", objective, "cost|loss");
  solve_cmd->add_flag("--socr-3x3", socr_3x3,
                      "use the 3x3 block encoding for SOCR");
  solve_cmd->add_option("--tol", tol, "solver tolerance");
  solve_cmd->add_option("--out", out_csv, "write a CSV result row");
  solve_cmd->add_option("--bounds", bounds_path,
                        "reference upper bounds JSON");
  solve_cmd->add_option("--dump", dump_path,
                        "dump the standard-form program as text");

  auto* batch_cmd = app.add_subcommand("batch", "run a batch manifest");
  batch_cmd->add_option("--manifest", manifest_path, "JSON manifest")
      ->required();

  auto* cliques_cmd =
      app.add_subcommand("cliques", "show the chordal decomposition");
  cliques_cmd->add_option("--case", case_path, "MATPOWER case file")
      ->required();
  cliques_cmd->add_option("--dot", dot_path, "write a DOT dump");

  CLI11_PARSE(app, argc, argv);

  if (solve_cmd->parsed())
    return cmd_solve(case_path, relaxation, objective, socr_3x3, tol,
                     out_csv, bounds_path, dump_path);
  if (batch_cmd->parsed()) return cmd_batch(manifest_path);
  return cmd_cliques(case_path, dot_path);
}
