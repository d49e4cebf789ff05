#pragma once

#include <Eigen/Dense>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "conicopf/chordal.hpp"
#include "conicopf/conic_program.hpp"
#include "conicopf/network.hpp"
#include "conicopf/network_model.hpp"

namespace conicopf {

enum class RelaxationKind { SDR, CHR, SOCR, NSDR, TCR, STCR };

const char* to_string(RelaxationKind k);
RelaxationKind relaxation_from_string(const std::string& name);

struct RelaxationOptions {
  bool socr_3x3 = false;  // alternate 3x3 PSD encoding of the pair cones
};

/// A relaxation's conic program together with the variable layout needed to
/// interpret solutions: lifted matrix entries, generator and flow variables,
/// and the Hermitian blocks used for rank diagnostics.
struct LiftedModel {
  RelaxationKind kind = RelaxationKind::SDR;
  ObjectiveMode mode = ObjectiveMode::GenerationCost;
  double base_mva = 0.0;
  ConicProgram program;

  std::vector<int> v_diag;  // V_kk per bus
  std::map<std::pair<int, int>, std::pair<int, int>> pair_vars;  // (a<b)
  std::vector<int> p_gen, q_gen;
  std::vector<int> p_from, q_from, p_to, q_to;
  std::vector<int> re_v, im_v;  // bus voltage variables (nSDR/TCR only)

  /// Hermitian block description; vertex -1 stands for the unit border row
  /// of the bordered blocks.
  struct HermBlock {
    std::vector<int> vertices;
  };
  std::vector<HermBlock> herm_blocks;
};

/// Lifted pairs each relaxation constrains: branch pairs for SOCR/TCR,
/// branch plus reference pairs for STCR, clique-internal pairs for CHR, all
/// pairs for SDR/nSDR.
std::set<std::pair<int, int>> required_pairs(RelaxationKind kind,
                                             const Network& net,
                                             const CliqueDecomposition* cliques);

/// Shared lifted core: variables, power balances, lifted flow equations,
/// generator/voltage boxes, line limits and the objective. Every branch's
/// pair must be present in `pairs`.
LiftedModel build_shared_core(const Network& net, const ObjectiveSpec& objective,
                              const std::set<std::pair<int, int>>& pairs);

/// Full relaxation of the given kind. CHR requires a clique decomposition.
LiftedModel build(RelaxationKind kind, const Network& net,
                  const ObjectiveSpec& objective,
                  const CliqueDecomposition* cliques = nullptr,
                  const RelaxationOptions& options = {});

/// Reference-bus secant inequality and zero-angle equality on the lifted
/// voltage: (vmin+vmax) Re(v1) - V11 >= vmin*vmax and Im(v1) = 0. Returns
/// the two equality row ids.
std::pair<int, int> reference_bus_rlt(ConicProgram& prog, int re_v1, int im_v1,
                                      int v11, double v_min, double v_max);

/// Recover a voltage vector from a PSD lifted matrix: v = V e_1 / sqrt(V_11).
Eigen::VectorXcd lift_sdr_to_nsdr(const Eigen::MatrixXcd& V);

/// Assemble the complex Hermitian matrix of a diagnostic block from a primal
/// solution vector.
Eigen::MatrixXcd assemble_block(const LiftedModel& model,
                                const LiftedModel::HermBlock& block,
                                const Eigen::VectorXd& primal);

}  // namespace conicopf
