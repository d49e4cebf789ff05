#pragma once

#include <array>
#include <complex>
#include <vector>

#include "conicopf/network.hpp"

namespace conicopf {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Complex coefficients of the lifted line-flow equations:
///   p_f + j q_f = ff * V_kk + ft * V_km
///   p_t + j q_t = tf * V_mk + tt * V_mm
/// where V_km stands for v_k v_m^* and V_mk = V_km^*.
struct BranchCoefficients {
  std::complex<double> ff, ft, tf, tt;
};

/// Derive the four flow coefficients from branch data. Throws ModelError on
/// a degenerate branch (zero series admittance or zero tap magnitude).
BranchCoefficients branch_coefficients(const Branch& branch);

/// Per-bus maps used by the power balance equations: generators at each bus
/// and branches by from/to end. Every generator and branch end appears in
/// exactly one set.
struct IncidenceMaps {
  std::vector<std::vector<int>> gens_at;
  std::vector<std::vector<int>> branches_from;
  std::vector<std::vector<int>> branches_to;
};

IncidenceMaps incidence(const Network& net);

enum class ObjectiveMode { GenerationCost, ActiveLoss };

/// Cost coefficients in effect per generator. Active-loss mode forces
/// (c2, c1, c0) = (0, 1, 0) so the objective is total generation in p.u.
/// (MW once scaled by base_mva).
struct ObjectiveSpec {
  ObjectiveMode mode = ObjectiveMode::GenerationCost;
  std::vector<std::array<double, 3>> cost;  // (c2, c1, c0) per generator
};

ObjectiveSpec apply_objective(const Network& net, ObjectiveMode mode);

}  // namespace conicopf
