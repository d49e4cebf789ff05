#include "conicopf/network_model.hpp"

#include <cmath>

namespace conicopf {

BranchCoefficients branch_coefficients(const Branch& branch) {
  const std::complex<double> y = branch.series_admittance;
  const std::complex<double> t = branch.tap;
  if (y == std::complex<double>(0.0, 0.0))
    throw ModelError("degenerate branch: zero series admittance");
  if (std::abs(t) == 0.0) throw ModelError("degenerate branch: zero tap");
  const std::complex<double> ys = std::conj(y);
  const std::complex<double> shunt{0.0, -branch.charging_b / 2.0};
  BranchCoefficients c;
  c.ff = (shunt + ys) / std::norm(t);
  c.ft = -ys / t;
  c.tf = -ys / std::conj(t);
  c.tt = shunt + ys;
  return c;
}

IncidenceMaps incidence(const Network& net) {
  IncidenceMaps maps;
  const std::size_t n = net.buses.size();
  maps.gens_at.resize(n);
  maps.branches_from.resize(n);
  maps.branches_to.resize(n);
  for (std::size_t g = 0; g < net.generators.size(); ++g)
    maps.gens_at[net.generators[g].bus].push_back(static_cast<int>(g));
  for (std::size_t l = 0; l < net.branches.size(); ++l) {
    maps.branches_from[net.branches[l].from].push_back(static_cast<int>(l));
    maps.branches_to[net.branches[l].to].push_back(static_cast<int>(l));
  }
  return maps;
}

ObjectiveSpec apply_objective(const Network& net, ObjectiveMode mode) {
  ObjectiveSpec spec;
  spec.mode = mode;
  spec.cost.reserve(net.generators.size());
  for (const auto& g : net.generators) {
    if (mode == ObjectiveMode::ActiveLoss)
      spec.cost.push_back({0.0, 1.0, 0.0});
    else
      spec.cost.push_back({g.c2, g.c1, g.c0});
  }
  return spec;
}

}  // namespace conicopf
