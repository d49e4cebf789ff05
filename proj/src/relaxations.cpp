#include "conicopf/relaxations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conicopf {

const char* to_string(RelaxationKind k) {
  switch (k) {
    case RelaxationKind::SDR: return "sdr";
    case RelaxationKind::CHR: return "chr";
    case RelaxationKind::SOCR: return "socr";
    case RelaxationKind::NSDR: return "nsdr";
    case RelaxationKind::TCR: return "tcr";
    case RelaxationKind::STCR: return "stcr";
  }
  return "?";
}

RelaxationKind relaxation_from_string(const std::string& name) {
  if (name == "sdr") return RelaxationKind::SDR;
  if (name == "chr") return RelaxationKind::CHR;
  if (name == "socr") return RelaxationKind::SOCR;
  if (name == "nsdr") return RelaxationKind::NSDR;
  if (name == "tcr") return RelaxationKind::TCR;
  if (name == "stcr") return RelaxationKind::STCR;
  throw std::invalid_argument("unknown relaxation: " + name);
}

namespace {

std::pair<int, int> sorted_pair(int a, int b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

std::set<std::pair<int, int>> required_pairs(
    RelaxationKind kind, const Network& net,
    const CliqueDecomposition* cliques) {
  std::set<std::pair<int, int>> pairs;
  const int n = net.n_buses();
  switch (kind) {
    case RelaxationKind::SDR:
    case RelaxationKind::NSDR:
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.emplace(a, b);
      break;
    case RelaxationKind::CHR: {
      if (!cliques)
        throw ConstructionError("CHR requires a clique decomposition");
      for (const auto& K : cliques->cliques)
        for (std::size_t i = 0; i < K.size(); ++i)
          for (std::size_t j = i + 1; j < K.size(); ++j)
            pairs.emplace(K[i], K[j]);
      break;
    }
    case RelaxationKind::SOCR:
    case RelaxationKind::TCR:
      for (const auto& br : net.branches)
        pairs.insert(sorted_pair(br.from, br.to));
      break;
    case RelaxationKind::STCR:
      for (const auto& br : net.branches) {
        pairs.insert(sorted_pair(br.from, br.to));
        if (br.from != 0) pairs.emplace(0, br.from);
        if (br.to != 0) pairs.emplace(0, br.to);
      }
      break;
  }
  return pairs;
}

LiftedModel build_shared_core(const Network& net,
                              const ObjectiveSpec& objective,
                              const std::set<std::pair<int, int>>& pairs) {
  LiftedModel M;
  M.mode = objective.mode;
  M.base_mva = net.base_mva;
  ConicProgram& P = M.program;
  const int n = net.n_buses();

  for (int k = 0; k < n; ++k)
    M.v_diag.push_back(P.add_variable("Vkk[" + std::to_string(k) + "]"));
  for (const auto& [a, b] : pairs) {
    std::string suffix =
        "[" + std::to_string(a) + "," + std::to_string(b) + "]";
    int re = P.add_variable("ReV" + suffix);
    int im = P.add_variable("ImV" + suffix);
    M.pair_vars[{a, b}] = {re, im};
  }
  const int ng = static_cast<int>(net.generators.size());
  for (int g = 0; g < ng; ++g) {
    M.p_gen.push_back(P.add_variable("pG[" + std::to_string(g) + "]"));
    M.q_gen.push_back(P.add_variable("qG[" + std::to_string(g) + "]"));
  }
  const int nl = static_cast<int>(net.branches.size());
  for (int l = 0; l < nl; ++l) {
    std::string s = "[" + std::to_string(l) + "]";
    M.p_from.push_back(P.add_variable("pf" + s));
    M.q_from.push_back(P.add_variable("qf" + s));
    M.p_to.push_back(P.add_variable("pt" + s));
    M.q_to.push_back(P.add_variable("qt" + s));
  }

  // Lifted line-flow equations, real and imaginary parts.
  for (int l = 0; l < nl; ++l) {
    const Branch& br = net.branches[l];
    auto key = sorted_pair(br.from, br.to);
    auto it = M.pair_vars.find(key);
    if (it == M.pair_vars.end())
      throw ConstructionError("missing lifted pair for branch " +
                              std::to_string(l));
    auto [re, im] = it->second;
    double sgn = br.from < br.to ? 1.0 : -1.0;  // V_km = Re + j*sgn*Im
    BranchCoefficients cf = branch_coefficients(br);
    int vf = M.v_diag[br.from], vt = M.v_diag[br.to];
    P.add_equality({{M.p_from[l], 1.0},
                    {vf, -cf.ff.real()},
                    {re, -cf.ft.real()},
                    {im, sgn * cf.ft.imag()}},
                   0.0);
    P.add_equality({{M.q_from[l], 1.0},
                    {vf, -cf.ff.imag()},
                    {re, -cf.ft.imag()},
                    {im, -sgn * cf.ft.real()}},
                   0.0);
    P.add_equality({{M.p_to[l], 1.0},
                    {vt, -cf.tt.real()},
                    {re, -cf.tf.real()},
                    {im, -sgn * cf.tf.imag()}},
                   0.0);
    P.add_equality({{M.q_to[l], 1.0},
                    {vt, -cf.tt.imag()},
                    {re, -cf.tf.imag()},
                    {im, sgn * cf.tf.real()}},
                   0.0);
  }

  // Power balances.
  IncidenceMaps inc = incidence(net);
  for (int k = 0; k < n; ++k) {
    const Bus& bus = net.buses[k];
    std::vector<std::pair<int, double>> prow, qrow;
    for (int g : inc.gens_at[k]) {
      prow.emplace_back(M.p_gen[g], 1.0);
      qrow.emplace_back(M.q_gen[g], 1.0);
    }
    if (bus.shunt_g != 0.0) prow.emplace_back(M.v_diag[k], -bus.shunt_g);
    if (bus.shunt_b != 0.0) qrow.emplace_back(M.v_diag[k], bus.shunt_b);
    for (int l : inc.branches_from[k]) {
      prow.emplace_back(M.p_from[l], -1.0);
      qrow.emplace_back(M.q_from[l], -1.0);
    }
    for (int l : inc.branches_to[k]) {
      prow.emplace_back(M.p_to[l], -1.0);
      qrow.emplace_back(M.q_to[l], -1.0);
    }
    P.add_equality(prow, bus.p_demand);
    P.add_equality(qrow, bus.q_demand);
  }

  // Boxes through nonnegative slacks.
  std::vector<int> slacks;
  auto box = [&](int var, double lo, double hi, const std::string& tag) {
    int s_lo = P.add_variable("lo(" + tag + ")");
    int s_hi = P.add_variable("hi(" + tag + ")");
    P.add_equality({{var, 1.0}, {s_lo, -1.0}}, lo);
    P.add_equality({{var, 1.0}, {s_hi, 1.0}}, hi);
    slacks.push_back(s_lo);
    slacks.push_back(s_hi);
  };
  for (int k = 0; k < n; ++k) {
    const Bus& bus = net.buses[k];
    box(M.v_diag[k], bus.v_min * bus.v_min, bus.v_max * bus.v_max,
        "Vkk[" + std::to_string(k) + "]");
  }
  for (int g = 0; g < ng; ++g) {
    const Gen& gen = net.generators[g];
    box(M.p_gen[g], gen.p_min, gen.p_max, "pG[" + std::to_string(g) + "]");
    box(M.q_gen[g], gen.q_min, gen.q_max, "qG[" + std::to_string(g) + "]");
  }
  P.add_nonnegative(slacks);

  // Apparent-power line limits on both ends.
  for (int l = 0; l < nl; ++l) {
    double s_lim = net.branches[l].s_limit;
    P.add_apparent_power_limit(M.p_from[l], M.q_from[l], s_lim);
    P.add_apparent_power_limit(M.p_to[l], M.q_to[l], s_lim);
  }

  // Objective.
  for (int g = 0; g < ng; ++g) {
    const auto& [c2, c1, c0] = objective.cost[g];
    P.add_quadratic_cost_epigraph(M.p_gen[g], c2, c1);
    P.add_objective_offset(c0);
  }
  return M;
}

namespace {

// Hermitian entry for v_r * conj(v_c) in terms of the lifted pair variables.
HermitianBlockMap::Entry pair_entry(const LiftedModel& M, int r, int c) {
  auto [a, b] = sorted_pair(r, c);
  auto [re, im] = M.pair_vars.at({a, b});
  HermitianBlockMap::Entry e;
  e.re_var = re;
  e.im_var = im;
  e.im_coeff = (r == b) ? -1.0 : 1.0;  // conj when the row vertex is larger
  return e;
}

// Hermitian block over sorted vertices; -1 stands for the bordering 1 row.
void add_hermitian_block(LiftedModel& M, const std::vector<int>& vertices) {
  ConicProgram& P = M.program;
  const int s = static_cast<int>(vertices.size());
  HermitianBlockMap map(s);
  for (int j = 0; j < s; ++j) {
    for (int i = j; i < s; ++i) {
      auto& e = map.at(i, j);
      int vi = vertices[i], vj = vertices[j];
      if (i == j) {
        e.re_var = vi < 0 ? P.pinned_constant(1.0) : M.v_diag[vi];
      } else if (vj < 0) {
        e.re_var = M.re_v[vi];
        e.im_var = M.im_v[vi];
      } else {
        e = pair_entry(M, vi, vj);
      }
    }
  }
  P.add_hermitian_psd(map);
  M.herm_blocks.push_back({vertices});
}

void add_voltage_variables(LiftedModel& M, int n) {
  for (int k = 0; k < n; ++k) {
    M.re_v.push_back(M.program.add_variable("Rev[" + std::to_string(k) + "]"));
    M.im_v.push_back(M.program.add_variable("Imv[" + std::to_string(k) + "]"));
  }
}

}  // namespace

std::pair<int, int> reference_bus_rlt(ConicProgram& prog, int re_v1,
                                      int im_v1, int v11, double v_min,
                                      double v_max) {
  if (!(v_min > 0.0) || v_min > v_max)
    throw ConstructionError("reference bus magnitude bounds must satisfy 0 < "
                            "v_min <= v_max");
  int slack = prog.add_variable("rlt_slack");
  int r1 = prog.add_equality(
      {{re_v1, v_min + v_max}, {v11, -1.0}, {slack, -1.0}}, v_min * v_max);
  prog.add_nonnegative({slack});
  int r2 = prog.add_equality({{im_v1, 1.0}}, 0.0);
  return {r1, r2};
}

LiftedModel build(RelaxationKind kind, const Network& net,
                  const ObjectiveSpec& objective,
                  const CliqueDecomposition* cliques,
                  const RelaxationOptions& options) {
  auto pairs = required_pairs(kind, net, cliques);
  LiftedModel M = build_shared_core(net, objective, pairs);
  M.kind = kind;
  ConicProgram& P = M.program;
  const int n = net.n_buses();
  const Bus& ref = net.buses[0];

  // Unique branch pairs, in deterministic order.
  std::set<std::pair<int, int>> branch_pairs;
  for (const auto& br : net.branches)
    branch_pairs.insert(sorted_pair(br.from, br.to));

  switch (kind) {
    case RelaxationKind::SDR: {
      std::vector<int> all(n);
      for (int k = 0; k < n; ++k) all[k] = k;
      add_hermitian_block(M, all);
      break;
    }
    case RelaxationKind::CHR: {
      if (!cliques)
        throw ConstructionError("CHR requires a clique decomposition");
      for (const auto& K : cliques->cliques) add_hermitian_block(M, K);
      break;
    }
    case RelaxationKind::SOCR: {
      for (const auto& [a, b] : branch_pairs) {
        auto [re, im] = M.pair_vars.at({a, b});
        if (!options.socr_3x3) {
          P.add_rotated_2x2(M.v_diag[a], M.v_diag[b], re, im);
        } else {
          int sum = P.add_variable("Vsum[" + std::to_string(a) + "," +
                                   std::to_string(b) + "]");
          int dif = P.add_variable("Vdif[" + std::to_string(a) + "," +
                                   std::to_string(b) + "]");
          P.add_equality(
              {{sum, 1.0}, {M.v_diag[a], -1.0}, {M.v_diag[b], -1.0}}, 0.0);
          P.add_equality(
              {{dif, 1.0}, {M.v_diag[a], -1.0}, {M.v_diag[b], 1.0}}, 0.0);
          HermitianBlockMap map(3);
          map.at(0, 0).re_var = sum;
          map.at(1, 1).re_var = sum;
          map.at(2, 2).re_var = sum;
          map.at(2, 0).re_var = re;
          map.at(2, 0).re_coeff = 2.0;
          map.at(2, 0).im_var = im;
          map.at(2, 0).im_coeff = -2.0;
          map.at(2, 1).re_var = dif;
          P.add_hermitian_psd(map);
        }
        M.herm_blocks.push_back({{a, b}});
      }
      break;
    }
    case RelaxationKind::NSDR: {
      add_voltage_variables(M, n);
      reference_bus_rlt(P, M.re_v[0], M.im_v[0], M.v_diag[0], ref.v_min,
                        ref.v_max);
      std::vector<int> bordered(n + 1);
      bordered[0] = -1;
      for (int k = 0; k < n; ++k) bordered[k + 1] = k;
      add_hermitian_block(M, bordered);
      break;
    }
    case RelaxationKind::TCR: {
      add_voltage_variables(M, n);
      reference_bus_rlt(P, M.re_v[0], M.im_v[0], M.v_diag[0], ref.v_min,
                        ref.v_max);
      for (const auto& [a, b] : branch_pairs)
        add_hermitian_block(M, {-1, a, b});
      break;
    }
    case RelaxationKind::STCR: {
      for (const auto& [a, b] : branch_pairs) {
        std::vector<int> verts;
        if (a == 0)
          verts = {0, b};
        else
          verts = {0, a, b};
        add_hermitian_block(M, verts);
      }
      break;
    }
  }
  P.freeze();
  return M;
}

Eigen::VectorXcd lift_sdr_to_nsdr(const Eigen::MatrixXcd& V) {
  const double v11 = V(0, 0).real();
  if (!(v11 > 0.0))
    throw std::domain_error("lifted matrix has nonpositive V_11");
  return V.col(0) / std::sqrt(v11);
}

Eigen::MatrixXcd assemble_block(const LiftedModel& model,
                                const LiftedModel::HermBlock& block,
                                const Eigen::VectorXd& primal) {
  const int s = static_cast<int>(block.vertices.size());
  Eigen::MatrixXcd H(s, s);
  for (int j = 0; j < s; ++j) {
    for (int i = j; i < s; ++i) {
      int vi = block.vertices[i], vj = block.vertices[j];
      std::complex<double> val;
      if (i == j) {
        val = vi < 0 ? 1.0 : primal[model.v_diag[vi]];
      } else if (vj < 0) {
        val = {primal[model.re_v[vi]], primal[model.im_v[vi]]};
      } else {
        auto [a, b] = vi < vj ? std::make_pair(vi, vj)
                              : std::make_pair(vj, vi);
        auto [re, im] = model.pair_vars.at({a, b});
        double sgn = (vi == b) ? -1.0 : 1.0;
        val = {primal[re], sgn * primal[im]};
      }
      H(i, j) = val;
      H(j, i) = std::conj(val);
    }
  }
  return H;
}

}  // namespace conicopf
