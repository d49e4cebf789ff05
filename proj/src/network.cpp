#include "conicopf/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "json.hpp"

namespace conicopf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// MATPOWER column positions (0-based).
enum BusCol { BUS_I = 0, BUS_TYPE, PD, QD, GS, BS, AREA, VM, VA, BASE_KV, ZONE, VMAX, VMIN };
enum GenCol { GEN_BUS = 0, PG, QG, QMAX, QMIN, VG, MBASE, GEN_STATUS, PMAX, PMIN };
enum BranchCol { F_BUS = 0, T_BUS, BR_R, BR_X, BR_B, RATE_A, RATE_B, RATE_C, TAP, SHIFT, BR_STATUS };
enum CostCol { MODEL = 0, STARTUP, SHUTDOWN, NCOST };

constexpr int kRefType = 3;

}  // namespace

Network validate(const RawCase& raw) {
  if (!(raw.base_mva > 0.0))
    throw ValidationError("baseMVA must be positive");
  const double base = raw.base_mva;

  Network net;
  net.name = raw.name;
  net.base_mva = base;

  // Bus pass: find the reference bus, check magnitude bounds.
  std::map<int, int> raw_index;  // bus id -> row
  int ref_row = -1;
  for (std::size_t r = 0; r < raw.bus.size(); ++r) {
    const auto& row = raw.bus[r];
    int id = static_cast<int>(row[BUS_I]);
    if (!raw_index.emplace(id, static_cast<int>(r)).second)
      throw ValidationError("duplicate bus id " + std::to_string(id));
    double vmin = row[VMIN], vmax = row[VMAX];
    if (!(vmin > 0.0))
      throw ValidationError("bus " + std::to_string(id) +
                            ": Vmin must be positive, got " +
                            std::to_string(vmin));
    if (vmin > vmax)
      throw ValidationError("bus " + std::to_string(id) + ": Vmin > Vmax");
    if (static_cast<int>(row[BUS_TYPE]) == kRefType) {
      if (ref_row >= 0)
        throw ValidationError("more than one reference bus");
      ref_row = static_cast<int>(r);
    }
  }
  if (ref_row < 0) throw ValidationError("no reference bus (type 3)");

  // Internal order: reference bus first, the rest by ascending id.
  std::vector<int> order;
  order.push_back(ref_row);
  std::vector<std::pair<int, int>> rest;  // (id, row)
  for (const auto& [id, r] : raw_index)
    if (r != ref_row) rest.emplace_back(id, r);
  std::sort(rest.begin(), rest.end());
  for (const auto& [id, r] : rest) order.push_back(r);

  std::map<int, int> internal;  // bus id -> internal index
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& row = raw.bus[order[k]];
    Bus b;
    b.id = static_cast<int>(row[BUS_I]);
    b.p_demand = row[PD] / base;
    b.q_demand = row[QD] / base;
    b.shunt_g = row[GS] / base;
    b.shunt_b = row[BS] / base;
    b.v_min = row[VMIN];
    b.v_max = row[VMAX];
    net.buses.push_back(b);
    internal[b.id] = static_cast<int>(k);
  }
  net.reference_bus = 0;

  // Generators: drop out-of-service rows, keep gencost rows aligned by
  // original position. 2*ngen gencost rows mean reactive costs follow; only
  // the first half applies.
  if (raw.gencost.size() != raw.gen.size() &&
      raw.gencost.size() != 2 * raw.gen.size())
    throw ValidationError("gencost has " + std::to_string(raw.gencost.size()) +
                          " rows for " + std::to_string(raw.gen.size()) +
                          " generators");
  for (std::size_t r = 0; r < raw.gen.size(); ++r) {
    const auto& row = raw.gen[r];
    if (static_cast<int>(row[GEN_STATUS]) <= 0) continue;
    int bus_id = static_cast<int>(row[GEN_BUS]);
    auto it = internal.find(bus_id);
    if (it == internal.end())
      throw ValidationError("generator " + std::to_string(r + 1) +
                            " references unknown bus " +
                            std::to_string(bus_id));
    Gen g;
    g.bus = it->second;
    g.p_min = row[PMIN] / base;
    g.p_max = row[PMAX] / base;
    g.q_min = row[QMIN] / base;
    g.q_max = row[QMAX] / base;
    if (g.p_min > g.p_max || g.q_min > g.q_max)
      throw ValidationError("generator " + std::to_string(r + 1) +
                            ": empty capacity box");

    const auto& cost = raw.gencost[r];
    if (static_cast<int>(cost[MODEL]) != 2)
      throw UnsupportedFeatureError(
          "generator " + std::to_string(r + 1) +
          ": only polynomial gencost (model 2) is supported");
    int ncost = static_cast<int>(cost[NCOST]);
    if (static_cast<int>(cost.size()) < 4 + ncost)
      throw ValidationError("generator " + std::to_string(r + 1) +
                            ": gencost row too short");
    if (ncost > 3)
      throw UnsupportedFeatureError("generator " + std::to_string(r + 1) +
                                    ": polynomial degree above 2");
    // Coefficients are listed from the highest degree down, in MW units;
    // rescale to per-unit power.
    double c[3] = {0.0, 0.0, 0.0};  // c2, c1, c0
    for (int k = 0; k < ncost; ++k) {
      int degree = ncost - 1 - k;
      c[2 - degree] = cost[4 + k];
    }
    g.c2 = c[0] * base * base;
    g.c1 = c[1] * base;
    g.c0 = c[2];
    if (g.c2 < 0.0)
      throw ValidationError("generator " + std::to_string(r + 1) +
                            ": negative quadratic cost coefficient");
    net.generators.push_back(g);
  }

  // Branches.
  for (std::size_t r = 0; r < raw.branch.size(); ++r) {
    const auto& row = raw.branch[r];
    if (static_cast<int>(row[BR_STATUS]) <= 0) continue;
    auto fit = internal.find(static_cast<int>(row[F_BUS]));
    auto tit = internal.find(static_cast<int>(row[T_BUS]));
    if (fit == internal.end() || tit == internal.end())
      throw ValidationError("branch " + std::to_string(r + 1) +
                            " references an unknown bus");
    if (fit->second == tit->second)
      throw ValidationError("branch " + std::to_string(r + 1) +
                            " connects a bus to itself");
    Branch br;
    br.from = fit->second;
    br.to = tit->second;
    double rr = row[BR_R], xx = row[BR_X];
    if (rr == 0.0 && xx == 0.0)
      throw ValidationError("branch " + std::to_string(r + 1) +
                            ": zero series impedance");
    br.series_admittance = 1.0 / std::complex<double>(rr, xx);
    br.charging_b = row[BR_B];
    double ratio = row[TAP];
    if (ratio == 0.0) ratio = 1.0;  // MATPOWER convention
    if (ratio < 0.0)
      throw ValidationError("branch " + std::to_string(r + 1) +
                            ": negative tap ratio");
    double shift = row[SHIFT] * kPi / 180.0;
    br.tap = std::polar(ratio, shift);
    double rate_a = row[RATE_A];
    br.s_limit = rate_a == 0.0 ? kUnlimited : rate_a / base;
    if (br.s_limit <= 0.0)
      throw ValidationError("branch " + std::to_string(r + 1) +
                            ": negative rating");
    net.branches.push_back(br);
  }

  // Isolated-bus scan.
  std::vector<int> touch(net.buses.size(), 0);
  for (const auto& br : net.branches) {
    touch[br.from]++;
    touch[br.to]++;
  }
  for (const auto& g : net.generators) touch[g.bus] += 1000;
  for (std::size_t k = 0; k < net.buses.size(); ++k) {
    const Bus& b = net.buses[k];
    if (touch[k] == 0 && (b.p_demand != 0.0 || b.q_demand != 0.0))
      net.warnings.push_back("bus " + std::to_string(b.id) +
                             " has demand but no branch and no generator");
  }
  return net;
}

RawCase raw_from_network(const Network& net) {
  RawCase raw;
  raw.name = net.name;
  raw.base_mva = net.base_mva;
  const double base = net.base_mva;
  for (std::size_t k = 0; k < net.buses.size(); ++k) {
    const Bus& b = net.buses[k];
    int type = k == 0 ? 3 : 1;
    raw.bus.push_back({double(b.id), double(type), b.p_demand * base,
                       b.q_demand * base, b.shunt_g * base, b.shunt_b * base,
                       1, 1, 0, 0, 1, b.v_max, b.v_min});
  }
  for (const auto& g : net.generators) {
    raw.gen.push_back({double(net.buses[g.bus].id), 0, 0, g.q_max * base,
                       g.q_min * base, 1, base, 1, g.p_max * base,
                       g.p_min * base});
    raw.gencost.push_back({2, 0, 0, 3, g.c2 / (base * base), g.c1 / base,
                           g.c0});
  }
  for (const auto& br : net.branches) {
    std::complex<double> z = 1.0 / br.series_admittance;
    double rate = br.s_limit == kUnlimited ? 0.0 : br.s_limit * base;
    raw.branch.push_back({double(net.buses[br.from].id),
                          double(net.buses[br.to].id), z.real(), z.imag(),
                          br.charging_b, rate, 0, 0, std::abs(br.tap),
                          std::arg(br.tap) * 180.0 / kPi, 1});
  }
  return raw;
}

void write_json(const Network& net, std::ostream& out) {
  nlohmann::json j;
  j["name"] = net.name;
  j["base_mva"] = net.base_mva;
  j["reference_bus"] = net.reference_bus;
  for (const auto& b : net.buses)
    j["buses"].push_back({{"id", b.id},
                          {"p_demand", b.p_demand},
                          {"q_demand", b.q_demand},
                          {"shunt_g", b.shunt_g},
                          {"shunt_b", b.shunt_b},
                          {"v_min", b.v_min},
                          {"v_max", b.v_max}});
  for (const auto& g : net.generators)
    j["generators"].push_back({{"bus", g.bus},
                               {"p_min", g.p_min},
                               {"p_max", g.p_max},
                               {"q_min", g.q_min},
                               {"q_max", g.q_max},
                               {"c2", g.c2},
                               {"c1", g.c1},
                               {"c0", g.c0}});
  for (const auto& br : net.branches) {
    nlohmann::json jb{{"from", br.from},
                      {"to", br.to},
                      {"y_re", br.series_admittance.real()},
                      {"y_im", br.series_admittance.imag()},
                      {"charging_b", br.charging_b},
                      {"tap_re", br.tap.real()},
                      {"tap_im", br.tap.imag()}};
    if (br.s_limit != kUnlimited) jb["s_limit"] = br.s_limit;
    j["branches"].push_back(jb);
  }
  if (!net.warnings.empty()) j["warnings"] = net.warnings;
  out << j.dump(2) << "\n";
}

}  // namespace conicopf
