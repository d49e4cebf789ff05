#pragma once

#include <complex>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "conicopf/matpower.hpp"

namespace conicopf {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedFeatureError : ValidationError {
  using ValidationError::ValidationError;
};

constexpr double kUnlimited = std::numeric_limits<double>::infinity();

struct Bus {
  int id = 0;  // original MATPOWER bus number
  double p_demand = 0.0;  // p.u.
  double q_demand = 0.0;
  double shunt_g = 0.0;  // p.u.
  double shunt_b = 0.0;
  double v_min = 0.0;  // p.u. voltage magnitude bounds, v_min > 0
  double v_max = 0.0;
};

struct Gen {
  int bus = 0;  // internal bus index
  double p_min = 0.0, p_max = 0.0;  // p.u.
  double q_min = 0.0, q_max = 0.0;
  double c2 = 0.0, c1 = 0.0, c0 = 0.0;  // $/h on per-unit power, c2 >= 0
};

struct Branch {
  int from = 0, to = 0;  // internal bus indices; from is the tap side
  std::complex<double> series_admittance;  // p.u.
  double charging_b = 0.0;  // p.u., total line charging susceptance
  std::complex<double> tap{1.0, 0.0};  // magnitude * e^{j shift}
  double s_limit = kUnlimited;  // p.u. apparent-power limit per end
};

/// Validated per-unit electrical model. Buses are reindexed so the
/// reference bus has internal index 0; original ids are kept in Bus::id.
struct Network {
  std::string name;
  double base_mva = 0.0;
  std::vector<Bus> buses;
  std::vector<Gen> generators;
  std::vector<Branch> branches;
  int reference_bus = 0;  // internal index, always 0 after validate()
  std::vector<std::string> warnings;

  int n_buses() const { return static_cast<int>(buses.size()); }
};

/// Convert raw MATPOWER tables into a per-unit Network: drops out-of-service
/// generators and branches, converts MW/MVAr quantities to per-unit,
/// extracts polynomial costs as (c2, c1, c0), maps rateA = 0 to "no limit",
/// and reindexes buses with the reference bus first.
Network validate(const RawCase& raw);

/// Rebuild raw tables (MW units, contiguous ids, everything in service)
/// such that validate(raw_from_network(net)) reproduces net exactly.
RawCase raw_from_network(const Network& net);

/// JSON mirror of the per-unit model, for debugging.
void write_json(const Network& net, std::ostream& out);

}  // namespace conicopf
