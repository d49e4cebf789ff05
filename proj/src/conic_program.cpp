#include "conicopf/conic_program.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

namespace conicopf {

namespace {

// Column-major lower-triangle index for a matrix of the given side.
inline std::size_t tri_index(int side, int i, int j) {
  return static_cast<std::size_t>(j) * side - static_cast<std::size_t>(j) * (j - 1) / 2 +
         (i - j);
}

}  // namespace

HermitianBlockMap::Entry& HermitianBlockMap::at(int i, int j) {
  if (i < j) std::swap(i, j);
  return lower[tri_index(side, i, j)];
}

const HermitianBlockMap::Entry& HermitianBlockMap::at(int i, int j) const {
  if (i < j) std::swap(i, j);
  return lower[tri_index(side, i, j)];
}

void ConicProgram::check_var(int v, const char* where) const {
  if (v < 0 || v >= num_variables())
    throw ConstructionError(std::string(where) + ": variable index " +
                            std::to_string(v) + " out of range");
}

void ConicProgram::check_mutable() const {
  if (frozen_) throw ConstructionError("program is frozen");
}

int ConicProgram::add_variable(const std::string& name) {
  check_mutable();
  auto [it, fresh] = index_.emplace(name, num_variables());
  if (!fresh)
    throw ConstructionError("duplicate variable name: " + name);
  names_.push_back(name);
  return it->second;
}

std::optional<int> ConicProgram::find_variable(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void ConicProgram::add_objective_term(int var, double coeff) {
  check_mutable();
  check_var(var, "objective");
  if (!std::isfinite(coeff))
    throw ConstructionError("objective coefficient must be finite");
  objective_[var] += coeff;
}

int ConicProgram::add_equality(
    const std::vector<std::pair<int, double>>& terms, double rhs) {
  check_mutable();
  for (auto [v, c] : terms) {
    check_var(v, "equality");
    if (!std::isfinite(c))
      throw ConstructionError("equality coefficient must be finite");
  }
  equalities_.push_back(terms);
  rhs_.push_back(rhs);
  return num_equalities() - 1;
}

int ConicProgram::add_nonnegative(const std::vector<int>& vars) {
  check_mutable();
  for (int v : vars) check_var(v, "nonnegative cone");
  cones_.push_back({ConeType::Nonnegative, vars, 0, {}});
  return static_cast<int>(cones_.size()) - 1;
}

int ConicProgram::add_second_order(const std::vector<int>& vars) {
  check_mutable();
  if (vars.size() < 2)
    throw ConstructionError("second-order cone needs at least two members");
  for (int v : vars) check_var(v, "second-order cone");
  cones_.push_back({ConeType::SecondOrder, vars, 0, {}});
  return static_cast<int>(cones_.size()) - 1;
}

int ConicProgram::add_rotated_second_order(const std::vector<int>& vars) {
  check_mutable();
  if (vars.size() < 3)
    throw ConstructionError("rotated cone needs at least three members");
  for (int v : vars) check_var(v, "rotated cone");
  cones_.push_back({ConeType::RotatedSecondOrder, vars, 0, {}});
  return static_cast<int>(cones_.size()) - 1;
}

int ConicProgram::add_psd_block(int side,
                                std::vector<ConeBlock::PsdEntry> lower) {
  check_mutable();
  if (side <= 0) throw ConstructionError("PSD block side must be positive");
  if (lower.size() != static_cast<std::size_t>(side) * (side + 1) / 2)
    throw ConstructionError("PSD block entry count does not match side");
  for (const auto& e : lower)
    if (e.var >= 0) check_var(e.var, "PSD block");
  ConeBlock blk;
  blk.type = ConeType::Psd;
  blk.side = side;
  blk.lower = std::move(lower);
  cones_.push_back(std::move(blk));
  return static_cast<int>(cones_.size()) - 1;
}

int ConicProgram::pinned_constant(double value) {
  auto it = pinned_.find(value);
  if (it != pinned_.end()) return it->second;
  int v = add_variable("const[" + std::to_string(value) + "]");
  add_equality({{v, 1.0}}, value);
  pinned_[value] = v;
  return v;
}

int ConicProgram::add_hermitian_psd(const HermitianBlockMap& map) {
  const int n = map.side;
  if (n <= 0) throw ConstructionError("Hermitian block side must be positive");
  if (map.lower.size() != static_cast<std::size_t>(n) * (n + 1) / 2)
    throw ConstructionError("Hermitian map entry count does not match side");
  const int s = 2 * n;
  std::vector<ConeBlock::PsdEntry> lower(
      static_cast<std::size_t>(s) * (s + 1) / 2);
  auto put = [&](int i, int j, int var, double coeff) {
    if (i < j) std::swap(i, j);
    auto& slot = lower[tri_index(s, i, j)];
    if (slot.var >= 0 && var >= 0 && (slot.var != var || slot.coeff != coeff))
      throw ConstructionError("inconsistent duplicate placement in embedding");
    if (var >= 0) slot = {var, coeff};
  };
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      const auto& e = map.at(i, j);
      if (i == j && e.im_var >= 0)
        throw ConstructionError("diagonal Hermitian entry has imaginary part");
      if (e.re_var >= 0) check_var(e.re_var, "Hermitian map");
      if (e.im_var >= 0) check_var(e.im_var, "Hermitian map");
      // X blocks.
      put(i, j, e.re_var, e.re_coeff);
      put(i + n, j + n, e.re_var, e.re_coeff);
      // Y = Im H is skew: Y_ij = +v, Y_ji = -v for i > j.
      if (i > j && e.im_var >= 0) {
        put(i + n, j, e.im_var, e.im_coeff);
        put(j + n, i, e.im_var, -e.im_coeff);
      }
    }
  }
  int id = add_psd_block(s, std::move(lower));
  cones_.back().herm_side = n;
  return id;
}

int ConicProgram::add_quadratic_cost_epigraph(int p_var, double c2,
                                              double c1) {
  check_var(p_var, "cost epigraph");
  if (c2 < 0.0)
    throw ConstructionError("quadratic cost coefficient must be nonnegative");
  if (c1 != 0.0) add_objective_term(p_var, c1);
  if (c2 == 0.0) return -1;
  const std::string& pname = names_[p_var];
  int s = add_variable("epi(" + pname + ")");
  int w = add_variable("epi_w(" + pname + ")");
  add_equality({{w, 1.0}, {p_var, -std::sqrt(c2)}}, 0.0);
  add_rotated_second_order({s, pinned_constant(0.5), w});
  add_objective_term(s, 1.0);
  return s;
}

std::optional<int> ConicProgram::add_apparent_power_limit(int p_var,
                                                          int q_var,
                                                          double s_limit) {
  check_var(p_var, "line limit");
  check_var(q_var, "line limit");
  if (std::isinf(s_limit)) return std::nullopt;
  if (!(s_limit > 0.0))
    throw ConstructionError("apparent-power limit must be positive");
  int t = pinned_constant(s_limit);
  return add_second_order({t, p_var, q_var});
}

int ConicProgram::add_rotated_2x2(int vkk, int vmm, int re_km, int im_km) {
  check_var(vkk, "rotated 2x2");
  check_var(vmm, "rotated 2x2");
  check_var(re_km, "rotated 2x2");
  check_var(im_km, "rotated 2x2");
  int h = add_variable("half(" + names_[vkk] + ")#" +
                       std::to_string(cones_.size()));
  add_equality({{h, 1.0}, {vkk, -0.5}}, 0.0);
  return add_rotated_second_order({h, vmm, re_km, im_km});
}

void ConicProgram::freeze() {
  if (frozen_) return;
  std::vector<bool> used(num_variables(), false);
  for (const auto& [v, c] : objective_)
    if (c != 0.0) used[v] = true;
  for (const auto& row : equalities_)
    for (auto [v, c] : row)
      if (c != 0.0) used[v] = true;
  for (const auto& blk : cones_) {
    for (int v : blk.vars) used[v] = true;
    for (const auto& e : blk.lower)
      if (e.var >= 0) used[e.var] = true;
  }
  orphans_.clear();
  for (int v = 0; v < num_variables(); ++v)
    if (!used[v]) orphans_.push_back(v);
  frozen_ = true;
}

void ConicProgram::write_text(std::ostream& out) const {
  out << "variables " << num_variables() << "\n";
  out << "objective offset " << objective_offset_ << "\n";
  for (const auto& [v, c] : objective_)
    out << "  c " << v << " " << c << "\n";
  out << "equalities " << num_equalities() << "\n";
  for (int r = 0; r < num_equalities(); ++r) {
    out << "  row " << r << " rhs " << rhs_[r] << " :";
    for (auto [v, c] : equalities_[r]) out << " " << v << ":" << c;
    out << "\n";
  }
  out << "cones " << cones_.size() << "\n";
  for (const auto& blk : cones_) {
    switch (blk.type) {
      case ConeType::Nonnegative:
        out << "  nonneg";
        for (int v : blk.vars) out << " " << v;
        break;
      case ConeType::SecondOrder:
        out << "  soc";
        for (int v : blk.vars) out << " " << v;
        break;
      case ConeType::RotatedSecondOrder:
        out << "  rsoc";
        for (int v : blk.vars) out << " " << v;
        break;
      case ConeType::Psd:
        out << "  psd side " << blk.side << " :";
        for (const auto& e : blk.lower)
          out << " " << e.var << ":" << e.coeff;
        break;
    }
    out << "\n";
  }
}

ProgramViolation evaluate_violation(const ConicProgram& prog,
                                    const std::vector<double>& x) {
  ProgramViolation out;
  for (int r = 0; r < prog.num_equalities(); ++r) {
    double lhs = 0.0;
    for (auto [v, c] : prog.equality_terms(r)) lhs += c * x[v];
    out.equality = std::max(out.equality, std::abs(lhs - prog.equality_rhs(r)));
  }
  double worst = 0.0;  // most negative cone margin
  for (const auto& blk : prog.cones()) {
    switch (blk.type) {
      case ConeType::Nonnegative:
        for (int v : blk.vars) worst = std::min(worst, x[v]);
        break;
      case ConeType::SecondOrder: {
        double t = x[blk.vars[0]], nrm = 0.0;
        for (std::size_t i = 1; i < blk.vars.size(); ++i)
          nrm += x[blk.vars[i]] * x[blk.vars[i]];
        worst = std::min(worst, t - std::sqrt(nrm));
        break;
      }
      case ConeType::RotatedSecondOrder: {
        double u = x[blk.vars[0]], v = x[blk.vars[1]], nrm = 0.0;
        for (std::size_t i = 2; i < blk.vars.size(); ++i)
          nrm += x[blk.vars[i]] * x[blk.vars[i]];
        worst = std::min({worst, u, v, (2.0 * u * v - nrm) /
                                          (1.0 + std::sqrt(nrm))});
        break;
      }
      case ConeType::Psd: {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(blk.side, blk.side);
        std::size_t k = 0;
        for (int j = 0; j < blk.side; ++j)
          for (int i = j; i < blk.side; ++i, ++k) {
            const auto& e = blk.lower[k];
            double val = e.var >= 0 ? e.coeff * x[e.var] : 0.0;
            M(i, j) = val;
            M(j, i) = val;
          }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            M, Eigen::EigenvaluesOnly);
        worst = std::min(worst, eig.eigenvalues().minCoeff());
        break;
      }
    }
  }
  out.cone = worst;
  return out;
}

double evaluate_objective(const ConicProgram& prog,
                          const std::vector<double>& x) {
  double obj = prog.objective_offset();
  for (const auto& [v, c] : prog.objective()) obj += c * x[v];
  return obj;
}

}  // namespace conicopf
