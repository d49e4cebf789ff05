#include "conicopf/solve.hpp"

#include <chrono>
#include <cmath>
#include <map>

namespace conicopf {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2 = 0.70710678118654752440;

inline int tri_index(int side, int i, int j) {
  return j * side - j * (j - 1) / 2 + (i - j);
}

using Read = std::vector<std::pair<int, double>>;  // cone-relative coords

struct RowAccum {
  std::map<int, double> terms;
  void add(int coord, double w) {
    if (w != 0.0) terms[coord] += w;
  }
};

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::NearOptimal: return "near-optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Error: return "error";
  }
  return "?";
}

StandardFormMap to_standard_form(const ConicProgram& prog) {
  if (!prog.frozen())
    throw ConstructionError("program must be frozen before solving");
  const int nv = prog.num_variables();

  // Pass 1: solver cone layout and per-variable occurrence reads.
  ConeLayout layout;
  const auto& cones = prog.cones();
  int nn_total = 0;
  for (const auto& blk : cones)
    if (blk.type == ConeType::Nonnegative)
      nn_total += static_cast<int>(blk.vars.size());
  layout.n_nonneg = nn_total;

  int nn_cursor = 0;
  int cone_off = nn_total;  // running offset within the cone part
  std::vector<std::vector<Read>> occurrences(nv);
  std::vector<Read> zero_orbits;  // orbit reads that must equal zero

  auto note = [&](int var, Read read) {
    occurrences[var].push_back(std::move(read));
  };

  for (const auto& blk : cones) {
    switch (blk.type) {
      case ConeType::Nonnegative: {
        for (int v : blk.vars) note(v, {{nn_cursor++, 1.0}});
        break;
      }
      case ConeType::SecondOrder: {
        int q = static_cast<int>(blk.vars.size());
        for (int j = 0; j < q; ++j) note(blk.vars[j], {{cone_off + j, 1.0}});
        layout.soc.push_back(q);
        cone_off += q;
        break;
      }
      case ConeType::RotatedSecondOrder: {
        int q = static_cast<int>(blk.vars.size());
        note(blk.vars[0], {{cone_off, kInvSqrt2}, {cone_off + 1, kInvSqrt2}});
        note(blk.vars[1], {{cone_off, kInvSqrt2}, {cone_off + 1, -kInvSqrt2}});
        for (int j = 2; j < q; ++j) note(blk.vars[j], {{cone_off + j, 1.0}});
        layout.soc.push_back(q);
        cone_off += q;
        break;
      }
      case ConeType::Psd: {
        const int s = blk.side;
        if (blk.herm_side > 0) {
          const int q = blk.herm_side;
          for (int j = 0; j < q; ++j) {
            for (int i = j; i < q; ++i) {
              const auto& x_entry = blk.lower[tri_index(s, i, j)];
              int p1 = cone_off + tri_index(s, i, j);
              int p2 = cone_off + tri_index(s, i + q, j + q);
              double wx = (i == j) ? 0.5 : 0.5 * kInvSqrt2;
              if (x_entry.var >= 0 && x_entry.coeff != 0.0) {
                double w = wx / x_entry.coeff;
                note(x_entry.var, {{p1, w}, {p2, w}});
              } else {
                zero_orbits.push_back({{p1, wx}, {p2, wx}});
              }
              if (i > j) {
                const auto& y_entry = blk.lower[tri_index(s, i + q, j)];
                int y1 = cone_off + tri_index(s, i + q, j);
                int y2 = cone_off + tri_index(s, j + q, i);
                double wy = 0.5 * kInvSqrt2;
                if (y_entry.var >= 0 && y_entry.coeff != 0.0) {
                  double w = wy / y_entry.coeff;
                  note(y_entry.var, {{y1, w}, {y2, -w}});
                } else {
                  zero_orbits.push_back({{y1, wy}, {y2, -wy}});
                }
              }
            }
          }
        } else {
          int k = 0;
          for (int j = 0; j < s; ++j) {
            for (int i = j; i < s; ++i, ++k) {
              const auto& e = blk.lower[k];
              double w = (i == j) ? 1.0 : kInvSqrt2;
              if (e.var >= 0 && e.coeff != 0.0)
                note(e.var, {{cone_off + k, w / e.coeff}});
              else
                zero_orbits.push_back({{cone_off + k, w}});
            }
          }
        }
        layout.psd.push_back(s);
        cone_off += s * (s + 1) / 2;
        break;
      }
    }
  }
  const int nk = cone_off;

  // Pass 2: canonical reads; variables without cone occurrences are free.
  int nf = 0;
  std::vector<Read> canonical(nv);
  std::vector<int> free_index(nv, -1);
  for (int v = 0; v < nv; ++v)
    if (occurrences[v].empty()) free_index[v] = nf++;
  layout.n_free = nf;

  auto absolute = [&](const Read& r) {
    Read out = r;
    for (auto& [coord, w] : out) coord += nf;
    return out;
  };
  for (int v = 0; v < nv; ++v) {
    if (free_index[v] >= 0)
      canonical[v] = {{free_index[v], 1.0}};
    else
      canonical[v] = absolute(occurrences[v].front());
  }

  // Pass 3: rows.
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> rhs;
  auto emit = [&](const RowAccum& row, double b) {
    int r = static_cast<int>(rhs.size());
    for (auto [coord, w] : row.terms)
      if (w != 0.0) trip.emplace_back(r, coord, w);
    rhs.push_back(b);
  };

  for (int r = 0; r < prog.num_equalities(); ++r) {
    RowAccum row;
    for (auto [v, coeff] : prog.equality_terms(r))
      for (auto [coord, w] : canonical[v]) row.add(coord, coeff * w);
    emit(row, prog.equality_rhs(r));
  }
  const int model_eq = static_cast<int>(rhs.size());

  for (const auto& orbit : zero_orbits) {
    RowAccum row;
    for (auto [coord, w] : orbit) row.add(coord + nf, w);
    emit(row, 0.0);
  }
  for (int v = 0; v < nv; ++v) {
    for (std::size_t k = 1; k < occurrences[v].size(); ++k) {
      RowAccum row;
      for (auto [coord, w] : canonical[v]) row.add(coord, w);
      for (auto [coord, w] : absolute(occurrences[v][k])) row.add(coord, -w);
      emit(row, 0.0);
    }
  }

  StandardFormMap out;
  out.model_equalities = model_eq;
  out.reads = std::move(canonical);
  const int n = nf + nk;
  const int m = static_cast<int>(rhs.size());
  out.problem.A.resize(m, n);
  out.problem.A.setFromTriplets(trip.begin(), trip.end());
  out.problem.A.makeCompressed();
  out.problem.b = Eigen::Map<Eigen::VectorXd>(rhs.data(), m);
  out.problem.c = Eigen::VectorXd::Zero(n);
  for (auto [v, coeff] : prog.objective())
    for (auto [coord, w] : out.reads[v]) out.problem.c[coord] += coeff * w;
  out.problem.cones = layout;
  return out;
}

Solution solve(const ConicProgram& prog, const SolverSettings& settings) {
  auto t0 = std::chrono::steady_clock::now();
  Solution sol;
  StandardFormMap sf;
  try {
    sf = to_standard_form(prog);
  } catch (const std::exception& e) {
    sol.status = SolveStatus::Error;
    sol.message = e.what();
    return sol;
  }

  IpmSettings ipm;
  ipm.tolerance = settings.tolerance;
  ipm.max_iterations = settings.max_iterations;
  ipm.verify_directions = settings.verify_directions;
  IpmResult res = solve_standard(sf.problem, ipm);

  switch (res.status) {
    case IpmStatus::Optimal: sol.status = SolveStatus::Optimal; break;
    case IpmStatus::NearOptimal: sol.status = SolveStatus::NearOptimal; break;
    case IpmStatus::PrimalInfeasible:
      sol.status = SolveStatus::Infeasible;
      break;
    case IpmStatus::DualInfeasible: sol.status = SolveStatus::Unbounded; break;
    default: sol.status = SolveStatus::Error; break;
  }
  sol.message = res.message;
  sol.iterations = res.iterations;
  sol.rel_gap = res.rel_gap;
  sol.primal_residual = res.primal_residual;
  sol.dual_residual = res.dual_residual;

  if (sol.usable()) {
    const int nv = prog.num_variables();
    sol.primal.resize(nv);
    for (int v = 0; v < nv; ++v) {
      double val = 0.0;
      for (auto [coord, w] : sf.reads[v]) val += w * res.x[coord];
      sol.primal[v] = val;
    }
    sol.objective = evaluate_objective(
        prog, std::vector<double>(sol.primal.data(),
                                  sol.primal.data() + sol.primal.size()));
    sol.equality_duals = res.y.head(sf.model_equalities);
    // Cone duals, sliced per model block in order.
    const int nf = sf.problem.cones.n_free;
    int nn_cursor = 0;
    int cone_off = sf.problem.cones.n_nonneg;
    for (const auto& blk : prog.cones()) {
      switch (blk.type) {
        case ConeType::Nonnegative: {
          Eigen::VectorXd d(blk.vars.size());
          for (std::size_t i = 0; i < blk.vars.size(); ++i)
            d[i] = res.z[nn_cursor++];
          sol.cone_duals.push_back(std::move(d));
          break;
        }
        case ConeType::SecondOrder:
        case ConeType::RotatedSecondOrder: {
          int q = static_cast<int>(blk.vars.size());
          Eigen::VectorXd d = res.z.segment(cone_off, q);
          if (blk.type == ConeType::RotatedSecondOrder) {
            double a = d[0], b = d[1];
            d[0] = kInvSqrt2 * (a + b);
            d[1] = kInvSqrt2 * (a - b);
          }
          sol.cone_duals.push_back(std::move(d));
          cone_off += q;
          break;
        }
        case ConeType::Psd: {
          int dim = blk.side * (blk.side + 1) / 2;
          sol.cone_duals.push_back(res.z.segment(cone_off, dim));
          cone_off += dim;
          break;
        }
      }
    }
    (void)nf;
  }
  sol.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return sol;
}

}  // namespace conicopf
