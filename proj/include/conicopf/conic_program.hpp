#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace conicopf {

struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ConeType { Nonnegative, SecondOrder, RotatedSecondOrder, Psd };

/// One cone membership over registered variables. Vector cones list member
/// variables in order (SecondOrder: t then x; RotatedSecondOrder: u, v then
/// x, with the convention 2uv >= |x|^2). A Psd block gives the lower
/// triangle of a real symmetric matrix in column-major order; each entry is
/// coeff * variable, or structurally zero when var < 0.
struct ConeBlock {
  ConeType type;
  std::vector<int> vars;
  int side = 0;
  // When the block is the real embedding of a Hermitian matrix (see
  // add_hermitian_psd), herm_side is the Hermitian side and the block's
  // structure is exploited when lowering to solver form.
  int herm_side = 0;
  struct PsdEntry {
    int var = -1;
    double coeff = 0.0;
  };
  std::vector<PsdEntry> lower;
};

/// Hermitian matrix of side n whose entries are affine references to
/// registered variables: entry (i, j), i >= j, has value
/// re_coeff*x[re_var] + j * im_coeff*x[im_var]. Diagonal entries must have
/// no imaginary part. The upper triangle is the conjugate transpose.
struct HermitianBlockMap {
  int side = 0;
  struct Entry {
    int re_var = -1;
    double re_coeff = 1.0;
    int im_var = -1;
    double im_coeff = 1.0;
  };
  std::vector<Entry> lower;

  explicit HermitianBlockMap(int n)
      : side(n), lower(static_cast<std::size_t>(n) * (n + 1) / 2) {}
  Entry& at(int i, int j);
  const Entry& at(int i, int j) const;
};

/// Linear objective, sparse linear equalities, and cone memberships over a
/// shared variable space. Construction is single-writer; freeze() makes the
/// program immutable and runs integrity checks.
class ConicProgram {
 public:
  int add_variable(const std::string& name);
  int num_variables() const { return static_cast<int>(names_.size()); }
  const std::string& variable_name(int v) const { return names_[v]; }
  std::optional<int> find_variable(const std::string& name) const;

  void add_objective_term(int var, double coeff);
  void add_objective_offset(double c) { objective_offset_ += c; }
  double objective_offset() const { return objective_offset_; }
  const std::map<int, double>& objective() const { return objective_; }

  int add_equality(const std::vector<std::pair<int, double>>& terms,
                   double rhs);
  int num_equalities() const { return static_cast<int>(equalities_.size()); }
  const std::vector<std::pair<int, double>>& equality_terms(int r) const {
    return equalities_[r];
  }
  double equality_rhs(int r) const { return rhs_[r]; }

  int add_nonnegative(const std::vector<int>& vars);
  int add_second_order(const std::vector<int>& vars);
  int add_rotated_second_order(const std::vector<int>& vars);
  int add_psd_block(int side, std::vector<ConeBlock::PsdEntry> lower);
  const std::vector<ConeBlock>& cones() const { return cones_; }

  /// A variable pinned to a constant by an equality row; memoized by value.
  int pinned_constant(double value);

  /// Real PSD block of side 2n encoding the Hermitian constraint H >= 0
  /// through the embedding [X, -Y; Y, X] with X = Re H, Y = Im H. Returns
  /// the cone block id.
  int add_hermitian_psd(const HermitianBlockMap& map);

  /// Epigraph of a convex quadratic cost c2 p^2 + c1 p: adds the objective
  /// terms and, when c2 > 0, an auxiliary s with s >= c2 p^2 through a
  /// rotated cone (s, 1/2, sqrt(c2) p). Returns the auxiliary index, or -1
  /// when the cost is linear.
  int add_quadratic_cost_epigraph(int p_var, double c2, double c1);

  /// |p + j q| <= s_limit as a second-order cone; no constraint when the
  /// limit is infinite. Returns the cone block id.
  std::optional<int> add_apparent_power_limit(int p_var, int q_var,
                                              double s_limit);

  /// Vkk*Vmm >= (Re Vkm)^2 + (Im Vkm)^2 with Vkk, Vmm >= 0, via a rotated
  /// cone on (Vkk/2, Vmm, Re Vkm, Im Vkm). Returns the cone block id.
  int add_rotated_2x2(int vkk, int vmm, int re_km, int im_km);

  void freeze();
  bool frozen() const { return frozen_; }
  /// Variables not referenced by the objective, any equality, or any cone.
  const std::vector<int>& orphan_variables() const { return orphans_; }

  /// Plain-text dump of the standard form (objective, A, b, cones).
  void write_text(std::ostream& out) const;

 private:
  void check_var(int v, const char* where) const;
  void check_mutable() const;

  std::vector<std::string> names_;
  std::map<std::string, int> index_;
  std::map<int, double> objective_;
  double objective_offset_ = 0.0;
  std::vector<std::vector<std::pair<int, double>>> equalities_;
  std::vector<double> rhs_;
  std::vector<ConeBlock> cones_;
  std::map<double, int> pinned_;
  bool frozen_ = false;
  std::vector<int> orphans_;
};

/// Worst constraint violations of an assignment; used by tests and by the
/// feasible-point checks. Cone violation is the most negative margin over
/// all blocks (PSD: smallest eigenvalue of the assembled matrix).
struct ProgramViolation {
  double equality = 0.0;
  double cone = 0.0;
};
ProgramViolation evaluate_violation(const ConicProgram& prog,
                                    const std::vector<double>& x);

/// Objective value of an assignment, offset included.
double evaluate_objective(const ConicProgram& prog,
                          const std::vector<double>& x);

}  // namespace conicopf
