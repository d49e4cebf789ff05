#include "conicopf/conic_solver.hpp"
#include <iostream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace conicopf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730950488;
}  // namespace

int ConeLayout::cone_dim() const {
  int nk = n_nonneg;
  for (int q : soc) nk += q;
  for (int s : psd) nk += s * (s + 1) / 2;
  return nk;
}

int ConeLayout::barrier_degree() const {
  int deg = n_nonneg + static_cast<int>(soc.size());
  for (int s : psd) deg += s;
  return deg;
}

Eigen::MatrixXd mat_of_svec(const Eigen::VectorXd& v, int side) {
  Eigen::MatrixXd M(side, side);
  int k = 0;
  for (int j = 0; j < side; ++j)
    for (int i = j; i < side; ++i, ++k) {
      double val = i == j ? v[k] : v[k] / kSqrt2;
      M(i, j) = val;
      M(j, i) = val;
    }
  return M;
}

Eigen::VectorXd svec_of_mat(const Eigen::MatrixXd& M) {
  const int side = static_cast<int>(M.rows());
  Eigen::VectorXd v(side * (side + 1) / 2);
  int k = 0;
  for (int j = 0; j < side; ++j)
    for (int i = j; i < side; ++i, ++k)
      v[k] = i == j ? M(i, j) : kSqrt2 * 0.5 * (M(i, j) + M(j, i));
  return v;
}

namespace {

struct Layout {
  int m = 0, n = 0, nf = 0, nk = 0;
  int nn_dim = 0;
  std::vector<int> soc_off, soc_dim;   // offsets within the cone part
  std::vector<int> psd_off, psd_side, psd_dim;
};

Layout make_layout(const StandardProblem& p) {
  Layout L;
  L.m = static_cast<int>(p.A.rows());
  L.n = static_cast<int>(p.A.cols());
  L.nf = p.cones.n_free;
  L.nn_dim = p.cones.n_nonneg;
  int off = L.nn_dim;
  for (int q : p.cones.soc) {
    L.soc_off.push_back(off);
    L.soc_dim.push_back(q);
    off += q;
  }
  for (int s : p.cones.psd) {
    L.psd_off.push_back(off);
    L.psd_side.push_back(s);
    L.psd_dim.push_back(s * (s + 1) / 2);
    off += s * (s + 1) / 2;
  }
  L.nk = off;
  return L;
}

// Nesterov-Todd scalings for the symmetric cone blocks. Conventions:
//   lambda = W z = W^{-T} s,   s = W^T lambda,   z = W^{-1} lambda.
struct Scaling {
  Eigen::VectorXd d;  // nonneg: W = diag(d)
  struct Soc {
    double beta = 1.0;
    Eigen::VectorXd v;  // scaling point, v'Jv = 1
  };
  std::vector<Soc> soc;
  struct Psd {
    Eigen::MatrixXd R, Rinv, Theta, ThetaInv;
    Eigen::VectorXd sigma;       // scaled spectrum
    Eigen::MatrixXd Ls, Lz;      // Cholesky factors of current S and Z
  };
  std::vector<Psd> psd;
  Eigen::VectorXd lambda;  // scaled point, cone coordinates
};

Eigen::VectorXd jmul(const Eigen::VectorXd& u) {  // J u for SOC
  Eigen::VectorXd r = -u;
  r[0] = u[0];
  return r;
}

double jdot(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return 2.0 * u[0] * v[0] - u.dot(v);
}

class Ipm {
 public:
  Ipm(const StandardProblem& p, const IpmSettings& st)
      : prob_(p), set_(st), L_(make_layout(p)) {
    build_index();
  }

  IpmResult run();

 private:
  // --- data and bookkeeping -------------------------------------------------
  const StandardProblem& prob_;
  IpmSettings set_;
  Layout L_;

  // columns of A restricted to each cone coordinate (for M assembly)
  struct ColEntry {
    int row;
    double val;
  };
  std::vector<std::vector<ColEntry>> cone_cols_;  // indexed by cone coord
  // per PSD block: rows with support in the block, their svec-sparse entries
  struct PsdRows {
    std::vector<int> rows;
    std::vector<std::vector<std::pair<int, double>>> entries;  // local svec idx
    std::vector<int> support;             // sorted union of local svec indices
    std::vector<int> support_pos;         // dim -> index in support, or -1
  };
  std::vector<PsdRows> psd_rows_;
  Eigen::SparseMatrix<double> F_;  // free columns of A
  Eigen::MatrixXd Fd_;             // dense copy (dense path)
  bool dense_path_ = true;

  // factorization state
  Eigen::MatrixXd M_;      // A_K H A_K' (dense buffer, always formed)
  Eigen::MatrixXd Kd_;     // dense saddle factor
  Eigen::SparseMatrix<double> Ks_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> sldlt_;
  Eigen::VectorXd jac_;    // Jacobi scaling of the saddle system
  double reg_ = 1e-9;

  // iterate
  Eigen::VectorXd x_, y_, z_;
  double tau_ = 1.0, kappa_ = 1.0;
  Scaling W_;

  void build_index();
  bool compute_scalings();
  void form_m();
  bool factor();
  void saddle_solve(const Eigen::VectorXd& g, const Eigen::VectorXd& h,
                    Eigen::VectorXd& p, Eigen::VectorXd& q) const;
  void ksolve(const Eigen::VectorXd& rx, const Eigen::VectorXd& ry,
              Eigen::VectorXd& dx, Eigen::VectorXd& dy) const;

  // cone-part linear operators
  Eigen::VectorXd apply_W(const Eigen::VectorXd& u) const;
  Eigen::VectorXd apply_WT(const Eigen::VectorXd& u) const;
  Eigen::VectorXd apply_Winv(const Eigen::VectorXd& u) const;
  Eigen::VectorXd apply_WinvT(const Eigen::VectorXd& u) const;
  Eigen::VectorXd apply_H(const Eigen::VectorXd& u) const;

  double max_step_cone(const Eigen::VectorXd& base,
                       const Eigen::VectorXd& delta, bool primal) const;
  Eigen::VectorXd cone_identity() const;

  Eigen::VectorXd scatter(const Eigen::VectorXd& cone_part) const {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(L_.n);
    full.tail(L_.nk) = cone_part;
    return full;
  }
};

void Ipm::build_index() {
  cone_cols_.resize(L_.nk);
  psd_rows_.resize(L_.psd_off.size());
  const auto& A = prob_.A;
  for (int col = 0; col < L_.n; ++col) {
    if (col < L_.nf) continue;
    int k = col - L_.nf;
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it)
      cone_cols_[k].push_back({static_cast<int>(it.row()), it.value()});
  }
  // PSD row supports.
  for (std::size_t b = 0; b < L_.psd_off.size(); ++b) {
    std::vector<std::vector<std::pair<int, double>>> by_row(L_.m);
    for (int loc = 0; loc < L_.psd_dim[b]; ++loc) {
      for (const auto& e : cone_cols_[L_.psd_off[b] + loc])
        by_row[e.row].emplace_back(loc, e.val);
    }
    PsdRows pr;
    std::vector<bool> in_support(L_.psd_dim[b], false);
    for (int r = 0; r < L_.m; ++r) {
      if (by_row[r].empty()) continue;
      pr.rows.push_back(r);
      for (auto& [loc, v] : by_row[r]) in_support[loc] = true;
      pr.entries.push_back(std::move(by_row[r]));
    }
    pr.support_pos.assign(L_.psd_dim[b], -1);
    for (int loc = 0; loc < L_.psd_dim[b]; ++loc)
      if (in_support[loc]) {
        pr.support_pos[loc] = static_cast<int>(pr.support.size());
        pr.support.push_back(loc);
      }
    psd_rows_[b] = std::move(pr);
  }
  F_ = prob_.A.leftCols(L_.nf);

  // Structural nonzero budget of M decides the factorization path.
  double pairs = 0.0;
  for (int k = 0; k < L_.nn_dim; ++k)
    pairs += double(cone_cols_[k].size()) * cone_cols_[k].size();
  for (std::size_t b = 0; b < L_.soc_off.size(); ++b) {
    double rows = 0.0;
    for (int i = 0; i < L_.soc_dim[b]; ++i)
      rows += cone_cols_[L_.soc_off[b] + i].size();
    pairs += rows * rows;
  }
  for (const auto& pr : psd_rows_)
    pairs += double(pr.rows.size()) * pr.rows.size();
  double density = L_.m > 0 ? pairs / (double(L_.m) * L_.m) : 1.0;
  dense_path_ = (L_.m + L_.nf <= 700) || density > 0.15;
  if (dense_path_) Fd_ = Eigen::MatrixXd(F_);
}

bool Ipm::compute_scalings() {
  const auto s = x_.tail(L_.nk);
  W_.lambda.resize(L_.nk);
  // Nonnegative block.
  W_.d.resize(L_.nn_dim);
  for (int i = 0; i < L_.nn_dim; ++i) {
    if (s[i] <= 0.0 || z_[i] <= 0.0) return false;
    W_.d[i] = std::sqrt(s[i] / z_[i]);
    W_.lambda[i] = std::sqrt(s[i] * z_[i]);
  }
  // Second-order blocks.
  W_.soc.assign(L_.soc_off.size(), {});
  for (std::size_t b = 0; b < L_.soc_off.size(); ++b) {
    auto sb = s.segment(L_.soc_off[b], L_.soc_dim[b]);
    auto zb = z_.segment(L_.soc_off[b], L_.soc_dim[b]);
    double js = jdot(sb, sb), jz = jdot(zb, zb);
    if (js <= 0.0 || jz <= 0.0 || sb[0] <= 0.0 || zb[0] <= 0.0) return false;
    double anorm = std::sqrt(js), bnorm = std::sqrt(jz);
    Eigen::VectorXd ss = sb / anorm, zz = zb / bnorm;
    double gamma = std::sqrt((1.0 + ss.dot(zz)) / 2.0);
    if (!(gamma > 0.0)) return false;
    Scaling::Soc sc;
    sc.beta = std::sqrt(anorm / bnorm);
    // Scaling point, then its Jordan square root: the reflector v with
    // v'Jv = 1 whose squared map sends the normalized z to the normalized s.
    Eigen::VectorXd w = (ss + jmul(zz)) / (2.0 * gamma);
    w[0] += 1.0;
    sc.v = w / std::sqrt(2.0 * w[0]);
    W_.soc[b] = sc;
    // lambda = W z
    auto& v = W_.soc[b].v;
    Eigen::VectorXd lz =
        sc.beta * (2.0 * v * v.dot(zb) - jmul(zb));
    W_.lambda.segment(L_.soc_off[b], L_.soc_dim[b]) = lz;
  }
  // PSD blocks.
  W_.psd.assign(L_.psd_off.size(), {});
  for (std::size_t b = 0; b < L_.psd_off.size(); ++b) {
    int side = L_.psd_side[b];
    Eigen::MatrixXd S = mat_of_svec(s.segment(L_.psd_off[b], L_.psd_dim[b]), side);
    Eigen::MatrixXd Z = mat_of_svec(z_.segment(L_.psd_off[b], L_.psd_dim[b]), side);
    Eigen::LLT<Eigen::MatrixXd> llt_s(S), llt_z(Z);
    if (llt_s.info() != Eigen::Success || llt_z.info() != Eigen::Success)
      return false;
    Scaling::Psd ps;
    ps.Ls = llt_s.matrixL();
    ps.Lz = llt_z.matrixL();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ps.Lz.transpose() * ps.Ls,
                                          Eigen::ComputeFullU |
                                              Eigen::ComputeFullV);
    ps.sigma = svd.singularValues();
    if (ps.sigma.minCoeff() <= 0.0) return false;
    Eigen::VectorXd si = ps.sigma.cwiseSqrt().cwiseInverse();
    ps.R = ps.Ls * svd.matrixV() * si.asDiagonal();
    // R^{-1} = sqrt(Sigma) V' Ls^{-1}
    Eigen::MatrixXd LsInv =
        ps.Ls.triangularView<Eigen::Lower>().solve(
            Eigen::MatrixXd::Identity(side, side));
    ps.Rinv = ps.sigma.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() *
              LsInv;
    ps.Theta = ps.R * ps.R.transpose();
    ps.ThetaInv = ps.Rinv.transpose() * ps.Rinv;
    Eigen::VectorXd lam = Eigen::VectorXd::Zero(L_.psd_dim[b]);
    int k = 0;
    for (int j = 0; j < side; ++j)
      for (int i = j; i < side; ++i, ++k)
        if (i == j) lam[k] = ps.sigma[j];
    W_.lambda.segment(L_.psd_off[b], L_.psd_dim[b]) = lam;
    W_.psd[b] = std::move(ps);
  }
  return true;
}

Eigen::VectorXd Ipm::apply_W(const Eigen::VectorXd& u) const {
  Eigen::VectorXd r(L_.nk);
  r.head(L_.nn_dim) = W_.d.cwiseProduct(u.head(L_.nn_dim));
  for (std::size_t b = 0; b < L_.soc_off.size(); ++b) {
    auto ub = u.segment(L_.soc_off[b], L_.soc_dim[b]);
    const auto& sc = W_.soc[b];
    r.segment(L_.soc_off[b], L_.soc_dim[b]) =
        sc.beta * (2.0 * sc.v * sc.v.dot(ub) - jmul(ub));
  }
  for (std::size_t b = 0; b < L_.psd_off.size(); ++b) {
    const auto& ps = W_.psd[b];
    Eigen::MatrixXd U = mat_of_svec(u.segment(L_.psd_off[b], L_.psd_dim[b]),
                                    L_.psd_side[b]);
    r.segment(L_.psd_off[b], L_.psd_dim[b]) =
        svec_of_mat(ps.R.transpose() * U * ps.R);
  }
  return r;
}

Eigen::VectorXd Ipm::apply_WT(const Eigen::VectorXd& u) const {
  Eigen::VectorXd r(L_.nk);
  r.head(L_.nn_dim) = W_.d.cwiseProduct(u.head(L_.nn_dim));
  for (std::size_t b = 0; b < L_.soc_off.size(); ++b) {
    auto ub = u.segment(L_.soc_off[b], L_.soc_dim[b]);
    const auto& sc = W_.soc[b];
    r.segment(L_.soc_off[b], L_.soc_dim[b]) =
        sc.beta * (2.0 * sc.v * sc.v.dot(ub) - jmul(ub));
  }
  for (std::size_t b = 0; b < L_.psd_off.size(); ++b) {
    const auto& ps = W_.psd[b];
    Eigen::MatrixXd U = mat_of_svec(u.segment(L_.psd_off[b], L_.psd_dim[b]),
                                    L_.psd_side[b]);
    r.segment(L_.psd_off[b], L_.psd_dim[b]) =
        svec_of_mat(ps.R * U * ps.R.transpose());
  }
  return r;
}

Eigen::VectorXd Ipm::apply_Winv(const Eigen::VectorXd& u) const {
  Eigen::VectorXd r(L_.nk);
  r.head(L_.nn_dim) = u.head(L_.nn_dim).cwiseQuotient(W_.d);
  for (std::size_t b = 0; b < L_.soc_off.size(); ++b) {
    auto ub = u.segment(L_.soc_off[b], L_.soc_dim[b]);
    const auto& sc = W_.soc[b];
    Eigen::VectorXd jv = jmul(sc.v);
    r.segment(L_.soc_off[b], L_.soc_dim[b]) =
        (2.0 * jv * jv.dot(ub) - jmul(ub)) / sc.beta;
  }
  for (std::size_t b = 0; b < L_.psd_off.size(); ++b) {
    const auto& ps = W_.psd[b];
    Eigen::MatrixXd U = mat_of_svec(u.segment(L_.psd_off[b], L_.psd_dim[b]),
                                    L_.psd_side[b]);
    r.segment(L_.psd_off[b], L_.psd_dim[b]) =
        svec_of_mat(ps.Rinv.transpose() * U * ps.Rinv);
  }
  return r;
}

Eigen::VectorXd Ipm::apply_WinvT(const Eigen::VectorXd& u) const {
  Eigen::VectorXd r(L_.nk);
  r.head(L_.nn_dim) = u.head(L_.nn_dim).cwiseQuotient(W_.d);
  for (std::size_t b = 0; b < L_.soc_off.size(); ++b) {
    auto ub = u.segment(L_.soc_off[b], L_.soc_dim[b]);
    const auto& sc = W_.soc[b];
    Eigen::VectorXd jv = jmul(sc.v);
    r.segment(L_.soc_off[b], L_.soc_dim[b]) =
        (2.0 * jv * jv.dot(ub) - jmul(ub)) / sc.beta;
  }
  for (std::size_t b = 0; b < L_.psd_off.size(); ++b) {
    const auto& ps = W_.psd[b];
    Eigen::MatrixXd U = mat_of_svec(u.segment(L_.psd_off[b], L_.psd_dim[b]),
                                    L_.psd_side[b]);
    r.segment(L_.psd_off[b], L_.psd_dim[b]) =
        svec_of_mat(ps.Rinv * U * ps.Rinv.transpose());
  }
  return r;
}

Eigen::VectorXd Ipm::apply_H(const Eigen::VectorXd& u) const {
  Eigen::VectorXd r(L_.nk);
  r.head(L_.nn_dim) =
      W_.d.array().square().matrix().cwiseProduct(u.head(L_.nn_dim));
  for (std::size_t b = 0; b < L_.soc_off.size(); ++b) {
    auto ub = u.segment(L_.soc_off[b], L_.soc_dim[b]);
    const auto& sc = W_.soc[b];
    Eigen::VectorXd w = sc.beta * (2.0 * sc.v * sc.v.dot(ub) - jmul(ub));
    r.segment(L_.soc_off[b], L_.soc_dim[b]) =
        sc.beta * (2.0 * sc.v * sc.v.dot(w) - jmul(w));
  }
  for (std::size_t b = 0; b < L_.psd_off.size(); ++b) {
    const auto& ps = W_.psd[b];
    Eigen::MatrixXd U = mat_of_svec(u.segment(L_.psd_off[b], L_.psd_dim[b]),
                                    L_.psd_side[b]);
    Eigen::MatrixXd T = ps.R.transpose() * U * ps.R;
    r.segment(L_.psd_off[b], L_.psd_dim[b]) =
        svec_of_mat(ps.R * T * ps.R.transpose());
  }
  return r;
}

void Ipm::form_m() {
  if (M_.rows() != L_.m) M_.resize(L_.m, L_.m);
  M_.setZero();
  // Nonnegative coordinates: rank-one contributions d_k^2 a_k a_k'.
  for (int k = 0; k < L_.nn_dim; ++k) {
    double h = W_.d[k] * W_.d[k];
    const auto& col = cone_cols_[k];
    for (const auto& e1 : col)
      for (const auto& e2 : col) M_(e1.row, e2.row) += h * e1.val * e2.val;
  }
  // SOC blocks: dense q x q middle matrix.
  for (std::size_t b = 0; b < L_.soc_off.size(); ++b) {
    int q = L_.soc_dim[b];
    const auto& sc = W_.soc[b];
    Eigen::MatrixXd J = -Eigen::MatrixXd::Identity(q, q);
    J(0, 0) = 1.0;
    Eigen::MatrixXd Wb =
        sc.beta * (2.0 * sc.v * sc.v.transpose() - J);
    Eigen::MatrixXd Hb = Wb * Wb;
    for (int i = 0; i < q; ++i) {
      const auto& ci = cone_cols_[L_.soc_off[b] + i];
      for (int j = 0; j < q; ++j) {
        double h = Hb(i, j);
        if (h == 0.0) continue;
        const auto& cj = cone_cols_[L_.soc_off[b] + j];
        for (const auto& e1 : ci)
          for (const auto& e2 : cj) M_(e1.row, e2.row) += h * e1.val * e2.val;
      }
    }
  }
  // PSD blocks: for each touching row i, compute B_i = Theta mat(A_i) Theta
  // restricted to the block's aggregate support, then dot against the other
  // rows' sparse entries.
  for (std::size_t b = 0; b < L_.psd_off.size(); ++b) {
    const auto& pr = psd_rows_[b];
    if (pr.rows.empty()) continue;
    int side = L_.psd_side[b];
    const Eigen::MatrixXd& Th = W_.psd[b].Theta;
    // matrix coordinates of each support svec index
    std::vector<std::pair<int, int>> coords(pr.support.size());
    {
      int k = 0;
      std::vector<std::pair<int, int>> all(L_.psd_dim[b]);
      for (int j = 0; j < side; ++j)
        for (int i = j; i < side; ++i, ++k) all[k] = {i, j};
      for (std::size_t u = 0; u < pr.support.size(); ++u)
        coords[u] = all[pr.support[u]];
    }
    Eigen::VectorXd bvals(pr.support.size());
    for (std::size_t ii = 0; ii < pr.rows.size(); ++ii) {
      // mat(A_i) as entry list (value scaled out of svec convention)
      const auto& ent = pr.entries[ii];
      bvals.setZero();
      for (const auto& [loc, v] : ent) {
        auto [r, s] = coords[static_cast<std::size_t>(pr.support_pos[loc])];
        double mval = r == s ? v : v / kSqrt2;
        for (std::size_t u = 0; u < pr.support.size(); ++u) {
          auto [p, q] = coords[u];
          double t = Th(p, r) * Th(s, q);
          if (r != s) t += Th(p, s) * Th(r, q);
          double add = mval * t;
          bvals[u] += (p == q) ? add : kSqrt2 * add;
        }
      }
      int row_i = pr.rows[ii];
      for (std::size_t jj = 0; jj < pr.rows.size(); ++jj) {
        double acc = 0.0;
        for (const auto& [loc, v] : pr.entries[jj])
          acc += v * bvals[pr.support_pos[loc]];
        M_(row_i, pr.rows[jj]) += acc;
      }
    }
  }
  M_ = 0.5 * (M_ + M_.transpose().eval());
}

bool Ipm::factor() {
  const int mk = L_.m + L_.nf;
  if (dense_path_) {
    Kd_.resize(mk, mk);
    Kd_.topLeftCorner(L_.m, L_.m) = M_;
    Kd_.topRightCorner(L_.m, L_.nf) = Fd_;
    Kd_.bottomLeftCorner(L_.nf, L_.m) = Fd_.transpose();
    Kd_.bottomRightCorner(L_.nf, L_.nf).setZero();
    // Jacobi scaling keeps the pivots near unit size; the wide dynamic range
    // of the NT scalings would otherwise swamp the factorization late on.
    jac_.resize(mk);
    for (int i = 0; i < mk; ++i) {
      double rn = Kd_.row(i).lpNorm<Eigen::Infinity>();
      jac_[i] = rn > 0 ? 1.0 / std::sqrt(rn) : 1.0;
    }
    Kd_ = jac_.asDiagonal() * Kd_ * jac_.asDiagonal();
    Kd_.topLeftCorner(L_.m, L_.m).diagonal().array() += reg_;
    Kd_.bottomRightCorner(L_.nf, L_.nf).diagonal().array() -= reg_;
    // Blocked unpivoted LDL'; valid for quasidefinite matrices.
    const int nb = 96;
    for (int k0 = 0; k0 < mk; k0 += nb) {
      int k1 = std::min(mk, k0 + nb);
      for (int j = k0; j < k1; ++j) {
        for (int t = k0; t < j; ++t) {
          double l = Kd_(j, t);
          if (l != 0.0)
            Kd_.col(j).segment(j, mk - j) -=
                (Kd_(t, t) * l) * Kd_.col(t).segment(j, mk - j);
        }
        double d = Kd_(j, j);
        double floor_reg = 1e-12;
        if (j < L_.m) {
          if (d < floor_reg) d = floor_reg;
        } else if (d > -floor_reg) {
          d = -floor_reg;
        }
        Kd_(j, j) = d;
        if (j + 1 < mk) Kd_.col(j).segment(j + 1, mk - j - 1) /= d;
      }
      if (k1 < mk) {
        Eigen::MatrixXd L21 = Kd_.block(k1, k0, mk - k1, k1 - k0);
        Eigen::MatrixXd Wp(mk - k1, k1 - k0), Wm(mk - k1, k1 - k0);
        int np = 0, nm = 0;
        for (int t = k0; t < k1; ++t) {
          double dt = Kd_(t, t);
          if (dt >= 0.0)
            Wp.col(np++) = L21.col(t - k0) * std::sqrt(dt);
          else
            Wm.col(nm++) = L21.col(t - k0) * std::sqrt(-dt);
        }
        auto trailing = Kd_.block(k1, k1, mk - k1, mk - k1);
        if (np > 0)
          trailing.selfadjointView<Eigen::Lower>().rankUpdate(
              Wp.leftCols(np), -1.0);
        if (nm > 0)
          trailing.selfadjointView<Eigen::Lower>().rankUpdate(
              Wm.leftCols(nm), 1.0);
      }
    }
    return Kd_.allFinite();
  }
  // Sparse path.
  jac_.resize(mk);
  jac_.setZero();
  for (int j = 0; j < L_.m; ++j) {
    double rn = M_.row(j).lpNorm<Eigen::Infinity>();
    jac_[j] = rn;
  }
  for (int col = 0; col < L_.nf; ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(F_, col); it; ++it) {
      double v = std::abs(it.value());
      jac_[it.row()] = std::max(jac_[it.row()], v);
      jac_[L_.m + col] = std::max(jac_[L_.m + col], v);
    }
  for (int i = 0; i < mk; ++i)
    jac_[i] = jac_[i] > 0 ? 1.0 / std::sqrt(jac_[i]) : 1.0;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(L_.m) * 8 + F_.nonZeros() * 2 + mk);
  for (int j = 0; j < L_.m; ++j) {
    for (int i = 0; i < L_.m; ++i) {
      double v = M_(i, j) * jac_[i] * jac_[j];
      if (i == j)
        trip.emplace_back(i, j, v + reg_);
      else if (v != 0.0)
        trip.emplace_back(i, j, v);
    }
  }
  for (int col = 0; col < L_.nf; ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(F_, col); it; ++it) {
      double v = it.value() * jac_[it.row()] * jac_[L_.m + col];
      trip.emplace_back(static_cast<int>(it.row()), L_.m + col, v);
      trip.emplace_back(L_.m + col, static_cast<int>(it.row()), v);
    }
  for (int j = 0; j < L_.nf; ++j)
    trip.emplace_back(L_.m + j, L_.m + j, -reg_);
  Ks_.resize(mk, mk);
  Ks_.setFromTriplets(trip.begin(), trip.end());
  sldlt_.compute(Ks_);
  return sldlt_.info() == Eigen::Success;
}

void Ipm::saddle_solve(const Eigen::VectorXd& g, const Eigen::VectorXd& h,
                       Eigen::VectorXd& p, Eigen::VectorXd& q) const {
  const int mk = L_.m + L_.nf;
  Eigen::VectorXd rhs(mk);
  rhs.head(L_.m) = g;
  rhs.tail(L_.nf) = h;
  Eigen::VectorXd sol(mk);
  auto solve_once = [&](const Eigen::VectorXd& r) {
    Eigen::VectorXd t = jac_.cwiseProduct(r);
    if (dense_path_) {
      Kd_.triangularView<Eigen::UnitLower>().solveInPlace(t);
      t.array() /= Kd_.diagonal().array();
      Kd_.transpose().triangularView<Eigen::UnitUpper>().solveInPlace(t);
    } else {
      t = sldlt_.solve(t);
    }
    return Eigen::VectorXd(jac_.cwiseProduct(t));
  };
  sol = solve_once(rhs);
  // Iterative refinement against the unregularized saddle operator; keep the
  // best iterate in case a correction diverges.
  auto residual = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd res(mk);
    res.head(L_.m) = g - M_.selfadjointView<Eigen::Lower>() * v.head(L_.m) -
                     F_ * v.tail(L_.nf);
    res.tail(L_.nf) = h - F_.transpose() * v.head(L_.m);
    return res;
  };
  Eigen::VectorXd res = residual(sol);
  double best = res.lpNorm<Eigen::Infinity>();
  const double target = 1e-14 * (1.0 + rhs.lpNorm<Eigen::Infinity>());
  for (int pass = 0; pass < 3 && best > target; ++pass) {
    Eigen::VectorXd trial = sol + solve_once(res);
    Eigen::VectorXd tres = residual(trial);
    double tn = tres.lpNorm<Eigen::Infinity>();
    if (!(tn < best)) break;
    sol = std::move(trial);
    res = std::move(tres);
    best = tn;
  }
  p = sol.head(L_.m);
  q = sol.tail(L_.nf);
}

void Ipm::ksolve(const Eigen::VectorXd& rx, const Eigen::VectorXd& ry,
                 Eigen::VectorXd& dx, Eigen::VectorXd& dy) const {
  Eigen::VectorXd rK = rx.tail(L_.nk);
  Eigen::VectorXd rf = rx.head(L_.nf);
  Eigen::VectorXd t = apply_H(rK);
  Eigen::VectorXd g = ry - prob_.A * scatter(t);
  Eigen::VectorXd h = -rf;
  Eigen::VectorXd q;
  saddle_solve(g, h, dy, q);
  Eigen::VectorXd aty = prob_.A.transpose() * dy;
  Eigen::VectorXd dK = apply_H(rK + aty.tail(L_.nk));
  dx.resize(L_.n);
  dx.head(L_.nf) = q;
  dx.tail(L_.nk) = dK;
}

Eigen::VectorXd Ipm::cone_identity() const {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(L_.nk);
  e.head(L_.nn_dim).setOnes();
  for (std::size_t b = 0; b < L_.soc_off.size(); ++b) e[L_.soc_off[b]] = 1.0;
  for (std::size_t b = 0; b < L_.psd_off.size(); ++b) {
    int side = L_.psd_side[b];
    int k = L_.psd_off[b];
    for (int j = 0; j < side; ++j) {
      e[k] = 1.0;
      k += side - j;
    }
  }
  return e;
}

double Ipm::max_step_cone(const Eigen::VectorXd& base,
                          const Eigen::VectorXd& delta, bool primal) const {
  double alpha = kInf;
  for (int i = 0; i < L_.nn_dim; ++i)
    if (delta[i] < 0.0) alpha = std::min(alpha, -base[i] / delta[i]);
  for (std::size_t b = 0; b < L_.soc_off.size(); ++b) {
    auto u = base.segment(L_.soc_off[b], L_.soc_dim[b]);
    auto d = delta.segment(L_.soc_off[b], L_.soc_dim[b]);
    double a = jdot(u, u), bb = jdot(u, d), cc = jdot(d, d);
    // first positive root of a + 2 alpha b + alpha^2 c = 0
    double root = kInf;
    if (cc < 0.0 || bb < 0.0) {
      double disc = bb * bb - a * cc;
      if (disc >= 0.0) {
        double sq = std::sqrt(disc);
        if (cc != 0.0) {
          double r1 = (-bb - sq) / cc, r2 = (-bb + sq) / cc;
          for (double r : {r1, r2})
            if (r > 0.0) root = std::min(root, r);
        } else if (bb < 0.0) {
          root = -a / (2.0 * bb);
        }
      }
    }
    if (d[0] < 0.0) root = std::min(root, -u[0] / d[0]);
    alpha = std::min(alpha, root);
  }
  for (std::size_t b = 0; b < L_.psd_off.size(); ++b) {
    int side = L_.psd_side[b];
    Eigen::MatrixXd D =
        mat_of_svec(delta.segment(L_.psd_off[b], L_.psd_dim[b]), side);
    const Eigen::MatrixXd& Lc = primal ? W_.psd[b].Ls : W_.psd[b].Lz;
    Eigen::MatrixXd T =
        Lc.triangularView<Eigen::Lower>().solve(D);
    T = Lc.triangularView<Eigen::Lower>()
            .solve(T.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        0.5 * (T + T.transpose()), Eigen::EigenvaluesOnly);
    double lmin = eig.eigenvalues().minCoeff();
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

IpmResult Ipm::run() {
  IpmResult out;
  const int deg = prob_.cones.barrier_degree() + 1;
  const double normb = 1.0 + prob_.b.norm();
  const double normc = 1.0 + prob_.c.norm();

  x_ = Eigen::VectorXd::Zero(L_.n);
  x_.tail(L_.nk) = cone_identity();
  y_ = Eigen::VectorXd::Zero(L_.m);
  z_ = cone_identity();
  tau_ = 1.0;
  kappa_ = 1.0;

  double best_metric = kInf;
  Eigen::VectorXd bx, by, bz;
  double btau = 1.0;
  int bad_steps = 0;
  int stall_count = 0;
  double last_best = kInf;
  Eigen::VectorXd prev_x_ = x_, prev_y_ = y_, prev_z_ = z_;
  double prev_tau_ = tau_, prev_kappa_ = kappa_;

  for (int iter = 0; iter <= set_.max_iterations; ++iter) {
    // Residuals.
    Eigen::VectorXd rp = prob_.A * x_ - prob_.b * tau_;
    Eigen::VectorXd rd =
        -(prob_.A.transpose() * y_) + prob_.c * tau_ - scatter(z_);
    double cx = prob_.c.dot(x_), by_ = prob_.b.dot(y_);
    double rg = kappa_ - by_ + cx;
    double gap = x_.tail(L_.nk).dot(z_) + tau_ * kappa_;
    double mu = gap / deg;

    double pobj = cx / tau_, dobj = by_ / tau_;
    double pres = rp.norm() / (tau_ * normb);
    double dres = rd.norm() / (tau_ * normc);
    double sz = x_.tail(L_.nk).dot(z_);
    double relgap =
        sz / (tau_ * tau_) /
        std::max({1.0, std::abs(pobj), std::abs(dobj)});
    double metric = std::max({pres, dres, relgap});

    if (metric < best_metric) {
      best_metric = metric;
      bx = x_;
      by = y_;
      bz = z_;
      btau = tau_;
    }

    auto finalize = [&](IpmStatus st, const std::string& msg) {
      out.status = st;
      out.x = bx / btau;
      out.y = by / btau;
      out.z = bz / btau;
      out.primal_objective = prob_.c.dot(bx) / btau;
      out.dual_objective = prob_.b.dot(by) / btau;
      out.rel_gap = best_metric;
      out.primal_residual = (prob_.A * bx - prob_.b * btau).norm() /
                            (btau * normb);
      out.dual_residual =
          (-(prob_.A.transpose() * by) + prob_.c * btau - scatter(bz)).norm() /
          (btau * normc);
      out.iterations = iter;
      out.message = msg;
      return out;
    };

    if (metric <= set_.tolerance)
      return finalize(IpmStatus::Optimal, "converged");

    // Infeasibility certificates.
    Eigen::VectorXd dual_comb = prob_.A.transpose() * y_ + scatter(z_);
    if (by_ > 0.0 && dual_comb.norm() * std::max(1.0, prob_.b.norm()) <=
                         set_.tolerance * by_ * 1e2) {
      out.status = IpmStatus::PrimalInfeasible;
      out.y = y_ / by_;
      out.z = z_ / by_;
      out.x = x_;
      out.message = "primal infeasibility certificate";
      out.iterations = iter;
      return out;
    }
    if (cx < 0.0 && (prob_.A * x_).norm() * std::max(1.0, prob_.c.norm()) <=
                        set_.tolerance * (-cx) * 1e2) {
      out.status = IpmStatus::DualInfeasible;
      out.x = x_ / (-cx);
      out.y = y_;
      out.z = z_;
      out.message = "dual infeasibility certificate";
      out.iterations = iter;
      return out;
    }

    if (iter == set_.max_iterations)
      return finalize(best_metric <= 1e-5 ? IpmStatus::NearOptimal
                                          : IpmStatus::IterationLimit,
                      "iteration limit");

    // Stop once iterations degrade instead of improving; the best iterate
    // is already in hand.
    if (metric > 10.0 * best_metric && best_metric < 1e-6)
      return finalize(IpmStatus::NearOptimal, "terminal degradation");
    if (iter > 0 && iter % 10 == 0) {
      if (best_metric > 0.9 * last_best) ++stall_count;
      else stall_count = 0;
      last_best = best_metric;
      if (stall_count >= 2)
        return finalize(best_metric <= 1e-5 ? IpmStatus::NearOptimal
                                            : IpmStatus::NumericalError,
                        "progress stalled");
    }

    if (!compute_scalings()) {
      // Back off toward the previous iterate until the scalings are
      // computable again.
      bool recovered = false;
      for (int back = 0; back < 4 && !recovered; ++back) {
        x_ = 0.5 * (x_ + prev_x_);
        y_ = 0.5 * (y_ + prev_y_);
        z_ = 0.5 * (z_ + prev_z_);
        tau_ = 0.5 * (tau_ + prev_tau_);
        kappa_ = 0.5 * (kappa_ + prev_kappa_);
        recovered = compute_scalings();
      }
      if (!recovered)
        return finalize(best_metric <= 1e-5 ? IpmStatus::NearOptimal
                                            : IpmStatus::NumericalError,
                        "iterate left the cone interior");
    }
    form_m();
    reg_ = 1e-12;  // on the Jacobi-scaled system
    if (!factor())
      return finalize(best_metric <= 1e-5 ? IpmStatus::NearOptimal
                                          : IpmStatus::NumericalError,
                      "KKT factorization failed");

    // Shared (c, b) solve for the tau terms.
    Eigen::VectorXd ux2, uy2;
    ksolve(-prob_.c, prob_.b, ux2, uy2);
    double denom0 = kappa_ / tau_ + prob_.b.dot(uy2) - prob_.c.dot(ux2);

    auto direction = [&](const Eigen::VectorXd& Rp, const Eigen::VectorXd& Rd,
                         double Rg, const Eigen::VectorXd& dsc, double dtk,
                         Eigen::VectorXd& dx, Eigen::VectorXd& dy,
                         Eigen::VectorXd& dz, double& dtau, double& dkap) {
      Eigen::VectorXd rx = Rd - scatter(apply_Winv(dsc));
      Eigen::VectorXd ux1, uy1;
      ksolve(rx, Rp, ux1, uy1);
      double num = Rg - prob_.b.dot(uy1) + prob_.c.dot(ux1) - dtk / tau_;
      double denom = denom0;
      if (std::abs(denom) < 1e-14) denom = denom < 0 ? -1e-14 : 1e-14;
      dtau = num / denom;
      dx = ux1 + dtau * ux2;
      dy = uy1 + dtau * uy2;
      // Recover dz from the dual equation directly so that dual feasibility
      // holds to rounding; the leftover error lands in the centering
      // equation where it only shortens steps.
      Eigen::VectorXd dual = -(prob_.A.transpose() * dy) + dtau * prob_.c - Rd;
      dz = dual.tail(L_.nk);
      dkap = (-dtk - kappa_ * dtau) / tau_;
    };

    // Affine direction.
    Eigen::VectorXd dxa, dya, dza;
    double dtaua, dkapa;
    direction(-rp, -rd, rg, W_.lambda, tau_ * kappa_, dxa, dya, dza, dtaua,
              dkapa);

    if (set_.verify_directions) {
      Eigen::VectorXd e1 = prob_.A * dxa - prob_.b * dtaua + rp;
      Eigen::VectorXd e2 = -(prob_.A.transpose() * dya) - scatter(dza) +
                           prob_.c * dtaua + rd;
      double e3 = prob_.b.dot(dya) - prob_.c.dot(dxa) - dkapa - rg;
      double scale = 1.0 + x_.norm() + z_.norm() + dxa.norm() + dza.norm() +
                     std::abs(dtaua) + std::abs(dkapa);
      if (e1.norm() > 1e-6 * scale || e2.norm() > 1e-6 * scale ||
          std::abs(e3) > 1e-6 * scale)
        return finalize(IpmStatus::NumericalError,
                        "direction verification failed");
    }

    double alpha_a = std::min(
        {max_step_cone(x_.tail(L_.nk), dxa.tail(L_.nk), true),
         max_step_cone(z_, dza, false),
         dtaua < 0 ? -tau_ / dtaua : kInf,
         dkapa < 0 ? -kappa_ / dkapa : kInf});
    double step_a = std::min(1.0, 0.99 * alpha_a);

    double gap_a =
        (x_.tail(L_.nk) + step_a * dxa.tail(L_.nk)).dot(z_ + step_a * dza) +
        (tau_ + step_a * dtaua) * (kappa_ + step_a * dkapa);
    double sigma = std::pow(std::max(0.0, gap_a / gap), 3.0);
    sigma = std::min(1.0, sigma);

    // Combined direction with Mehrotra correction.
    Eigen::VectorXd ds_a = apply_WinvT(dxa.tail(L_.nk));
    Eigen::VectorXd dz_a = apply_W(dza);
    Eigen::VectorXd dsc(L_.nk);
    double smu = sigma * mu;
    {
      // nonneg
      for (int i = 0; i < L_.nn_dim; ++i) {
        double lam = W_.lambda[i];
        dsc[i] = (lam * lam + ds_a[i] * dz_a[i] - smu) / lam;
      }
      // soc
      for (std::size_t b = 0; b < L_.soc_off.size(); ++b) {
        int q = L_.soc_dim[b];
        auto lam = W_.lambda.segment(L_.soc_off[b], q);
        auto u = ds_a.segment(L_.soc_off[b], q);
        auto v = dz_a.segment(L_.soc_off[b], q);
        Eigen::VectorXd rhs(q);
        rhs[0] = lam.squaredNorm() + u.dot(v) - smu;
        rhs.tail(q - 1) = 2.0 * lam[0] * lam.tail(q - 1) +
                          u[0] * v.tail(q - 1) + v[0] * u.tail(q - 1);
        double a = jdot(lam, lam);
        double r0 = (lam[0] * rhs[0] - lam.tail(q - 1).dot(rhs.tail(q - 1))) / a;
        dsc[L_.soc_off[b]] = r0;
        dsc.segment(L_.soc_off[b] + 1, q - 1) =
            (rhs.tail(q - 1) - r0 * lam.tail(q - 1)) / lam[0];
      }
      // psd
      for (std::size_t b = 0; b < L_.psd_off.size(); ++b) {
        int side = L_.psd_side[b];
        const auto& sig = W_.psd[b].sigma;
        Eigen::MatrixXd U =
            mat_of_svec(ds_a.segment(L_.psd_off[b], L_.psd_dim[b]), side);
        Eigen::MatrixXd V =
            mat_of_svec(dz_a.segment(L_.psd_off[b], L_.psd_dim[b]), side);
        Eigen::MatrixXd C = 0.5 * (U * V + V * U);
        for (int j = 0; j < side; ++j) {
          C(j, j) += sig[j] * sig[j] - smu;
          for (int i = 0; i < side; ++i) C(i, j) *= 2.0 / (sig[i] + sig[j]);
        }
        dsc.segment(L_.psd_off[b], L_.psd_dim[b]) =
            svec_of_mat(0.5 * (C + C.transpose()));
      }
    }
    double dtk = tau_ * kappa_ + dtaua * dkapa - smu;

    Eigen::VectorXd dx, dy, dz;
    double dtau, dkap;
    direction(-(1.0 - sigma) * rp, -(1.0 - sigma) * rd, (1.0 - sigma) * rg,
              dsc, dtk, dx, dy, dz, dtau, dkap);

    double alpha = std::min(
        {max_step_cone(x_.tail(L_.nk), dx.tail(L_.nk), true),
         max_step_cone(z_, dz, false), dtau < 0 ? -tau_ / dtau : kInf,
         dkap < 0 ? -kappa_ / dkap : kInf});
    double step = std::min(1.0, 0.99 * alpha);
    if (!(step > 0.0) || !std::isfinite(step)) step = 0.0;

    if (set_.trace)
      std::cerr << "iter " << iter << " mu " << mu << " pres " << pres
                << " dres " << dres << " relgap " << relgap << " sigma "
                << sigma << " alpha " << alpha << " tau " << tau_ << " kappa "
                << kappa_ << "\n";

    if (step < 1e-8 || !dx.allFinite() || !dz.allFinite() ||
        !dy.allFinite() || !std::isfinite(dtau) || !std::isfinite(dkap)) {
      if (++bad_steps >= 3)
        return finalize(best_metric <= 1e-5 ? IpmStatus::NearOptimal
                                            : IpmStatus::NumericalError,
                        "step size collapsed");
      continue;
    }
    bad_steps = 0;

    prev_x_ = x_;
    prev_y_ = y_;
    prev_z_ = z_;
    prev_tau_ = tau_;
    prev_kappa_ = kappa_;
    x_ += step * dx;
    y_ += step * dy;
    z_ += step * dz;
    tau_ += step * dtau;
    kappa_ += step * dkap;
    if (!(tau_ > 0.0) || !(kappa_ > 0.0) || !x_.allFinite())
      return finalize(best_metric <= 1e-5 ? IpmStatus::NearOptimal
                                          : IpmStatus::NumericalError,
                      "iterate diverged");
  }
  out.message = "unreachable";
  return out;
}

}  // namespace

namespace {

// Block-uniform Ruiz equilibration. Columns in the same SOC/PSD block share
// one scale so cone membership is preserved.
struct Equilibration {
  Eigen::VectorXd row_scale, col_scale;
  double b_scale = 1.0, c_scale = 1.0;
};

Equilibration equilibrate(StandardProblem& p) {
  const int m = static_cast<int>(p.A.rows());
  const int n = static_cast<int>(p.A.cols());
  Equilibration eq;
  eq.row_scale = Eigen::VectorXd::Ones(m);
  eq.col_scale = Eigen::VectorXd::Ones(n);

  // column -> scaling group
  std::vector<int> group(n);
  int g = 0;
  int col = 0;
  for (int i = 0; i < p.cones.n_free; ++i) group[col++] = g++;
  for (int i = 0; i < p.cones.n_nonneg; ++i) group[col++] = g++;
  for (int q : p.cones.soc) {
    for (int i = 0; i < q; ++i) group[col++] = g;
    ++g;
  }
  for (int s : p.cones.psd) {
    for (int i = 0; i < s * (s + 1) / 2; ++i) group[col++] = g;
    ++g;
  }
  const int ngroups = g;

  for (int pass = 0; pass < 4; ++pass) {
    Eigen::VectorXd rmax = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd gmax = Eigen::VectorXd::Zero(ngroups);
    for (int j = 0; j < n; ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(p.A, j); it; ++it) {
        double v = std::abs(it.value()) * eq.row_scale[it.row()] *
                   eq.col_scale[j];
        rmax[it.row()] = std::max(rmax[it.row()], v);
        gmax[group[j]] = std::max(gmax[group[j]], v);
      }
    for (int i = 0; i < m; ++i)
      if (rmax[i] > 0.0) eq.row_scale[i] /= std::sqrt(rmax[i]);
    Eigen::VectorXd gscale = Eigen::VectorXd::Ones(ngroups);
    for (int k = 0; k < ngroups; ++k)
      if (gmax[k] > 0.0) gscale[k] = 1.0 / std::sqrt(gmax[k]);
    for (int j = 0; j < n; ++j) eq.col_scale[j] *= gscale[group[j]];
  }

  for (int j = 0; j < n; ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(p.A, j); it; ++it)
      it.valueRef() *= eq.row_scale[it.row()] * eq.col_scale[j];
  p.b = p.b.cwiseProduct(eq.row_scale);
  p.c = p.c.cwiseProduct(eq.col_scale);
  double bn = p.b.lpNorm<Eigen::Infinity>();
  double cn = p.c.lpNorm<Eigen::Infinity>();
  eq.b_scale = bn > 1.0 ? 1.0 / bn : 1.0;
  eq.c_scale = cn > 1.0 ? 1.0 / cn : 1.0;
  p.b *= eq.b_scale;
  p.c *= eq.c_scale;
  return eq;
}

}  // namespace

IpmResult solve_standard(const StandardProblem& problem,
                         const IpmSettings& settings) {
  StandardProblem scaled = problem;
  Equilibration eq;
  if (settings.equilibrate) {
    eq = equilibrate(scaled);
  } else {
    eq.row_scale = Eigen::VectorXd::Ones(scaled.A.rows());
    eq.col_scale = Eigen::VectorXd::Ones(scaled.A.cols());
  }

  Ipm ipm(scaled, settings);
  IpmResult res = ipm.run();

  // Undo the scaling. x = C x~ / b_scale, y = R y~ / c_scale,
  // z = C^{-1} z~ / c_scale.
  if (res.x.size() == scaled.A.cols()) {
    res.x = res.x.cwiseProduct(eq.col_scale) / eq.b_scale;
    res.y = res.y.cwiseProduct(eq.row_scale) / eq.c_scale;
    res.z = res.z.cwiseQuotient(eq.col_scale.tail(res.z.size())) /
            eq.c_scale;
    res.primal_objective = problem.c.dot(res.x);
    res.dual_objective = problem.b.dot(res.y);
  }
  return res;
}

}  // namespace conicopf
