#include "curvcomplex/simplex.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace curvcomplex {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

using Vec = Eigen::VectorXd;

bool finite(double v) { return std::isfinite(v); }

class Solver {
 public:
  Solver(const LinearModel& model, const SimplexOptions& options);
  LPSolution run(const Basis* warm);

 private:
  enum class Outcome { Optimal, Infeasible, Unbounded, IterationLimit };

  // Problem data, internally scaled so costs are O(1).
  const LinearModel& model_;
  SimplexOptions opt_;
  int n_ = 0, m_ = 0, total_ = 0;
  std::vector<double> cost_, work_cost_, lo_, up_;
  std::vector<int> col_start_, col_row_;
  std::vector<double> col_val_;
  std::vector<int> row_start_, row_col_;
  std::vector<double> row_val_;
  double cost_scale_ = 1.0;
  double primal_tol_ = 1e-9, dual_tol_ = 1e-9;

  // Basis state.
  std::vector<VarStatus> status_;
  std::vector<double> x_, d_;
  std::vector<int> basis_, pos_;
  std::vector<double> weight_;  // dual Devex (per row) or primal Devex (per variable)
  std::int64_t iterations_ = 0;

  // Factorization B = B0 * E_1 * ... * E_k.
  struct Eta {
    int p = 0;
    double pivot = 1.0;
    std::vector<int> idx;
    std::vector<double> val;
  };
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;

  // Scratch.
  Vec rho_, column_, work_;
  std::vector<double> alpha_row_;

  bool boxed(int j) const { return finite(lo_[j]) && finite(up_[j]); }
  bool fixed(int j) const { return lo_[j] == up_[j]; }
  double nonbasic_value(int j) const;
  VarStatus default_status(int j, double reduced) const;

  void reset_to_slack();
  bool adopt_warm(const Basis& warm);
  bool factor();
  void ftran(Vec& y) const;
  void btran(Vec& z) const;
  void load_column(int j, Vec& v) const;
  void add_column(int j, double scale, Vec& v) const;
  double column_dot(int j, const Vec& y) const;
  void compute_primal();
  void compute_duals(const std::vector<double>& c);
  void compute_pivot_row(int r);
  void replace_basic(int r, int q);
  bool refresh();
  double primal_infeasibility(int j) const;

  bool make_dual_feasible();
  void perturb_costs();
  Outcome dual_simplex();
  Outcome primal_simplex();
};

Solver::Solver(const LinearModel& model, const SimplexOptions& options) : model_(model), opt_(options) {
  model.validate();
  n_ = model.num_variables();
  m_ = model.num_rows();
  total_ = n_ + m_;
  cost_.assign(static_cast<std::size_t>(total_), 0.0);
  lo_.resize(static_cast<std::size_t>(total_));
  up_.resize(static_cast<std::size_t>(total_));
  double cmax = 0.0, bmax = 1.0;
  for (int j = 0; j < n_; ++j) {
    cost_[j] = model.cost(j);
    lo_[j] = model.lower(j);
    up_[j] = model.upper(j);
    cmax = std::max(cmax, std::abs(cost_[j]));
    if (finite(lo_[j])) bmax = std::max(bmax, std::abs(lo_[j]));
    if (finite(up_[j])) bmax = std::max(bmax, std::abs(up_[j]));
  }
  cost_scale_ = std::max(1.0, cmax);
  for (double& c : cost_) c /= cost_scale_;
  for (int i = 0; i < m_; ++i) {
    up_[n_ + i] = model.rhs(i);
    lo_[n_ + i] = model.relation(i) == Relation::Equal ? model.rhs(i) : -kInfinity;
    bmax = std::max(bmax, std::abs(model.rhs(i)));
  }
  primal_tol_ = opt_.feasibility_tol * bmax;
  dual_tol_ = opt_.optimality_tol;
  work_cost_ = cost_;

  row_start_.assign(static_cast<std::size_t>(m_) + 1, 0);
  std::vector<int> count(static_cast<std::size_t>(n_) + 1, 0);
  for (int i = 0; i < m_; ++i) {
    const auto cols = model.row_columns(i);
    row_start_[i + 1] = row_start_[i] + static_cast<int>(cols.size());
    for (Index c : cols) ++count[c + 1];
  }
  row_col_.reserve(static_cast<std::size_t>(row_start_[m_]));
  row_val_.reserve(static_cast<std::size_t>(row_start_[m_]));
  for (int i = 0; i < m_; ++i) {
    const auto cols = model.row_columns(i);
    const auto vals = model.row_coefficients(i);
    row_col_.insert(row_col_.end(), cols.begin(), cols.end());
    row_val_.insert(row_val_.end(), vals.begin(), vals.end());
  }
  col_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + count[j + 1];
  col_row_.resize(row_col_.size());
  col_val_.resize(row_col_.size());
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int i = 0; i < m_; ++i)
    for (int k = row_start_[i]; k < row_start_[i + 1]; ++k) {
      const int slot = fill[row_col_[k]]++;
      col_row_[slot] = i;
      col_val_[slot] = row_val_[k];
    }

  rho_.resize(m_);
  column_.resize(m_);
  work_.resize(m_);
  alpha_row_.assign(static_cast<std::size_t>(total_), 0.0);
}

double Solver::nonbasic_value(int j) const {
  switch (status_[j]) {
    case VarStatus::AtLower: return lo_[j];
    case VarStatus::AtUpper: return up_[j];
    default: return 0.0;
  }
}

VarStatus Solver::default_status(int j, double reduced) const {
  if (boxed(j)) return reduced >= 0.0 ? VarStatus::AtLower : VarStatus::AtUpper;
  if (finite(lo_[j])) return VarStatus::AtLower;
  if (finite(up_[j])) return VarStatus::AtUpper;
  return VarStatus::Free;
}

void Solver::reset_to_slack() {
  status_.assign(static_cast<std::size_t>(total_), VarStatus::Basic);
  for (int j = 0; j < n_; ++j) status_[j] = default_status(j, cost_[j]);
  basis_.resize(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
}

bool Solver::adopt_warm(const Basis& warm) {
  const int warm_rows = static_cast<int>(warm.status.size()) - n_;
  if (warm_rows < 0 || warm_rows > m_) return false;
  status_.assign(static_cast<std::size_t>(total_), VarStatus::Basic);
  for (int j = 0; j < n_ + warm_rows; ++j) status_[j] = warm.status[j];
  basis_.clear();
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::Basic) {
      basis_.push_back(j);
      continue;
    }
    // Bounds may have moved since the basis was produced.
    if (status_[j] == VarStatus::AtLower && !finite(lo_[j])) status_[j] = default_status(j, 0.0);
    if (status_[j] == VarStatus::AtUpper && !finite(up_[j])) status_[j] = default_status(j, 0.0);
    if (status_[j] == VarStatus::Free && (finite(lo_[j]) || finite(up_[j]))) status_[j] = default_status(j, 0.0);
  }
  return static_cast<int>(basis_.size()) == m_;
}

bool Solver::factor() {
  etas_.clear();
  pos_.assign(static_cast<std::size_t>(total_), -1);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(m_) * 3);
  for (int r = 0; r < m_; ++r) {
    const int j = basis_[r];
    pos_[j] = r;
    if (j >= n_) {
      trip.emplace_back(j - n_, r, -1.0);
    } else {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) trip.emplace_back(col_row_[k], r, col_val_[k]);
    }
  }
  if (m_ == 0) return true;
  Eigen::SparseMatrix<double> B(m_, m_);
  B.setFromTriplets(trip.begin(), trip.end());
  B.makeCompressed();
  lu_.analyzePattern(B);
  lu_.factorize(B);
  return lu_.info() == Eigen::Success;
}

void Solver::ftran(Vec& y) const {
  if (m_ == 0) return;
  y = lu_.solve(y);
  for (const Eta& e : etas_) {
    const double yp = y[e.p] / e.pivot;
    y[e.p] = yp;
    if (yp == 0.0) continue;
    for (std::size_t k = 0; k < e.idx.size(); ++k) y[e.idx[k]] -= e.val[k] * yp;
  }
}

void Solver::btran(Vec& z) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = z[it->p];
    for (std::size_t k = 0; k < it->idx.size(); ++k) s -= it->val[k] * z[it->idx[k]];
    z[it->p] = s / it->pivot;
  }
  z = lu_.transpose().solve(z);
}

void Solver::load_column(int j, Vec& v) const {
  v.setZero();
  add_column(j, 1.0, v);
}

void Solver::add_column(int j, double scale, Vec& v) const {
  if (j >= n_) {
    v[j - n_] -= scale;
    return;
  }
  for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) v[col_row_[k]] += scale * col_val_[k];
}

double Solver::column_dot(int j, const Vec& y) const {
  if (j >= n_) return -y[j - n_];
  double s = 0.0;
  for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) s += col_val_[k] * y[col_row_[k]];
  return s;
}

void Solver::compute_primal() {
  x_.assign(static_cast<std::size_t>(total_), 0.0);
  work_.setZero();
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::Basic) continue;
    x_[j] = nonbasic_value(j);
    if (x_[j] != 0.0) add_column(j, -x_[j], work_);
  }
  ftran(work_);
  for (int r = 0; r < m_; ++r) x_[basis_[r]] = work_[r];
}

void Solver::compute_duals(const std::vector<double>& c) {
  for (int r = 0; r < m_; ++r) rho_[r] = c[basis_[r]];
  btran(rho_);
  d_.assign(static_cast<std::size_t>(total_), 0.0);
  for (int j = 0; j < total_; ++j)
    if (status_[j] != VarStatus::Basic) d_[j] = c[j] - column_dot(j, rho_);
}

// alpha_row_[j] = (B^{-1} A_j)_r for every nonbasic j; rho_ = B^{-T} e_r.
void Solver::compute_pivot_row(int r) {
  rho_.setZero();
  rho_[r] = 1.0;
  btran(rho_);
  std::fill(alpha_row_.begin(), alpha_row_.end(), 0.0);
  for (int i = 0; i < m_; ++i) {
    const double ri = rho_[i];
    if (std::abs(ri) < 1e-14) continue;
    for (int k = row_start_[i]; k < row_start_[i + 1]; ++k) alpha_row_[row_col_[k]] += ri * row_val_[k];
    alpha_row_[n_ + i] = -ri;
  }
}

// Basis change at position r with entering q; column_ holds B^{-1} A_q.
void Solver::replace_basic(int r, int q) {
  const int leaving = basis_[r];
  pos_[leaving] = -1;
  basis_[r] = q;
  pos_[q] = r;
  status_[q] = VarStatus::Basic;
  Eta e;
  e.p = r;
  e.pivot = column_[r];
  for (int i = 0; i < m_; ++i)
    if (i != r && std::abs(column_[i]) > 1e-13) {
      e.idx.push_back(i);
      e.val.push_back(column_[i]);
    }
  etas_.push_back(std::move(e));
}

// Refactorizes and recomputes primal values; false if B is singular.
bool Solver::refresh() {
  if (!factor()) return false;
  compute_primal();
  return true;
}

double Solver::primal_infeasibility(int j) const {
  if (x_[j] < lo_[j] - primal_tol_) return lo_[j] - x_[j];
  if (x_[j] > up_[j] + primal_tol_) return x_[j] - up_[j];
  return 0.0;
}

bool Solver::make_dual_feasible() {
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::Basic || fixed(j)) continue;
    if (boxed(j)) {
      status_[j] = d_[j] >= 0.0 ? VarStatus::AtLower : VarStatus::AtUpper;
      continue;
    }
    const bool ok = (status_[j] == VarStatus::AtLower && d_[j] >= -dual_tol_) ||
                    (status_[j] == VarStatus::AtUpper && d_[j] <= dual_tol_) ||
                    (status_[j] == VarStatus::Free && std::abs(d_[j]) <= dual_tol_);
    if (!ok) return false;
  }
  return true;
}

// Deterministic cost shifts that widen the dual-feasible margin of every
// nonbasic variable; they break the heavy dual degeneracy of the pair models.
void Solver::perturb_costs() {
  std::mt19937_64 gen(0x5eed);
  for (int j = 0; j < n_; ++j) {
    const double u = 0.5 + 0.5 * static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const double xi = 5e-7 * (1.0 + std::abs(cost_[j])) * u;
    if (status_[j] == VarStatus::AtLower && !fixed(j)) work_cost_[j] += xi;
    else if (status_[j] == VarStatus::AtUpper && !fixed(j)) work_cost_[j] -= xi;
  }
}

Solver::Outcome Solver::dual_simplex() {
  weight_.assign(static_cast<std::size_t>(m_), 1.0);
  int degenerate = 0;
  struct Candidate {
    double ratio;
    int j;
  };
  std::vector<Candidate> cand;
  std::vector<int> flips;

  while (true) {
    if (iterations_ >= opt_.iteration_limit) return Outcome::IterationLimit;
    if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
      if (!refresh()) return Outcome::IterationLimit;
      compute_duals(work_cost_);
    }
    const bool bland = degenerate > opt_.bland_after;

    // Leaving row.
    int r = -1;
    double best = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      const double inf = primal_infeasibility(j);
      if (inf <= 0.0) continue;
      if (bland) {
        if (r < 0 || j < basis_[r]) r = i;
        continue;
      }
      const double score = inf * inf / weight_[i];
      if (score > best) {
        best = score;
        r = i;
      }
    }
    if (r < 0) return Outcome::Optimal;

    const int p = basis_[r];
    const bool to_lower = x_[p] < lo_[p];
    const double target = to_lower ? lo_[p] : up_[p];
    const double s = to_lower ? 1.0 : -1.0;
    compute_pivot_row(r);

    cand.clear();
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::Basic || fixed(j)) continue;
      const double a = alpha_row_[j];
      if (std::abs(a) < opt_.pivot_tol) continue;
      double ratio;
      if (status_[j] == VarStatus::AtLower) {
        if (s * a >= 0.0) continue;
        ratio = std::max(d_[j], 0.0) / std::abs(a);
      } else if (status_[j] == VarStatus::AtUpper) {
        if (s * a <= 0.0) continue;
        ratio = std::max(-d_[j], 0.0) / std::abs(a);
      } else {
        ratio = std::abs(d_[j]) / std::abs(a);
      }
      cand.push_back({ratio, j});
    }
    if (cand.empty()) return Outcome::Infeasible;
    std::sort(cand.begin(), cand.end(),
              [](const Candidate& a, const Candidate& b) { return a.ratio < b.ratio || (a.ratio == b.ratio && a.j < b.j); });

    // Bound flipping: pass breakpoints while the dual slope stays positive.
    double slope = std::abs(x_[p] - target);
    std::size_t k = 0;
    flips.clear();
    if (!bland) {
      for (; k + 1 < cand.size(); ++k) {
        const int j = cand[k].j;
        if (!boxed(j)) break;
        const double drop = std::abs(alpha_row_[j]) * (up_[j] - lo_[j]);
        if (slope - drop <= 0.0) break;
        slope -= drop;
        flips.push_back(j);
      }
    }
    // Harris choice among the remaining breakpoints.
    int q = cand[k].j;
    if (bland) {
      const double lim = cand[k].ratio + 1e-12;
      for (std::size_t t = k; t < cand.size() && cand[t].ratio <= lim; ++t) q = std::min(q, cand[t].j);
    } else {
      double bound = kInfinity;
      for (std::size_t t = k; t < cand.size(); ++t) {
        const int j = cand[t].j;
        bound = std::min(bound, (cand[t].ratio * std::abs(alpha_row_[j]) + dual_tol_) / std::abs(alpha_row_[j]));
      }
      double big = 0.0;
      for (std::size_t t = k; t < cand.size() && cand[t].ratio <= bound; ++t) {
        const double a = std::abs(alpha_row_[cand[t].j]);
        if (a > big) {
          big = a;
          q = cand[t].j;
        }
      }
    }

    load_column(q, column_);
    ftran(column_);
    const double pivot = column_[r];
    if (std::abs(pivot - alpha_row_[q]) > 1e-7 * (1.0 + std::abs(pivot)) || std::abs(pivot) < opt_.pivot_tol) {
      if (etas_.empty()) return Outcome::IterationLimit;
      if (!refresh()) return Outcome::IterationLimit;
      compute_duals(work_cost_);
      continue;
    }

    // Dual update; Harris may leave tiny wrong-signed reduced costs, which
    // are absorbed by shifting the working cost.
    const double theta_d = d_[q] / alpha_row_[q];
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::Basic || alpha_row_[j] == 0.0) continue;
      d_[j] -= theta_d * alpha_row_[j];
    }
    d_[q] = 0.0;
    d_[p] = -theta_d;
    for (const Candidate& c : cand) {
      const int j = c.j;
      if (j == q) continue;
      const bool flipped = std::find(flips.begin(), flips.end(), j) != flips.end();
      if (flipped) continue;
      if ((status_[j] == VarStatus::AtLower && d_[j] < 0.0) || (status_[j] == VarStatus::AtUpper && d_[j] > 0.0)) {
        work_cost_[j] -= d_[j];
        d_[j] = 0.0;
      }
    }

    // Primal update: flips first, then the basis step.
    if (!flips.empty()) {
      work_.setZero();
      for (int j : flips) {
        const double from = nonbasic_value(j);
        status_[j] = status_[j] == VarStatus::AtLower ? VarStatus::AtUpper : VarStatus::AtLower;
        const double to = nonbasic_value(j);
        x_[j] = to;
        add_column(j, to - from, work_);
        // Flipped variables keep dual feasibility for their new bound.
        if ((status_[j] == VarStatus::AtLower && d_[j] < 0.0) || (status_[j] == VarStatus::AtUpper && d_[j] > 0.0)) {
          work_cost_[j] -= d_[j];
          d_[j] = 0.0;
        }
      }
      ftran(work_);
      for (int i = 0; i < m_; ++i) x_[basis_[i]] -= work_[i];
    }
    const double t = (x_[p] - target) / pivot;
    for (int i = 0; i < m_; ++i)
      if (column_[i] != 0.0) x_[basis_[i]] -= t * column_[i];
    x_[q] += t;
    x_[p] = target;
    status_[p] = to_lower ? VarStatus::AtLower : VarStatus::AtUpper;

    const double wr = weight_[r];
    for (int i = 0; i < m_; ++i) {
      if (i == r || column_[i] == 0.0) continue;
      const double ratio = column_[i] / pivot;
      weight_[i] = std::max(weight_[i], ratio * ratio * wr);
    }
    weight_[r] = std::max(wr / (pivot * pivot), 1.0);

    replace_basic(r, q);
    ++iterations_;
    degenerate = std::abs(theta_d) < 1e-12 ? degenerate + 1 : 0;
  }
}

Solver::Outcome Solver::primal_simplex() {
  weight_.assign(static_cast<std::size_t>(total_), 1.0);
  int degenerate = 0;
  bool phase1 = false;
  bool duals_valid = false;
  std::vector<double> phase_cost(static_cast<std::size_t>(total_), 0.0);

  while (true) {
    if (iterations_ >= opt_.iteration_limit) return Outcome::IterationLimit;
    if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
      if (!refresh()) return Outcome::IterationLimit;
      duals_valid = false;
    }
    bool infeasible = false;
    for (int r = 0; r < m_ && !infeasible; ++r) infeasible = primal_infeasibility(basis_[r]) > 0.0;
    if (infeasible) {
      // Composite phase 1: minimize the sum of basic infeasibilities.
      std::fill(phase_cost.begin(), phase_cost.end(), 0.0);
      for (int r = 0; r < m_; ++r) {
        const int j = basis_[r];
        if (x_[j] < lo_[j] - primal_tol_) phase_cost[j] = -1.0;
        else if (x_[j] > up_[j] + primal_tol_) phase_cost[j] = 1.0;
      }
      compute_duals(phase_cost);
      phase1 = true;
    } else if (phase1 || !duals_valid) {
      compute_duals(cost_);
      phase1 = false;
    }
    duals_valid = true;
    const bool bland = degenerate > opt_.bland_after;

    // Entering variable.
    int q = -1;
    double best = 0.0;
    double dir = 0.0;
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::Basic || fixed(j)) continue;
      double dj = d_[j];
      double dj_dir = 0.0;
      if ((status_[j] == VarStatus::AtLower || status_[j] == VarStatus::Free) && dj < -dual_tol_) dj_dir = 1.0;
      else if ((status_[j] == VarStatus::AtUpper || status_[j] == VarStatus::Free) && dj > dual_tol_) dj_dir = -1.0;
      if (dj_dir == 0.0) continue;
      if (bland) {
        q = j;
        dir = dj_dir;
        break;
      }
      const double score = dj * dj / weight_[j];
      if (score > best) {
        best = score;
        q = j;
        dir = dj_dir;
      }
    }
    if (q < 0) return phase1 ? Outcome::Infeasible : Outcome::Optimal;

    load_column(q, column_);
    ftran(column_);

    // Ratio test over basic variables; x_B moves by -dir * t * column_.
    const double tol = bland ? 0.0 : primal_tol_;
    double limit = kInfinity;
    for (int pass = 0; pass < 2; ++pass) {
      int r_best = -1;
      double big = 0.0, best_ratio = kInfinity;
      for (int i = 0; i < m_; ++i) {
        const double a = column_[i];
        if (std::abs(a) < opt_.pivot_tol) continue;
        const int j = basis_[i];
        const double g = -dir * a;
        double ratio = kInfinity;
        const double xv = x_[j];
        if (phase1 && xv < lo_[j] - primal_tol_) {
          if (g > 0.0) ratio = (lo_[j] - xv) / g;
        } else if (phase1 && xv > up_[j] + primal_tol_) {
          if (g < 0.0) ratio = (xv - up_[j]) / -g;
        } else if (g < 0.0 && finite(lo_[j])) {
          ratio = (xv - lo_[j] + (pass == 0 ? tol : 0.0)) / -g;
        } else if (g > 0.0 && finite(up_[j])) {
          ratio = (up_[j] - xv + (pass == 0 ? tol : 0.0)) / g;
        }
        ratio = std::max(ratio, 0.0);
        if (pass == 0) {
          limit = std::min(limit, ratio);
        } else if (finite(ratio) && ratio <= limit) {
          const bool better = bland ? (r_best < 0 || ratio < best_ratio - 1e-12 ||
                                       (ratio <= best_ratio + 1e-12 && j < basis_[r_best]))
                                    : std::abs(a) > big;
          if (better) {
            big = std::abs(a);
            best_ratio = ratio;
            r_best = i;
          }
        }
      }
      if (pass == 0 && bland) limit += 1e-12;
      if (pass == 1) {
        const double range = up_[q] - lo_[q];
        if (finite(range) && (r_best < 0 || range <= best_ratio)) {
          // Bound flip of the entering variable, basis unchanged.
          const double step = dir * range;
          status_[q] = status_[q] == VarStatus::AtLower ? VarStatus::AtUpper : VarStatus::AtLower;
          x_[q] += step;
          for (int i = 0; i < m_; ++i)
            if (column_[i] != 0.0) x_[basis_[i]] -= step * column_[i];
          duals_valid = !phase1;
          ++iterations_;
          degenerate = 0;
          break;
        }
        if (r_best < 0) {
          if (phase1) {
            if (etas_.empty()) return Outcome::IterationLimit;
            if (!refresh()) return Outcome::IterationLimit;
            duals_valid = false;
            break;
          }
          return Outcome::Unbounded;
        }
        const int r = r_best;
        const int p = basis_[r];
        const double g = -dir * column_[r];
        // The leaving variable lands on the bound it reaches.
        double land;
        if (phase1 && x_[p] < lo_[p] - primal_tol_) land = lo_[p];
        else if (phase1 && x_[p] > up_[p] + primal_tol_) land = up_[p];
        else land = g < 0.0 ? lo_[p] : up_[p];
        const double t = std::max((land - x_[p]) / g, 0.0);

        compute_pivot_row(r);
        const double pivot = column_[r];
        if (std::abs(pivot - alpha_row_[q]) > 1e-7 * (1.0 + std::abs(pivot))) {
          if (etas_.empty()) return Outcome::IterationLimit;
          if (!refresh()) return Outcome::IterationLimit;
          duals_valid = false;
          break;
        }
        for (int i = 0; i < m_; ++i)
          if (column_[i] != 0.0) x_[basis_[i]] -= dir * t * column_[i];
        x_[q] += dir * t;
        x_[p] = land;
        status_[p] = land == lo_[p] ? VarStatus::AtLower : VarStatus::AtUpper;

        if (!phase1) {
          const double theta_d = d_[q] / alpha_row_[q];
          for (int j = 0; j < total_; ++j) {
            if (status_[j] == VarStatus::Basic || alpha_row_[j] == 0.0) continue;
            d_[j] -= theta_d * alpha_row_[j];
          }
          d_[p] = -theta_d;
          d_[q] = 0.0;
        }
        const double wq = weight_[q];
        for (int j = 0; j < total_; ++j) {
          if (status_[j] == VarStatus::Basic || alpha_row_[j] == 0.0 || j == q) continue;
          const double ratio = alpha_row_[j] / pivot;
          weight_[j] = std::max(weight_[j], ratio * ratio * wq);
        }
        weight_[p] = std::max(wq / (pivot * pivot), 1.0);

        replace_basic(r, q);
        ++iterations_;
        degenerate = t * std::abs(pivot) < 1e-12 ? degenerate + 1 : 0;
      }
    }
  }
}

LPSolution Solver::run(const Basis* warm) {
  LPSolution sol;
  if (!(warm && !warm->empty() && adopt_warm(*warm))) reset_to_slack();
  if (!factor()) {
    reset_to_slack();
    factor();
  }
  compute_primal();
  compute_duals(cost_);

  Outcome outcome = Outcome::Optimal;
  bool dual_feasible = make_dual_feasible();
  if (dual_feasible) {
    compute_primal();
    work_cost_ = cost_;
    if (opt_.perturb) {
      perturb_costs();
      compute_duals(work_cost_);
    }
    outcome = dual_simplex();
    work_cost_ = cost_;
  }
  // Primal cleanup (or the whole solve when the start was not dual feasible).
  for (int round = 0; round < 4 && (outcome == Outcome::Optimal || !dual_feasible); ++round) {
    if (!refresh()) {
      reset_to_slack();
      if (!refresh()) break;
    }
    outcome = primal_simplex();
    if (outcome != Outcome::Optimal) break;
    if (!refresh()) continue;
    bool clean = true;
    for (int r = 0; r < m_ && clean; ++r) clean = primal_infeasibility(basis_[r]) <= 0.0;
    if (clean) break;
  }

  switch (outcome) {
    case Outcome::Optimal: sol.status = SolveStatus::Optimal; break;
    case Outcome::Infeasible: sol.status = SolveStatus::Infeasible; break;
    case Outcome::Unbounded: sol.status = SolveStatus::Unbounded; break;
    case Outcome::IterationLimit: sol.status = SolveStatus::IterationLimit; break;
  }
  sol.primal = Eigen::Map<const Vec>(x_.data(), n_);
  if (sol.status == SolveStatus::Optimal) {
    // Snap values within tolerance onto their bounds.
    for (int j = 0; j < n_; ++j) {
      double& v = sol.primal[j];
      v = std::clamp(v, model_.lower(j), model_.upper(j));
      if (std::abs(v - model_.lower(j)) <= primal_tol_) v = model_.lower(j);
      else if (std::abs(v - model_.upper(j)) <= primal_tol_) v = model_.upper(j);
    }
  }
  sol.objective = model_.evaluate(sol.primal);
  sol.iterations = iterations_;
  sol.max_bound_violation = model_.max_bound_violation(sol.primal);
  sol.max_row_violation = model_.max_row_violation(sol.primal);
  sol.basis.status = status_;
  return sol;
}

}  // namespace

LPSolution solve(const LinearModel& model, const SimplexOptions& options, const Basis* warm) {
  Solver solver(model, options);
  return solver.run(warm);
}

LPSolution resolve_with_bounds(const LinearModel& model, const LPSolution& previous,
                               const std::vector<BoundChange>& changes, const SimplexOptions& options) {
  LinearModel changed = model;
  for (const BoundChange& c : changes) {
    if (c.variable < 0 || c.variable >= changed.num_variables())
      throw std::invalid_argument("resolve_with_bounds: unknown variable");
    changed.set_bounds(c.variable, c.lower, c.upper);
  }
  return solve(changed, options, previous.basis.empty() ? nullptr : &previous.basis);
}

}  // namespace curvcomplex
