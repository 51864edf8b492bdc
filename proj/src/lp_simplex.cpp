// Bounded revised primal simplex.
//
// Rows are turned into equalities A x - s = 0 with one logical s_i per row
// carrying the row's bounds, so every column (structural or logical) is a
// bounded variable and the all-logical basis is always available. Phase one
// minimizes the sum of bound violations of the basic variables; phase two
// minimizes the real objective. Reduced costs are updated from the pivot row
// and recomputed whenever the phase-one cost vector changes. Pricing is
// Devex. The basis inverse is a KLU factorization followed by a product of
// eta matrices. Bounds are perturbed only after a long run of
// degenerate pivots, and the perturbation is removed before the final
// cleanup pass.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "basis_lu.hpp"
#include "sbg/errors.hpp"
#include "sbg/lp.hpp"

namespace sbg::lp {

namespace {

using Vec = Eigen::VectorXd;

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kRelativePivotTol = 1e-7;

struct Eta {
  int row;
  double pivot;
  std::vector<int> index;
  std::vector<double> value;
};

// splitmix64; fixed seed keeps the perturbation (and thus the solve) deterministic.
class Perturber {
 public:
  double next_unit() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_ = 0x5EEDULL;
};

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SolverOptions& opt) : lp_(lp), opt_(opt) {
    m_ = lp.num_rows();
    n_ = lp.num_vars();
    total_ = n_ + m_;

    // Column-major copy of A.
    std::vector<int> counts(n_, 0);
    for (const Row& row : lp.rows())
      for (const Term& t : row.terms) ++counts[t.var];
    col_start_.assign(n_ + 1, 0);
    for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + counts[j];
    col_row_.resize(col_start_[n_]);
    col_val_.resize(col_start_[n_]);
    std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
    for (int i = 0; i < m_; ++i)
      for (const Term& t : lp.rows()[i].terms) {
        col_row_[fill[t.var]] = i;
        col_val_[fill[t.var]] = t.coeff;
        ++fill[t.var];
      }

    const double sign = lp.sense() == Sense::Maximize ? -1.0 : 1.0;
    cost_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = sign * lp.objective()[j];

    lo_.resize(total_);
    up_.resize(total_);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp.bounds()[j].lower;
      up_[j] = lp.bounds()[j].upper;
    }
    for (int i = 0; i < m_; ++i) {
      const Row& row = lp.rows()[i];
      lo_[n_ + i] = row.relation == Relation::LessEqual ? -kInf : row.rhs;
      up_[n_ + i] = row.relation == Relation::GreaterEqual ? kInf : row.rhs;
    }
    orig_lo_ = lo_;
    orig_up_ = up_;
  }

  LpSolution run() {
    LpSolution sol;
    for (int j = 0; j < total_; ++j) {
      if (lo_[j] > up_[j]) {
        sol.status = Status::Infeasible;
        return sol;
      }
    }
    cb_.resize(m_);
    d_.assign(total_, 0.0);
    weight_.assign(total_, 1.0);
    prow_.assign(total_, 0.0);

    x_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) x_[j] = nonbasic_start(j);
    basis_.resize(m_);
    pos_.assign(total_, -1);
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      pos_[n_ + i] = i;
    }
    refactor();

    Status status = iterate();
    if (status == Status::Optimal && perturbed_) {
      remove_perturbation();
      status = iterate();
    }
    if (status == Status::Optimal) {
      // Confirm on a fresh factorization; drift accumulated in the eta file
      // can hide small infeasibilities.
      refactor();
      status = iterate();
    }

    sol.status = status;
    sol.iterations = iterations_;
    if (status == Status::Optimal) {
      sol.primal.assign(x_.begin(), x_.begin() + n_);
      sol.objective_value = lp_.evaluate_objective(sol.primal);
      const auto report = check_feasibility(lp_, sol.primal, kFeasibilityTolerance);
      if (!report.feasible()) {
        throw NumericalError("simplex: final point violates " + std::to_string(report.violations.size()) +
                             " constraint(s), worst " + std::to_string(report.violations.front().amount));
      }
    }
    return sol;
  }

 private:
  double nonbasic_start(int j) const {
    if (std::isfinite(lo_[j])) return lo_[j];
    if (std::isfinite(up_[j])) return up_[j];
    return 0.0;
  }

  void remove_perturbation() {
    for (int j = 0; j < total_; ++j) {
      if (pos_[j] < 0) {
        // Nonbasic at a perturbed bound moves to the matching true bound.
        if (x_[j] == lo_[j]) x_[j] = orig_lo_[j];
        else if (x_[j] == up_[j]) x_[j] = orig_up_[j];
        else x_[j] = std::clamp(x_[j], orig_lo_[j], orig_up_[j]);
      }
    }
    lo_ = orig_lo_;
    up_ = orig_up_;
    perturbed_ = false;
    refactor();
  }

  // Fills `dense` with column j of [A | -I].
  void load_column(int j, Vec& dense) const {
    dense.setZero(m_);
    if (j < n_) {
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) dense[col_row_[p]] = col_val_[p];
    } else {
      dense[j - n_] = -1.0;
    }
  }

  void refactor() {
    etas_.clear();
    eta_nnz_ = 0;
    if (m_ == 0) return;
    bcol_ptr_.assign(m_ + 1, 0);
    brow_.clear();
    bval_.clear();
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      if (j < n_) {
        for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) {
          brow_.push_back(col_row_[p]);
          bval_.push_back(col_val_[p]);
        }
      } else {
        brow_.push_back(j - n_);
        bval_.push_back(-1.0);
      }
      bcol_ptr_[i + 1] = static_cast<int>(brow_.size());
    }
    if (!lu_.factor(m_, bcol_ptr_, brow_, bval_)) {
      if (++singular_resets_ > 5) throw NumericalError("simplex: basis repeatedly singular");
      reset_to_logical_basis();
      return;
    }
    eta_budget_ = std::max<std::size_t>(lu_.nonzeros(), 4 * static_cast<std::size_t>(m_));
    recompute_basics();
  }

  // Drops every structural from the basis; they stay at their current
  // values as nonbasic (possibly between bounds).
  void reset_to_logical_basis() {
    for (int i = 0; i < m_; ++i) pos_[basis_[i]] = -1;
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      pos_[n_ + i] = i;
    }
    refactor();
  }

  void recompute_basics() {
    if (m_ == 0) return;
    Vec rhs = Vec::Zero(m_);
    for (int j = 0; j < total_; ++j) {
      if (pos_[j] >= 0 || x_[j] == 0.0) continue;
      if (j < n_) {
        for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) rhs[col_row_[p]] -= col_val_[p] * x_[j];
      } else {
        rhs[j - n_] += x_[j];
      }
    }
    ftran(rhs);
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = rhs[i];
  }

  void ftran(Vec& v) const {
    lu_.solve(v.data());
    for (const Eta& e : etas_) {
      const double t = v[e.row] / e.pivot;
      v[e.row] = t;
      if (t == 0.0) continue;
      for (std::size_t k = 0; k < e.index.size(); ++k) v[e.index[k]] -= e.value[k] * t;
    }
  }

  void btran(Vec& v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = v[it->row];
      for (std::size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v[it->index[k]];
      v[it->row] = s / it->pivot;
    }
    lu_.solve_transposed(v.data());
  }

  // Composite phase-one costs for the basic variables; returns true when
  // some basic variable is out of bounds.
  bool basic_costs(Vec& cb) const {
    bool infeasible = false;
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      if (x_[j] < lo_[j] - kPrimalTol) {
        cb[i] = -1.0;
        infeasible = true;
      } else if (x_[j] > up_[j] + kPrimalTol) {
        cb[i] = 1.0;
        infeasible = true;
      } else {
        cb[i] = 0.0;
      }
    }
    if (!infeasible)
      for (int i = 0; i < m_; ++i) cb[i] = cost_[basis_[i]];
    return infeasible;
  }

  // Reduced costs from scratch: y = B^-T c_B, d = c - A^T y.
  void price_from_scratch() {
    phase_one_ = basic_costs(cb_);
    Vec y = cb_;
    if (m_ > 0) btran(y);
    for (int j = 0; j < n_; ++j) {
      if (pos_[j] >= 0) {
        d_[j] = 0.0;
        continue;
      }
      double d = phase_one_ ? 0.0 : cost_[j];
      for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) d -= y[col_row_[p]] * col_val_[p];
      d_[j] = d;
    }
    for (int i = 0; i < m_; ++i) d_[n_ + i] = pos_[n_ + i] >= 0 ? 0.0 : y[i];
    fresh_ = true;
  }

  // Devex pricing over nonbasic columns; returns -1 when none improves.
  int choose_entering(double& dir) const {
    int enter = -1;
    double best = 0.0;
    for (int j = 0; j < total_; ++j) {
      if (pos_[j] >= 0 || lo_[j] == up_[j]) continue;
      const double d = d_[j];
      double dj;
      if (d < -kDualTol && x_[j] < up_[j] - kPrimalTol) dj = 1.0;
      else if (d > kDualTol && x_[j] > lo_[j] + kPrimalTol) dj = -1.0;
      else continue;
      const double score = d * d / weight_[j];
      if (score > best) {
        best = score;
        enter = j;
        dir = dj;
      }
    }
    return enter;
  }

  // Row r of B^-1 [A | -I] restricted to nonbasic columns, into prow_.
  void compute_pivot_row(int r) {
    for (int j : prow_touched_) prow_[j] = 0.0;
    prow_touched_.clear();
    Vec rho = Vec::Zero(m_);
    rho[r] = 1.0;
    btran(rho);
    for (int i = 0; i < m_; ++i) {
      const double ri = rho[i];
      if (std::abs(ri) < 1e-13) continue;
      for (const Term& t : lp_.rows()[i].terms) {
        if (pos_[t.var] >= 0) continue;
        if (prow_[t.var] == 0.0) prow_touched_.push_back(t.var);
        prow_[t.var] += ri * t.coeff;
        if (prow_[t.var] == 0.0) prow_[t.var] = 1e-300;  // keep it listed
      }
      const int logical = n_ + i;
      if (pos_[logical] < 0) {
        if (prow_[logical] == 0.0) prow_touched_.push_back(logical);
        prow_[logical] = -ri;
      }
    }
  }

  // True when the phase-one costs of the current basis differ from cb_
  // (with position r now holding a variable whose assumed cost is 0).
  bool phase_one_costs_changed(int r) {
    Vec cb_new(m_);
    const bool infeasible = basic_costs(cb_new);
    if (!infeasible) return true;
    if (r >= 0 && cb_[r] != 0.0) return true;
    for (int i = 0; i < m_; ++i) {
      const double expected = i == r ? 0.0 : cb_[i];
      if (cb_new[i] != expected) return true;
    }
    return false;
  }

  void perturb_in_place() {
    Perturber rng;
    for (int j = 0; j < total_; ++j) {
      if (lo_[j] == up_[j]) continue;
      const double base = opt_.perturbation;
      const bool at_lo = pos_[j] < 0 && x_[j] == lo_[j];
      const bool at_up = pos_[j] < 0 && x_[j] == up_[j];
      if (std::isfinite(lo_[j])) lo_[j] -= base * (1.0 + std::abs(lo_[j])) * (0.5 + 0.5 * rng.next_unit());
      if (std::isfinite(up_[j])) up_[j] += base * (1.0 + std::abs(up_[j])) * (0.5 + 0.5 * rng.next_unit());
      if (at_lo) x_[j] = lo_[j];
      else if (at_up) x_[j] = up_[j];
    }
    perturbed_ = true;
    refactor();
  }

  Status iterate() {
    Vec alpha(m_);
    int stalls = 0;
    int degenerate_streak = 0;
    bool retried_infeasible = false;
    // Perturbation is a last resort against cycling; on these LPs long
    // degenerate runs usually resolve on their own.
    const int stall_limit = 1000 + 2 * m_;
    std::fill(weight_.begin(), weight_.end(), 1.0);
    bool dirty = true;
    bool was_phase_one = true;
    while (true) {
      if (++iterations_ > opt_.max_iterations) throw NumericalError("simplex: iteration limit reached");
      if (static_cast<int>(etas_.size()) >= opt_.refactor_interval || eta_nnz_ > eta_budget_) {
        refactor();
        dirty = true;
      }
      if (dirty) {
        price_from_scratch();
        dirty = false;
        if (phase_one_ != was_phase_one) {
          std::fill(weight_.begin(), weight_.end(), 1.0);
          was_phase_one = phase_one_;
        }
      }

      double enter_dir = 0.0;
      const int enter = choose_entering(enter_dir);
      if (enter < 0) {
        if (!fresh_) {
          dirty = true;
          continue;
        }
        if (!phase_one_) return Status::Optimal;
        if (!retried_infeasible) {
          retried_infeasible = true;
          refactor();
          dirty = true;
          continue;
        }
        return Status::Infeasible;
      }

      load_column(enter, alpha);
      if (m_ > 0) ftran(alpha);

      // Harris two-pass ratio test.
      double max_abs_alpha = 0.0;
      for (int i = 0; i < m_; ++i) max_abs_alpha = std::max(max_abs_alpha, std::abs(alpha[i]));
      const double pivot_tol = std::max(kPivotTol, kRelativePivotTol * max_abs_alpha);

      auto target = [&](int i, double delta, double& bound) -> bool {
        const int j = basis_[i];
        const double xv = x_[j];
        if (delta < 0) {
          if (xv > up_[j] + kPrimalTol) bound = up_[j];
          else if (xv < lo_[j] - kPrimalTol) return false;
          else bound = lo_[j];
        } else {
          if (xv < lo_[j] - kPrimalTol) bound = lo_[j];
          else if (xv > up_[j] + kPrimalTol) return false;
          else bound = up_[j];
        }
        return std::isfinite(bound);
      };

      double relaxed = kInf;
      for (int i = 0; i < m_; ++i) {
        if (std::abs(alpha[i]) <= pivot_tol) continue;
        const double delta = -enter_dir * alpha[i];
        double bound;
        if (!target(i, delta, bound)) continue;
        const double slack = delta < 0 ? x_[basis_[i]] - bound + kPrimalTol : bound - x_[basis_[i]] + kPrimalTol;
        relaxed = std::min(relaxed, std::max(slack, 0.0) / std::abs(delta));
      }
      int leave = -1;
      double leave_bound = 0.0;
      double theta = kInf;
      double best_pivot = 0.0;
      if (relaxed < kInf) {
        for (int i = 0; i < m_; ++i) {
          if (std::abs(alpha[i]) <= pivot_tol) continue;
          const double delta = -enter_dir * alpha[i];
          double bound;
          if (!target(i, delta, bound)) continue;
          const double step = std::max((bound - x_[basis_[i]]) / delta, 0.0);
          if (step <= relaxed && std::abs(alpha[i]) > best_pivot) {
            best_pivot = std::abs(alpha[i]);
            leave = i;
            leave_bound = bound;
            theta = step;
          }
        }
      }

      const double flip = enter_dir > 0 ? up_[enter] - x_[enter] : x_[enter] - lo_[enter];
      if (std::isfinite(flip) && flip <= theta) {
        // Entering variable reaches its opposite bound first.
        theta = flip;
        leave = -1;
      } else if (leave < 0) {
        if (!fresh_) {
          dirty = true;
          continue;
        }
        if (!phase_one_) return Status::Unbounded;
        refactor();
        dirty = true;
        if (++stalls > 10) throw NumericalError("simplex: phase one lost its descent direction");
        continue;
      }

      if (theta > 0.0) {
        x_[enter] += enter_dir * theta;
        for (int i = 0; i < m_; ++i) x_[basis_[i]] -= enter_dir * theta * alpha[i];
      }
      if (leave < 0) {
        x_[enter] = enter_dir > 0 ? up_[enter] : lo_[enter];
        if (phase_one_ ? phase_one_costs_changed(-1) : basic_costs_infeasible()) dirty = true;
        continue;
      }

      // Pivot row, before the basis changes.
      compute_pivot_row(leave);
      const double arq = alpha[leave];
      if (std::abs(prow_[enter] - arq) > 1e-7 * (1.0 + std::abs(arq))) dirty = true;
      const double theta_d = d_[enter] / arq;
      const double wq = weight_[enter];
      for (int j : prow_touched_) {
        if (j == enter) continue;
        const double arj = prow_[j];
        d_[j] -= theta_d * arj;
        const double ratio = arj / arq;
        weight_[j] = std::max(weight_[j], ratio * ratio * wq);
      }

      const int out = basis_[leave];
      x_[out] = leave_bound;
      pos_[out] = -1;
      basis_[leave] = enter;
      pos_[enter] = leave;
      d_[enter] = 0.0;
      d_[out] = -theta_d;
      weight_[out] = std::max(wq / (arq * arq), 1.0);
      fresh_ = false;

      Eta eta{leave, arq, {}, {}};
      for (int i = 0; i < m_; ++i) {
        if (i != leave && alpha[i] != 0.0) {
          eta.index.push_back(i);
          eta.value.push_back(alpha[i]);
        }
      }
      eta_nnz_ += eta.index.size() + 1;
      etas_.push_back(std::move(eta));

      if (phase_one_) {
        if (phase_one_costs_changed(leave)) dirty = true;
        else cb_[leave] = 0.0;
      } else if (basic_costs_infeasible()) {
        dirty = true;
      }

      degenerate_streak = theta == 0.0 ? degenerate_streak + 1 : 0;
      if (degenerate_streak > stall_limit && !perturbed_ && !perturbation_used_ && opt_.perturbation > 0.0) {
        perturbation_used_ = true;
        perturb_in_place();
        dirty = true;
        degenerate_streak = 0;
      }
    }
  }

  bool basic_costs_infeasible() const {
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      if (x_[j] < lo_[j] - kPrimalTol || x_[j] > up_[j] + kPrimalTol) return true;
    }
    return false;
  }

  const LinearProgram& lp_;
  SolverOptions opt_;
  int m_ = 0;
  int n_ = 0;
  int total_ = 0;
  std::vector<int> col_start_;
  std::vector<int> col_row_;
  std::vector<double> col_val_;
  std::vector<double> cost_;
  std::vector<double> lo_, up_, orig_lo_, orig_up_;
  std::vector<double> x_;
  std::vector<int> basis_;
  std::vector<int> pos_;
  BasisLu lu_;
  std::vector<int> bcol_ptr_;
  std::vector<int> brow_;
  std::vector<double> bval_;
  std::vector<Eta> etas_;
  std::size_t eta_nnz_ = 0;
  std::size_t eta_budget_ = 0;
  Vec cb_;
  std::vector<double> d_;
  std::vector<double> weight_;
  std::vector<double> prow_;
  std::vector<int> prow_touched_;
  bool phase_one_ = true;
  bool fresh_ = false;
  bool perturbation_used_ = false;
  bool perturbed_ = false;
  int singular_resets_ = 0;
  std::int64_t iterations_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolverOptions& options) {
  Simplex simplex(lp, options);
  return simplex.run();
}

}  // namespace sbg::lp
