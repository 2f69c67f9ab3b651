#include "djp/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "djp/graph.hpp"

namespace djp {

int LinearProgram::add_variable(double cost, double upper_bound) {
  objective.push_back(cost);
  upper.push_back(upper_bound);
  return variable_count() - 1;
}

void LinearProgram::add_row(RowKind kind, std::vector<std::pair<int, double>> coeffs, double rhs) {
  rows.push_back(Row{kind, std::move(coeffs), rhs});
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& opt)
      : opt_(opt), n_(lp.variable_count()), m_(static_cast<int>(lp.rows.size())), cols_(n_ + m_) {
    cell_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
    upper_.resize(static_cast<std::size_t>(cols_));
    cost_.assign(static_cast<std::size_t>(cols_), 0.0);
    value_.assign(static_cast<std::size_t>(cols_), 0.0);
    at_upper_.assign(static_cast<std::size_t>(cols_), 0);
    basis_.resize(static_cast<std::size_t>(m_));
    for (int j = 0; j < n_; ++j) {
      if (lp.upper[j] < 0) throw Error("negative upper bound");
      upper_[j] = lp.upper[j];
      cost_[j] = lp.objective[j];
    }
    for (int i = 0; i < m_; ++i) {
      const auto& row = lp.rows[i];
      for (const auto& [j, a] : row.coeffs) {
        if (j < 0 || j >= n_) throw Error("row references unknown variable");
        at(i, j) += a;
      }
      const int aux = n_ + i;
      at(i, aux) = 1.0;
      basis_[i] = aux;
      if (row.kind == LinearProgram::RowKind::equal_zero) {
        if (row.rhs != 0.0) throw Error("equality rows must have zero right-hand side");
        upper_[aux] = 0.0;
      } else {
        if (row.rhs < 0.0) throw Error("origin infeasible: negative right-hand side");
        upper_[aux] = kInf;
        value_[aux] = row.rhs;
      }
    }
    reduced_ = cost_;
    nonzero_.reserve(static_cast<std::size_t>(cols_));
  }

  SimplexResult run() {
    SimplexResult res;
    int streak = 0;
    for (;;) {
      if (res.iterations >= opt_.max_iterations) {
        res.status = SimplexStatus::iteration_limit;
        break;
      }
      const bool bland = streak >= opt_.degenerate_streak;
      const int q = choose_entering(bland);
      if (q < 0) {
        res.status = SimplexStatus::optimal;
        break;
      }
      ++res.iterations;
      if (bland) ++res.bland_iterations;
      const double step = take_step(q, bland);
      streak = step <= opt_.tol.feasibility ? streak + 1 : 0;
    }
    res.values.assign(value_.begin(), value_.begin() + n_);
    for (auto& v : res.values)
      if (std::abs(v) < opt_.tol.feasibility) v = 0.0;
    for (int j = 0; j < n_; ++j) res.objective += cost_[j] * res.values[j];
    return res;
  }

 private:
  double& at(int i, int j) { return cell_[static_cast<std::size_t>(i) * cols_ + j]; }

  int choose_entering(bool bland) {
    refresh_basis_flags();
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < cols_; ++j) {
      if (in_basis_[j] || upper_[j] == 0.0) continue;
      const double d = reduced_[j];
      const bool up = !at_upper_[j] && d > opt_.tol.optimality;
      const bool down = at_upper_[j] && d < -opt_.tol.optimality;
      if (!up && !down) continue;
      if (bland) return j;
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = j;
      }
    }
    return best;
  }

  void refresh_basis_flags() {
    in_basis_.assign(static_cast<std::size_t>(cols_), 0);
    for (int b : basis_) in_basis_[b] = 1;
  }

  // Moves entering column q as far as feasibility allows; returns the step.
  double take_step(int q, bool bland) {
    const double dir = at_upper_[q] ? -1.0 : 1.0;
    double best = upper_[q];  // bound flip
    int leave_row = -1;
    bool leave_to_upper = false;
    double best_pivot = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double a = at(i, q) * dir;  // basic value changes by -a per unit step
      if (std::abs(a) <= opt_.tol.pivot) continue;
      const int b = basis_[i];
      double limit;
      bool to_upper;
      if (a > 0) {
        limit = std::max(0.0, value_[b]) / a;
        to_upper = false;
      } else {
        if (upper_[b] == kInf) continue;
        limit = std::max(0.0, upper_[b] - value_[b]) / -a;
        to_upper = true;
      }
      bool take = false;
      if (limit < best - 1e-12) {
        take = true;
      } else if (limit <= best + 1e-12 && leave_row >= 0) {
        take = bland ? b < basis_[leave_row] : std::abs(a) > best_pivot;
      }
      if (take) {
        best = limit;
        leave_row = i;
        leave_to_upper = to_upper;
        best_pivot = std::abs(a);
      }
    }
    if (best == kInf) throw Error("linear program is unbounded");

    const double step = best;
    value_[q] += dir * step;
    for (int i = 0; i < m_; ++i) {
      const double a = at(i, q);
      if (a != 0.0) value_[basis_[i]] -= dir * step * a;
    }
    if (leave_row < 0) {
      at_upper_[q] = !at_upper_[q];
      value_[q] = at_upper_[q] ? upper_[q] : 0.0;
      return step;
    }
    const int leaving = basis_[leave_row];
    value_[leaving] = leave_to_upper ? upper_[leaving] : 0.0;
    at_upper_[leaving] = leave_to_upper ? 1 : 0;
    pivot(leave_row, q);
    basis_[leave_row] = q;
    at_upper_[q] = 0;
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[i];
      value_[b] = std::clamp(value_[b], 0.0, upper_[b]);
    }
    return step;
  }

  void pivot(int r, int q) {
    const double inv = 1.0 / at(r, q);
    nonzero_.clear();
    double* prow = &cell_[static_cast<std::size_t>(r) * cols_];
    for (int j = 0; j < cols_; ++j) {
      if (prow[j] != 0.0) {
        prow[j] *= inv;
        if (std::abs(prow[j]) < 1e-14) prow[j] = 0.0;
        else nonzero_.push_back(j);
      }
    }
    prow[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &cell_[static_cast<std::size_t>(i) * cols_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (int j : nonzero_) {
        row[j] -= f * prow[j];
        if (std::abs(row[j]) < 1e-14) row[j] = 0.0;
      }
      row[q] = 0.0;
    }
    const double dq = reduced_[q];
    if (dq != 0.0) {
      for (int j : nonzero_) reduced_[j] -= dq * prow[j];
      reduced_[q] = 0.0;
    }
  }

  const SimplexOptions& opt_;
  int n_, m_, cols_;
  std::vector<double> cell_;
  std::vector<double> upper_, cost_, value_, reduced_;
  std::vector<char> at_upper_, in_basis_;
  std::vector<int> basis_;
  std::vector<int> nonzero_;
};

}  // namespace

SimplexResult solve_simplex(const LinearProgram& lp, const SimplexOptions& options) {
  if (lp.upper.size() != lp.objective.size()) throw Error("bounds and objective disagree in length");
  Tableau tab(lp, options);
  SimplexResult res = tab.run();
  for (const auto& row : lp.rows) {
    double act = 0.0;
    for (const auto& [j, a] : row.coeffs) act += a * res.values[j];
    const double viol = row.kind == LinearProgram::RowKind::equal_zero ? std::abs(act) : std::max(0.0, act - row.rhs);
    res.max_residual = std::max(res.max_residual, viol);
  }
  for (int j = 0; j < lp.variable_count(); ++j)
    res.max_residual = std::max(res.max_residual, std::max(0.0, res.values[j] - lp.upper[j]));
  return res;
}

}  // namespace djp
