#pragma once

// Dense-tableau bounded-variable primal simplex for small LPs of the form
//
//   maximize  c^T x
//   s.t.      A_eq x  = 0
//             A_le x <= b   (b >= 0)
//             0 <= x <= u
//
// The origin is feasible for this family, so no phase one is needed. Pricing
// is Dantzig's rule with a switch to Bland's rule after a streak of
// degenerate pivots.

#include <limits>
#include <utility>
#include <vector>

namespace djp {

struct LpTolerances {
  double feasibility = 1e-7;
  double pivot = 1e-9;
  double optimality = 1e-9;
};

struct LinearProgram {
  enum class RowKind { equal_zero, less_equal };
  struct Row {
    RowKind kind = RowKind::less_equal;
    std::vector<std::pair<int, double>> coeffs;
    double rhs = 0.0;
  };

  std::vector<double> objective;
  std::vector<double> upper;  // +inf allowed
  std::vector<Row> rows;

  int add_variable(double cost, double upper_bound);
  void add_row(RowKind kind, std::vector<std::pair<int, double>> coeffs, double rhs);
  [[nodiscard]] int variable_count() const noexcept { return static_cast<int>(objective.size()); }
};

enum class SimplexStatus { optimal, iteration_limit };

struct SimplexOptions {
  LpTolerances tol;
  int max_iterations = 500000;
  int degenerate_streak = 50;
};

struct SimplexResult {
  SimplexStatus status = SimplexStatus::optimal;
  std::vector<double> values;
  double objective = 0.0;
  int iterations = 0;
  int bland_iterations = 0;
  /// max |row activity - bound violation| of the returned point
  double max_residual = 0.0;
};

/// Throws djp::Error if the origin is infeasible or the LP is unbounded.
[[nodiscard]] SimplexResult solve_simplex(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace djp
