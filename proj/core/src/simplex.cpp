#include "maxweight/simplex.hpp"

#include <limits>
#include <vector>

#include "maxweight/errors.hpp"

namespace maxweight {

namespace {

// Dense tableau state: rows = B^{-1} A maintained by pivoting, rhs = B^{-1} b,
// basis[i] = column basic in row i. Reduced costs are recomputed from the
// cost vector each iteration; at these sizes that is cheaper than bookkeeping
// bugs.
struct Tableau {
  Eigen::MatrixXd rows;
  Eigen::VectorXd rhs;
  std::vector<int> basis;
};

enum class IterateStatus { Optimal, Unbounded, IterationLimit };

// Bland's rule simplex on the tableau, minimizing costs over columns
// [0, active_cols). Entering: lowest-index column with reduced cost < -tol;
// leaving: minimum ratio, ties to the lowest basic variable index.
IterateStatus iterate(Tableau& t, const Eigen::VectorXd& costs, int active_cols,
                      double tol, int& pivots_left) {
  const int m = static_cast<int>(t.rows.rows());
  while (pivots_left-- > 0) {
    Eigen::VectorXd basis_costs(m);
    for (int i = 0; i < m; ++i)
      basis_costs[i] = costs[t.basis[static_cast<std::size_t>(i)]];

    int entering = -1;
    for (int j = 0; j < active_cols; ++j) {
      const double reduced = costs[j] - basis_costs.dot(t.rows.col(j));
      if (reduced < -tol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return IterateStatus::Optimal;

    int leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double a = t.rows(i, entering);
      if (a > tol) {
        const double ratio = t.rhs[i] / a;
        if (ratio < best_ratio - tol ||
            (ratio < best_ratio + tol &&
             (leaving < 0 || t.basis[static_cast<std::size_t>(i)] <
                                 t.basis[static_cast<std::size_t>(leaving)]))) {
          best_ratio = ratio;
          leaving = i;
        }
      }
    }
    if (leaving < 0) return IterateStatus::Unbounded;

    // explicit pivot: scale the row, eliminate the column elsewhere
    const double p = t.rows(leaving, entering);
    t.rows.row(leaving) /= p;
    t.rhs[leaving] /= p;
    for (int i = 0; i < m; ++i) {
      if (i == leaving) continue;
      const double f = t.rows(i, entering);
      if (f != 0.0) {
        t.rows.row(i) -= f * t.rows.row(leaving);
        t.rhs[i] -= f * t.rhs[leaving];
      }
    }
    t.basis[static_cast<std::size_t>(leaving)] = entering;
  }
  return IterateStatus::IterationLimit;
}

double objective_of(const Tableau& t, const Eigen::VectorXd& costs) {
  double obj = 0.0;
  for (int i = 0; i < t.rows.rows(); ++i)
    obj += costs[t.basis[static_cast<std::size_t>(i)]] * t.rhs[i];
  return obj;
}

}  // namespace

LpSolution solve_lp(const LpProblem& lp, double tol, int max_pivots) {
  const int n = static_cast<int>(lp.c.size());
  const int m_ub = static_cast<int>(lp.b_ub.size());
  const int m_eq = static_cast<int>(lp.b_eq.size());
  const int m = m_ub + m_eq;

  if (m_ub > 0 && (lp.A_ub.rows() != m_ub || lp.A_ub.cols() != n))
    throw Error("solve_lp: A_ub shape mismatch");
  if (m_eq > 0 && (lp.A_eq.rows() != m_eq || lp.A_eq.cols() != n))
    throw Error("solve_lp: A_eq shape mismatch");

  if (m == 0) {
    // only x >= 0 remains: minimum at the origin unless some cost is negative
    for (int j = 0; j < n; ++j)
      if (lp.c[j] < -tol) return {LpStatus::Unbounded, Eigen::VectorXd::Zero(n), 0.0};
    return {LpStatus::Optimal, Eigen::VectorXd::Zero(n), 0.0};
  }

  // Assemble [x | slack | artificial] columns with b >= 0. Rows that start
  // with a negative rhs are negated, which flips their slack to -1 and makes
  // an artificial necessary; equality rows always take an artificial.
  const int n_slack = m_ub;
  std::vector<int> artificial_rows;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, n + n_slack);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m_ub; ++i) {
    double sign = lp.b_ub[i] < 0.0 ? -1.0 : 1.0;
    A.row(i).head(n) = sign * lp.A_ub.row(i);
    A(i, n + i) = sign;
    b[i] = sign * lp.b_ub[i];
    if (sign < 0.0) artificial_rows.push_back(i);
  }
  for (int i = 0; i < m_eq; ++i) {
    double sign = lp.b_eq[i] < 0.0 ? -1.0 : 1.0;
    A.row(m_ub + i).head(n) = sign * lp.A_eq.row(i);
    b[m_ub + i] = sign * lp.b_eq[i];
    artificial_rows.push_back(m_ub + i);
  }

  const int n_art = static_cast<int>(artificial_rows.size());
  const int total = n + n_slack + n_art;

  Tableau t;
  t.rows = Eigen::MatrixXd::Zero(m, total);
  t.rows.leftCols(n + n_slack) = A;
  t.rhs = b;
  t.basis.assign(static_cast<std::size_t>(m), -1);

  for (int a = 0; a < n_art; ++a) {
    const int row = artificial_rows[static_cast<std::size_t>(a)];
    t.rows(row, n + n_slack + a) = 1.0;
    t.basis[static_cast<std::size_t>(row)] = n + n_slack + a;
  }
  for (int i = 0; i < m_ub; ++i) {
    if (t.basis[static_cast<std::size_t>(i)] < 0) t.basis[static_cast<std::size_t>(i)] = n + i;
  }

  int pivots_left = max_pivots;

  if (n_art > 0) {
    Eigen::VectorXd phase1_costs = Eigen::VectorXd::Zero(total);
    phase1_costs.tail(n_art).setOnes();
    const auto status = iterate(t, phase1_costs, total, tol, pivots_left);
    if (status == IterateStatus::IterationLimit)
      return {LpStatus::IterationLimit, Eigen::VectorXd::Zero(n), 0.0};
    if (objective_of(t, phase1_costs) > tol)
      return {LpStatus::Infeasible, Eigen::VectorXd::Zero(n), 0.0};

    // pivot leftover artificials (basic at zero) out on any real column
    for (int i = 0; i < m; ++i) {
      if (t.basis[static_cast<std::size_t>(i)] < n + n_slack) continue;
      int col = -1;
      for (int j = 0; j < n + n_slack; ++j) {
        if (std::abs(t.rows(i, j)) > tol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        const double p = t.rows(i, col);
        t.rows.row(i) /= p;
        t.rhs[i] /= p;
        for (int k = 0; k < m; ++k) {
          if (k == i) continue;
          const double f = t.rows(k, col);
          if (f != 0.0) {
            t.rows.row(k) -= f * t.rows.row(i);
            t.rhs[k] -= f * t.rhs[i];
          }
        }
        t.basis[static_cast<std::size_t>(i)] = col;
      }
      // else: redundant row; the artificial stays basic at level zero and
      // phase 2 never selects an artificial column, so it is harmless.
    }
  }

  Eigen::VectorXd phase2_costs = Eigen::VectorXd::Zero(total);
  phase2_costs.head(n) = lp.c;
  const auto status = iterate(t, phase2_costs, n + n_slack, tol, pivots_left);
  if (status == IterateStatus::IterationLimit)
    return {LpStatus::IterationLimit, Eigen::VectorXd::Zero(n), 0.0};
  if (status == IterateStatus::Unbounded)
    return {LpStatus::Unbounded, Eigen::VectorXd::Zero(n), 0.0};

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    const int j = t.basis[static_cast<std::size_t>(i)];
    if (j < n) x[j] = t.rhs[i];
  }
  return {LpStatus::Optimal, x, lp.c.size() > 0 ? lp.c.dot(x) : 0.0};
}

}  // namespace maxweight
