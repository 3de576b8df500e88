#pragma once

#include <Eigen/Dense>

namespace maxweight {

/// minimize c'x  s.t.  A_ub x <= b_ub,  A_eq x == b_eq,  x >= 0.
/// Empty matrices stand for "no constraints of that kind".
struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd A_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

/// Dense two-phase tableau simplex with Bland's anti-cycling rule.
/// Suited to the small dense programs this project generates; `tol` is the
/// shared feasibility/optimality tolerance.
LpSolution solve_lp(const LpProblem& lp, double tol = 1e-9, int max_pivots = 20000);

}  // namespace maxweight
