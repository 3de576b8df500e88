#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace maxweight {

/// One-slot backlog update, q' = max(q - mu, 0) + A componentwise.
/// Throws Error on a shape mismatch.
Eigen::VectorXd step_queues(const Eigen::VectorXd& q, const Eigen::VectorXd& arrivals,
                            const Eigen::VectorXd& services);

/// L(q) = 1/2 * sum_j q_j^2.
double lyapunov(const Eigen::VectorXd& q);

/// Kahan compensated accumulator; keeps 1e8-term sums accurate to ~1e-9
/// relative.
class KahanSum {
 public:
  void add(double x) {
    double y = x - compensation_;
    double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Running per-slot sums behind the finite-horizon Cesaro averages:
/// cost_sum accumulates f(t) and backlog_sum accumulates sum_j q_j(t), both
/// over t = 0..T-1 with the pre-step backlog (q(0) included).
class MetricsAccumulator {
 public:
  void add_slot(double cost, double total_backlog, double lyapunov_value);

  std::int64_t slots() const { return slots_; }
  double cost_sum() const { return cost_.value(); }
  double backlog_sum() const { return backlog_.value(); }
  double lyapunov_value() const { return lyapunov_; }

  /// (average cost, average total backlog). Throws Error when no slot has
  /// been recorded.
  std::pair<double, double> time_averages() const;

 private:
  std::int64_t slots_ = 0;
  KahanSum cost_;
  KahanSum backlog_;
  double lyapunov_ = 0.0;
};

}  // namespace maxweight
