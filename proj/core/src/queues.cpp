#include "maxweight/queues.hpp"

#include "maxweight/errors.hpp"

namespace maxweight {

Eigen::VectorXd step_queues(const Eigen::VectorXd& q, const Eigen::VectorXd& arrivals,
                            const Eigen::VectorXd& services) {
  if (arrivals.size() != q.size() || services.size() != q.size())
    throw Error("step_queues: vector length mismatch");
  return (q - services).cwiseMax(0.0) + arrivals;
}

double lyapunov(const Eigen::VectorXd& q) { return 0.5 * q.squaredNorm(); }

void MetricsAccumulator::add_slot(double cost, double total_backlog,
                                  double lyapunov_value) {
  ++slots_;
  cost_.add(cost);
  backlog_.add(total_backlog);
  lyapunov_ = lyapunov_value;
}

std::pair<double, double> MetricsAccumulator::time_averages() const {
  if (slots_ == 0) throw Error("time averages need at least one recorded slot");
  const double t = static_cast<double>(slots_);
  return {cost_.value() / t, backlog_.value() / t};
}

}  // namespace maxweight
