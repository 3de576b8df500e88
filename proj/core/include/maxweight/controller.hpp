#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "maxweight/model.hpp"
#include "maxweight/rng.hpp"

namespace maxweight {

/// Queue-length-aware controller: per slot, maximize
/// -V f(s, x) + sum_j q_j (mu_j - A_j) over the state's action list.
struct QlaPolicy {
  double V = 1.0;  // must be >= 1
};

/// Baseline stationary randomized policy drawn from a verified certificate.
struct RandomizedPolicy {
  SlacknessCertificate cert;
};

using Policy = std::variant<QlaPolicy, RandomizedPolicy>;

/// A fully recorded sample path. Queue columns hold the post-step backlog
/// q(t+1); the pre-step backlog of slot t is the previous column (q0 for
/// t = 0). Consistency contract: every queue column equals step_queues
/// applied to the previous one with that slot's recorded arrivals/services.
struct Trace {
  std::uint64_t seed = 0;
  std::string policy_name;  // "qla" | "randomized"
  double V = std::numeric_limits<double>::quiet_NaN();  // set for QLA traces
  int start_state = 0;
  Eigen::VectorXd q0;

  std::vector<int> states;    // S(t)
  std::vector<int> actions;   // chosen action index in states[t]'s table
  std::vector<double> costs;  // f(t)
  Eigen::MatrixXd arrivals;   // r x T
  Eigen::MatrixXd services;   // r x T
  Eigen::MatrixXd queues;     // r x T, post-step
  std::vector<double> lyapunov_values;  // L(t+1)

  std::int64_t slots() const { return static_cast<std::int64_t>(states.size()); }

  /// Pre-step backlog q(t) of slot t.
  Eigen::VectorXd backlog_before(std::int64_t t) const {
    return t == 0 ? q0 : Eigen::VectorXd(queues.col(t - 1));
  }
};

/// The per-slot decision rule: returns the index of an action maximizing
/// -V f + q . (mu - A); ties resolve to the lowest action index.
int qla_decide(const NetworkSpec& spec, int state, const Eigen::VectorXd& q, double V);

/// Samples an action index with the certificate's per-state probabilities.
int randomized_decide(const SlacknessCertificate& cert, int state, Rng& rng);

/// Runs the closed loop for `horizon` slots from q(0) = q0 (zero when all
/// defaults used): observe S(t), decide, record f/A/mu, then step the
/// queues. A pure function of (spec, policy, start, horizon, seed, q0);
/// the state path coincides with sample_path at the same seed.
Trace simulate(const NetworkSpec& spec, const Policy& policy, int start_state,
               std::int64_t horizon, std::uint64_t seed,
               const Eigen::VectorXd& q0 = Eigen::VectorXd());

}  // namespace maxweight
