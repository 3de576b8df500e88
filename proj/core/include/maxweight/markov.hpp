#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "maxweight/errors.hpp"

namespace maxweight {

/// Finite irreducible aperiodic chain driving the exogenous network state.
/// `transition` is row-stochastic: transition(i, j) = P(next = j | now = i).
struct MarkovChainSpec {
  std::vector<std::string> state_labels;
  Eigen::MatrixXd transition;

  int size() const { return static_cast<int>(state_labels.size()); }
};

/// Steady-state distribution; every component strictly positive.
struct StationaryDistribution {
  Eigen::VectorXd pi;
};

/// First and second moments of the return time to `reference_state` and of
/// the hitting times into it from every state. By convention the hitting
/// time from the reference state to itself is 0; the return time (>= 1) is
/// the separate quantity reported in `mean_return` / `second_moment_return`.
struct ReturnTimeStats {
  int reference_state = 0;
  double mean_return = 0.0;           // E[T1]
  double second_moment_return = 0.0;  // E[T1^2]
  Eigen::VectorXd hitting_means;            // E[T_{j1}], entry 0 at j = reference
  Eigen::VectorXd hitting_second_moments;   // E[T_{j1}^2]
};

/// Constants entering the utility/backlog bounds: C = E[T1^2] + E[T1],
/// D = E[T1^2] - E[T1]. Always C >= 2 and D >= 0.
struct BoundConstants {
  double C = 0.0;
  double D = 0.0;
};

/// Structural checks: row sums within 1e-12 of one, entries in [0,1],
/// irreducibility and aperiodicity of the support graph. Transition mass
/// at or below 1e-12 does not count as support, so chains whose
/// irreducibility hangs on such edges are rejected as reducible.
std::vector<Violation> validate_chain(const MarkovChainSpec& chain);

/// Throws ValidationError (with all violations) unless the chain is valid.
void require_valid(const MarkovChainSpec& chain);

/// Unique solution of pi^T P = pi^T, sum(pi) = 1, by a direct partial-pivot
/// linear solve (not power iteration), with a 1e-12 residual check.
StationaryDistribution stationary_distribution(const MarkovChainSpec& chain);

/// Exact return/hitting moments by first-step analysis. Satisfies
/// mean_return = 1 / pi[reference] to 1e-10.
ReturnTimeStats return_and_hitting_moments(const MarkovChainSpec& chain,
                                           int reference_state);

BoundConstants bound_constants(const ReturnTimeStats& stats);

/// Seeded state path of length `horizon`, starting at `start_state`
/// (included as the first element). Deterministic in (chain, start,
/// horizon, seed).
std::vector<int> sample_path(const MarkovChainSpec& chain, int start_state,
                             std::int64_t horizon, std::uint64_t seed);

}  // namespace maxweight
