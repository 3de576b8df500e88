#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "maxweight/errors.hpp"
#include "maxweight/markov.hpp"

namespace maxweight {

/// One control action available in some network state: its cost f, the
/// traffic A_j it admits into each queue and the service mu_j it grants.
struct Action {
  std::string label;
  double cost = 0.0;
  Eigen::VectorXd arrivals;  // length r
  Eigen::VectorXd services;  // length r
};

/// A full network instance: r queues, the modulating chain, and one finite
/// action table per chain state. All costs, arrivals and services live in
/// [0, delta_max]. Immutable after construction; `pi` is filled by
/// finalize_spec (or by the loader) once the instance validates.
struct NetworkSpec {
  int r = 0;
  MarkovChainSpec chain;
  std::vector<std::vector<Action>> actions;  // actions[state][k]
  double delta_max = 0.0;
  Eigen::VectorXd pi;  // derived stationary distribution, empty until finalized

  int num_states() const { return chain.size(); }
};

/// A stationary randomized policy claimed to stabilize the network with
/// slack eta: per state, a distribution over action indices. Up to r+2
/// entries per state is a representation cap, not a requirement.
struct SlacknessCertificate {
  std::vector<std::vector<std::pair<int, double>>> entries;  // (action, prob)
  double eta = 0.0;
};

/// Uniform bound on ||A - mu||: B = sqrt(r) * delta_max. Also verifies the
/// bound action by action and throws ValidationError if any violates it.
double compute_B(const NetworkSpec& spec);

/// All structural checks (shape, boundedness, chain invariants); returns
/// every violation with state/action coordinates rather than throwing.
std::vector<Violation> validate_spec(const NetworkSpec& spec);

/// Throws ValidationError unless the spec is structurally valid.
void require_valid(const NetworkSpec& spec);

/// Validates and fills the derived stationary distribution.
void finalize_spec(NetworkSpec& spec);

/// Evaluates the certificate's expected net-arrival slack per queue and
/// returns the largest eta' with slack_j <= -eta' for every queue. Accepts
/// iff eta' >= cert.eta - 1e-10; otherwise throws Error naming the worst
/// queue and its achieved slack. Also rejects malformed distributions.
double verify_slackness(const NetworkSpec& spec, const SlacknessCertificate& cert);

}  // namespace maxweight
