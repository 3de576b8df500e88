#include "maxweight/controller.hpp"

#include "maxweight/markov.hpp"
#include "maxweight/queues.hpp"

namespace maxweight {

int qla_decide(const NetworkSpec& spec, int state, const Eigen::VectorXd& q, double V) {
  if (state < 0 || state >= spec.num_states()) throw Error("state index out of range");
  if (q.size() != spec.r) throw Error("backlog vector length mismatch");
  const auto& list = spec.actions[static_cast<std::size_t>(state)];
  if (list.empty()) throw Error("state has an empty action list");

  // max over actions of -V f + q . (mu - A); strict > keeps the lowest index
  // on ties.
  int best = 0;
  double best_value = -V * list[0].cost + q.dot(list[0].services - list[0].arrivals);
  for (int k = 1; k < static_cast<int>(list.size()); ++k) {
    const Action& a = list[static_cast<std::size_t>(k)];
    const double value = -V * a.cost + q.dot(a.services - a.arrivals);
    if (value > best_value) {
      best_value = value;
      best = k;
    }
  }
  return best;
}

int randomized_decide(const SlacknessCertificate& cert, int state, Rng& rng) {
  const auto& dist = cert.entries[static_cast<std::size_t>(state)];
  std::vector<double> probs(dist.size());
  for (std::size_t k = 0; k < dist.size(); ++k) probs[k] = dist[k].second;
  return dist[static_cast<std::size_t>(sample_index(probs, rng.next_unit()))].first;
}

Trace simulate(const NetworkSpec& spec, const Policy& policy, int start_state,
               std::int64_t horizon, std::uint64_t seed, const Eigen::VectorXd& q0) {
  if (horizon < 1) throw Error("horizon must be at least 1");
  Eigen::VectorXd q = q0.size() == 0 ? Eigen::VectorXd::Zero(spec.r) : q0;
  if (q.size() != spec.r) throw Error("q0 length mismatch");

  Trace trace;
  trace.seed = seed;
  trace.start_state = start_state;
  trace.q0 = q;

  const QlaPolicy* qla = std::get_if<QlaPolicy>(&policy);
  if (qla != nullptr) {
    if (!(qla->V >= 1.0)) throw Error("QLA requires V >= 1");
    trace.policy_name = "qla";
    trace.V = qla->V;
  } else {
    trace.policy_name = "randomized";
    verify_slackness(spec, std::get<RandomizedPolicy>(policy).cert);
  }

  // The chain stream is the seed itself, so the recorded states coincide
  // with sample_path(chain, start, horizon, seed); policy draws use a
  // derived stream and never perturb the state sequence.
  trace.states = sample_path(spec.chain, start_state, horizon, seed);
  Rng policy_rng = Rng::derive(seed, 1);

  trace.actions.resize(static_cast<std::size_t>(horizon));
  trace.costs.resize(static_cast<std::size_t>(horizon));
  trace.arrivals.resize(spec.r, horizon);
  trace.services.resize(spec.r, horizon);
  trace.queues.resize(spec.r, horizon);
  trace.lyapunov_values.resize(static_cast<std::size_t>(horizon));

  for (std::int64_t t = 0; t < horizon; ++t) {
    const int state = trace.states[static_cast<std::size_t>(t)];
    int chosen;
    if (qla != nullptr) {
      chosen = qla_decide(spec, state, q, qla->V);
    } else {
      chosen = randomized_decide(std::get<RandomizedPolicy>(policy).cert, state,
                                 policy_rng);
    }
    const Action& a =
        spec.actions[static_cast<std::size_t>(state)][static_cast<std::size_t>(chosen)];

    trace.actions[static_cast<std::size_t>(t)] = chosen;
    trace.costs[static_cast<std::size_t>(t)] = a.cost;
    trace.arrivals.col(t) = a.arrivals;
    trace.services.col(t) = a.services;

    q = step_queues(q, a.arrivals, a.services);
    trace.queues.col(t) = q;
    trace.lyapunov_values[static_cast<std::size_t>(t)] = lyapunov(q);
  }
  return trace;
}

}  // namespace maxweight
