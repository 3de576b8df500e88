#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "maxweight/controller.hpp"
#include "maxweight/markov.hpp"
#include "maxweight/model.hpp"

namespace maxweight {

/// Per-slot sides of the sample-path drift inequality
///   L(t+1) - L(t) + V f(t)  <=  B^2 + g_{S(t)}(q(t)).
struct DriftRecord {
  double lhs = 0.0;
  double rhs = 0.0;
};

struct DriftCheck {
  std::vector<DriftRecord> records;
  bool pass = true;
  std::int64_t first_violation = -1;
  std::int64_t violations = 0;
};

/// Recomputes the inequality on every slot of the trace. The right side is
/// evaluated through the dual module, independent of whatever the
/// controller did, so this is a cross-module check; on QLA traces it must
/// hold everywhere (1e-9 slack for float accumulation), on other policies
/// violations are reported, not asserted.
DriftCheck check_drift(const Trace& trace, const NetworkSpec& spec, double V);

/// One renewal cycle: the trace segment between consecutive visits to the
/// reference state, [start_slot, end_slot). visit_counts counts each
/// state's slots within the cycle; the reference state counts once.
struct RenewalCycle {
  std::int64_t start_slot = 0;
  std::int64_t end_slot = 0;
  std::vector<std::int64_t> visit_counts;

  std::int64_t length() const { return end_slot - start_slot; }
};

struct RenewalCheck {
  std::vector<RenewalCycle> cycles;
  Eigen::VectorXd mean_occupation;      // per state, mean visits per cycle
  Eigen::VectorXd occupation_se;        // standard errors of those means
  Eigen::VectorXd expected_occupation;  // pi_i / pi_ref
  double mean_length = 0.0;
  double length_se = 0.0;
  double expected_length = 0.0;  // 1 / pi_ref
  bool occupation_pass = true;   // all states within 4 SE
  bool length_pass = true;       // cycle-length mean within 4 SE
};

/// Cuts the trace into renewal cycles at the reference state and checks the
/// occupation identity E[n_si per cycle] = pi_si / pi_ref plus the cycle
/// length against 1 / pi_ref, both within 4 standard errors. Throws Error
/// when the trace holds fewer than two reference visits.
RenewalCheck renewal_decompose(const Trace& trace, const NetworkSpec& spec,
                               int reference_state);

/// Everything entering the utility/backlog bounds at one V, plus room for
/// the measured averages.
struct BoundReport {
  double V = 0.0;
  double B = 0.0;
  double eta = 0.0;
  double T1_mean = 0.0;
  double T1_second_moment = 0.0;
  double C = 0.0;
  double D = 0.0;
  double proof_side_C = 0.0;  // the tighter constant (C/2) the drift argument yields
  double f_star_av = 0.0;
  double utility_bound = 0.0;  // f* + C B^2 / (V T1)
  double backlog_bound = 0.0;  // (C B^2 + T1 V delta_max) / eta + D B^2 / 2

  int replications = 0;
  std::int64_t horizon = 0;
  double empirical_avg_cost = 0.0;
  double empirical_avg_backlog = 0.0;
  double cost_se = 0.0;
  double backlog_se = 0.0;
  double utility_margin = 0.0;  // bound - empirical
  double backlog_margin = 0.0;
  bool margins_pass = true;  // no negative margin beyond 3 SE

  int reference_state = 0;
  std::string reference_choice;  // "spec" | "max_pi"
};

/// Fills the analytic side of the report from the return-time stats and the
/// verified slack. Throws Error when eta <= 0.
BoundReport theorem2_bounds(const NetworkSpec& spec, const ReturnTimeStats& stats,
                            double eta, double V, double f_star_av);

/// Per-trace time averages, enough to aggregate across replications
/// without keeping the traces alive.
struct TraceSummary {
  double V = 0.0;
  std::int64_t slots = 0;
  double avg_cost = 0.0;
  double avg_backlog = 0.0;
};

TraceSummary summarize_trace(const Trace& trace);

/// Fills the empirical side from same-V replications: across-replication
/// means, standard errors and bound margins; flags any margin negative
/// beyond 3 SE. Throws Error on mixed-V input.
BoundReport empirical_vs_bounds(const std::vector<TraceSummary>& summaries,
                                BoundReport report);
BoundReport empirical_vs_bounds(const std::vector<Trace>& traces,
                                BoundReport report);

/// First slot t with S(t) = reference (the hitting time from the start
/// state) together with the Lyapunov value there; on any trace started at
/// q(0) = 0, L at that slot is bounded by t^2 B^2 / 2.
struct InitialTransient {
  std::int64_t first_hit_slot = -1;  // -1: reference never reached
  double lyapunov_at_hit = 0.0;
  double bound = 0.0;  // (first hit)^2 B^2 / 2
};

InitialTransient initial_transient(const Trace& trace, const NetworkSpec& spec,
                                   int reference_state);

/// Reference-state default: the index named by the instance file when
/// present, else the state of maximum stationary probability.
int choose_reference_state(const NetworkSpec& spec, int spec_reference /* -1: none */);

}  // namespace maxweight
