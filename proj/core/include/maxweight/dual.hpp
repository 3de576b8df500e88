#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maxweight/errors.hpp"
#include "maxweight/model.hpp"

namespace maxweight {

/// Dual evaluation at one multiplier vector gamma >= 0: the dual value,
/// its per-state decomposition, the per-state minimizing actions and the
/// subgradients A - mu taken at those minimizers.
struct DualEval {
  double value = 0.0;                     // g(gamma)
  Eigen::VectorXd per_state_values;       // g_si(gamma)
  std::vector<int> minimizers;            // argmin action per state
  Eigen::MatrixXd subgradients;           // r x M, column i = G^(si)
  Eigen::VectorXd aggregate_subgradient;  // sum_i pi_i G^(si)
};

/// Per-state evaluation of the dual integrand, min over the finite action
/// list of V f + gamma . (A - mu). Ties resolve to the lowest index.
struct StateDual {
  double value = 0.0;
  int minimizer = 0;
  Eigen::VectorXd subgradient;  // A - mu at the minimizer
};

StateDual g_si(const NetworkSpec& spec, int state, const Eigen::VectorXd& gamma,
               double V);

/// Full dual function, aggregated with the stationary weights:
/// g(gamma) = sum_i pi_i g_si(gamma).
DualEval dual_function(const NetworkSpec& spec, const Eigen::VectorXd& gamma,
                       double V);

struct AscentParams {
  double step_a = 0.0;        // 0 -> default B
  double step_b = 10.0;       // schedule a / (b + n) for the opening phase
  int phase1_iters = 2000;
  int inner_iters = 400;      // iterations per restart round afterwards
  int max_iters = 100000;
  double tol = 1e-9;          // target relative accuracy of the best value
};

struct AscentResult {
  Eigen::VectorXd gamma_star;
  double g_star = 0.0;
  int iterations = 0;
  double gap_estimate = 0.0;
};

/// Thrown when ascent hits the iteration cap before its step has shrunk to
/// the target scale; carries the best point found and a gap estimate.
class AscentError : public Error {
 public:
  AscentError(std::string msg, AscentResult best)
      : Error(std::move(msg)), best_(std::move(best)) {}
  const AscentResult& best() const { return best_; }

 private:
  AscentResult best_;
};

/// Projected subgradient ascent on the concave dual, gamma <- [gamma + a_n G]+.
/// Opens with the diminishing schedule a/(b+n), then switches to
/// best-anchored restart rounds with geometrically shrunk constant steps,
/// which converge linearly on piecewise-linear duals. Internally runs at
/// V = 1 and rescales through g_V(gamma) = V g_1(gamma / V).
AscentResult maximize_dual(const NetworkSpec& spec, double V,
                           const AscentParams& params = {});

/// Optimal simplex weights of the convexified static problem: per state a
/// distribution over its action list, with expected arrivals <= expected
/// services on every queue, minimizing the stationary expected cost scaled
/// by V. A basic optimal solution carries at most r+2 positive weights per
/// state.
struct ConvexifiedSolution {
  std::vector<std::vector<std::pair<int, double>>> weights;  // (action, weight)
  double opt_c = 0.0;
  Eigen::VectorXd constraint_slacks;  // expected A_j - mu_j at the optimum
};

ConvexifiedSolution solve_convexified_lp(const NetworkSpec& spec, double V);

/// Optimal stationary average cost f*_av, i.e. the convexified optimum at
/// V = 1.
double optimal_stationary_cost(const NetworkSpec& spec);

/// Value of the convexified dual integrand at externally supplied per-state
/// simplex weights; an upper bound on the dual value at the same gamma.
double eval_convexified_at(const NetworkSpec& spec, const Eigen::VectorXd& gamma,
                           double V,
                           const std::vector<std::vector<double>>& weights);

/// Dual function of the convexified problem. The per-state inner optimum
/// concentrates on a single action, so this reduces to a per-vertex scan of
/// each state's weight simplex.
double dual_function_convexified(const NetworkSpec& spec,
                                 const Eigen::VectorXd& gamma, double V);

struct DualityCheck {
  std::string name;
  bool pass = true;
  int samples = 0;
  std::string detail;
  std::optional<Eigen::VectorXd> witness;  // failing gamma, when any
};

struct DualityReport {
  double g_star = 0.0;
  double opt_c = 0.0;
  double f_star_av = 0.0;
  std::vector<DualityCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Numeric verification of the zero-gap characterization at one V:
///   (a) |g* - V f*_av| <= tol, ascent cross-certified against the LP;
///   (b) the convexified dual equals the dual at sampled gamma (1e-10);
///   (c) g(gamma) <= V f*_av + 1e-9 at every sample;
///   (d) g(gamma) <= V delta_max - eta * sum(gamma) + 1e-9 at every sample.
/// Samples are gamma = 0 plus >= `samples` seeded componentwise-exponential
/// draws with mean V delta_max / eta. `eta` must come from a verified
/// certificate.
DualityReport verify_strong_duality(const NetworkSpec& spec, double V, double tol,
                                    double eta, int samples = 128,
                                    std::uint64_t seed = 0x5eedd0a1u);

/// Convenience: searches for a maximum-slack stationary randomized policy
/// with the same LP machinery and returns it as a certificate (eta set to
/// the achieved slack), or nullopt when no strictly slack policy exists.
std::optional<SlacknessCertificate> suggest_certificate(const NetworkSpec& spec);

}  // namespace maxweight
