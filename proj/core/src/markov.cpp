#include "maxweight/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "maxweight/rng.hpp"

namespace maxweight {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kSupportTol = 1e-12;  // mass at or below this is not support
constexpr double kResidualTol = 1e-12;

std::string join_labels(const MarkovChainSpec& chain, const std::vector<int>& idx) {
  std::string out;
  for (int i : idx) {
    if (!out.empty()) out += ", ";
    out += chain.state_labels[static_cast<std::size_t>(i)];
  }
  return out;
}

// Support-graph reachability from `from`, edges with mass > kSupportTol.
std::vector<bool> reachable_from(const Eigen::MatrixXd& P, int from) {
  const int m = static_cast<int>(P.rows());
  std::vector<bool> seen(m, false);
  std::vector<int> stack{from};
  seen[static_cast<std::size_t>(from)] = true;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < m; ++v) {
      if (!seen[static_cast<std::size_t>(v)] && P(u, v) > kSupportTol) {
        seen[static_cast<std::size_t>(v)] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

// Period of an irreducible support graph: gcd over edges (u,v) of
// level(u) + 1 - level(v) on a BFS tree from state 0.
int chain_period(const Eigen::MatrixXd& P) {
  const int m = static_cast<int>(P.rows());
  std::vector<int> level(static_cast<std::size_t>(m), -1);
  std::vector<int> queue{0};
  level[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    for (int v = 0; v < m; ++v) {
      if (P(u, v) > kSupportTol && level[static_cast<std::size_t>(v)] < 0) {
        level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  int g = 0;
  for (int u = 0; u < m; ++u) {
    for (int v = 0; v < m; ++v) {
      if (P(u, v) > kSupportTol) {
        g = std::gcd(g, level[static_cast<std::size_t>(u)] + 1 -
                            level[static_cast<std::size_t>(v)]);
      }
    }
  }
  return g == 0 ? 1 : std::abs(g);
}

// First-step analysis for the hitting times into `ref`. Unknowns are the
// moments from every state except ref (which is 0 by convention):
//   h_j = 1 + sum_{k != ref} P_jk h_k
//   m_j = 1 + 2 sum_{k != ref} P_jk h_k + sum_{k != ref} P_jk m_k
struct HittingMoments {
  Eigen::VectorXd mean;    // full length, entry ref = 0
  Eigen::VectorXd second;  // full length, entry ref = 0
};

HittingMoments hitting_moments(const Eigen::MatrixXd& P, int ref) {
  const int m = static_cast<int>(P.rows());
  std::vector<int> others;
  others.reserve(static_cast<std::size_t>(m - 1));
  for (int j = 0; j < m; ++j)
    if (j != ref) others.push_back(j);
  const int n = static_cast<int>(others.size());

  HittingMoments out;
  out.mean = Eigen::VectorXd::Zero(m);
  out.second = Eigen::VectorXd::Zero(m);
  if (n == 0) return out;

  Eigen::MatrixXd Q(n, n);  // P restricted to non-reference states
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) Q(a, b) = P(others[static_cast<std::size_t>(a)],
                                            others[static_cast<std::size_t>(b)]);

  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - Q;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd h = lu.solve(ones);
  if (((A * h - ones).lpNorm<Eigen::Infinity>()) >
      kResidualTol * (1.0 + h.lpNorm<Eigen::Infinity>())) {
    throw Error("hitting-time solve residual exceeds 1e-12; chain is near-reducible");
  }

  Eigen::VectorXd rhs2 = ones + 2.0 * (Q * h);
  Eigen::VectorXd m2 = lu.solve(rhs2);
  if (((A * m2 - rhs2).lpNorm<Eigen::Infinity>()) >
      kResidualTol * (1.0 + m2.lpNorm<Eigen::Infinity>())) {
    throw Error("hitting-moment solve residual exceeds 1e-12; chain is near-reducible");
  }

  for (int a = 0; a < n; ++a) {
    out.mean[others[static_cast<std::size_t>(a)]] = h[a];
    out.second[others[static_cast<std::size_t>(a)]] = m2[a];
  }
  return out;
}

}  // namespace

std::vector<Violation> validate_chain(const MarkovChainSpec& chain) {
  std::vector<Violation> out;
  const int m = chain.size();
  if (m < 1) {
    out.push_back({"chain", "needs at least one state"});
    return out;
  }
  if (chain.transition.rows() != m || chain.transition.cols() != m) {
    std::ostringstream os;
    os << "transition matrix is " << chain.transition.rows() << "x"
       << chain.transition.cols() << ", expected " << m << "x" << m;
    out.push_back({"chain", os.str()});
    return out;
  }

  for (int i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < m; ++j) {
      const double p = chain.transition(i, j);
      if (!(p >= 0.0 && p <= 1.0) || !std::isfinite(p)) {
        std::ostringstream os;
        os << "entry P(" << chain.state_labels[static_cast<std::size_t>(i)] << " -> "
           << chain.state_labels[static_cast<std::size_t>(j)] << ") = " << p
           << " outside [0, 1]";
        out.push_back({"chain row " + chain.state_labels[static_cast<std::size_t>(i)],
                       os.str()});
      }
      row_sum += p;
    }
    if (std::abs(row_sum - 1.0) > kRowSumTol) {
      std::ostringstream os;
      os << "row sums to " << row_sum << ", expected 1 within 1e-12";
      out.push_back({"chain row " + chain.state_labels[static_cast<std::size_t>(i)],
                     os.str()});
    }
  }
  if (!out.empty()) return out;  // graph checks need a stochastic matrix

  // Irreducibility: every state reachable from state 0 and vice versa.
  const auto forward = reachable_from(chain.transition, 0);
  const auto backward = reachable_from(chain.transition.transpose(), 0);
  std::vector<int> unreachable, absorbing_away;
  for (int i = 0; i < m; ++i) {
    if (!forward[static_cast<std::size_t>(i)]) unreachable.push_back(i);
    if (!backward[static_cast<std::size_t>(i)]) absorbing_away.push_back(i);
  }
  if (!unreachable.empty()) {
    out.push_back({"chain", "reducible: states unreachable from " +
                                chain.state_labels[0] + ": {" +
                                join_labels(chain, unreachable) + "}"});
  }
  if (!absorbing_away.empty()) {
    out.push_back({"chain", "reducible: states that cannot reach " +
                                chain.state_labels[0] + ": {" +
                                join_labels(chain, absorbing_away) + "}"});
  }
  if (!out.empty()) return out;

  const int period = chain_period(chain.transition);
  if (period != 1) {
    std::ostringstream os;
    os << "periodic with period " << period << " on states {"
       << join_labels(chain, [&] {
            std::vector<int> all(static_cast<std::size_t>(m));
            std::iota(all.begin(), all.end(), 0);
            return all;
          }())
       << "}";
    out.push_back({"chain", os.str()});
  }
  return out;
}

void require_valid(const MarkovChainSpec& chain) {
  auto violations = validate_chain(chain);
  if (!violations.empty())
    throw ValidationError("invalid Markov chain", std::move(violations));
}

StationaryDistribution stationary_distribution(const MarkovChainSpec& chain) {
  require_valid(chain);
  const int m = chain.size();

  // (P^T - I) pi = 0 with the last equation replaced by the normalization.
  Eigen::MatrixXd A = chain.transition.transpose() - Eigen::MatrixXd::Identity(m, m);
  A.row(m - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b[m - 1] = 1.0;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd pi = lu.solve(b);
  if ((A * pi - b).lpNorm<Eigen::Infinity>() > kResidualTol) {
    throw Error("stationary solve residual exceeds 1e-12; chain is near-reducible");
  }

  for (int i = 0; i < m; ++i) {
    if (!(pi[i] > 0.0)) {
      throw Error("stationary probability of state " +
                  chain.state_labels[static_cast<std::size_t>(i)] +
                  " is not strictly positive");
    }
  }
  return StationaryDistribution{std::move(pi)};
}

ReturnTimeStats return_and_hitting_moments(const MarkovChainSpec& chain,
                                           int reference_state) {
  require_valid(chain);
  const int m = chain.size();
  if (reference_state < 0 || reference_state >= m)
    throw Error("reference state index out of range");

  const auto hit = hitting_moments(chain.transition, reference_state);

  // Return moments: the same recursions launched from the reference state.
  const Eigen::VectorXd row = chain.transition.row(reference_state).transpose();
  double mean_return = 1.0 + row.dot(hit.mean);
  double second_return = 1.0 + 2.0 * row.dot(hit.mean) + row.dot(hit.second);

  ReturnTimeStats stats;
  stats.reference_state = reference_state;
  stats.mean_return = mean_return;
  stats.second_moment_return = second_return;
  stats.hitting_means = hit.mean;
  stats.hitting_second_moments = hit.second;

  const auto pi = stationary_distribution(chain).pi;
  if (std::abs(stats.mean_return - 1.0 / pi[reference_state]) > 1e-10) {
    throw Error("return-time identity violated: mean return differs from 1/pi");
  }
  return stats;
}

BoundConstants bound_constants(const ReturnTimeStats& stats) {
  return BoundConstants{stats.second_moment_return + stats.mean_return,
                        stats.second_moment_return - stats.mean_return};
}

std::vector<int> sample_path(const MarkovChainSpec& chain, int start_state,
                             std::int64_t horizon, std::uint64_t seed) {
  require_valid(chain);
  if (start_state < 0 || start_state >= chain.size())
    throw Error("start state index out of range");
  if (horizon < 1) throw Error("horizon must be at least 1");

  const int m = chain.size();
  std::vector<int> path(static_cast<std::size_t>(horizon));
  path[0] = start_state;

  Rng rng(seed);
  std::vector<double> row(static_cast<std::size_t>(m));
  for (std::int64_t t = 1; t < horizon; ++t) {
    const int prev = path[static_cast<std::size_t>(t - 1)];
    for (int j = 0; j < m; ++j) row[static_cast<std::size_t>(j)] = chain.transition(prev, j);
    path[static_cast<std::size_t>(t)] = sample_index(row, rng.next_unit());
  }
  return path;
}

}  // namespace maxweight
