#include "maxweight/model.hpp"

#include <cmath>
#include <sstream>

namespace maxweight {

namespace {

std::string state_name(const NetworkSpec& spec, int i) {
  if (i >= 0 && i < spec.chain.size())
    return spec.chain.state_labels[static_cast<std::size_t>(i)];
  return "state#" + std::to_string(i);
}

std::string action_name(const NetworkSpec& spec, int i, int k) {
  const auto& list = spec.actions[static_cast<std::size_t>(i)];
  if (k >= 0 && k < static_cast<int>(list.size()) &&
      !list[static_cast<std::size_t>(k)].label.empty())
    return list[static_cast<std::size_t>(k)].label;
  return "action#" + std::to_string(k);
}

void check_bounded(std::vector<Violation>& out, const std::string& where,
                   const std::string& what, double value, double delta_max) {
  if (!std::isfinite(value) || value < 0.0 || value > delta_max) {
    std::ostringstream os;
    os << what << " = " << value << " outside [0, " << delta_max << "]";
    out.push_back({where, os.str()});
  }
}

}  // namespace

std::vector<Violation> validate_spec(const NetworkSpec& spec) {
  std::vector<Violation> out = validate_chain(spec.chain);

  if (spec.r < 1) out.push_back({"spec", "queue count r must be >= 1"});
  if (!(spec.delta_max > 0.0) || !std::isfinite(spec.delta_max))
    out.push_back({"spec", "delta_max must be positive and finite"});
  if (static_cast<int>(spec.actions.size()) != spec.chain.size()) {
    out.push_back({"spec", "need exactly one action list per chain state"});
    return out;
  }

  for (int i = 0; i < spec.chain.size(); ++i) {
    const auto& list = spec.actions[static_cast<std::size_t>(i)];
    const std::string sname = "state " + state_name(spec, i);
    if (list.empty()) {
      out.push_back({sname, "action list is empty"});
      continue;
    }
    for (int k = 0; k < static_cast<int>(list.size()); ++k) {
      const Action& a = list[static_cast<std::size_t>(k)];
      const std::string where = sname + " action " + action_name(spec, i, k);
      if (a.arrivals.size() != spec.r) {
        std::ostringstream os;
        os << "arrivals vector has length " << a.arrivals.size() << ", expected "
           << spec.r;
        out.push_back({where, os.str()});
      }
      if (a.services.size() != spec.r) {
        std::ostringstream os;
        os << "services vector has length " << a.services.size() << ", expected "
           << spec.r;
        out.push_back({where, os.str()});
      }
      check_bounded(out, where, "cost", a.cost, spec.delta_max);
      for (int j = 0; j < a.arrivals.size() && j < spec.r; ++j)
        check_bounded(out, where, "arrivals[" + std::to_string(j) + "]",
                      a.arrivals[j], spec.delta_max);
      for (int j = 0; j < a.services.size() && j < spec.r; ++j)
        check_bounded(out, where, "services[" + std::to_string(j) + "]",
                      a.services[j], spec.delta_max);
    }
  }
  return out;
}

void require_valid(const NetworkSpec& spec) {
  auto violations = validate_spec(spec);
  if (!violations.empty())
    throw ValidationError("invalid network spec", std::move(violations));
}

void finalize_spec(NetworkSpec& spec) {
  require_valid(spec);
  spec.pi = stationary_distribution(spec.chain).pi;
}

double compute_B(const NetworkSpec& spec) {
  require_valid(spec);
  const double B = std::sqrt(static_cast<double>(spec.r)) * spec.delta_max;

  std::vector<Violation> violations;
  for (int i = 0; i < spec.num_states(); ++i) {
    const auto& list = spec.actions[static_cast<std::size_t>(i)];
    for (int k = 0; k < static_cast<int>(list.size()); ++k) {
      const Action& a = list[static_cast<std::size_t>(k)];
      const double norm = (a.arrivals - a.services).norm();
      if (norm > B + 1e-12) {
        std::ostringstream os;
        os << "||A - mu|| = " << norm << " exceeds B = " << B;
        violations.push_back(
            {"state " + state_name(spec, i) + " action " + action_name(spec, i, k),
             os.str()});
      }
    }
  }
  if (!violations.empty())
    throw ValidationError("net-drive bound violated", std::move(violations));
  return B;
}

double verify_slackness(const NetworkSpec& spec, const SlacknessCertificate& cert) {
  require_valid(spec);
  const Eigen::VectorXd pi = spec.pi.size() == spec.num_states()
                                 ? spec.pi
                                 : stationary_distribution(spec.chain).pi;

  if (static_cast<int>(cert.entries.size()) != spec.num_states())
    throw Error("certificate must carry one distribution per chain state");
  if (!(cert.eta > 0.0))
    throw Error("certificate eta must be strictly positive");

  for (int i = 0; i < spec.num_states(); ++i) {
    const auto& dist = cert.entries[static_cast<std::size_t>(i)];
    const int n_actions = static_cast<int>(spec.actions[static_cast<std::size_t>(i)].size());
    if (dist.empty())
      throw Error("certificate distribution for state " + state_name(spec, i) +
                  " is empty");
    double total = 0.0;
    for (const auto& [k, p] : dist) {
      if (k < 0 || k >= n_actions)
        throw Error("certificate for state " + state_name(spec, i) +
                    " references unknown action index " + std::to_string(k));
      if (p < 0.0 || !std::isfinite(p))
        throw Error("certificate probability for state " + state_name(spec, i) +
                    " is negative");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-10)
      throw Error("certificate probabilities for state " + state_name(spec, i) +
                  " sum to " + std::to_string(total) + ", expected 1");
  }

  // Left side of the slackness condition, per queue.
  Eigen::VectorXd slack = Eigen::VectorXd::Zero(spec.r);
  for (int i = 0; i < spec.num_states(); ++i) {
    const auto& list = spec.actions[static_cast<std::size_t>(i)];
    for (const auto& [k, p] : cert.entries[static_cast<std::size_t>(i)]) {
      const Action& a = list[static_cast<std::size_t>(k)];
      slack += pi[i] * p * (a.arrivals - a.services);
    }
  }

  int worst = 0;
  slack.maxCoeff(&worst);
  const double achieved_eta = -slack[worst];
  if (achieved_eta < cert.eta - 1e-10) {
    std::ostringstream os;
    os << "slackness not met: queue " << worst << " achieves expected drift "
       << slack[worst] << " (slack " << achieved_eta << "), certificate claims eta = "
       << cert.eta;
    throw Error(os.str());
  }
  return achieved_eta;
}

}  // namespace maxweight
