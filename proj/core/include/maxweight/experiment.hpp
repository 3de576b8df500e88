#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "maxweight/controller.hpp"
#include "maxweight/drift.hpp"
#include "maxweight/dual.hpp"
#include "maxweight/model.hpp"

namespace maxweight {

/// A parsed instance file: the validated network, the optional certificate
/// (verified when present), the optional reference-state index, and any
/// non-fatal warnings raised while loading.
struct LoadedSpec {
  NetworkSpec spec;
  std::optional<SlacknessCertificate> certificate;
  int reference_state = -1;  // -1: not named in the file
  std::vector<std::string> warnings;
};

/// Thrown on unparseable or invalid instance files; the message carries the
/// parse location or the exhaustive violation list.
class SpecFileError : public Error {
 public:
  using Error::Error;
};

LoadedSpec load_spec(const std::filesystem::path& path);
LoadedSpec load_spec_from_string(const std::string& text, const std::string& origin);

enum class RunMode { Simulate, Sweep, VerifyDuality, VerifyDrift, Bounds };

RunMode parse_mode(const std::string& name);  // throws Error on unknown names
std::string mode_name(RunMode mode);

/// One orchestrated experiment. Replication k runs with seed
/// seed_base + k; identical plans produce byte-identical artifacts.
struct ExperimentPlan {
  std::filesystem::path spec_path;
  RunMode mode = RunMode::Simulate;
  std::vector<double> V_list{1.0};
  std::int64_t horizon = 100000;
  int replications = 1;
  std::uint64_t seed_base = 0;
  std::filesystem::path out_dir = ".";
  int max_threads = 0;  // 0: hardware concurrency, capped by MAXWEIGHT_THREADS
};

/// Plan-shape violations (empty V list, V < 1, horizon < 1, ...).
std::vector<Violation> validate_plan(const ExperimentPlan& plan);

struct RunResult {
  int exit_code = 0;  // 0 pass, 2 verification failure, 3 input error
  std::vector<std::filesystem::path> artifacts;
  std::string failure;  // name of the first failing check, when any
};

/// Executes the plan and writes every artifact under plan.out_dir:
///   simulate       trace_V<V>_rep<k>.csv per replication
///   sweep          sweep.csv plus bounds_V<V>.json per V
///   verify-duality duality_V<V>.json per V
///   verify-drift   drift_V<V>.json per V, per-replication pass/fail
///   bounds         bounds_V<V>.json per V (certificate required)
RunResult run(const ExperimentPlan& plan);

/// Streams the trace in the fixed column order
/// slot,state,action,cost,q_1..q_r,L,drift_lhs,drift_rhs with '.' decimals
/// and 17 significant digits (round-trip exact for doubles).
void write_trace_csv(std::ostream& out, const Trace& trace, const NetworkSpec& spec,
                     const std::vector<DriftRecord>& drift);

/// Fixed-width-precision "%.17g" rendering used by every CSV writer.
std::string format_number(double value);

std::string duality_report_json(const DualityReport& report);
std::string bound_report_json(const BoundReport& report);

}  // namespace maxweight
