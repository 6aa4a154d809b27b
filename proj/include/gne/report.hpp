#ifndef GNE_REPORT_HPP
#define GNE_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "gne/scenario.hpp"

namespace gne {

struct RunReport {
  RunConfig config;
  BuiltScenario scenario;
  GneOutcome outcome;
  VerificationReport verification;
  PhenomenaReport phenomena;
  std::optional<GneOutcome> comparison;  // solve at config.compare_budget
  InvestmentProfile rational_u;
  double wall_time = 0.0;  // seconds
};

// Builds the scenario, solves for the equilibrium, verifies it and detects
// the attention phenomena. `threads` overrides the solver's thread count
// (0 keeps it); results do not depend on it.
RunReport run_scenario(const RunConfig& config, unsigned threads = 0);

enum class RunStatus { Ok = 0, NotConverged = 2, VerificationFailed = 3 };
RunStatus run_status(const RunReport& report);

// summary.json contents (everything but wall time, so reruns compare equal).
std::string summary_json(const RunReport& report);
// One row per agent: agent,u,alpha,rbp,attention_mass.
std::string summary_csv(const RunReport& report);

// Writes summary.json and cognition.csv into `dir` (created if missing), plus
// u_trace.csv and q_trace_agent<i>.csv when `with_trace` is set. Returns the
// written paths. Throws IoError naming the failing path.
std::vector<std::string> emit_report(const RunReport& report, const std::string& dir, bool with_trace);

// %.12g, the precision used in every CSV output.
std::string format_csv_number(double v);

}  // namespace gne

#endif  // GNE_REPORT_HPP
