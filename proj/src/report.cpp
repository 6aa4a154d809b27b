#include "gne/report.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config_json.hpp"
#include "gne/error.hpp"

namespace gne {

using nlohmann::json;

RunReport run_scenario(const RunConfig& config, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  GneConfig solver = config.solver;
  if (threads != 0) solver.threads = threads;

  RunReport rep{config, build_scenario(config.scenario), {}, {}, {}, std::nullopt, {}, 0.0};
  const SecurityGame& game = rep.scenario.game;
  rep.outcome = gne_solve(game, solver);
  rep.rational_u = rational_ne(game);
  rep.verification = verify_gne(game, rep.outcome, config.n_probes, config.rng_seed);

  if (config.compare_budget) {
    const BuiltScenario lower = build_scenario(with_budget(config.scenario, *config.compare_budget));
    rep.comparison = gne_solve(lower.game, solver);
  }
  const std::vector<int>* labels = rep.scenario.group_labels ? &*rep.scenario.group_labels : nullptr;
  rep.phenomena = detect_phenomena(game, rep.outcome, labels, config.support_eps,
                                   rep.comparison ? &*rep.comparison : nullptr);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

RunStatus run_status(const RunReport& report) {
  if (!report.outcome.converged || (report.comparison && !report.comparison->converged)) {
    return RunStatus::NotConverged;
  }
  if (!report.verification.passed) return RunStatus::VerificationFailed;
  return RunStatus::Ok;
}

std::string format_csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

json rows_of(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_std(m.row(i).transpose()));
  return rows;
}

// Agent labels in reports are 1-based.
std::vector<std::size_t> one_based(const std::vector<std::size_t>& idx) {
  std::vector<std::size_t> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(i + 1);
  return out;
}

json phenomena_json(const PhenomenaReport& p) {
  json j;
  j["support_eps"] = p.support_eps;
  json supports = json::array();
  for (const auto& s : p.supports) supports.push_back(one_based(s));
  j["supports"] = supports;
  j["critical_set"] = one_based(p.critical_set);
  if (p.partisanship) {
    json part;
    part["flag"] = p.partisanship->flag;
    part["dominant_group"] = p.partisanship->dominant_group ? json(*p.partisanship->dominant_group + 1) : json(nullptr);
    part["group_share"] = p.partisanship->group_share;
    j["partisanship"] = part;
  }
  if (p.fill_set) j["fill_set"] = one_based(*p.fill_set);
  return j;
}

json verification_json(const VerificationReport& v) {
  json j;
  j["passed"] = v.passed;
  j["brne_residual"] = v.brne_residual;
  j["max_cognition_residual"] = v.cognition_residuals.size() > 0 ? v.cognition_residuals.maxCoeff() : 0.0;
  j["worst_improvement"] = v.worst_improvement;
  j["probes_per_agent"] = v.probes_per_agent;
  j["seed"] = v.seed;
  json viol = json::array();
  for (const auto& p : v.violations) {
    viol.push_back({{"agent", p.agent + 1},
                    {"kind", p.kind == ProbeViolation::Kind::Investment ? "investment" : "attention"},
                    {"improvement", p.improvement}});
  }
  j["violations"] = viol;
  j["failures"] = v.failures;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content, std::vector<std::string>& written) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
  written.push_back(path.string());
}

std::string matrix_csv(const Matrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_csv_number(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string summary_json(const RunReport& report) {
  const GneOutcome& o = report.outcome;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["scenario"] = scenario_kind(report.config.scenario);
  j["n_agents"] = report.scenario.game.size();
  j["converged"] = o.converged;
  j["rounds"] = o.rounds_used;
  j["u_star"] = to_std(o.u_star);
  j["m_star"] = rows_of(o.m_star.matrix());
  j["alphas"] = to_std(o.alphas);
  j["rbp"] = to_std(o.rbp);
  j["rational_u"] = to_std(report.rational_u);
  j["phenomena"] = phenomena_json(report.phenomena);
  if (report.comparison) {
    j["comparison"] = {{"budget", *report.config.compare_budget},
                       {"converged", report.comparison->converged},
                       {"rounds", report.comparison->rounds_used},
                       {"u_star", to_std(report.comparison->u_star)},
                       {"m_star", rows_of(report.comparison->m_star.matrix())}};
  }
  j["verification"] = verification_json(report.verification);
  j["config_echo"] = detail::config_echo(report.config);
  return j.dump(2) + "\n";
}

std::string summary_csv(const RunReport& report) {
  const GneOutcome& o = report.outcome;
  std::string out = "agent,u,alpha,rbp,attention_mass\n";
  for (std::size_t i = 0; i < report.scenario.game.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out += std::to_string(i + 1) + ',' + format_csv_number(o.u_star(k)) + ',' + format_csv_number(o.alphas(k)) +
           ',' + format_csv_number(o.rbp(k)) + ',' + format_csv_number(o.m_star.attention_mass(i)) + '\n';
  }
  return out;
}

std::vector<std::string> emit_report(const RunReport& report, const std::string& dir, bool with_trace) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError(root.string(), "cannot create directory: " + ec.message());

  std::vector<std::string> written;
  write_file(root / "summary.json", summary_json(report), written);
  write_file(root / "cognition.csv", matrix_csv(report.outcome.m_star.matrix()), written);
  if (!with_trace) return written;

  const std::size_t n = report.scenario.game.size();
  std::string u_trace = "round";
  for (std::size_t i = 0; i < n; ++i) u_trace += ",u" + std::to_string(i + 1);
  u_trace += '\n';
  for (std::size_t r = 0; r < report.outcome.round_trace.size(); ++r) {
    u_trace += std::to_string(r + 1);
    const Vector& u = report.outcome.round_trace[r].u;
    for (Eigen::Index i = 0; i < u.size(); ++i) u_trace += ',' + format_csv_number(u(i));
    u_trace += '\n';
  }
  write_file(root / "u_trace.csv", u_trace, written);

  for (std::size_t i = 0; i < report.outcome.final_apg_traces.size(); ++i) {
    std::string q = "iteration,q\n";
    const auto& values = report.outcome.final_apg_traces[i].q_values;
    for (std::size_t k = 0; k < values.size(); ++k) q += std::to_string(k) + ',' + format_csv_number(values[k]) + '\n';
    write_file(root / ("q_trace_agent" + std::to_string(i + 1) + ".csv"), q, written);
  }
  return written;
}

}  // namespace gne
