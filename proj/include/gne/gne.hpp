#ifndef GNE_GNE_HPP
#define GNE_GNE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gne/cognition.hpp"
#include "gne/equilibrium.hpp"
#include "gne/game.hpp"

namespace gne {

enum class BudgetMode {
  PerAgentBeta,  // re-calibrate alpha_i every round so |m^i|_1 = beta_i
  FixedAlpha,    // hold alpha_i constant
};

const char* to_string(BudgetMode mode);
std::optional<BudgetMode> parse_budget_mode(const std::string& name);

struct GneConfig {
  double outer_tol = 1e-6;
  int max_rounds = 1000;
  BrSolverConfig br_config;
  ApgConfig apg_config;
  CalibrationOptions calibration;
  BudgetMode budget_mode = BudgetMode::PerAgentBeta;
  Vector fixed_alphas;   // used in FixedAlpha mode, one per agent
  unsigned threads = 0;  // 0: hardware concurrency
};

struct RoundSnapshot {
  InvestmentProfile u;
  Matrix m;
  double change = 0.0;
};

struct GneOutcome {
  InvestmentProfile u_star;
  CognitionProfile m_star{Matrix()};
  Vector alphas;
  Vector rbp;
  int rounds_used = 0;
  bool converged = false;
  std::vector<RoundSnapshot> round_trace;
  // Cognition solve of every agent in the last round.
  std::vector<ApgTrace> final_apg_traces;
};

// Alternates the investment layer (BRNE given attention) and the cognition
// layer (every agent re-forms its attention from the same u) until the
// sup-norm change of (u, m) drops below outer_tol.
GneOutcome gne_solve(const SecurityGame& game, const GneConfig& cfg);

struct ProbeViolation {
  std::size_t agent = 0;
  enum class Kind { Investment, Attention } kind = Kind::Investment;
  double improvement = 0.0;
};

struct VerifyOptions {
  double residual_tol = 1e-8;
  double improvement_tol = 1e-7;
  double u_factor_lo = 0.5;
  double u_factor_hi = 1.5;
  double m_step_scale = 0.1;
};

struct VerificationReport {
  bool passed = false;
  double brne_residual = 0.0;
  Vector cognition_residuals;
  std::vector<ProbeViolation> violations;
  std::uint64_t seed = 0;
  int probes_per_agent = 0;
  double worst_improvement = 0.0;
  std::vector<std::string> failures;  // human-readable, one per failed check
};

// Checks both layers' optimality at the outcome plus randomized unilateral
// deviations (investment scaled by a uniform factor; attention moved by a
// box-projected Gaussian step with the investment re-best-responded).
VerificationReport verify_gne(const SecurityGame& game, const GneOutcome& outcome, int n_probes,
                              std::uint64_t seed, const VerifyOptions& opts = {});

struct Partisanship {
  std::vector<std::vector<double>> group_share;  // agent x group, fraction of attention mass
  bool flag = false;
  std::optional<int> dominant_group;
};

struct PhenomenaReport {
  double support_eps = 1e-3;
  std::vector<std::vector<std::size_t>> supports;  // 0-based agent indices per agent
  std::vector<std::size_t> critical_set;
  std::optional<Partisanship> partisanship;
  std::optional<std::vector<std::size_t>> fill_set;
};

// `group_labels` assigns every agent a group id (0-based); `lower_budget` is
// an outcome of the same game at a smaller budget, enabling the
// inattention-fill comparison.
PhenomenaReport detect_phenomena(const SecurityGame& game, const GneOutcome& outcome,
                                 const std::vector<int>* group_labels, double support_eps,
                                 const GneOutcome* lower_budget = nullptr);

// Agents attended to (above support_eps) by somebody at the high budget but by
// nobody at the low budget.
std::vector<std::size_t> inattention_fill(const GneOutcome& low, const GneOutcome& high, double support_eps);

struct HomogeneousSolution {
  double m_value = 0.0;
  double u_value = 0.0;
};

// Symmetric equilibrium of a homogeneous game: m = beta/(N-1), u = r/(R1 - beta R2).
HomogeneousSolution homogeneous_closed_form(double r1, double r2, double r, int n, double beta);

}  // namespace gne

#endif  // GNE_GNE_HPP
