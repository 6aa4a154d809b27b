#include "gne/gne.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "gne/error.hpp"

namespace gne {

const char* to_string(BudgetMode mode) {
  return mode == BudgetMode::PerAgentBeta ? "beta" : "alpha";
}

std::optional<BudgetMode> parse_budget_mode(const std::string& name) {
  if (name == "beta") return BudgetMode::PerAgentBeta;
  if (name == "alpha") return BudgetMode::FixedAlpha;
  return std::nullopt;
}

namespace {

struct AgentCognition {
  Vector row;
  double alpha = 0.0;
  ApgTrace trace;
};

AgentCognition form_attention(const SecurityGame& game, std::size_t i, const InvestmentProfile& u,
                              const GneConfig& cfg) {
  const ProxProblem base = build_lambda(game, i, u);
  AgentCognition out;
  if (cfg.budget_mode == BudgetMode::PerAgentBeta) {
    CalibrationResult c = calibrate_alpha(base, game.budget(i), cfg.apg_config, cfg.calibration);
    out.alpha = c.alpha;
    out.row = from_coordinates(c.m, i);
    out.trace = std::move(c.trace);
  } else {
    const double alpha = cfg.fixed_alphas(static_cast<Eigen::Index>(i));
    ApgConfig apg = cfg.apg_config;
    if (!apg.initial_m) {
      const double share = std::clamp(game.budget(i) / static_cast<double>(game.size() - 1), 0.0, 1.0);
      apg.initial_m = Vector::Constant(static_cast<Eigen::Index>(game.size() - 1), share);
    }
    ApgResult r = solve_cognition(base.with_alpha(alpha), apg);
    out.alpha = alpha;
    out.row = from_coordinates(r.m, i);
    out.trace = std::move(r.trace);
  }
  return out;
}

// Agents are independent given u; results land in per-agent slots so the
// outcome does not depend on scheduling.
std::vector<AgentCognition> form_all(const SecurityGame& game, const InvestmentProfile& u, const GneConfig& cfg) {
  const std::size_t n = game.size();
  std::vector<AgentCognition> out(n);
  std::vector<std::exception_ptr> errors(n);
  unsigned workers = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

  auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < n; i += workers) {
      try {
        out[i] = form_attention(game, i, u, cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

GneOutcome gne_solve(const SecurityGame& game, const GneConfig& cfg) {
  if (!(cfg.outer_tol > 0.0)) throw InvalidArgument("outer_tol must be positive");
  if (cfg.max_rounds < 1) throw InvalidArgument("max_rounds must be at least 1");
  const std::size_t n = game.size();
  if (cfg.budget_mode == BudgetMode::FixedAlpha &&
      static_cast<std::size_t>(cfg.fixed_alphas.size()) != n) {
    throw InvalidArgument("fixed-alpha mode needs one alpha per agent");
  }

  GneOutcome outcome;
  CognitionProfile m = CognitionProfile::from_budgets(game.budgets());
  InvestmentProfile u = solve_brne(game, m, cfg.br_config).u;
  outcome.alphas = Vector::Zero(static_cast<Eigen::Index>(n));
  outcome.final_apg_traces.resize(n);

  if (n == 1) {
    outcome.converged = true;
    outcome.round_trace.push_back({u, m.matrix(), 0.0});
  }
  for (int round = 1; round <= cfg.max_rounds && !outcome.converged; ++round) {
    std::vector<AgentCognition> formed = form_all(game, u, cfg);
    Matrix next_m = m.matrix();
    for (std::size_t i = 0; i < n; ++i) {
      next_m.row(static_cast<Eigen::Index>(i)) = formed[i].row.transpose();
      outcome.alphas(static_cast<Eigen::Index>(i)) = formed[i].alpha;
      outcome.final_apg_traces[i] = std::move(formed[i].trace);
    }
    CognitionProfile m_next(std::move(next_m));
    const BrResult br = solve_brne(game, m_next, cfg.br_config);

    const double change = std::max((br.u - u).cwiseAbs().maxCoeff(),
                                   (m_next.matrix() - m.matrix()).cwiseAbs().maxCoeff());
    m = std::move(m_next);
    u = br.u;
    outcome.round_trace.push_back({u, m.matrix(), change});
    outcome.rounds_used = round;
    if (!br.trace.converged || !std::isfinite(change)) break;
    if (change < cfg.outer_tol) outcome.converged = true;
  }

  outcome.u_star = u;
  outcome.rbp = Vector(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    outcome.rbp(static_cast<Eigen::Index>(i)) = rbp(game, i, u, m.row(i));
  }
  outcome.m_star = std::move(m);
  return outcome;
}

VerificationReport verify_gne(const SecurityGame& game, const GneOutcome& outcome, int n_probes,
                              std::uint64_t seed, const VerifyOptions& opts) {
  const std::size_t n = game.size();
  if (static_cast<std::size_t>(outcome.u_star.size()) != n || outcome.m_star.size() != n) {
    throw InvalidArgument("outcome does not match the game size");
  }
  VerificationReport rep;
  rep.seed = seed;
  rep.probes_per_agent = n_probes;
  const InvestmentProfile& u = outcome.u_star;
  const CognitionProfile& m = outcome.m_star;

  rep.brne_residual = brne_residual(game, m, u);
  if (!(rep.brne_residual < opts.residual_tol)) {
    std::ostringstream os;
    os << "investment layer residual " << rep.brne_residual << " exceeds " << opts.residual_tol;
    rep.failures.push_back(os.str());
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> factor(opts.u_factor_lo, opts.u_factor_hi);
  std::normal_distribution<double> gauss(0.0, opts.m_step_scale);

  rep.cognition_residuals = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const Vector row = m.row(i);
    if (n > 1) {
      const ProxProblem p = build_lambda(game, i, u).with_alpha(outcome.alphas(k));
      const Vector coords = to_coordinates(row, i);
      rep.cognition_residuals(k) = fixed_point_residual(p, coords);
      if (!(rep.cognition_residuals(k) < opts.residual_tol)) {
        std::ostringstream os;
        os << "agent " << i + 1 << " cognition residual " << rep.cognition_residuals(k) << " exceeds "
           << opts.residual_tol;
        rep.failures.push_back(os.str());
      }
      const double q_star = eval_Q(p, coords).value;
      for (int probe = 0; probe < n_probes; ++probe) {
        Vector moved = coords;
        for (Eigen::Index j = 0; j < moved.size(); ++j) moved(j) += gauss(rng);
        moved = proj_box(moved);
        // The deviating agent re-best-responds; Q depends on u_{-i} only.
        InvestmentProfile u_dev = u;
        u_dev(k) = best_response(game, i, u, from_coordinates(moved, i));
        const ProxProblem p_dev = build_lambda(game, i, u_dev).with_alpha(outcome.alphas(k));
        const double gain = q_star - eval_Q(p_dev, moved).value;
        rep.worst_improvement = std::max(rep.worst_improvement, gain);
        if (gain > opts.improvement_tol) {
          rep.violations.push_back({i, ProbeViolation::Kind::Attention, gain});
        }
      }
    }
    const double cost_star = perceived_cost(game, i, u, row);
    for (int probe = 0; probe < n_probes; ++probe) {
      InvestmentProfile u_dev = u;
      u_dev(k) *= factor(rng);
      const double gain = cost_star - perceived_cost(game, i, u_dev, row);
      rep.worst_improvement = std::max(rep.worst_improvement, gain);
      if (gain > opts.improvement_tol) {
        rep.violations.push_back({i, ProbeViolation::Kind::Investment, gain});
      }
    }
  }
  if (!rep.violations.empty()) {
    std::ostringstream os;
    os << rep.violations.size() << " deviation probes improved an objective by more than " << opts.improvement_tol;
    rep.failures.push_back(os.str());
  }
  rep.passed = rep.failures.empty();
  return rep;
}

PhenomenaReport detect_phenomena(const SecurityGame& game, const GneOutcome& outcome,
                                 const std::vector<int>* group_labels, double support_eps,
                                 const GneOutcome* lower_budget) {
  if (!(support_eps > 0.0)) throw InvalidArgument("support_eps must be positive");
  const std::size_t n = game.size();
  if (outcome.m_star.size() != n) throw InvalidArgument("outcome does not match the game size");
  PhenomenaReport rep;
  rep.support_eps = support_eps;
  rep.supports.resize(n);
  const Matrix& w = outcome.m_star.matrix();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > support_eps) {
        rep.supports[i].push_back(j);
      }
    }
  }
  if (n > 1) {
    for (std::size_t j = 0; j < n; ++j) {
      bool everywhere = true;
      for (std::size_t i = 0; i < n && everywhere; ++i) {
        if (i == j) continue;
        everywhere = std::binary_search(rep.supports[i].begin(), rep.supports[i].end(), j);
      }
      if (everywhere) rep.critical_set.push_back(j);
    }
  }

  if (group_labels != nullptr) {
    if (group_labels->size() != n) throw InvalidArgument("group labels must cover every agent");
    const int groups = *std::max_element(group_labels->begin(), group_labels->end()) + 1;
    if (*std::min_element(group_labels->begin(), group_labels->end()) < 0) {
      throw InvalidArgument("group labels must be nonnegative");
    }
    Partisanship part;
    part.group_share.assign(n, std::vector<double>(static_cast<std::size_t>(groups), 0.0));
    constexpr double kConcentration = 1.0 - 1e-3;
    std::vector<bool> holds(static_cast<std::size_t>(groups), true);
    bool anyone = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double total = outcome.m_star.attention_mass(i);
      if (total <= 0.0) continue;
      anyone = true;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        part.group_share[i][static_cast<std::size_t>((*group_labels)[j])] +=
            w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / total;
      }
      for (int g = 0; g < groups; ++g) {
        if (part.group_share[i][static_cast<std::size_t>(g)] < kConcentration) holds[static_cast<std::size_t>(g)] = false;
      }
    }
    for (int g = 0; g < groups && anyone; ++g) {
      if (holds[static_cast<std::size_t>(g)]) {
        part.flag = true;
        part.dominant_group = g;
        break;
      }
    }
    rep.partisanship = std::move(part);
  }

  if (lower_budget != nullptr) rep.fill_set = inattention_fill(*lower_budget, outcome, support_eps);
  return rep;
}

std::vector<std::size_t> inattention_fill(const GneOutcome& low, const GneOutcome& high, double support_eps) {
  const std::size_t n = high.m_star.size();
  if (low.m_star.size() != n) throw InvalidArgument("outcomes belong to games of different sizes");
  auto attended = [&](const GneOutcome& o) {
    std::set<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && o.m_star(i, j) > support_eps) s.insert(j);
      }
    }
    return s;
  };
  const auto before = attended(low);
  const auto after = attended(high);
  std::vector<std::size_t> fill;
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(), std::back_inserter(fill));
  return fill;
}

HomogeneousSolution homogeneous_closed_form(double r1, double r2, double r, int n, double beta) {
  if (n < 1) throw DomainError("need at least one agent");
  if (!(r1 > static_cast<double>(n - 1) * r2)) throw DomainError("self-influence must dominate the row");
  if (beta < 0.0 || beta > static_cast<double>(n - 1)) throw DomainError("budget must lie in [0, N-1]");
  const double denom = r1 - beta * r2;
  if (!(denom > 0.0)) throw DomainError("R1 - beta R2 must be positive");
  return {n > 1 ? beta / static_cast<double>(n - 1) : 0.0, r / denom};
}

}  // namespace gne
