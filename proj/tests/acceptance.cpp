// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gne/cognition.hpp"
#include "gne/report.hpp"
#include "test_support.hpp"

namespace {

using namespace gne;
using testing::random_game;
using testing::random_vector;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && out_.pass) {
      out_.pass = false;
      out_.detail = what;
    }
  }
  Outcome finish(const std::string& ok_detail) {
    if (out_.pass) out_.detail = ok_detail;
    return out_;
  }

 private:
  Outcome out_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct BuiltinRuns {
  std::vector<std::pair<std::string, RunReport>> reports;
  std::vector<double> seconds;
  const RunReport& get(const std::string& name) const {
    for (const auto& [n, r] : reports)
      if (n == name) return r;
    throw std::out_of_range(name);
  }
  double time(const std::string& name) const {
    for (std::size_t k = 0; k < reports.size(); ++k)
      if (reports[k].first == name) return seconds[k];
    throw std::out_of_range(name);
  }
};

const BuiltinRuns& builtin_runs() {
  static const BuiltinRuns runs = [] {
    BuiltinRuns r;
    for (const auto& name : builtin_scenarios()) {
      const auto start = std::chrono::steady_clock::now();
      RunReport rep = run_scenario(builtin_config(name));
      r.seconds.push_back(seconds_since(start));
      r.reports.emplace_back(name, std::move(rep));
    }
    return r;
  }();
  return runs;
}

Outcome homogeneous_closed_form_check() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const GneOutcome o = gne_solve(testing::homogeneous_game(), {});
  const double secs = seconds_since(start);
  double err = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    err = std::max(err, std::abs(o.u_star(static_cast<Eigen::Index>(i)) - 25.0 / 17.0));
    for (std::size_t j = 0; j < 10; ++j)
      if (i != j) err = std::max(err, std::abs(o.m_star(i, j) - 1.0 / 3.0));
  }
  c.require(o.converged, "did not converge");
  c.require(err < 1e-6, "max error " + fmt("%.3g", err));
  c.require(secs < 1.0, "took " + fmt("%.3f", secs) + " s");
  return c.finish("max error " + fmt("%.2g", err) + ", " + fmt("%.3f", secs) + " s");
}

Outcome rational_baseline_check() {
  Check c;
  const Vector u = rational_ne(testing::homogeneous_game());
  const double err = (u.array() - 25.0 / 11.0).abs().maxCoeff();
  c.require(err < 1e-10, "max error " + fmt("%.3g", err));
  return c.finish("max error " + fmt("%.2g", err));
}

Outcome partisanship_check() {
  Check c;
  const RunReport& rep = builtin_runs().get("two-group");
  const double secs = builtin_runs().time("two-group");
  const GneOutcome& o = rep.outcome;
  c.require(o.converged, "did not converge");
  double worst = 0.0, g2_max = 0.0;
  for (std::size_t i = 0; i < 15; ++i) {
    for (std::size_t j = 0; j < 15; ++j) {
      if (i == j) continue;
      if (j < 5) {
        worst = std::max(worst, std::abs(o.m_star(i, j) - (i < 5 ? 0.75 : 0.60)));
      } else {
        g2_max = std::max(g2_max, o.m_star(i, j));
      }
    }
  }
  c.require(worst <= 0.01, "G1-directed entry off by " + fmt("%.3g", worst));
  c.require(g2_max < 1e-3, "G2-directed entry " + fmt("%.3g", g2_max));
  c.require(rep.phenomena.partisanship && rep.phenomena.partisanship->flag &&
                rep.phenomena.partisanship->dominant_group == 0,
            "partisanship not flagged on G1");
  c.require(secs < 5.0, "took " + fmt("%.3f", secs) + " s");
  return c.finish("G1 entries within " + fmt("%.2g", worst) + ", G2 max " + fmt("%.2g", g2_max) + ", " +
                  fmt("%.3f", secs) + " s");
}

Outcome filling_check() {
  Check c;
  const RunReport& rep = builtin_runs().get("two-group-filling");
  const GneOutcome& o = rep.outcome;
  c.require(o.converged, "did not converge");
  double worst = 0.0;
  for (std::size_t i = 0; i < 15; ++i) {
    for (std::size_t j = 0; j < 15; ++j) {
      if (i == j) continue;
      const double want = j < 5 ? 1.0 : (i < 5 ? 0.40 : 1.0 / 3.0);
      worst = std::max(worst, std::abs(o.m_star(i, j) - want));
    }
  }
  c.require(worst <= 0.01, "entry off by " + fmt("%.3g", worst));
  const std::vector<std::size_t> g2{5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
  c.require(rep.phenomena.fill_set && *rep.phenomena.fill_set == g2, "fill set is not all of G2");
  return c.finish("entries within " + fmt("%.2g", worst) + ", fill set = agents 6..15");
}

Outcome critical_set_check() {
  Check c;
  const RunReport& rep = builtin_runs().get("heterogeneous");
  const double secs = builtin_runs().time("heterogeneous");
  c.require(rep.outcome.converged, "did not converge");
  c.require(rep.phenomena.support_eps == 1e-3, "support_eps is not 1e-3");
  c.require(rep.phenomena.critical_set == std::vector<std::size_t>{4, 8, 9}, "critical set differs from {5, 9, 10}");
  c.require(secs < 5.0, "took " + fmt("%.3f", secs) + " s");
  return c.finish("critical set {5, 9, 10}, " + fmt("%.3f", secs) + " s");
}

Outcome rbp_check() {
  Check c;
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 7;
    const SecurityGame g = random_game(rng, n);
    const Vector u = random_vector(rng, n, 0.0, 5.0);
    const Vector m = random_vector(rng, n, 0.0, 1.0);
    const std::size_t i = static_cast<std::size_t>(t % n);
    const double got = rbp(g, i, u, m);
    const double want = testing::rbp_oracle(g, i, u, m);
    const double rel = std::abs(got - want) / std::max(std::abs(want), 1e-300);
    if (want != 0.0) worst = std::max(worst, rel);
    c.require(got >= 0.0, "negative value on instance " + std::to_string(t));
    c.require(rel < 1e-10 || std::abs(got - want) < 1e-14, "relative error " + fmt("%.3g", rel));
  }
  return c.finish("200 games, worst relative error " + fmt("%.2g", worst));
}

Outcome prox_check() {
  Check c;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xs(-3.0, 3.0), ts(0.0, 2.0);
  double prox_worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double x = xs(rng), th = ts(rng);
    const double oracle = testing::scalar_prox_oracle(x, th);
    prox_worst = std::max(prox_worst, std::abs(prox_f2_plus_f3(Vector::Constant(1, x), th)(0) - oracle));
  }
  c.require(prox_worst < 1e-8, "prox error " + fmt("%.3g", prox_worst));

  double grad_worst = 0.0;
  const double h = 1e-6;
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 50;
    const ProxProblem p = t % 2 == 0 ? ProxProblem::rank_one(random_vector(rng, n, 0.0, 5.0), 20.0, 0.0, 0, {})
                                     : ProxProblem::from_matrix(
                                           n > 1 ? testing::random_indefinite(rng, n) : Matrix::Constant(1, 1, -1.0), 0.0);
    const Vector m = random_vector(rng, n, 0.0, 1.0);
    const Vector g = grad_f1(p, m);
    Vector fd(n);
    for (int j = 0; j < n; ++j) {
      Vector a = m, b = m;
      a(j) += h;
      b(j) -= h;
      fd(j) = (p.f1(a) - p.f1(b)) / (2.0 * h);
    }
    grad_worst = std::max(grad_worst, (g - fd).norm() / std::max(1.0, g.norm()));
  }
  c.require(grad_worst < 1e-5, "gradient relative error " + fmt("%.3g", grad_worst));
  return c.finish("prox error " + fmt("%.2g", prox_worst) + ", gradient relative error " + fmt("%.2g", grad_worst));
}

Outcome monitored_descent_check() {
  Check c;
  std::mt19937_64 rng(8);
  const auto fixture = testing::load_indefinite_fixture();
  std::vector<ProxProblem> problems{ProxProblem::from_matrix(fixture.lambda, fixture.alpha)};
  for (int t = 0; problems.size() < 50; ++t) {
    const int n = 2 + t % 9;
    if (t % 2 == 0) {
      problems.push_back(ProxProblem::from_matrix(testing::random_indefinite(rng, n), 0.25 * (t % 5)));
    } else {
      const SecurityGame g = random_game(rng, n + 1);
      const ProxProblem base = build_lambda(g, 0, random_vector(rng, n + 1, 0.5, 3.0));
      problems.push_back(base.with_alpha(0.5 * base.lambda_ones().maxCoeff()));
    }
  }
  constexpr double kSlack = 1e-9;
  double worst_residual = 0.0;
  int indefinite = 0;
  for (std::size_t k = 0; k < problems.size(); ++k) {
    const ProxProblem& p = problems[k];
    if (!p.is_convex()) ++indefinite;
    ApgConfig cfg;
    cfg.initial_m = random_vector(rng, static_cast<int>(p.dim()), 0.0, 1.0);
    const ApgResult r = apg_nonconvex(p, cfg);
    for (const ApgStep& s : r.trace.steps) {
      c.require(s.q_x <= s.q_v + kSlack && s.q_v <= s.q_x_prev + kSlack,
                "sandwich broken on problem " + std::to_string(k));
    }
    const double res = fixed_point_residual(p, r.m);
    worst_residual = std::max(worst_residual, res);
    c.require(res < 1e-8, "fixed-point residual " + fmt("%.3g", res) + " on problem " + std::to_string(k));
  }
  return c.finish("50 problems (" + std::to_string(indefinite) + " indefinite), worst residual " +
                  fmt("%.2g", worst_residual));
}

Outcome brute_force_check() {
  Check c;
  std::mt19937_64 rng(9);
  double grid_worst = 0.0;
  for (int t = 0; t < 16; ++t) {
    const int n = 2 + t % 4;
    const SecurityGame g = random_game(rng, n);
    const Vector u = solve_brne(g, CognitionProfile::uniform(static_cast<std::size_t>(n), 0.5), {}).u;
    const ProxProblem base = build_lambda(g, static_cast<std::size_t>(t % n), u);
    const double alpha = random_vector(rng, 1, 0.05, 0.95)(0) * base.lambda_ones().maxCoeff();
    const ProxProblem p = base.with_alpha(alpha);
    const double q = eval_Q(p, solve_cognition(p, {}).m).value;
    const double err = std::abs(q - testing::brute_force_q(p.lambda(), alpha));
    grid_worst = std::max(grid_worst, err);
    c.require(err < 1e-4, "grid mismatch " + fmt("%.3g", err) + " on instance " + std::to_string(t));
  }
  double greedy_worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 10;
    const SecurityGame g = random_game(rng, n);
    const ProxProblem base = build_lambda(g, 0, random_vector(rng, n, 0.2, 4.0));
    const double beta = random_vector(rng, 1, 0.1, 0.95)(0) * (n - 1);
    const CalibrationResult cal = calibrate_alpha(base, beta, {});
    const ProxProblem p = base.with_alpha(cal.alpha);
    const double err = std::abs(eval_Q(p, cal.m).value - eval_Q(p, testing::greedy_prefix(*p.factor(), beta)).value);
    greedy_worst = std::max(greedy_worst, err);
    c.require(err < 1e-8, "greedy-prefix mismatch " + fmt("%.3g", err) + " on instance " + std::to_string(t));
  }
  return c.finish("grid worst " + fmt("%.2g", grid_worst) + ", greedy worst " + fmt("%.2g", greedy_worst));
}

Outcome initialization_check() {
  Check c;
  const auto f = testing::load_indefinite_fixture();
  const ProxProblem p = ProxProblem::from_matrix(f.lambda, f.alpha);
  c.require(!p.is_convex(), "fixture is not indefinite");
  const auto n = f.lambda.rows();
  ApgConfig cfg;
  cfg.tol = 1e-12;
  std::vector<double> q;
  for (const Vector& init : {Vector(Vector::Zero(n)), Vector(Vector::Constant(n, 0.5)), Vector(Vector::Ones(n))}) {
    cfg.initial_m = init;
    const ApgResult r = solve_cognition(p, cfg);
    c.require(r.trace.converged, "a start did not converge");
    q.push_back(eval_Q(p, r.m).value);
  }
  const double spread = *std::max_element(q.begin(), q.end()) - *std::min_element(q.begin(), q.end());
  c.require(spread < 1e-8, "Q spread " + fmt("%.3g", spread));
  c.require(std::abs(q[0] - f.reference_q) < 1e-8, "Q differs from the committed reference");
  return c.finish("Q = " + fmt("%.10g", q[0]) + " from three starts, spread " + fmt("%.2g", spread));
}

Outcome verification_check() {
  Check c;
  double worst = 0.0;
  for (const auto& [name, rep] : builtin_runs().reports) {
    const VerificationReport v = verify_gne(rep.scenario.game, rep.outcome, 100, rep.config.rng_seed);
    worst = std::max(worst, v.worst_improvement);
    c.require(v.passed, name + ": " + (v.failures.empty() ? "failed" : v.failures.front()));
    c.require(v.probes_per_agent == 100, name + ": wrong probe count");
  }
  return c.finish("4 scenarios, 100 probes per agent, worst improvement " + fmt("%.2g", worst));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"homogeneous closed form", homogeneous_closed_form_check},
      {"full-rationality baseline", rational_baseline_check},
      {"partisanship", partisanship_check},
      {"filling the inattention", filling_check},
      {"attraction of the mighty", critical_set_check},
      {"risk of bounded perception", rbp_check},
      {"proximal operator and gradient", prox_check},
      {"monitored descent", monitored_descent_check},
      {"brute-force equivalence", brute_force_check},
      {"initialization robustness", initialization_check},
      {"equilibrium verification", verification_check},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
