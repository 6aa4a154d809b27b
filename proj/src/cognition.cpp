#include "gne/cognition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gne {

const char* to_string(ApgPath path) { return path == ApgPath::Convex ? "convex" : "nonconvex"; }

namespace {

Vector starting_point(const ProxProblem& p, const ApgConfig& cfg) {
  const auto dim = static_cast<Eigen::Index>(p.dim());
  if (!cfg.initial_m) return Vector::Constant(dim, 0.5);
  const Vector& init = *cfg.initial_m;
  if (init.size() != dim) throw InvalidArgument("initial attention vector has wrong length");
  if (!init.array().isFinite().all() || init.minCoeff() < -kBoxSlack || init.maxCoeff() > 1.0 + kBoxSlack) {
    throw InvalidArgument("initial attention vector must lie in [0, 1]");
  }
  return proj_box(init);
}

ApgResult run_apg(const ProxProblem& p, const ApgConfig& cfg, bool monitored) {
  if (!(cfg.tol > 0.0)) throw InvalidArgument("apg tol must be positive");
  if (cfg.max_iters < 1) throw InvalidArgument("apg max_iters must be at least 1");

  ApgResult result;
  result.trace.path = monitored ? ApgPath::Nonconvex : ApgPath::Convex;
  if (p.dim() == 0) {
    result.trace.converged = true;
    return result;
  }

  Vector x = starting_point(p, cfg);
  Vector x_prev = x;
  Vector z = x;
  double t_prev = 1.0;
  double t = 1.0;
  double q_x = eval_Q(p, x).value;
  // The monitor sequence starts at v_0 = x_0.
  result.trace.q_values.push_back(q_x);

  for (int k = 1; k <= cfg.max_iters; ++k) {
    const Vector y = x + (t_prev / t) * (z - x) + ((t_prev - 1.0) / t) * (x - x_prev);
    Vector z_next = prox_grad_step(p, y, p.step_y());
    Vector v_next = prox_grad_step(p, x, p.step_x());
    const double residual = (v_next - x).cwiseAbs().maxCoeff();
    const double q_z = eval_Q(p, z_next).value;

    ApgStep step;
    step.q_x_prev = q_x;
    step.q_z = q_z;
    step.residual = residual;

    Vector x_next;
    if (monitored) {
      const double q_v = eval_Q(p, v_next).value;
      step.q_v = q_v;
      step.monitor_step_sq = (v_next - x).squaredNorm();
      step.took_z = q_z <= q_v;
      x_next = step.took_z ? z_next : v_next;
      step.q_x = step.took_z ? q_z : q_v;
      result.trace.q_values.push_back(q_v);
    } else {
      step.q_v = std::numeric_limits<double>::quiet_NaN();
      step.monitor_step_sq = std::numeric_limits<double>::quiet_NaN();
      step.took_z = q_z <= q_x;
      x_next = step.took_z ? z_next : x;
      step.q_x = step.took_z ? q_z : q_x;
      result.trace.q_values.push_back(step.q_x);
    }
    result.trace.steps.push_back(step);
    if (cfg.record_iterates) result.trace.iterates.push_back({y, z_next, x_next});

    const double change = (x_next - x).cwiseAbs().maxCoeff();
    const double t_next = 0.5 * (1.0 + std::sqrt(4.0 * t * t + 1.0));
    x_prev = std::move(x);
    x = std::move(x_next);
    z = std::move(z_next);
    t_prev = t;
    t = t_next;
    q_x = step.q_x;
    result.trace.iterations_used = k;

    if (!std::isfinite(change)) break;
    if (change < cfg.tol && residual < cfg.tol) {
      result.trace.converged = true;
      break;
    }
  }
  result.m = std::move(x);
  return result;
}

std::string describe_scan(const std::vector<std::pair<double, double>>& scan) {
  std::ostringstream os;
  os.precision(12);
  for (const auto& [alpha, mass] : scan) os << " (" << alpha << ", " << mass << ")";
  return os.str();
}

}  // namespace

ApgResult apg_nonconvex(const ProxProblem& p, const ApgConfig& cfg) { return run_apg(p, cfg, true); }

ApgResult apg_convex(const ProxProblem& p, const ApgConfig& cfg) { return run_apg(p, cfg, false); }

ApgResult solve_cognition(const ProxProblem& p, const ApgConfig& cfg) {
  if (p.is_convex() && !cfg.force_nonconvex_path) return apg_convex(p, cfg);
  return apg_nonconvex(p, cfg);
}

CalibrationResult calibrate_alpha(const ProxProblem& p, double beta, const ApgConfig& cfg,
                                  const CalibrationOptions& opts) {
  if (!(beta > 0.0)) throw InvalidArgument("attention budget must be positive");
  const auto dim = static_cast<Eigen::Index>(p.dim());
  CalibrationResult out;
  if (dim == 0) {
    out.trace.converged = true;
    return out;
  }

  if (beta >= static_cast<double>(dim)) {
    ApgConfig full = cfg;
    full.initial_m = Vector::Ones(dim);
    ApgResult r = solve_cognition(p.with_alpha(0.0), full);
    out.alpha = 0.0;
    out.m = std::move(r.m);
    out.trace = std::move(r.trace);
    out.scan.emplace_back(0.0, out.m.sum());
    return out;
  }

  ApgConfig trial = cfg;
  if (!trial.initial_m) {
    trial.initial_m = Vector::Constant(dim, std::clamp(beta / static_cast<double>(dim), 0.0, 1.0));
  }

  // Above max_j (L e)_j the subgradient condition holds at m = 0.
  const double alpha_top = p.lambda_ones().maxCoeff();
  if (!(alpha_top > 0.0)) {
    throw CalibrationError("budget " + std::to_string(beta) + " unreachable: no coordinate has positive pull",
                           {});
  }

  double lo = 0.0;
  double hi = alpha_top;
  double mass_lo = std::numeric_limits<double>::infinity();
  double mass_hi = 0.0;
  const double width_floor = opts.bracket_tol * std::max(1.0, alpha_top);

  // Flat pieces and solver noise can stop the bisection short of budget_tol;
  // anything beyond this gap is a genuine bracketing failure. Mass wobbles
  // below it are solver noise on ill-conditioned coordinates, not
  // non-monotonicity.
  constexpr double kAcceptGap = 1e-4;
  constexpr double kMonotoneSlack = kAcceptGap;

  std::optional<CalibrationResult> best;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int b = 0; b < opts.max_bisections; ++b) {
    const double mid = 0.5 * (lo + hi);
    ApgResult r = solve_cognition(p.with_alpha(mid), trial);
    const double mass = r.m.sum();
    out.scan.emplace_back(mid, mass);
    const double gap = std::abs(mass - beta);
    if (gap < best_gap) {
      best_gap = gap;
      best = CalibrationResult{mid, r.m, std::move(r.trace), {}};
    }
    if (gap < opts.budget_tol) break;
    if (mass > mass_lo + kMonotoneSlack || mass < mass_hi - kMonotoneSlack) {
      throw CalibrationError("attention mass is not monotone in alpha; scan:" + describe_scan(out.scan),
                             out.scan);
    }
    if (mass > beta) {
      lo = mid;
      mass_lo = mass;
    } else {
      hi = mid;
      mass_hi = mass;
    }
    if (hi - lo < width_floor) break;
  }

  if (!best || best_gap > kAcceptGap) {
    throw CalibrationError("could not bracket budget " + std::to_string(beta) + "; scan:" + describe_scan(out.scan),
                           out.scan);
  }
  best->scan = std::move(out.scan);
  return std::move(*best);
}

}  // namespace gne
