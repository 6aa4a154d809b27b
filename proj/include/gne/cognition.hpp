#ifndef GNE_COGNITION_HPP
#define GNE_COGNITION_HPP

#include <optional>
#include <utility>
#include <vector>

#include "gne/error.hpp"
#include "gne/prox.hpp"

namespace gne {

enum class ApgPath { Convex, Nonconvex };

const char* to_string(ApgPath path);

struct ApgConfig {
  double tol = 1e-10;     // on the sup-norm iterate change and fixed-point residual
  int max_iters = 50'000;
  // Starting point in the box; e/2 for bare solves, beta/(N-1) e when
  // calibrating a budget.
  std::optional<Vector> initial_m;
  bool force_nonconvex_path = false;
  // Keep y_k, z_{k+1}, x_{k+1} of every iteration in the trace.
  bool record_iterates = false;
};

// One iteration k -> k+1 of the accelerated recursion.
struct ApgStep {
  double q_x_prev = 0.0;  // Q(x_k)
  double q_z = 0.0;       // Q(z_{k+1})
  double q_v = 0.0;       // Q(v_{k+1}); nonconvex path only
  double q_x = 0.0;       // Q(x_{k+1})
  double monitor_step_sq = 0.0;  // |v_{k+1} - x_k|^2; nonconvex path only
  double residual = 0.0;  // fixed-point residual at x_k
  bool took_z = false;
};

struct ApgIterates {
  Vector y;
  Vector z;
  Vector x;
};

struct ApgTrace {
  // Q(v_k) on the nonconvex path, Q(x_k) on the convex one.
  std::vector<double> q_values;
  std::vector<ApgStep> steps;
  std::vector<ApgIterates> iterates;  // filled when record_iterates is set
  int iterations_used = 0;
  bool converged = false;
  ApgPath path = ApgPath::Convex;
};

struct ApgResult {
  Vector m;
  ApgTrace trace;
};

// Monitored accelerated proximal gradient: the accelerated candidate z is
// accepted only when it does not lose against the plain prox-gradient step v
// from x_k. Valid for indefinite lambda.
ApgResult apg_nonconvex(const ProxProblem& p, const ApgConfig& cfg);

// Accelerated proximal gradient for convex f1: z is accepted when it does not
// increase Q, otherwise x is kept.
ApgResult apg_convex(const ProxProblem& p, const ApgConfig& cfg);

// Convex path when lambda is PSD and not overridden, monitored path otherwise.
ApgResult solve_cognition(const ProxProblem& p, const ApgConfig& cfg);

struct CalibrationOptions {
  double budget_tol = 1e-9;   // on | |m|_1 - beta |
  double bracket_tol = 1e-12; // relative width of the alpha bracket
  int max_bisections = 200;
};

struct CalibrationResult {
  double alpha = 0.0;
  Vector m;
  ApgTrace trace;                                // final solve
  std::vector<std::pair<double, double>> scan;   // (alpha, |m(alpha)|_1) per trial
};

class CalibrationError : public Error {
 public:
  CalibrationError(const std::string& what, std::vector<std::pair<double, double>> scan)
      : Error(what), scan_(std::move(scan)) {}
  const std::vector<std::pair<double, double>>& scan() const { return scan_; }

 private:
  std::vector<std::pair<double, double>> scan_;
};

// Bisection on alpha in [0, max_j (L e)_j] until the solved attention mass
// equals beta. The alpha stored in `p` is ignored. beta >= dim returns
// alpha = 0 and the box optimum reached from full attention.
CalibrationResult calibrate_alpha(const ProxProblem& p, double beta, const ApgConfig& cfg,
                                  const CalibrationOptions& opts = {});

}  // namespace gne

#endif  // GNE_COGNITION_HPP
