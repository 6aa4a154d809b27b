#ifndef GNE_EQUILIBRIUM_HPP
#define GNE_EQUILIBRIUM_HPP

#include <optional>
#include <vector>

#include "gne/game.hpp"

namespace gne {

enum class BrMethod { GaussSeidel, Jacobi, Direct };

const char* to_string(BrMethod method);
// Accepts "gauss-seidel", "jacobi", "direct".
std::optional<BrMethod> parse_br_method(const std::string& name);

struct BrSolverConfig {
  BrMethod method = BrMethod::Direct;
  double tol = 1e-10;           // sup-norm change between sweeps
  int max_iters = 10'000;
  // Starting point of the iterative methods; the decoupled response
  // r_i / R_ii when absent.
  std::optional<InvestmentProfile> initial;
};

struct BrTrace {
  std::vector<InvestmentProfile> iterates;  // starts with the initial point
  bool converged = false;
  int iterations_used = 0;
};

struct BrResult {
  InvestmentProfile u;
  BrTrace trace;
};

// The bounded-rational first-order system R^s u = r: diagonal R_ii,
// off-diagonal -m^i_j R_ij.
struct LinearSystem {
  Matrix matrix;
  Vector rhs;
};

LinearSystem effective_system(const SecurityGame& game, const CognitionProfile& m);

// Dense LU solve of R^s u = r. Throws SingularMatrix when a pivot vanishes.
InvestmentProfile brne_direct(const SecurityGame& game, const CognitionProfile& m);

// Best-response dynamics (Jacobi or Gauss-Seidel sweeps in ascending agent
// order). Non-convergence is reported through trace.converged.
BrResult brne_iterate(const SecurityGame& game, const CognitionProfile& m, const BrSolverConfig& cfg);

// Dispatches on cfg.method; the direct method yields a one-entry trace.
BrResult solve_brne(const SecurityGame& game, const CognitionProfile& m, const BrSolverConfig& cfg);

// Fully rational Nash equilibrium (every agent attends to everybody).
InvestmentProfile rational_ne(const SecurityGame& game);

// sup-norm residual of R^s u = r.
double brne_residual(const SecurityGame& game, const CognitionProfile& m, const InvestmentProfile& u);

}  // namespace gne

#endif  // GNE_EQUILIBRIUM_HPP
