#include "gne/equilibrium.hpp"

#include <cmath>
#include <string>

#include "gne/error.hpp"

namespace gne {

const char* to_string(BrMethod method) {
  switch (method) {
    case BrMethod::GaussSeidel: return "gauss-seidel";
    case BrMethod::Jacobi: return "jacobi";
    case BrMethod::Direct: return "direct";
  }
  return "unknown";
}

std::optional<BrMethod> parse_br_method(const std::string& name) {
  if (name == "gauss-seidel") return BrMethod::GaussSeidel;
  if (name == "jacobi") return BrMethod::Jacobi;
  if (name == "direct") return BrMethod::Direct;
  return std::nullopt;
}

namespace {

void check_sizes(const SecurityGame& game, const CognitionProfile& m) {
  if (m.size() != game.size()) {
    throw InvalidArgument("cognition profile has " + std::to_string(m.size()) + " agents, game has " +
                          std::to_string(game.size()));
  }
}

}  // namespace

LinearSystem effective_system(const SecurityGame& game, const CognitionProfile& m) {
  check_sizes(game, m);
  const auto n = static_cast<Eigen::Index>(game.size());
  LinearSystem sys{Matrix(n, n), game.returns()};
  const Matrix& R = game.influence();
  const Matrix& w = m.matrix();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      sys.matrix(i, j) = i == j ? R(i, i) : -w(i, j) * R(i, j);
    }
  }
  return sys;
}

InvestmentProfile brne_direct(const SecurityGame& game, const CognitionProfile& m) {
  const LinearSystem sys = effective_system(game, m);
  Eigen::PartialPivLU<Matrix> lu(sys.matrix);
  const Matrix& factors = lu.matrixLU();
  const double scale = sys.matrix.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < factors.rows(); ++k) {
    if (!(std::abs(factors(k, k)) > 1e-14 * scale)) {
      throw SingularMatrix("bounded-rational system is singular at pivot " + std::to_string(k + 1));
    }
  }
  return lu.solve(sys.rhs);
}

BrResult brne_iterate(const SecurityGame& game, const CognitionProfile& m, const BrSolverConfig& cfg) {
  check_sizes(game, m);
  if (!(cfg.tol > 0.0)) throw InvalidArgument("br tol must be positive");
  if (cfg.max_iters < 1) throw InvalidArgument("br max_iters must be at least 1");
  if (cfg.method == BrMethod::Direct) throw InvalidArgument("brne_iterate needs an iterative method");

  const auto n = static_cast<Eigen::Index>(game.size());
  const Matrix& R = game.influence();
  const Matrix& w = m.matrix();
  const Vector& r = game.returns();

  InvestmentProfile u = cfg.initial ? *cfg.initial : InvestmentProfile(r.cwiseQuotient(R.diagonal()));
  if (u.size() != n) throw InvalidArgument("initial investment profile has wrong length");

  BrResult result;
  result.trace.iterates.push_back(u);
  InvestmentProfile next(n);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    double change = 0.0;
    if (cfg.method == BrMethod::Jacobi) {
      for (Eigen::Index i = 0; i < n; ++i) {
        double acc = r(i);
        for (Eigen::Index j = 0; j < n; ++j) {
          if (j != i) acc += w(i, j) * R(i, j) * u(j);
        }
        next(i) = acc / R(i, i);
      }
      change = (next - u).cwiseAbs().maxCoeff();
      u.swap(next);
    } else {
      for (Eigen::Index i = 0; i < n; ++i) {
        double acc = r(i);
        for (Eigen::Index j = 0; j < n; ++j) {
          if (j != i) acc += w(i, j) * R(i, j) * u(j);
        }
        const double ui = acc / R(i, i);
        change = std::max(change, std::abs(ui - u(i)));
        u(i) = ui;
      }
    }
    result.trace.iterates.push_back(u);
    result.trace.iterations_used = it;
    if (!std::isfinite(change)) break;
    if (change < cfg.tol) {
      result.trace.converged = true;
      break;
    }
  }
  result.u = u;
  return result;
}

BrResult solve_brne(const SecurityGame& game, const CognitionProfile& m, const BrSolverConfig& cfg) {
  if (cfg.method != BrMethod::Direct) return brne_iterate(game, m, cfg);
  BrResult result;
  result.u = brne_direct(game, m);
  result.trace.iterates.push_back(result.u);
  result.trace.converged = true;
  result.trace.iterations_used = 1;
  return result;
}

InvestmentProfile rational_ne(const SecurityGame& game) {
  return brne_direct(game, CognitionProfile::full(game.size()));
}

double brne_residual(const SecurityGame& game, const CognitionProfile& m, const InvestmentProfile& u) {
  const LinearSystem sys = effective_system(game, m);
  return (sys.matrix * u - sys.rhs).cwiseAbs().maxCoeff();
}

}  // namespace gne
