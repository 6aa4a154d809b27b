#include "gne/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gne/error.hpp"

namespace gne {

namespace {

bool all_finite(const Matrix& m) { return m.array().isFinite().all(); }

void check_attention_row(const SecurityGame& game, const Vector& attention) {
  if (static_cast<std::size_t>(attention.size()) != game.size()) {
    throw InvalidArgument("attention row has length " + std::to_string(attention.size()) +
                          ", expected " + std::to_string(game.size()));
  }
}

void check_profile(const SecurityGame& game, const InvestmentProfile& u) {
  if (static_cast<std::size_t>(u.size()) != game.size()) {
    throw InvalidArgument("investment profile has length " + std::to_string(u.size()) +
                          ", expected " + std::to_string(game.size()));
  }
}

// sum_{j != i} w_j R_ij u_j
double weighted_coupling(const SecurityGame& game, Eigen::Index i, const InvestmentProfile& u,
                         const Vector* attention, bool complement) {
  double acc = 0.0;
  const auto n = static_cast<Eigen::Index>(game.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == i) continue;
    double w = 1.0;
    if (attention != nullptr) w = complement ? 1.0 - (*attention)(j) : (*attention)(j);
    acc += w * game.influence()(i, j) * u(j);
  }
  return acc;
}

}  // namespace

SecurityGame::SecurityGame(Matrix influence, Vector returns, Vector budgets)
    : influence_(std::move(influence)), returns_(std::move(returns)), budgets_(std::move(budgets)) {
  const auto n = returns_.size();
  if (n == 0) throw InvalidArgument("game must have at least one agent");
  if (influence_.rows() != n || influence_.cols() != n) {
    throw InvalidArgument("influence matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (budgets_.size() != n) throw InvalidArgument("budgets must have one entry per agent");
  if (!all_finite(influence_) || !all_finite(returns_) || !all_finite(budgets_)) {
    throw InvalidArgument("game parameters must be finite");
  }
}

Eigen::Index SecurityGame::index(std::size_t i) const {
  if (i >= size()) {
    throw std::out_of_range("agent index " + std::to_string(i) + " out of range for " +
                            std::to_string(size()) + " agents");
  }
  return static_cast<Eigen::Index>(i);
}

CognitionProfile::CognitionProfile(Matrix weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols()) throw InvalidArgument("cognition profile must be square");
  for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
    for (Eigen::Index j = 0; j < weights_.cols(); ++j) {
      const double w = weights_(i, j);
      if (i == j) {
        weights_(i, j) = 0.0;
      } else if (!(w >= 0.0 && w <= 1.0)) {
        std::ostringstream os;
        os << "attention entry (" << i + 1 << ", " << j + 1 << ") = " << w << " outside [0, 1]";
        throw InvalidArgument(os.str());
      }
    }
  }
}

CognitionProfile CognitionProfile::full(std::size_t n) { return uniform(n, 1.0); }

CognitionProfile CognitionProfile::zeros(std::size_t n) { return uniform(n, 0.0); }

CognitionProfile CognitionProfile::uniform(std::size_t n, double value) {
  const auto k = static_cast<Eigen::Index>(n);
  return CognitionProfile(Matrix::Constant(k, k, value));
}

CognitionProfile CognitionProfile::from_budgets(const Vector& budgets) {
  const auto n = budgets.size();
  Matrix w(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double share = n > 1 ? std::clamp(budgets(i) / static_cast<double>(n - 1), 0.0, 1.0) : 0.0;
    w.row(i).setConstant(share);
  }
  return CognitionProfile(std::move(w));
}

void CognitionProfile::set_row(std::size_t i, const Vector& row) {
  const auto r = static_cast<Eigen::Index>(i);
  if (r >= weights_.rows()) throw std::out_of_range("cognition row out of range");
  if (row.size() != weights_.cols()) throw InvalidArgument("cognition row has wrong length");
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (j == r) continue;
    if (!(row(j) >= 0.0 && row(j) <= 1.0)) throw InvalidArgument("attention entry outside [0, 1]");
  }
  weights_.row(r) = row.transpose();
  weights_(r, r) = 0.0;
}

double CognitionProfile::attention_mass(std::size_t i) const {
  const auto r = static_cast<Eigen::Index>(i);
  return weights_.row(r).sum() - weights_(r, r);
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (const auto& v : violations) os << v.where << ": " << v.message << '\n';
  return os.str();
}

ValidationReport validate_game(const SecurityGame& game) {
  ValidationReport report;
  const auto n = static_cast<Eigen::Index>(game.size());
  const Matrix& R = game.influence();
  auto add = [&](std::string where, std::string message) {
    report.violations.push_back({std::move(where), std::move(message)});
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string row = "row " + std::to_string(i + 1);
    if (!(R(i, i) > 0.0)) add(row, "self-influence must be positive");
    double off = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      if (R(i, j) < 0.0) {
        add("entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")",
            "influence must be nonnegative");
      }
      off += R(i, j);
    }
    if (!(R(i, i) > off)) add(row, "row " + std::to_string(i + 1) + " not diagonally dominant");
    if (!(game.returns()(i) > 0.0)) add("return " + std::to_string(i + 1), "return must be positive");
    const double beta = game.budgets()(i);
    // A lone agent has nobody to attend to, so its budget is irrelevant.
    if (n > 1 && (!(beta > 0.0) || beta > static_cast<double>(n - 1))) {
      add("budget " + std::to_string(i + 1), "budget must lie in (0, " + std::to_string(n - 1) + "]");
    }
  }
  return report;
}

double true_cost(const SecurityGame& game, std::size_t i, const InvestmentProfile& u) {
  const auto k = game.index(i);
  check_profile(game, u);
  const double ui = u(k);
  return 0.5 * game.influence()(k, k) * ui * ui - game.returns()(k) * ui -
         ui * weighted_coupling(game, k, u, nullptr, false);
}

double perceived_cost(const SecurityGame& game, std::size_t i, const InvestmentProfile& u,
                      const Vector& attention) {
  const auto k = game.index(i);
  check_profile(game, u);
  check_attention_row(game, attention);
  const double ui = u(k);
  return 0.5 * game.influence()(k, k) * ui * ui - game.returns()(k) * ui -
         ui * weighted_coupling(game, k, u, &attention, false);
}

double best_response(const SecurityGame& game, std::size_t i, const InvestmentProfile& u,
                     const Vector& attention) {
  const auto k = game.index(i);
  check_profile(game, u);
  check_attention_row(game, attention);
  return (weighted_coupling(game, k, u, &attention, false) + game.returns()(k)) / game.influence()(k, k);
}

double rbp(const SecurityGame& game, std::size_t i, const InvestmentProfile& u, const Vector& attention) {
  const auto k = game.index(i);
  check_profile(game, u);
  check_attention_row(game, attention);
  // The double sum over (j, k) factors into the square of a single sum.
  const double missed = weighted_coupling(game, k, u, &attention, true);
  return 0.5 * missed * missed / game.influence()(k, k);
}

}  // namespace gne
