#ifndef GNE_GAME_HPP
#define GNE_GAME_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gne {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Security investments u (k$), one entry per agent.
using InvestmentProfile = Vector;

/// Interdependent security game: influence matrix R, returns r and
/// attention budgets beta.
///
/// Row i of `influence` holds agent i's coefficients: the diagonal entry is
/// the self-influence R^i_ii, off-diagonal entry (i, j) is the influence of
/// agent j's investment on agent i. Construction only checks shapes and
/// finiteness; the economic assumptions are checked by validate_game().
class SecurityGame {
 public:
  SecurityGame(Matrix influence, Vector returns, Vector budgets);

  std::size_t size() const { return static_cast<std::size_t>(returns_.size()); }
  const Matrix& influence() const { return influence_; }
  const Vector& returns() const { return returns_; }
  const Vector& budgets() const { return budgets_; }

  double self_influence(std::size_t i) const { return influence_(index(i), index(i)); }
  double influence(std::size_t i, std::size_t j) const { return influence_(index(i), index(j)); }
  double ret(std::size_t i) const { return returns_(index(i)); }
  double budget(std::size_t i) const { return budgets_(index(i)); }

  // Throws std::out_of_range for i >= size().
  Eigen::Index index(std::size_t i) const;

 private:
  Matrix influence_;
  Vector returns_;
  Vector budgets_;
};

/// Attention network: row i is agent i's cognition vector m^i with entries in
/// [0, 1]. The diagonal is structurally zero and skipped by every norm/sum.
class CognitionProfile {
 public:
  explicit CognitionProfile(Matrix weights);

  static CognitionProfile full(std::size_t n);
  static CognitionProfile zeros(std::size_t n);
  static CognitionProfile uniform(std::size_t n, double value);
  // Row i filled with budgets(i) / (n - 1), clipped to [0, 1].
  static CognitionProfile from_budgets(const Vector& budgets);

  std::size_t size() const { return static_cast<std::size_t>(weights_.rows()); }
  const Matrix& matrix() const { return weights_; }
  double operator()(std::size_t i, std::size_t j) const {
    return weights_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  Vector row(std::size_t i) const { return weights_.row(static_cast<Eigen::Index>(i)).transpose(); }
  void set_row(std::size_t i, const Vector& row);
  // L1 norm of row i, self-entry excluded.
  double attention_mass(std::size_t i) const;

 private:
  Matrix weights_;
};

struct Violation {
  std::string where;    // "row 3", "return 2", ...
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Checks positivity of the diagonal and returns, nonnegative couplings,
// strict row diagonal dominance and budget range (0, N-1]. Agent numbers in
// messages are 1-based.
ValidationReport validate_game(const SecurityGame& game);

// J^i(u) = 1/2 R_ii u_i^2 - r_i u_i - sum_{j != i} R_ij u_i u_j
double true_cost(const SecurityGame& game, std::size_t i, const InvestmentProfile& u);

// Cost as perceived through attention row m_i (length N, self-entry ignored).
double perceived_cost(const SecurityGame& game, std::size_t i, const InvestmentProfile& u,
                      const Vector& attention);

// Best response of agent i to the others' investments seen through `attention`.
double best_response(const SecurityGame& game, std::size_t i, const InvestmentProfile& u,
                     const Vector& attention);

// Risk of bounded perception: the extra true cost incurred by best-responding
// to perceived rather than actual neighbour investments.
//   1/2 R_ii^{-1} (sum_{j != i} (1 - m_j) R_ij u_j)^2
double rbp(const SecurityGame& game, std::size_t i, const InvestmentProfile& u,
           const Vector& attention);

}  // namespace gne

#endif  // GNE_GAME_HPP
