#ifndef GNE_PROX_HPP
#define GNE_PROX_HPP

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "gne/game.hpp"

namespace gne {

/// Real number or +infinity, with a total order. The infinite value carries
/// the largest finite double so it can still be printed and compared.
struct ExtendedReal {
  double value = 0.0;
  bool infinite = false;

  static ExtendedReal finite(double v) { return {v, false}; }
  static ExtendedReal infinity() { return {std::numeric_limits<double>::max(), true}; }

  friend std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite || b.infinite) return a.infinite <=> b.infinite;
    return a.value <=> b.value;
  }
  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }
};

// Floor applied to the Lipschitz constant so step sizes stay finite when the
// quadratic part vanishes.
inline constexpr double kLipschitzFloor = 1e-12;
// Slack allowed on the box bounds by the indicator term.
inline constexpr double kBoxSlack = 1e-12;
// Default step as a fraction of 1 / lip.
inline constexpr double kDefaultStepFraction = 0.9;

/// One agent's cognition program
///   Q(m) = 1/2 m' L m - e' L m + alpha |m|_1 + indicator_[0,1]^{N-1}(m)
/// over the N-1 coordinates j != owner.
class ProxProblem {
 public:
  // Problem for an arbitrary symmetric matrix; lip is its spectral norm and
  // convexity is detected from the smallest eigenvalue.
  static ProxProblem from_matrix(Matrix lambda, double alpha, std::size_t owner = 0,
                                 std::vector<std::size_t> index_map = {});
  // Rank-one problem L = v v' / scale (the form every game produces).
  static ProxProblem rank_one(Vector v, double scale, double alpha, std::size_t owner,
                              std::vector<std::size_t> index_map);

  ProxProblem with_alpha(double alpha) const;
  ProxProblem with_steps(double step_x, double step_y) const;

  std::size_t dim() const { return static_cast<std::size_t>(lambda_.rows()); }
  const Matrix& lambda() const { return lambda_; }
  double alpha() const { return alpha_; }
  double lip() const { return lip_; }
  double step_x() const { return step_x_; }
  double step_y() const { return step_y_; }
  std::size_t owner() const { return owner_; }
  const std::vector<std::size_t>& index_map() const { return index_map_; }
  bool is_convex() const { return convex_; }
  // v when the matrix is known to be v v' / scale.
  const std::optional<Vector>& factor() const { return factor_; }
  double factor_scale() const { return factor_scale_; }
  // L e, the gradient pull toward full attention.
  const Vector& lambda_ones() const { return lambda_ones_; }

  Vector lambda_times(const Vector& x) const;
  double f1(const Vector& m) const;

 private:
  ProxProblem() = default;
  void check_dim(const Vector& x) const;

  Matrix lambda_;
  Vector lambda_ones_;
  std::optional<Vector> factor_;
  double factor_scale_ = 1.0;
  double alpha_ = 0.0;
  double lip_ = kLipschitzFloor;
  double step_x_ = 0.0;
  double step_y_ = 0.0;
  std::size_t owner_ = 0;
  std::vector<std::size_t> index_map_;
  bool convex_ = false;
};

// Lambda^i_jk = R_ij R_ik u_j u_k / R_ii over j, k != i, with alpha = 0.
ProxProblem build_lambda(const SecurityGame& game, std::size_t i, const InvestmentProfile& u);

// Lambda (m - e).
Vector grad_f1(const ProxProblem& p, const Vector& m);

// Componentwise (x - t)_+ - (-x - t)_+.
Vector soft_threshold(const Vector& x, double t);

// Componentwise clamp to [0, 1].
Vector proj_box(const Vector& x);

// proj_box(soft_threshold(x, t)): the prox of t|.|_1 plus the box indicator.
Vector prox_f2_plus_f3(const Vector& x, double t);

// Projected proximal-gradient map x -> prox(x - step grad f1(x)).
Vector prox_grad_step(const ProxProblem& p, const Vector& x, double step);

// sup-norm of x - prox_grad_step(p, x, p.step_x()); zero exactly at critical points.
double fixed_point_residual(const ProxProblem& p, const Vector& x);

ExtendedReal eval_Q(const ProxProblem& p, const Vector& m);

// Coordinate view helpers: extract the N-1 entries j != owner of a length-N
// row, and scatter them back (self-entry set to 0).
Vector to_coordinates(const Vector& row, std::size_t owner);
Vector from_coordinates(const Vector& coords, std::size_t owner);

}  // namespace gne

#endif  // GNE_PROX_HPP
