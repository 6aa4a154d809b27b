#include "gne/prox.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gne/error.hpp"

namespace gne {

namespace {

std::vector<std::size_t> default_index_map(std::size_t owner, std::size_t dim) {
  std::vector<std::size_t> map;
  map.reserve(dim);
  for (std::size_t j = 0; map.size() < dim; ++j) {
    if (j != owner) map.push_back(j);
  }
  return map;
}

}  // namespace

ProxProblem ProxProblem::from_matrix(Matrix lambda, double alpha, std::size_t owner,
                                     std::vector<std::size_t> index_map) {
  if (lambda.rows() != lambda.cols()) throw InvalidArgument("lambda matrix must be square");
  if (!lambda.array().isFinite().all()) throw InvalidArgument("lambda matrix must be finite");
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  if ((lambda - lambda.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("lambda matrix must be symmetric");
  }
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be nonnegative");

  ProxProblem p;
  p.lambda_ = 0.5 * (lambda + lambda.transpose());
  p.lambda_ones_ = p.lambda_.rowwise().sum();
  p.alpha_ = alpha;
  p.owner_ = owner;
  p.index_map_ = index_map.empty() ? default_index_map(owner, p.dim()) : std::move(index_map);
  if (p.index_map_.size() != p.dim()) throw InvalidArgument("index map size does not match lambda");

  if (p.dim() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(p.lambda_, Eigen::EigenvaluesOnly);
    const Vector& ev = eig.eigenvalues();
    const double spectral = ev.cwiseAbs().maxCoeff();
    p.lip_ = std::max(spectral, kLipschitzFloor);
    p.convex_ = ev.minCoeff() >= -1e-12 * std::max(1.0, spectral);
  } else {
    p.convex_ = true;
  }
  p.step_x_ = p.step_y_ = kDefaultStepFraction / p.lip_;
  return p;
}

ProxProblem ProxProblem::rank_one(Vector v, double scale, double alpha, std::size_t owner,
                                  std::vector<std::size_t> index_map) {
  if (!(scale > 0.0)) throw InvalidArgument("rank-one scale must be positive");
  if (!v.array().isFinite().all()) throw InvalidArgument("rank-one factor must be finite");
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be nonnegative");
  ProxProblem p;
  p.lambda_ = v * v.transpose() / scale;
  p.lambda_ones_ = v * (v.sum() / scale);
  p.alpha_ = alpha;
  p.owner_ = owner;
  p.index_map_ = index_map.empty() ? default_index_map(owner, static_cast<std::size_t>(v.size()))
                                   : std::move(index_map);
  if (p.index_map_.size() != static_cast<std::size_t>(v.size())) {
    throw InvalidArgument("index map size does not match factor");
  }
  // v v' / scale has the single nonzero eigenvalue |v|^2 / scale.
  p.lip_ = std::max(v.squaredNorm() / scale, kLipschitzFloor);
  p.factor_ = std::move(v);
  p.factor_scale_ = scale;
  p.convex_ = true;
  p.step_x_ = p.step_y_ = kDefaultStepFraction / p.lip_;
  return p;
}

ProxProblem ProxProblem::with_alpha(double alpha) const {
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be nonnegative");
  ProxProblem p = *this;
  p.alpha_ = alpha;
  return p;
}

ProxProblem ProxProblem::with_steps(double step_x, double step_y) const {
  const double limit = 1.0 / lip_;
  if (!(step_x > 0.0 && step_x < limit) || !(step_y > 0.0 && step_y < limit)) {
    throw InvalidArgument("step sizes must lie in (0, 1/lip)");
  }
  ProxProblem p = *this;
  p.step_x_ = step_x;
  p.step_y_ = step_y;
  return p;
}

void ProxProblem::check_dim(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    throw InvalidArgument("coordinate vector has length " + std::to_string(x.size()) + ", expected " +
                          std::to_string(dim()));
  }
}

Vector ProxProblem::lambda_times(const Vector& x) const {
  check_dim(x);
  if (factor_) return *factor_ * (factor_->dot(x) / factor_scale_);
  return lambda_ * x;
}

double ProxProblem::f1(const Vector& m) const {
  check_dim(m);
  if (factor_) {
    const double s = factor_->dot(m);
    return (0.5 * s * s - factor_->sum() * s) / factor_scale_;
  }
  return 0.5 * m.dot(lambda_ * m) - lambda_ones_.dot(m);
}

ProxProblem build_lambda(const SecurityGame& game, std::size_t i, const InvestmentProfile& u) {
  const auto owner = game.index(i);
  if (static_cast<std::size_t>(u.size()) != game.size()) {
    throw InvalidArgument("investment profile has wrong length");
  }
  const auto n = static_cast<Eigen::Index>(game.size());
  Vector v(n - 1);
  std::vector<std::size_t> map;
  map.reserve(static_cast<std::size_t>(n - 1));
  for (Eigen::Index j = 0, c = 0; j < n; ++j) {
    if (j == owner) continue;
    v(c++) = game.influence()(owner, j) * u(j);
    map.push_back(static_cast<std::size_t>(j));
  }
  return ProxProblem::rank_one(std::move(v), game.influence()(owner, owner), 0.0, i, std::move(map));
}

Vector grad_f1(const ProxProblem& p, const Vector& m) {
  return p.lambda_times(m) - p.lambda_ones();
}

Vector soft_threshold(const Vector& x, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("threshold must be nonnegative");
  return (x.array() - t).max(0.0) - (-x.array() - t).max(0.0);
}

Vector proj_box(const Vector& x) { return x.cwiseMax(0.0).cwiseMin(1.0); }

Vector prox_f2_plus_f3(const Vector& x, double t) { return proj_box(soft_threshold(x, t)); }

Vector prox_grad_step(const ProxProblem& p, const Vector& x, double step) {
  return prox_f2_plus_f3(x - step * grad_f1(p, x), step * p.alpha());
}

double fixed_point_residual(const ProxProblem& p, const Vector& x) {
  if (p.dim() == 0) return 0.0;
  return (x - prox_grad_step(p, x, p.step_x())).cwiseAbs().maxCoeff();
}

ExtendedReal eval_Q(const ProxProblem& p, const Vector& m) {
  if (static_cast<std::size_t>(m.size()) != p.dim()) throw InvalidArgument("coordinate vector has wrong length");
  if (!m.array().isFinite().all()) return ExtendedReal::infinity();
  if (p.dim() == 0) return ExtendedReal::finite(0.0);
  if (m.minCoeff() < -kBoxSlack || m.maxCoeff() > 1.0 + kBoxSlack) return ExtendedReal::infinity();
  return ExtendedReal::finite(p.f1(m) + p.alpha() * m.cwiseAbs().sum());
}

Vector to_coordinates(const Vector& row, std::size_t owner) {
  const auto n = row.size();
  const auto o = static_cast<Eigen::Index>(owner);
  if (o >= n) throw std::out_of_range("owner index out of range");
  Vector c(n - 1);
  for (Eigen::Index j = 0, k = 0; j < n; ++j) {
    if (j != o) c(k++) = row(j);
  }
  return c;
}

Vector from_coordinates(const Vector& coords, std::size_t owner) {
  const auto n = coords.size() + 1;
  const auto o = static_cast<Eigen::Index>(owner);
  if (o >= n) throw std::out_of_range("owner index out of range");
  Vector row(n);
  for (Eigen::Index j = 0, k = 0; j < n; ++j) row(j) = j == o ? 0.0 : coords(k++);
  return row;
}

}  // namespace gne
