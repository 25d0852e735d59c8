#include "kelab/constrained_search.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "kelab/constants.hpp"
#include "kelab/errors.hpp"

namespace kelab {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double armijo = 1e-4;
constexpr int max_halvings = 40;
constexpr double penalty_start = 1e2;
constexpr double penalty_growth = 1e2;

struct ConstraintSystem {
  MatrixXd jacobian;                    // one row per pair a <= b
  std::vector<std::pair<int, int>> pairs;
};

ConstraintSystem constraints(const SearchObjective& obj, const VectorXd& x) {
  const Index n = obj.dimension() / obj.orbital_count();
  const int ns = obj.orbital_count();
  const VectorXd& w = obj.weights();
  ConstraintSystem c;
  for (int a = 0; a < ns; ++a)
    for (int b = a; b < ns; ++b) c.pairs.emplace_back(a, b);
  c.jacobian = MatrixXd::Zero(static_cast<Index>(c.pairs.size()), obj.dimension());
  for (Index r = 0; r < static_cast<Index>(c.pairs.size()); ++r) {
    const auto [a, b] = c.pairs[static_cast<std::size_t>(r)];
    const auto pa = x.segment(a * n, n);
    const auto pb = x.segment(b * n, n);
    if (a == b) {
      c.jacobian.row(r).segment(a * n, n) = 2.0 * w.cwiseProduct(pa).transpose();
    } else {
      c.jacobian.row(r).segment(a * n, n) = w.cwiseProduct(pb).transpose();
      c.jacobian.row(r).segment(b * n, n) = w.cwiseProduct(pa).transpose();
    }
  }
  return c;
}

// Least-squares multipliers of g = J^T lambda.
VectorXd multipliers(const MatrixXd& jacobian, const VectorXd& g) {
  const MatrixXd jjt = jacobian * jacobian.transpose();
  return jjt.ldlt().solve(jacobian * g);
}

double legendre(int order, double t) {
  double prev = 1.0;
  double cur = t;
  if (order == 0) return prev;
  for (int l = 1; l < order; ++l) {
    const double next = ((2.0 * l + 1.0) * t * cur - l * prev) / (l + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double metric_norm(const VectorXd& g, const VectorXd& w, Index n) {
  double acc = 0.0;
  for (Index i = 0; i < g.size(); ++i) acc += g[i] * g[i] / w[i % n];
  return std::sqrt(acc);
}

struct StepInfo {
  double gradient_norm;
  VectorXd direction;
  double slope;  // g . direction
};

StepInfo newton_direction(const SearchObjective& obj, const VectorXd& x) {
  const Index dim = obj.dimension();
  const Index n = dim / obj.orbital_count();
  const VectorXd g = obj.gradient(x);
  const ConstraintSystem cs = constraints(obj, x);
  const VectorXd lambda = multipliers(cs.jacobian, g);
  const VectorXd tangent = g - cs.jacobian.transpose() * lambda;

  MatrixXd h = obj.hessian(x);
  for (Index r = 0; r < lambda.size(); ++r) {
    const auto [a, b] = cs.pairs[static_cast<std::size_t>(r)];
    const VectorXd& w = obj.weights();
    if (a == b) {
      h.block(a * n, a * n, n, n).diagonal() -= 2.0 * lambda[r] * w;
    } else {
      h.block(a * n, b * n, n, n).diagonal() -= lambda[r] * w;
      h.block(b * n, a * n, n, n).diagonal() -= lambda[r] * w;
    }
  }

  // Null-space basis of the constraint Jacobian.
  Eigen::HouseholderQR<MatrixXd> qr(cs.jacobian.transpose());
  const MatrixXd q = qr.householderQ() * MatrixXd::Identity(dim, dim);
  const MatrixXd z = q.rightCols(dim - cs.jacobian.rows());
  MatrixXd reduced = z.transpose() * h * z;
  const VectorXd rhs = -(z.transpose() * g);

  const double scale = reduced.diagonal().cwiseAbs().maxCoeff();
  double shift = 0.0;
  Eigen::LLT<MatrixXd> llt(reduced);
  while (llt.info() != Eigen::Success) {
    shift = shift == 0.0 ? 1e-10 * std::max(scale, 1.0) : 10.0 * shift;
    llt.compute(reduced + shift * MatrixXd::Identity(reduced.rows(), reduced.cols()));
  }
  VectorXd d = z * llt.solve(rhs);
  double slope = g.dot(d);
  if (!(slope < 0.0)) {
    d = -tangent;
    slope = g.dot(d);
  }
  return {metric_norm(tangent, obj.weights(), n), d, slope};
}

}  // namespace

void SearchConfig::validate() const {
  if (orbital_count != 1 && orbital_count != 2) {
    throw Error(ErrorCode::InvalidArgument, "orbital_count must be 1 or 2");
  }
  if (!(penalty_weight > 0.0) || !(step_size > 0.0) || max_iterations <= 0 || !(convergence_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "search configuration values must be positive");
  }
  if (!(convergence_tol < 1.0)) throw Error(ErrorCode::InvalidArgument, "convergence_tol must be below 1");
}

MatrixXd spectral_derivative_matrix(int points, double spacing) {
  const double period = points * spacing;
  MatrixXd d = MatrixXd::Zero(points, points);
  for (int j = 0; j < points; ++j) {
    for (int k = 0; k < points; ++k) {
      if (j == k) continue;
      const int diff = j - k;
      const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
      const double angle = pi * diff / points;
      const double kernel = points % 2 == 0 ? std::cos(angle) / std::sin(angle) : 1.0 / std::sin(angle);
      d(j, k) = pi / period * sign * kernel;
    }
  }
  return d;
}

SearchObjective::SearchObjective(const DensityField& target, int orbital_count, double penalty_weight)
    : grid_(target.grid()),
      points_(static_cast<Index>(target.grid().size())),
      orbitals_(orbital_count),
      electrons_(target.electrons()),
      occupation_(target.electrons() / orbital_count),
      norm_(1.0),  // N_e is the target integral
      mu_(penalty_weight) {
  if (grid_.dim() != 1) throw Error(ErrorCode::InvalidArgument, "constrained search runs on 1-D grids");
  if (grid_.points_per_axis() < 32 || grid_.points_per_axis() > 256) {
    throw Error(ErrorCode::InvalidArgument, "constrained search needs 32 to 256 grid points");
  }
  if (orbital_count != 1 && orbital_count != 2) {
    throw Error(ErrorCode::InvalidArgument, "constrained search supports one or two orbitals");
  }
  for (double v : target.values()) {
    if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveTarget, "target density must be strictly positive");
  }
  if (occupation_ > 2.0) {
    throw Error(ErrorCode::InvalidArgument, "target holds more than two electrons per orbital");
  }
  weights_.resize(points_);
  target_.resize(points_);
  for (Index i = 0; i < points_; ++i) {
    weights_[i] = grid_.weight(static_cast<std::size_t>(i));
    target_[i] = target.values()[static_cast<std::size_t>(i)];
  }
  const MatrixXd d = spectral_derivative_matrix(grid_.points_per_axis(), grid_.spacing());
  stiffness_ = d.transpose() * weights_.asDiagonal() * d;
}

VectorXd SearchObjective::density(const VectorXd& x) const {
  VectorXd rho = VectorXd::Zero(points_);
  for (Index a = 0; a < orbitals_; ++a) rho += occupation_ * x.segment(a * points_, points_).cwiseAbs2();
  return rho;
}

double SearchObjective::kinetic(const VectorXd& x) const {
  double total = 0.0;
  for (Index a = 0; a < orbitals_; ++a) {
    const auto phi = x.segment(a * points_, points_);
    total += 0.5 * occupation_ * phi.dot(stiffness_ * phi);
  }
  return total;
}

double SearchObjective::penalty(const VectorXd& x) const {
  const VectorXd r = density(x) - target_;
  return mu_ * weights_.dot(r.cwiseAbs2());
}

double SearchObjective::density_residual(const VectorXd& x) const {
  const VectorXd r = density(x) - target_;
  return std::sqrt(weights_.dot(r.cwiseAbs2()));
}

VectorXd SearchObjective::gradient(const VectorXd& x) const {
  const VectorXd r = density(x) - target_;
  VectorXd g(dimension());
  for (Index a = 0; a < orbitals_; ++a) {
    const auto phi = x.segment(a * points_, points_);
    g.segment(a * points_, points_) =
        occupation_ * (stiffness_ * phi) +
        4.0 * mu_ * occupation_ * weights_.cwiseProduct(r).cwiseProduct(phi);
  }
  return g;
}

MatrixXd SearchObjective::hessian(const VectorXd& x) const {
  const VectorXd r = density(x) - target_;
  MatrixXd h = MatrixXd::Zero(dimension(), dimension());
  for (Index a = 0; a < orbitals_; ++a) {
    const auto pa = x.segment(a * points_, points_);
    for (Index b = 0; b < orbitals_; ++b) {
      const auto pb = x.segment(b * points_, points_);
      auto block = h.block(a * points_, b * points_, points_, points_);
      block.diagonal() = 8.0 * mu_ * occupation_ * occupation_ * weights_.cwiseProduct(pa).cwiseProduct(pb);
      if (a == b) {
        block += occupation_ * stiffness_;
        block.diagonal() += 4.0 * mu_ * occupation_ * weights_.cwiseProduct(r);
      }
    }
  }
  return h;
}

VectorXd SearchObjective::orthonormalize(const VectorXd& x) const {
  MatrixXd phi = Eigen::Map<const MatrixXd>(x.data(), points_, orbitals_);
  const MatrixXd overlap = phi.transpose() * weights_.asDiagonal() * phi;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(overlap);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "orbitals are linearly dependent");
  }
  const MatrixXd inv_sqrt =
      eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  phi = phi * inv_sqrt * std::sqrt(norm_);
  return Eigen::Map<const VectorXd>(phi.data(), phi.size());
}

VectorXd SearchObjective::initial_guess(std::optional<std::uint64_t> seed) const {
  const double lower = grid_.coordinate(0, 0);
  const double upper = grid_.coordinate(0, static_cast<int>(points_) - 1);
  VectorXd x(dimension());
  std::mt19937_64 rng(seed.value_or(0));
  std::normal_distribution<double> noise(0.0, 0.1);
  for (Index i = 0; i < points_; ++i) {
    const double t = (2.0 * grid_.coordinate(0, static_cast<int>(i)) - lower - upper) / (upper - lower);
    const double envelope = std::sqrt(target_[i] / electrons_);
    for (Index a = 0; a < orbitals_; ++a) x[a * points_ + i] = envelope * legendre(static_cast<int>(a), t);
  }
  if (seed) {
    for (Index j = 0; j < x.size(); ++j) x[j] *= 1.0 + noise(rng);
  }
  return orthonormalize(x);
}

OrbitalSet SearchObjective::to_orbitals(const VectorXd& x) const {
  std::vector<ComplexField> fields;
  for (Index a = 0; a < orbitals_; ++a) {
    std::vector<std::complex<double>> values(static_cast<std::size_t>(points_));
    for (Index i = 0; i < points_; ++i) values[static_cast<std::size_t>(i)] = x[a * points_ + i];
    fields.emplace_back(grid_, std::move(values));
  }
  return OrbitalSet(grid_, std::move(fields), std::vector<double>(static_cast<std::size_t>(orbitals_), occupation_),
                    electrons_);
}

double spectral_kinetic(const OrbitalSet& phi) {
  const Grid& g = phi.grid();
  if (g.dim() != 1) throw Error(ErrorCode::InvalidArgument, "spectral kinetic term is defined on 1-D grids");
  const MatrixXd d = spectral_derivative_matrix(g.points_per_axis(), g.spacing());
  const Index n = g.points_per_axis();
  double total = 0.0;
  for (std::size_t i = 0; i < phi.count(); ++i) {
    Eigen::VectorXcd u(n);
    for (Index p = 0; p < n; ++p) u[p] = phi.samples(i)[static_cast<std::size_t>(p)];
    const Eigen::VectorXcd du = d * u;
    double acc = 0.0;
    for (Index p = 0; p < n; ++p) acc += g.weight(static_cast<std::size_t>(p)) * std::norm(du[p]);
    total += phi.occupations()[i] * acc;
  }
  return 0.5 * phi.amplitude_squared() * total;
}

SearchResult minimize_ts(const DensityField& target, const SearchConfig& cfg) {
  cfg.validate();

  std::vector<double> schedule;
  for (double mu = std::min(penalty_start, cfg.penalty_weight); mu < cfg.penalty_weight; mu *= penalty_growth) {
    schedule.push_back(mu);
  }
  schedule.push_back(cfg.penalty_weight);

  VectorXd x = SearchObjective(target, cfg.orbital_count, schedule.front()).initial_guess(cfg.restart_seed);
  int iterations = 0;
  for (const double mu : schedule) {
    const SearchObjective obj(target, cfg.orbital_count, mu);
    while (iterations < cfg.max_iterations) {
      const StepInfo step = newton_direction(obj, x);
      if (step.gradient_norm <= cfg.convergence_tol) break;
      const double f0 = obj.value(x);
      double t = cfg.step_size;
      bool accepted = false;
      VectorXd trial;
      for (int k = 0; k < max_halvings; ++k, t *= 0.5) {
        trial = obj.orthonormalize(x + t * step.direction);
        if (obj.value(trial) <= f0 + armijo * t * step.slope) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;  // no further decrease at working precision
      x = trial;
      ++iterations;
    }
  }

  const SearchObjective final_obj(target, cfg.orbital_count, cfg.penalty_weight);
  const double gradient_norm = newton_direction(final_obj, x).gradient_norm;
  return {final_obj.kinetic(x),
          final_obj.penalty(x),
          final_obj.density_residual(x),
          gradient_norm,
          iterations,
          gradient_norm <= cfg.convergence_tol,
          final_obj.to_orbitals(x)};
}

double directional_gradient_deviation(const SearchObjective& objective, const VectorXd& x, const VectorXd& direction,
                                      double perturbation) {
  if (direction.squaredNorm() == 0.0) return 0.0;
  const double analytic = objective.gradient(x).dot(direction);
  const double numeric =
      (objective.value(x + perturbation * direction) - objective.value(x - perturbation * direction)) /
      (2.0 * perturbation);
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  return scale == 0.0 ? 0.0 : std::abs(analytic - numeric) / scale;
}

double objective_gradient_check(const DensityField& target, const SearchConfig& cfg, double perturbation,
                                std::uint64_t seed) {
  cfg.validate();
  if (!(perturbation >= 1e-7 && perturbation <= 1e-3)) {
    throw Error(ErrorCode::InvalidArgument, "perturbation must lie in [1e-7, 1e-3]");
  }
  const SearchObjective obj(target, cfg.orbital_count, cfg.penalty_weight);
  const VectorXd x = obj.initial_guess(seed);

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 32; ++trial) {
    VectorXd d(obj.dimension());
    for (Index i = 0; i < d.size(); ++i) d[i] = normal(rng);
    d.normalize();
    worst = std::max(worst, directional_gradient_deviation(obj, x, d, perturbation));
  }
  return worst;
}

}  // namespace kelab
