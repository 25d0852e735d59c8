#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "kelab/functionals.hpp"
#include "kelab/model_densities.hpp"

namespace kelab {

struct SearchConfig {
  int orbital_count = 1;
  double penalty_weight = 1e10;
  double step_size = 1.0;  // first trial step of each line search
  int max_iterations = 500;
  double convergence_tol = 1e-3;
  /// When set, the deterministic initial guess is perturbed by seeded noise.
  std::optional<std::uint64_t> restart_seed;

  void validate() const;
};

struct SearchResult {
  double energy;            // sum_i n_i (1/2) integral |phi_i'|^2
  double penalty;           // penalty_weight * ||rho - n_target||^2
  double density_residual;  // ||rho - n_target|| (L2)
  double gradient_norm;     // L2 norm of the constrained gradient
  int iterations;
  bool converged;
  OrbitalSet orbitals;
};

/// Penalized kinetic objective over real orbital coefficients on a 1-D grid.
///
/// The coefficient vector stacks the orbitals, x = [phi_1; ...; phi_Ns].
/// The kinetic term uses the Fourier differentiation matrix of the grid's
/// periodic extension; the penalty uses the grid quadrature weights.
class SearchObjective {
 public:
  SearchObjective(const DensityField& target, int orbital_count, double penalty_weight);

  Eigen::Index dimension() const { return points_ * orbitals_; }
  int orbital_count() const { return static_cast<int>(orbitals_); }
  double occupation() const { return occupation_; }
  /// Target norm of every orbital, integral(n) / N_e.
  double orbital_norm() const { return norm_; }
  double penalty_weight() const { return mu_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& target() const { return target_; }

  double kinetic(const Eigen::VectorXd& x) const;
  double penalty(const Eigen::VectorXd& x) const;
  double value(const Eigen::VectorXd& x) const { return kinetic(x) + penalty(x); }
  double density_residual(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  /// Restores orthogonality and the orbital norm (Lowdin orthonormalization).
  Eigen::VectorXd orthonormalize(const Eigen::VectorXd& x) const;
  /// sqrt(n / N_e) times Legendre polynomials on the grid span, orthonormalized.
  Eigen::VectorXd initial_guess(std::optional<std::uint64_t> seed = std::nullopt) const;

  OrbitalSet to_orbitals(const Eigen::VectorXd& x) const;

 private:
  Eigen::VectorXd density(const Eigen::VectorXd& x) const;

  Grid grid_;
  Eigen::Index points_;
  Eigen::Index orbitals_;
  double electrons_;
  double occupation_;
  double norm_;
  double mu_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd target_;
  Eigen::MatrixXd stiffness_;  // D^T W D
};

/// Fourier differentiation matrix of an n-point grid with period n * h.
Eigen::MatrixXd spectral_derivative_matrix(int points, double spacing);

/// Kinetic term of the search for any 1-D orbital set,
/// sum_i n_i (1/2) integral |D phi_i|^2 with the spectral derivative D.
double spectral_kinetic(const OrbitalSet& phi);

/// Minimizes the penalized kinetic energy for N_s in {1, 2} on a 1-D target.
///
/// The penalty weight is raised toward cfg.penalty_weight in factors of 100.
/// Steps are Newton directions in the tangent space of the orthonormality
/// constraints (shifted toward gradient descent when the reduced Hessian is
/// not positive definite), with backtracking and re-orthonormalization after
/// every trial step. Throws NonPositiveTarget if any target sample is <= 0.
SearchResult minimize_ts(const DensityField& target, const SearchConfig& cfg);

/// |g.d - (f(x + e d) - f(x - e d)) / (2e)| / max(|g.d|, |central difference|);
/// zero for a zero direction.
double directional_gradient_deviation(const SearchObjective& objective, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& direction, double perturbation);

/// Largest directional deviation over 32 random unit directions at a random
/// orthonormal point. `perturbation` must lie in [1e-7, 1e-3].
double objective_gradient_check(const DensityField& target, const SearchConfig& cfg, double perturbation,
                                std::uint64_t seed = 0);

}  // namespace kelab
