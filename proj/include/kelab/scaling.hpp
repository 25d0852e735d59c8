#pragma once

#include <functional>
#include <vector>

#include "kelab/functionals.hpp"
#include "kelab/model_densities.hpp"

namespace kelab {

/// Generalized homogeneous coordinate scaling n(r) -> alpha^m n(beta^p r).
struct ScalingParams {
  double alpha;
  double beta;
  double m;
  double p;

  ScalingParams(double alpha, double beta, double m, double p);

  static ScalingParams identity() { return {1.0, 1.0, 0.0, 0.0}; }

  /// alpha^m, the density amplitude factor.
  double amplitude() const;
  /// beta^p, the coordinate contraction factor.
  double contraction() const;
  /// alpha^m / beta^p, the factor obeyed by the non-interacting kinetic energy.
  double kinetic_factor() const;
  /// alpha^(5m/3) / beta^(3p), the factor of C_TF integral n^(5/3) under direct substitution.
  double naive_tf_factor() const;
  /// alpha^m / beta^(3p), the factor of the electron count.
  double electron_factor() const;
};

/// Scales a density by reusing its samples on a co-scaled grid.
///
/// The result has values alpha^m n_i on a grid with spacing h / beta^p and
/// origin / beta^p, so n'(r) = alpha^m n(beta^p r) holds exactly at every
/// sample. Throws Overflow when a factor is not finite in double precision.
DensityField scale_density(const DensityField& n, const ScalingParams& s);

/// phi'_i(r) = alpha^(m/2) phi_i(beta^p r) under the same sample-reuse
/// convention; occupations and N_e are unchanged.
OrbitalSet scale_orbitals(const OrbitalSet& phi, const ScalingParams& s);

using DensityFunctional = std::function<double(const DensityField&)>;

struct HomogeneityExponents {
  double slope_alpha;  // d log T / d (m log alpha)
  double slope_beta;   // d log T / d (p log beta)
};

/// Least-squares fit of log T[n_s] = c + a m log(alpha) + b p log(beta).
///
/// The probe list needs at least four entries with variation in both
/// regressors. Throws NonPositiveValue if any evaluation is <= 0.
HomogeneityExponents homogeneity_exponents(const DensityFunctional& functional, const DensityField& n,
                                           const std::vector<ScalingParams>& probe);

/// alpha in {0.5, 0.8, 1.25, 2} at beta = 1, then beta over the same ladder
/// at alpha = 1, with m = p = 1.
std::vector<ScalingParams> default_probe_ladder();

/// Twelve tuples with alpha, beta in {0.5, 2} and m, p in {-1, 0.5, 1, 2}.
std::vector<ScalingParams> standard_sweep();

}  // namespace kelab
