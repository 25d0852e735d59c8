#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "kelab/grid.hpp"
#include "kelab/model_densities.hpp"

namespace kelab {

/// Occupied orbitals phi_i = sqrt(A) * u_i sharing one real amplitude factor A.
///
/// Keeping A separate from the samples u_i lets amplitude scaling multiply the
/// induced density by exactly the same number as a direct density scaling.
/// Orbitals are normalized to integral(n) / N_e, not to one.
class OrbitalSet {
 public:
  static constexpr double orthogonality_tolerance = 1e-8;

  OrbitalSet(Grid grid, std::vector<ComplexField> samples, std::vector<double> occupations, double electrons,
             double amplitude_squared = 1.0);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t count() const noexcept { return samples_.size(); }
  const std::vector<double>& occupations() const noexcept { return occupations_; }
  double electrons() const noexcept { return electrons_; }
  double amplitude_squared() const noexcept { return amplitude_squared_; }
  const ComplexField& samples(std::size_t i) const { return samples_.at(i); }

  /// Materialized orbital values sqrt(A) * u_i.
  ComplexField orbital(std::size_t i) const;
  /// <phi_i, phi_j> under grid quadrature.
  std::complex<double> overlap(std::size_t i, std::size_t j) const;
  /// n = A * sum_i n_i |u_i|^2.
  DensityField density() const;

  /// Largest |<phi_i, phi_j>| / sqrt(<phi_i,phi_i><phi_j,phi_j>) over i != j.
  double orthogonality_defect() const;
  /// Largest relative deviation of <phi_i, phi_i> from integral(n) / N_e.
  double normalization_defect() const;
  /// Throws OrthogonalityViolation when the defect exceeds the tolerance.
  void check_orthogonality(double tolerance = orthogonality_tolerance) const;

 private:
  Grid grid_;
  std::vector<ComplexField> samples_;
  std::vector<double> occupations_;
  double electrons_;
  double amplitude_squared_;
};

enum class FunctionalKind { vw, tf, ks_orbital, gas_discrete, gas_continuum };

std::string to_string(FunctionalKind kind);

struct EnergyResult {
  double value;  // hartree
  FunctionalKind functional;
  std::string descriptor;
};

/// Relative floor applied to n in the von Weizsacker denominator.
inline constexpr double vw_density_floor = 1e-12;

/// (1/8) integral |grad n|^2 / max(n, 1e-12 max n).
EnergyResult t_vw(const DensityField& n);

/// C_TF integral n^(5/3).
EnergyResult t_tf(const DensityField& n);

/// -(1/2) sum_i n_i integral Re(phi_i^* lap phi_i).
EnergyResult t_s_orbital(const OrbitalSet& phi);

/// (1/2) sum_i n_i integral |grad phi_i|^2; equals t_s_orbital up to a
/// boundary term that vanishes on periodic grids and decayed fields.
EnergyResult t_s_orbital_gradient_form(const OrbitalSet& phi);

/// One orbital sqrt(n / 2) holding both electrons of a two-electron system.
/// Its norm is integral(n) / 2, so densities of any integral are accepted.
OrbitalSet doubly_occupied_orbital_set(const DensityField& n);

/// (t_vw(n), t_s_orbital(doubly_occupied_orbital_set(n))).
std::pair<EnergyResult, EnergyResult> vw_from_orbital_identity(const DensityField& n);

}  // namespace kelab
