#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kelab/functionals.hpp"
#include "kelab/scaling.hpp"

namespace kelab {

/// One Born-Karman plane wave a^(-3/2) exp(i k.r), k = (2 pi / a) * index.
struct PlaneWaveState {
  std::array<int, 3> index;
  std::array<double, 3> k;  // bohr^-1
  std::int64_t shell;       // |index|^2
  double occupation;
};

/// Non-interacting electrons in a periodic cube of edge a.
struct BoxGas {
  double edge;
  std::int64_t electrons;
  std::vector<PlaneWaveState> occupied;  // ordered by shell, then lexicographically by index

  double volume() const { return edge * edge * edge; }
  double mean_density() const { return static_cast<double>(electrons) / volume(); }
};

/// Fills shells of increasing |k|^2 with two electrons per state. A partially
/// filled top shell shares the remaining electrons uniformly over its states.
BoxGas fill_fermi_sphere(double edge, std::int64_t electrons);

/// (1/2) sum_k n(k) |k|^2.
EnergyResult kinetic_discrete(const BoxGas& gas);

/// (3 pi^2 nbar)^(1/3). Throws NonPositiveDensity for nbar <= 0.
double fermi_wavevector(double nbar);

/// Kinetic energy per volume of the continuum gas, k_F^5 / (10 pi^2),
/// which equals C_TF nbar^(5/3).
double t_g_continuum(double nbar);

struct ConvergenceRow {
  std::int64_t electrons;
  double edge;
  double energy_per_volume;  // T_g / V
  double continuum;          // t_g_continuum(nbar)
  double relative_error;     // |T_g/V - t_g| / t_g
};

/// Discrete gas at fixed mean density, box edge (N_e / nbar)^(1/3) per rung.
std::vector<ConvergenceRow> continuum_convergence(double nbar, const std::vector<std::int64_t>& ladder);

struct GasScalingReport {
  double unscaled_T;
  double scaled_T;
  double predicted_factor;  // alpha^m / beta^p
  double observed_factor;   // scaled_T / unscaled_T; predicted when both vanish
  double scaled_edge;       // a / beta^p
  double scaled_density;    // alpha^m nbar
};

/// Scales every occupied plane wave to alpha^(m/2) a^(-3/2) exp(i beta^p k.r)
/// on the box a / beta^p and sums their kinetic energies directly.
GasScalingReport scaled_gas_identity(double edge, std::int64_t electrons, const ScalingParams& s);

/// Integral of t_g_continuum(n(r)): a uniform gas built at every point.
EnergyResult tf_local_gas(const DensityField& n);

/// Thomas-Fermi energy of the scaled density built from scaled local gases,
/// (alpha^m / beta^p) * t_tf(n).
EnergyResult tf_scaled_corrected(const DensityField& n, const ScalingParams& s);

}  // namespace kelab
