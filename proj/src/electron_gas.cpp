#include "kelab/electron_gas.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <limits>
#include <tuple>

#include "kelab/constants.hpp"
#include "kelab/errors.hpp"

namespace kelab {

namespace {

// All lattice vectors with |n|^2 <= radius^2, ordered by |n|^2 then by index.
std::vector<std::array<int, 3>> lattice_ball(int radius) {
  const std::int64_t bound = static_cast<std::int64_t>(radius) * radius;
  std::vector<std::array<int, 3>> out;
  for (int x = -radius; x <= radius; ++x)
    for (int y = -radius; y <= radius; ++y)
      for (int z = -radius; z <= radius; ++z) {
        const std::int64_t s = static_cast<std::int64_t>(x) * x + static_cast<std::int64_t>(y) * y +
                               static_cast<std::int64_t>(z) * z;
        if (s <= bound) out.push_back({x, y, z});
      }
  auto norm2 = [](const std::array<int, 3>& v) {
    return static_cast<std::int64_t>(v[0]) * v[0] + static_cast<std::int64_t>(v[1]) * v[1] +
           static_cast<std::int64_t>(v[2]) * v[2];
  };
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return std::make_tuple(norm2(a), a[0], a[1], a[2]) < std::make_tuple(norm2(b), b[0], b[1], b[2]);
  });
  return out;
}

std::int64_t shell_of(const std::array<int, 3>& v) {
  return static_cast<std::int64_t>(v[0]) * v[0] + static_cast<std::int64_t>(v[1]) * v[1] +
         static_cast<std::int64_t>(v[2]) * v[2];
}

double k_squared(const PlaneWaveState& s) { return s.k[0] * s.k[0] + s.k[1] * s.k[1] + s.k[2] * s.k[2]; }

}  // namespace

BoxGas fill_fermi_sphere(double edge, std::int64_t electrons) {
  if (electrons < 1) throw Error(ErrorCode::InvalidArgument, "gas needs at least one electron");
  if (!(edge > 0.0) || !std::isfinite(edge)) throw Error(ErrorCode::InvalidArgument, "box edge must be positive");

  int radius = 1;
  std::vector<std::array<int, 3>> ball = lattice_ball(radius);
  while (2 * static_cast<std::int64_t>(ball.size()) < electrons) {
    radius *= 2;
    ball = lattice_ball(radius);
  }

  BoxGas gas{edge, electrons, {}};
  const double unit = 2.0 * pi / edge;
  std::int64_t remaining = electrons;
  std::size_t first = 0;
  while (remaining > 0) {
    std::size_t last = first;
    const std::int64_t shell = shell_of(ball[first]);
    while (last < ball.size() && shell_of(ball[last]) == shell) ++last;
    const auto degeneracy = static_cast<std::int64_t>(last - first);
    const double occupation =
        remaining >= 2 * degeneracy ? 2.0 : static_cast<double>(remaining) / static_cast<double>(degeneracy);
    for (std::size_t i = first; i < last; ++i) {
      const auto& n = ball[i];
      gas.occupied.push_back({n, {unit * n[0], unit * n[1], unit * n[2]}, shell, occupation});
    }
    remaining -= std::min(remaining, 2 * degeneracy);
    first = last;
  }
  return gas;
}

EnergyResult kinetic_discrete(const BoxGas& gas) {
  double total = 0.0;
  for (const auto& s : gas.occupied) total += s.occupation * k_squared(s);
  return {0.5 * total, FunctionalKind::gas_discrete,
          "box a=" + std::to_string(gas.edge) + " N_e=" + std::to_string(gas.electrons)};
}

double fermi_wavevector(double nbar) {
  if (!(nbar > 0.0)) throw Error(ErrorCode::NonPositiveDensity, "Fermi wavevector needs a positive density");
  return std::cbrt(3.0 * pi * pi * nbar);
}

double t_g_continuum(double nbar) {
  const double kf = fermi_wavevector(nbar);
  const double kf2 = kf * kf;
  return kf2 * kf2 * kf / (10.0 * pi * pi);
}

std::vector<ConvergenceRow> continuum_convergence(double nbar, const std::vector<std::int64_t>& ladder) {
  const double reference = t_g_continuum(nbar);
  std::vector<ConvergenceRow> rows;
  rows.reserve(ladder.size());
  for (const std::int64_t electrons : ladder) {
    if (electrons < 2) throw Error(ErrorCode::InvalidArgument, "convergence ladder entries must be >= 2");
    const double edge = std::cbrt(static_cast<double>(electrons) / nbar);
    const BoxGas gas = fill_fermi_sphere(edge, electrons);
    const double per_volume = kinetic_discrete(gas).value / gas.volume();
    rows.push_back({electrons, edge, per_volume, reference, std::abs(per_volume - reference) / reference});
  }
  return rows;
}

GasScalingReport scaled_gas_identity(double edge, std::int64_t electrons, const ScalingParams& s) {
  const BoxGas gas = fill_fermi_sphere(edge, electrons);
  const double amplitude = s.amplitude();
  const double contraction = s.contraction();
  const double scaled_edge = edge / contraction;
  // integral of |phi'|^2 over the scaled box
  const double norm = amplitude / (edge * edge * edge) * (scaled_edge * scaled_edge * scaled_edge);
  if (!std::isfinite(norm) || !std::isfinite(scaled_edge)) {
    throw Error(ErrorCode::Overflow, "scaled plane-wave normalization is not finite");
  }

  double unscaled = 0.0;
  double scaled = 0.0;
  for (const auto& state : gas.occupied) {
    unscaled += state.occupation * k_squared(state);
    const std::array<double, 3> k{contraction * state.k[0], contraction * state.k[1], contraction * state.k[2]};
    scaled += state.occupation * norm * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
  }
  unscaled *= 0.5;
  scaled *= 0.5;

  const double predicted = s.kinetic_factor();
  double observed = predicted;  // 0 = c * 0 holds for every c
  if (unscaled != 0.0) {
    observed = scaled / unscaled;
  } else if (scaled != 0.0) {
    observed = std::numeric_limits<double>::infinity();
  }
  return {unscaled, scaled, predicted, observed, scaled_edge, amplitude * gas.mean_density()};
}

EnergyResult tf_local_gas(const DensityField& n) {
  ScalarField energy_density(n.grid());
  auto out = energy_density.values();
  const auto values = n.values();
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = values[p] > 0.0 ? t_g_continuum(values[p]) : 0.0;
  return {integrate(energy_density), FunctionalKind::gas_continuum, "local gas"};
}

EnergyResult tf_scaled_corrected(const DensityField& n, const ScalingParams& s) {
  const double factor = s.kinetic_factor();
  const double value = factor * t_tf(n).value;
  if (!std::isfinite(value)) throw Error(ErrorCode::Overflow, "corrected Thomas-Fermi energy is not finite");
  return {value, FunctionalKind::tf, "scaled local gas"};
}

}  // namespace kelab
