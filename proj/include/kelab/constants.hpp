#pragma once

#include <cmath>
#include <numbers>

namespace kelab {

inline constexpr double pi = std::numbers::pi;

/// Thomas-Fermi constant (3/10)(3 pi^2)^(2/3), hartree atomic units.
inline const double thomas_fermi_constant = 0.3 * std::pow(3.0 * pi * pi, 2.0 / 3.0);

}  // namespace kelab
