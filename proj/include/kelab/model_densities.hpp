#pragma once

#include <span>
#include <string>

#include "kelab/grid.hpp"

namespace kelab {

enum class DensityFamily { gaussian, hydrogenic_1s, uniform_box };

std::string to_string(DensityFamily family);
DensityFamily parse_family(const std::string& name);

/// Analytic trial density.
///
/// `width` is the exponent gamma (bohr^-2) for gaussian, the nuclear charge Z
/// (bohr^-1) for hydrogenic_1s, and the box edge a (bohr) for uniform_box.
/// Every family integrates to `electrons` in one or three dimensions.
struct DensityModel {
  DensityFamily family;
  double electrons;
  double width;

  DensityModel(DensityFamily family, double electrons, double width);

  /// n(r) at distance `radius` from the center, in `dim` dimensions.
  double value_at(double radius, int dim) const;
  /// Analytic maximum of n.
  double peak(int dim) const;
};

/// Nonnegative density samples together with their electron count.
class DensityField {
 public:
  static constexpr double floor_tolerance = 1e-10;

  /// Takes ownership of the samples and integrates them for the electron count.
  explicit DensityField(ScalarField field);

  /// Records a known electron count; it must agree with the quadrature to 1e-10.
  static DensityField with_electrons(ScalarField field, double electrons);

  const ScalarField& field() const noexcept { return field_; }
  const Grid& grid() const noexcept { return field_.grid(); }
  std::span<const double> values() const noexcept { return field_.values(); }
  double electrons() const noexcept { return electrons_; }
  double max_value() const noexcept { return max_; }

 private:
  DensityField(ScalarField field, double electrons, double max_value);

  ScalarField field_;
  double electrons_;
  double max_;
};

/// Default sampling grid for a model: open cube [-8/sqrt(gamma), 8/sqrt(gamma)]
/// for gaussian, [-16/Z, 16/Z] for hydrogenic (shifted by h/2 when a point
/// would land on the nucleus), periodic box of edge a for uniform_box.
Grid default_grid(const DensityModel& model, int dim, int points_per_axis);

/// Pointwise samples. Throws DomainTooSmall when the density on the grid hull
/// exceeds 1e-12 of its peak, WrongBoundary for uniform_box on an open grid.
DensityField sample_density(const DensityModel& model, const Grid& grid);

/// Closed-form von Weizsacker energy of the model.
double analytic_t_vw(const DensityModel& model, int dim = 3);
/// Closed-form Thomas-Fermi energy C_TF * integral of n^(5/3).
double analytic_t_tf(const DensityModel& model, int dim = 3);

}  // namespace kelab
