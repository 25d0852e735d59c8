#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace kelab {

enum class Boundary { open, periodic };

/// Uniform Cartesian lattice in one or three dimensions.
///
/// Point (i, j, k) sits at origin + h * (i, j, k). Periodic grids identify
/// index n with index 0, so the box edge is n * h. Open grids integrate over
/// the sampled hull, whose edge is (n - 1) * h.
class Grid {
 public:
  static constexpr int min_points_per_axis = 8;

  Grid(int dim, int points_per_axis, double spacing, Boundary boundary,
       std::array<double, 3> origin = {0.0, 0.0, 0.0});

  /// Open grid whose hull is [lower, upper] along every axis.
  static Grid open_box(int dim, int points_per_axis, double lower, double upper);
  /// Periodic box of edge `edge`, sampled from `origin` in steps of edge / n.
  static Grid periodic_box(int dim, int points_per_axis, double edge,
                           std::array<double, 3> origin = {0.0, 0.0, 0.0});

  int dim() const noexcept { return dim_; }
  int points_per_axis() const noexcept { return points_; }
  double spacing() const noexcept { return spacing_; }
  Boundary boundary() const noexcept { return boundary_; }
  bool periodic() const noexcept { return boundary_ == Boundary::periodic; }
  const std::array<double, 3>& origin() const noexcept { return origin_; }

  std::size_t size() const noexcept { return size_; }
  /// Length of the quadrature domain along one axis.
  double extent() const noexcept;
  double volume() const noexcept;

  double coordinate(int axis, int index) const noexcept {
    return origin_[static_cast<std::size_t>(axis)] + index * spacing_;
  }
  std::array<int, 3> indices(std::size_t flat) const noexcept;
  std::size_t flat_index(int i, int j = 0, int k = 0) const noexcept;
  std::array<double, 3> position(std::size_t flat) const noexcept;
  std::size_t stride(int axis) const noexcept;

  /// True when any index of the point is the first or last along its axis.
  bool on_hull(std::size_t flat) const noexcept;

  /// Dimensionless quadrature factor of one axis index (1, or 1/2 at open ends).
  double axis_factor(int index) const noexcept;
  /// Quadrature weight of a grid point.
  double weight(std::size_t flat) const noexcept;

  /// Same index lattice with every length multiplied by `length_factor`.
  Grid scaled(double length_factor) const;

  bool operator==(const Grid&) const = default;

 private:
  int dim_;
  int points_;
  double spacing_;
  Boundary boundary_;
  std::array<double, 3> origin_;
  std::size_t size_;
};

/// Samples of a scalar function on a grid. Immutable grid, mutable values.
template <class T>
class Field {
 public:
  using value_type = T;

  explicit Field(Grid grid);
  Field(Grid grid, std::vector<T> values);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const T> values() const noexcept { return values_; }
  std::span<T> values() noexcept { return values_; }
  const T& operator[](std::size_t i) const noexcept { return values_[i]; }
  T& operator[](std::size_t i) noexcept { return values_[i]; }

 private:
  Grid grid_;
  std::vector<T> values_;
};

using ScalarField = Field<double>;
using ComplexField = Field<std::complex<double>>;

struct VectorField {
  Grid grid;
  std::vector<ScalarField> components;  // one per axis
};

/// Quadrature sum: rectangle rule on periodic grids, trapezoid on open grids.
double integrate(const ScalarField& f);
std::complex<double> integrate(const ComplexField& f);

/// Integral of conj(a) * b.
std::complex<double> inner_product(const ComplexField& a, const ComplexField& b);

/// Fourth-order first derivative along one axis.
ScalarField derivative(const ScalarField& f, int axis);
ComplexField derivative(const ComplexField& f, int axis);

VectorField gradient(const ScalarField& f);

/// Fourth-order second derivative along one axis.
ScalarField second_derivative(const ScalarField& f, int axis);
ComplexField second_derivative(const ComplexField& f, int axis);

ScalarField laplacian(const ScalarField& f);
ComplexField laplacian(const ComplexField& f);

}  // namespace kelab
