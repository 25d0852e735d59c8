#include "kelab/grid.hpp"

#include <cmath>
#include <string>

#include "kelab/errors.hpp"
#include "kelab/parallel.hpp"

namespace kelab {

namespace {

// Fourth-order first-derivative stencils, in units of 1/(12 h).
constexpr double d1_edge0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};  // offsets 0..4
constexpr double d1_edge1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};    // offsets -1..3

// Fourth-order second-derivative stencils, in units of 1/(12 h^2).
constexpr double d2_edge0[6] = {45.0, -154.0, 214.0, -156.0, 61.0, -10.0};  // offsets 0..5
constexpr double d2_edge1[6] = {10.0, -15.0, -4.0, 14.0, -6.0, 1.0};        // offsets -1..4

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Central rows are evaluated in paired form so that constants differentiate
// to exactly zero.
struct CentralFirst {
  template <class T>
  T operator()(T m2, T m1, T /*c*/, T p1, T p2) const { return (m2 - p2) + 8.0 * (p1 - m1); }
};

struct CentralSecond {
  template <class T>
  T operator()(T m2, T m1, T c, T p1, T p2) const { return 16.0 * (m1 + p1) - (m2 + p2) - 30.0 * c; }
};

// Applies a 1-D stencil along `axis` at every point. The mirrored edge rows
// of an odd-order derivative flip sign; even-order rows do not.

template <class T, std::size_t EdgeWidth, class Central>
Field<T> apply_stencil(const Field<T>& f, int axis, Central central,
                       const double (&edge0)[EdgeWidth], const double (&edge1)[EdgeWidth],
                       double mirror_sign, double scale) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim()) {
    throw Error(ErrorCode::InvalidArgument, "derivative axis out of range");
  }
  const int n = g.points_per_axis();
  const std::size_t stride = g.stride(axis);
  const bool periodic = g.periodic();
  const auto in = f.values();
  Field<T> out(g);
  auto res = out.values();

  parallel::for_range(g.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const int i = g.indices(p)[static_cast<std::size_t>(axis)];
      const std::size_t base = p - static_cast<std::size_t>(i) * stride;
      auto at = [&](int idx) { return in[base + static_cast<std::size_t>(idx) * stride]; };
      T acc{};
      if (periodic) {
        acc = central(at(wrap(i - 2, n)), at(wrap(i - 1, n)), at(i), at(wrap(i + 1, n)), at(wrap(i + 2, n)));
      } else if (i >= 2 && i <= n - 3) {
        acc = central(at(i - 2), at(i - 1), at(i), at(i + 1), at(i + 2));
      } else if (i == 0) {
        for (std::size_t o = 0; o < EdgeWidth; ++o) acc += edge0[o] * at(static_cast<int>(o));
      } else if (i == 1) {
        for (std::size_t o = 0; o < EdgeWidth; ++o) acc += edge1[o] * at(static_cast<int>(o));
      } else if (i == n - 1) {
        for (std::size_t o = 0; o < EdgeWidth; ++o) acc += mirror_sign * edge0[o] * at(n - 1 - static_cast<int>(o));
      } else {  // i == n - 2
        for (std::size_t o = 0; o < EdgeWidth; ++o) acc += mirror_sign * edge1[o] * at(n - 1 - static_cast<int>(o));
      }
      res[p] = acc * scale;
    }
  });
  return out;
}

// Deterministic quadrature: per-slab partial sums (slab = first index),
// combined in slab order, then multiplied by h^dim.
template <class T, class Value>
T weighted_sum(const Grid& g, Value&& value) {
  const int n = g.points_per_axis();
  const std::size_t slab = g.size() / static_cast<std::size_t>(n);
  std::vector<T> partial(static_cast<std::size_t>(n), T{});
  parallel::for_range(
      static_cast<std::size_t>(n),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
          T acc{};
          const std::size_t first = s * slab;
          for (std::size_t p = first; p < first + slab; ++p) {
            const auto idx = g.indices(p);
            double factor = 1.0;
            for (int a = 0; a < g.dim(); ++a) factor *= g.axis_factor(idx[static_cast<std::size_t>(a)]);
            acc += factor * value(p);
          }
          partial[s] = acc;
        }
      },
      1);
  T total{};
  for (const auto& v : partial) total += v;
  return total * std::pow(g.spacing(), g.dim());
}

}  // namespace

Grid::Grid(int dim, int points_per_axis, double spacing, Boundary boundary,
           std::array<double, 3> origin)
    : dim_(dim), points_(points_per_axis), spacing_(spacing), boundary_(boundary), origin_(origin) {
  if (dim != 1 && dim != 3) {
    throw Error(ErrorCode::InvalidArgument, "grid dimension must be 1 or 3, got " + std::to_string(dim));
  }
  if (points_per_axis < min_points_per_axis) {
    throw Error(ErrorCode::InvalidArgument,
                "grid needs at least 8 points per axis, got " + std::to_string(points_per_axis));
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive and finite");
  }
  if (dim == 1) origin_[1] = origin_[2] = 0.0;
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(points_per_axis);
}

Grid Grid::open_box(int dim, int points_per_axis, double lower, double upper) {
  if (!(upper > lower)) throw Error(ErrorCode::InvalidArgument, "open box needs upper > lower");
  if (points_per_axis < 2) throw Error(ErrorCode::InvalidArgument, "open box needs points");
  const double h = (upper - lower) / (points_per_axis - 1);
  return Grid(dim, points_per_axis, h, Boundary::open, {lower, lower, lower});
}

Grid Grid::periodic_box(int dim, int points_per_axis, double edge, std::array<double, 3> origin) {
  if (!(edge > 0.0)) throw Error(ErrorCode::InvalidArgument, "periodic box edge must be positive");
  if (points_per_axis <= 0) throw Error(ErrorCode::InvalidArgument, "periodic box needs points");
  return Grid(dim, points_per_axis, edge / points_per_axis, Boundary::periodic, origin);
}

double Grid::extent() const noexcept {
  return periodic() ? points_ * spacing_ : (points_ - 1) * spacing_;
}

double Grid::volume() const noexcept { return std::pow(extent(), dim_); }

std::array<int, 3> Grid::indices(std::size_t flat) const noexcept {
  if (dim_ == 1) return {static_cast<int>(flat), 0, 0};
  const auto n = static_cast<std::size_t>(points_);
  return {static_cast<int>(flat / (n * n)), static_cast<int>((flat / n) % n), static_cast<int>(flat % n)};
}

std::size_t Grid::flat_index(int i, int j, int k) const noexcept {
  if (dim_ == 1) return static_cast<std::size_t>(i);
  const auto n = static_cast<std::size_t>(points_);
  return (static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)) * n + static_cast<std::size_t>(k);
}

std::array<double, 3> Grid::position(std::size_t flat) const noexcept {
  const auto idx = indices(flat);
  std::array<double, 3> r{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) r[static_cast<std::size_t>(a)] = coordinate(a, idx[static_cast<std::size_t>(a)]);
  return r;
}

std::size_t Grid::stride(int axis) const noexcept {
  if (dim_ == 1) return 1;
  const auto n = static_cast<std::size_t>(points_);
  return axis == 0 ? n * n : (axis == 1 ? n : 1);
}

bool Grid::on_hull(std::size_t flat) const noexcept {
  const auto idx = indices(flat);
  for (int a = 0; a < dim_; ++a) {
    const int i = idx[static_cast<std::size_t>(a)];
    if (i == 0 || i == points_ - 1) return true;
  }
  return false;
}

double Grid::axis_factor(int index) const noexcept {
  if (!periodic() && (index == 0 || index == points_ - 1)) return 0.5;
  return 1.0;
}

double Grid::weight(std::size_t flat) const noexcept {
  const auto idx = indices(flat);
  double w = 1.0;
  for (int a = 0; a < dim_; ++a) w *= axis_factor(idx[static_cast<std::size_t>(a)]);
  return w * std::pow(spacing_, dim_);
}

Grid Grid::scaled(double length_factor) const {
  if (!(length_factor > 0.0) || !std::isfinite(length_factor)) {
    throw Error(ErrorCode::Overflow, "grid length factor is not a positive finite number");
  }
  std::array<double, 3> o = origin_;
  for (auto& c : o) c *= length_factor;
  return Grid(dim_, points_, spacing_ * length_factor, boundary_, o);
}

template <class T>
Field<T>::Field(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), T{}) {}

template <class T>
Field<T>::Field(Grid grid, std::vector<T> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::InvalidArgument, "field has " + std::to_string(values_.size()) +
                                                " values for a grid of " + std::to_string(grid_.size()) + " points");
  }
}

template class Field<double>;
template class Field<std::complex<double>>;

double integrate(const ScalarField& f) {
  const auto v = f.values();
  return weighted_sum<double>(f.grid(), [&](std::size_t p) { return v[p]; });
}

std::complex<double> integrate(const ComplexField& f) {
  const auto v = f.values();
  return weighted_sum<std::complex<double>>(f.grid(), [&](std::size_t p) { return v[p]; });
}

std::complex<double> inner_product(const ComplexField& a, const ComplexField& b) {
  if (!(a.grid() == b.grid())) throw Error(ErrorCode::InvalidArgument, "inner product of fields on different grids");
  const auto va = a.values();
  const auto vb = b.values();
  return weighted_sum<std::complex<double>>(a.grid(), [&](std::size_t p) { return std::conj(va[p]) * vb[p]; });
}

ScalarField derivative(const ScalarField& f, int axis) {
  return apply_stencil(f, axis, CentralFirst{}, d1_edge0, d1_edge1, -1.0, 1.0 / (12.0 * f.grid().spacing()));
}

ComplexField derivative(const ComplexField& f, int axis) {
  return apply_stencil(f, axis, CentralFirst{}, d1_edge0, d1_edge1, -1.0, 1.0 / (12.0 * f.grid().spacing()));
}

VectorField gradient(const ScalarField& f) {
  VectorField out{f.grid(), {}};
  out.components.reserve(static_cast<std::size_t>(f.grid().dim()));
  for (int a = 0; a < f.grid().dim(); ++a) out.components.push_back(derivative(f, a));
  return out;
}

ScalarField second_derivative(const ScalarField& f, int axis) {
  const double h = f.grid().spacing();
  return apply_stencil(f, axis, CentralSecond{}, d2_edge0, d2_edge1, 1.0, 1.0 / (12.0 * h * h));
}

ComplexField second_derivative(const ComplexField& f, int axis) {
  const double h = f.grid().spacing();
  return apply_stencil(f, axis, CentralSecond{}, d2_edge0, d2_edge1, 1.0, 1.0 / (12.0 * h * h));
}

namespace {
template <class T>
Field<T> laplacian_impl(const Field<T>& f) {
  Field<T> out = second_derivative(f, 0);
  for (int a = 1; a < f.grid().dim(); ++a) {
    const Field<T> d = second_derivative(f, a);
    auto o = out.values();
    const auto v = d.values();
    for (std::size_t p = 0; p < o.size(); ++p) o[p] += v[p];
  }
  return out;
}
}  // namespace

ScalarField laplacian(const ScalarField& f) { return laplacian_impl(f); }
ComplexField laplacian(const ComplexField& f) { return laplacian_impl(f); }

}  // namespace kelab
