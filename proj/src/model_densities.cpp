#include "kelab/model_densities.hpp"

#include <algorithm>
#include <cmath>

#include "kelab/constants.hpp"
#include "kelab/errors.hpp"

namespace kelab {

namespace {

constexpr double boundary_decay = 1e-12;

void check_dim(int dim) {
  if (dim != 1 && dim != 3) throw Error(ErrorCode::InvalidArgument, "dimension must be 1 or 3");
}

}  // namespace

std::string to_string(DensityFamily family) {
  switch (family) {
    case DensityFamily::gaussian: return "gaussian";
    case DensityFamily::hydrogenic_1s: return "hydrogenic";
    case DensityFamily::uniform_box: return "uniform";
  }
  return "unknown";
}

DensityFamily parse_family(const std::string& name) {
  if (name == "gaussian") return DensityFamily::gaussian;
  if (name == "hydrogenic" || name == "hydrogenic_1s") return DensityFamily::hydrogenic_1s;
  if (name == "uniform" || name == "uniform_box") return DensityFamily::uniform_box;
  throw Error(ErrorCode::InvalidArgument, "unknown density family '" + name + "'");
}

DensityModel::DensityModel(DensityFamily family_, double electrons_, double width_)
    : family(family_), electrons(electrons_), width(width_) {
  if (!(electrons > 0.0) || !std::isfinite(electrons)) {
    throw Error(ErrorCode::InvalidArgument, "electron count must be positive");
  }
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw Error(ErrorCode::InvalidArgument, "width parameter must be positive");
  }
}

double DensityModel::value_at(double radius, int dim) const {
  check_dim(dim);
  switch (family) {
    case DensityFamily::gaussian:
      return electrons * std::pow(width / pi, 0.5 * dim) * std::exp(-width * radius * radius);
    case DensityFamily::hydrogenic_1s: {
      const double norm = dim == 3 ? width * width * width / pi : width;
      return electrons * norm * std::exp(-2.0 * width * radius);
    }
    case DensityFamily::uniform_box:
      return electrons / std::pow(width, dim);
  }
  return 0.0;
}

double DensityModel::peak(int dim) const { return value_at(0.0, dim); }

DensityField::DensityField(ScalarField field) : DensityField(std::move(field), 0.0, 0.0) {
  electrons_ = integrate(field_);
  for (double v : field_.values()) max_ = std::max(max_, v);
}

DensityField::DensityField(ScalarField field, double electrons, double max_value)
    : field_(std::move(field)), electrons_(electrons), max_(max_value) {
  for (double v : field_.values()) {
    if (!(v >= 0.0)) throw Error(ErrorCode::NegativeDensity, "density samples must be nonnegative and finite");
  }
}

DensityField DensityField::with_electrons(ScalarField field, double electrons) {
  DensityField d(std::move(field));
  const double scale = std::max(std::abs(electrons), std::abs(d.electrons_));
  if (std::abs(d.electrons_ - electrons) > floor_tolerance * scale) {
    throw Error(ErrorCode::InvalidArgument, "recorded electron count disagrees with quadrature");
  }
  d.electrons_ = electrons;
  return d;
}

Grid default_grid(const DensityModel& model, int dim, int points_per_axis) {
  check_dim(dim);
  switch (model.family) {
    case DensityFamily::gaussian: {
      const double half = 8.0 / std::sqrt(model.width);
      return Grid::open_box(dim, points_per_axis, -half, half);
    }
    case DensityFamily::hydrogenic_1s: {
      const double half = 16.0 / model.width;
      Grid g = Grid::open_box(dim, points_per_axis, -half, half);
      if (points_per_axis % 2 == 1) {
        // odd counts put a point on the cusp
        const double shift = -half + 0.5 * g.spacing();
        return Grid(dim, points_per_axis, g.spacing(), Boundary::open, {shift, shift, shift});
      }
      return g;
    }
    case DensityFamily::uniform_box:
      return Grid::periodic_box(dim, points_per_axis, model.width);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown density family");
}

DensityField sample_density(const DensityModel& model, const Grid& grid) {
  const int dim = grid.dim();
  if (model.family == DensityFamily::uniform_box) {
    if (!grid.periodic()) {
      throw Error(ErrorCode::WrongBoundary, "uniform_box density requires a periodic grid");
    }
    if (std::abs(grid.extent() - model.width) > 1e-12 * model.width) {
      throw Error(ErrorCode::InvalidArgument, "periodic grid extent does not match the box edge");
    }
    return DensityField(ScalarField(grid, std::vector<double>(grid.size(), model.peak(dim))));
  }

  std::vector<double> values(grid.size());
  double hull_max = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto r = grid.position(p);
    const double radius = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    values[p] = model.value_at(radius, dim);
    if (grid.on_hull(p)) hull_max = std::max(hull_max, values[p]);
  }
  if (hull_max > boundary_decay * model.peak(dim)) {
    throw Error(ErrorCode::DomainTooSmall, to_string(model.family) + " density at the grid hull is " +
                                               std::to_string(hull_max / model.peak(dim)) + " of its peak");
  }
  return DensityField(ScalarField(grid, std::move(values)));
}

double analytic_t_vw(const DensityModel& model, int dim) {
  check_dim(dim);
  switch (model.family) {
    case DensityFamily::gaussian:
      // |grad n|^2 / (8 n) = gamma^2 r^2 n / 2 and <r^2> = dim / (2 gamma)
      return model.electrons * dim * model.width / 4.0;
    case DensityFamily::hydrogenic_1s:
      // |grad n|^2 / (8 n) = Z^2 n / 2
      return model.electrons * model.width * model.width / 2.0;
    case DensityFamily::uniform_box:
      return 0.0;
  }
  return 0.0;
}

double analytic_t_tf(const DensityModel& model, int dim) {
  check_dim(dim);
  const double n53 = std::pow(model.electrons, 5.0 / 3.0);
  switch (model.family) {
    case DensityFamily::gaussian:
      return thomas_fermi_constant * n53 * std::pow(model.width / pi, dim / 3.0) * std::pow(0.6, 0.5 * dim);
    case DensityFamily::hydrogenic_1s: {
      const double z = model.width;
      if (dim == 3) {
        // (N Z^3/pi)^(5/3) * 4 pi * 2 / (10 Z / 3)^3
        return thomas_fermi_constant * 0.216 * n53 * z * z * std::pow(pi, -2.0 / 3.0);
      }
      return thomas_fermi_constant * 0.6 * n53 * std::pow(z, 2.0 / 3.0);
    }
    case DensityFamily::uniform_box: {
      const double volume = std::pow(model.width, dim);
      return thomas_fermi_constant * std::pow(model.electrons / volume, 5.0 / 3.0) * volume;
    }
  }
  return 0.0;
}

}  // namespace kelab
