#include "kelab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kelab/constants.hpp"
#include "kelab/errors.hpp"

namespace kelab {

namespace {

std::string describe(const Grid& g) {
  std::ostringstream out;
  out << "grid=" << g.points_per_axis() << "^" << g.dim() << (g.periodic() ? " periodic" : " open")
      << " h=" << g.spacing();
  return out.str();
}

EnergyResult finished(double value, FunctionalKind kind, std::string descriptor) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::Overflow, to_string(kind) + " energy is not finite");
  }
  return {value, kind, std::move(descriptor)};
}

}  // namespace

OrbitalSet::OrbitalSet(Grid grid, std::vector<ComplexField> samples, std::vector<double> occupations,
                       double electrons, double amplitude_squared)
    : grid_(std::move(grid)),
      samples_(std::move(samples)),
      occupations_(std::move(occupations)),
      electrons_(electrons),
      amplitude_squared_(amplitude_squared) {
  if (samples_.empty()) throw Error(ErrorCode::InvalidArgument, "orbital set is empty");
  if (samples_.size() != occupations_.size()) {
    throw Error(ErrorCode::InvalidArgument, "one occupation per orbital is required");
  }
  if (!(electrons_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "electron count must be positive");
  if (!(amplitude_squared_ > 0.0) || !std::isfinite(amplitude_squared_)) {
    throw Error(ErrorCode::Overflow, "orbital amplitude factor is not a positive finite number");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!(samples_[i].grid() == grid_)) throw Error(ErrorCode::InvalidArgument, "orbital on a foreign grid");
    const double occ = occupations_[i];
    if (!(occ >= 0.0 && occ <= 2.0)) throw Error(ErrorCode::InvalidArgument, "occupations must lie in [0, 2]");
    total += occ;
  }
  if (std::abs(total - electrons_) > 1e-10 * electrons_) {
    throw Error(ErrorCode::InvalidArgument, "occupations do not sum to the electron count");
  }
}

ComplexField OrbitalSet::orbital(std::size_t i) const {
  ComplexField out = samples_.at(i);
  const double amp = std::sqrt(amplitude_squared_);
  for (auto& v : out.values()) v *= amp;
  return out;
}

std::complex<double> OrbitalSet::overlap(std::size_t i, std::size_t j) const {
  return amplitude_squared_ * inner_product(samples_.at(i), samples_.at(j));
}

DensityField OrbitalSet::density() const {
  std::vector<double> values(grid_.size(), 0.0);
  for (std::size_t p = 0; p < values.size(); ++p) {
    double sum = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) sum += occupations_[i] * std::norm(samples_[i][p]);
    values[p] = amplitude_squared_ * sum;
  }
  return DensityField(ScalarField(grid_, std::move(values)));
}

double OrbitalSet::orthogonality_defect() const {
  double worst = 0.0;
  std::vector<double> norms(count());
  for (std::size_t i = 0; i < count(); ++i) norms[i] = overlap(i, i).real();
  for (std::size_t i = 0; i < count(); ++i) {
    for (std::size_t j = i + 1; j < count(); ++j) {
      const double scale = std::sqrt(norms[i] * norms[j]);
      const double defect = scale > 0.0 ? std::abs(overlap(i, j)) / scale : std::abs(overlap(i, j));
      worst = std::max(worst, defect);
    }
  }
  return worst;
}

double OrbitalSet::normalization_defect() const {
  const double target = density().electrons() / electrons_;
  double worst = 0.0;
  for (std::size_t i = 0; i < count(); ++i) {
    worst = std::max(worst, std::abs(overlap(i, i).real() - target) / target);
  }
  return worst;
}

void OrbitalSet::check_orthogonality(double tolerance) const {
  const double defect = orthogonality_defect();
  if (defect > tolerance) {
    throw Error(ErrorCode::OrthogonalityViolation,
                "orbital overlap " + std::to_string(defect) + " exceeds " + std::to_string(tolerance));
  }
}

std::string to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::vw: return "vW";
    case FunctionalKind::tf: return "TF";
    case FunctionalKind::ks_orbital: return "KS_orbital";
    case FunctionalKind::gas_discrete: return "gas_discrete";
    case FunctionalKind::gas_continuum: return "gas_continuum";
  }
  return "unknown";
}

EnergyResult t_vw(const DensityField& n) {
  if (!(n.max_value() > 0.0)) throw Error(ErrorCode::EmptyDensity, "von Weizsacker energy of a zero density");
  const Grid& g = n.grid();
  const double floor = vw_density_floor * n.max_value();
  const auto values = n.values();

  ScalarField grad_sq(g);
  auto acc = grad_sq.values();
  for (int axis = 0; axis < g.dim(); ++axis) {
    const ScalarField d = derivative(n.field(), axis);
    const auto dv = d.values();
    for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += dv[p] * dv[p];
  }
  for (std::size_t p = 0; p < acc.size(); ++p) acc[p] /= std::max(values[p], floor);
  return finished(integrate(grad_sq) / 8.0, FunctionalKind::vw, describe(g));
}

EnergyResult t_tf(const DensityField& n) {
  ScalarField integrand(n.grid());
  auto out = integrand.values();
  const auto values = n.values();
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = std::pow(values[p], 5.0 / 3.0);
  return finished(thomas_fermi_constant * integrate(integrand), FunctionalKind::tf, describe(n.grid()));
}

EnergyResult t_s_orbital(const OrbitalSet& phi) {
  phi.check_orthogonality();
  double total = 0.0;
  for (std::size_t i = 0; i < phi.count(); ++i) {
    const ComplexField& u = phi.samples(i);
    const ComplexField lap = laplacian(u);
    ScalarField integrand(phi.grid());
    auto out = integrand.values();
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = (std::conj(u[p]) * lap[p]).real();
    total += phi.occupations()[i] * integrate(integrand);
  }
  return finished(-0.5 * phi.amplitude_squared() * total, FunctionalKind::ks_orbital, describe(phi.grid()));
}

EnergyResult t_s_orbital_gradient_form(const OrbitalSet& phi) {
  phi.check_orthogonality();
  double total = 0.0;
  for (std::size_t i = 0; i < phi.count(); ++i) {
    const ComplexField& u = phi.samples(i);
    ScalarField integrand(phi.grid());
    auto out = integrand.values();
    for (int axis = 0; axis < phi.grid().dim(); ++axis) {
      const ComplexField d = derivative(u, axis);
      for (std::size_t p = 0; p < out.size(); ++p) out[p] += std::norm(d[p]);
    }
    total += phi.occupations()[i] * integrate(integrand);
  }
  return finished(0.5 * phi.amplitude_squared() * total, FunctionalKind::ks_orbital, describe(phi.grid()));
}

OrbitalSet doubly_occupied_orbital_set(const DensityField& n) {
  std::vector<std::complex<double>> values(n.grid().size());
  const auto v = n.values();
  for (std::size_t p = 0; p < values.size(); ++p) values[p] = std::sqrt(0.5 * v[p]);
  std::vector<ComplexField> orbitals;
  orbitals.emplace_back(n.grid(), std::move(values));
  return OrbitalSet(n.grid(), std::move(orbitals), {2.0}, 2.0);
}

std::pair<EnergyResult, EnergyResult> vw_from_orbital_identity(const DensityField& n) {
  return {t_vw(n), t_s_orbital(doubly_occupied_orbital_set(n))};
}

}  // namespace kelab
