#include "kelab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "kelab/errors.hpp"

namespace kelab {

namespace {

double finite_factor(double value, const char* what) {
  if (!std::isfinite(value) || value == 0.0) {
    throw Error(ErrorCode::Overflow, std::string(what) + " is not representable in double precision");
  }
  return value;
}

}  // namespace

ScalingParams::ScalingParams(double alpha_, double beta_, double m_, double p_)
    : alpha(alpha_), beta(beta_), m(m_), p(p_) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "alpha and beta must be positive finite numbers");
  }
  if (!std::isfinite(m) || !std::isfinite(p)) {
    throw Error(ErrorCode::InvalidArgument, "exponents m and p must be finite");
  }
}

double ScalingParams::amplitude() const { return finite_factor(std::pow(alpha, m), "alpha^m"); }

double ScalingParams::contraction() const { return finite_factor(std::pow(beta, p), "beta^p"); }

double ScalingParams::kinetic_factor() const { return amplitude() / contraction(); }

double ScalingParams::naive_tf_factor() const {
  return finite_factor(std::pow(alpha, 5.0 * m / 3.0), "alpha^(5m/3)") /
         finite_factor(std::pow(beta, 3.0 * p), "beta^(3p)");
}

double ScalingParams::electron_factor() const {
  return amplitude() / finite_factor(std::pow(beta, 3.0 * p), "beta^(3p)");
}

DensityField scale_density(const DensityField& n, const ScalingParams& s) {
  const double amp = s.amplitude();
  const double inv_contraction = finite_factor(1.0 / s.contraction(), "beta^-p");
  finite_factor(std::pow(s.beta, -3.0 * s.p), "beta^(-3p)");

  Grid grid = n.grid().scaled(inv_contraction);
  std::vector<double> values(n.values().begin(), n.values().end());
  for (double& v : values) v *= amp;
  const double electrons = n.electrons() * amp * std::pow(inv_contraction, grid.dim());
  if (!std::isfinite(electrons)) throw Error(ErrorCode::Overflow, "scaled electron count is not finite");
  return DensityField::with_electrons(ScalarField(std::move(grid), std::move(values)), electrons);
}

OrbitalSet scale_orbitals(const OrbitalSet& phi, const ScalingParams& s) {
  const double amp = s.amplitude();
  const double inv_contraction = finite_factor(1.0 / s.contraction(), "beta^-p");
  Grid grid = phi.grid().scaled(inv_contraction);
  std::vector<ComplexField> samples;
  samples.reserve(phi.count());
  for (std::size_t i = 0; i < phi.count(); ++i) {
    const auto v = phi.samples(i).values();
    samples.emplace_back(grid, std::vector<std::complex<double>>(v.begin(), v.end()));
  }
  return OrbitalSet(grid, std::move(samples), phi.occupations(), phi.electrons(),
                    phi.amplitude_squared() * amp);
}

HomogeneityExponents homogeneity_exponents(const DensityFunctional& functional, const DensityField& n,
                                           const std::vector<ScalingParams>& probe) {
  if (probe.size() < 4) throw Error(ErrorCode::InvalidArgument, "exponent fit needs at least four probes");

  Eigen::MatrixXd a(static_cast<Eigen::Index>(probe.size()), 3);
  Eigen::VectorXd y(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const ScalingParams& s = probe[static_cast<std::size_t>(i)];
    const double value = functional(scale_density(n, s));
    if (!(value > 0.0)) {
      throw Error(ErrorCode::NonPositiveValue, "functional evaluated to " + std::to_string(value));
    }
    a.row(i) << 1.0, s.m * std::log(s.alpha), s.p * std::log(s.beta);
    y[i] = std::log(value);
  }

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < 3) {
    throw Error(ErrorCode::InvalidArgument, "probe ladder must vary both m log(alpha) and p log(beta)");
  }
  const Eigen::Vector3d x = qr.solve(y);
  return {x[1], x[2]};
}

std::vector<ScalingParams> default_probe_ladder() {
  std::vector<ScalingParams> probe;
  for (double v : {0.5, 0.8, 1.25, 2.0}) probe.emplace_back(v, 1.0, 1.0, 1.0);
  for (double v : {0.5, 0.8, 1.25, 2.0}) probe.emplace_back(1.0, v, 1.0, 1.0);
  return probe;
}

std::vector<ScalingParams> standard_sweep() {
  return {
      {0.5, 0.5, -1.0, 0.5}, {0.5, 0.5, 0.5, 1.0}, {0.5, 0.5, 2.0, -1.0},
      {0.5, 2.0, 1.0, 2.0},  {0.5, 2.0, -1.0, -1.0}, {0.5, 2.0, 2.0, 0.5},
      {2.0, 0.5, 0.5, 2.0},  {2.0, 0.5, 1.0, -1.0},  {2.0, 0.5, -1.0, 1.0},
      {2.0, 2.0, 2.0, 2.0},  {2.0, 2.0, 1.0, 0.5},   {2.0, 2.0, 0.5, -1.0},
  };
}

}  // namespace kelab
