#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "kelab/errors.hpp"
#include "kelab/functionals.hpp"
#include "kelab/scaling.hpp"

using namespace kelab;

namespace {

DensityField gaussian(double electrons = 1.0, double gamma = 1.0, int points = 32) {
  const DensityModel model(DensityFamily::gaussian, electrons, gamma);
  return sample_density(model, default_grid(model, 3, points));
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Random tuples with |log alpha^m|, |log beta^p| <= 5.
std::vector<ScalingParams> random_tuples(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_base(-2.0, 2.0);
  std::uniform_real_distribution<double> exponent(-2.5, 2.5);
  std::vector<ScalingParams> out;
  for (int i = 0; i < count; ++i) {
    out.emplace_back(std::exp(log_base(rng)), std::exp(log_base(rng)), exponent(rng), exponent(rng));
  }
  return out;
}

}  // namespace

TEST_CASE("ScalingParams validation and factors") {
  CHECK_THROWS_AS(ScalingParams(0.0, 1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(ScalingParams(1.0, -2.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(ScalingParams(1.0, 1.0, std::nan(""), 1.0), Error);
  const ScalingParams s(2.0, 2.0, 1.0, 1.0);
  CHECK(s.kinetic_factor() == 1.0);
  CHECK(s.naive_tf_factor() == doctest::Approx(std::pow(2.0, -4.0 / 3.0)).epsilon(1e-15));
  CHECK(s.electron_factor() == 0.25);
  try {
    ScalingParams(1e300, 1.0, 5.0, 1.0).amplitude();
    FAIL("expected Overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Overflow);
  }
}

TEST_CASE("identity scaling leaves the field unchanged") {
  const DensityField n = gaussian();
  const DensityField s = scale_density(n, ScalingParams::identity());
  CHECK(s.grid() == n.grid());
  bool same = true;
  for (std::size_t i = 0; i < n.values().size(); ++i) same = same && s.values()[i] == n.values()[i];
  CHECK(same);
  CHECK(s.electrons() == n.electrons());
}

TEST_CASE("pure amplitude scaling of a uniform box") {
  const DensityModel model(DensityFamily::uniform_box, 1.0, 1.0);
  const DensityField n = sample_density(model, default_grid(model, 3, 16));
  const DensityField s = scale_density(n, {2.0, 3.7, 1.0, 0.0});
  CHECK(s.grid() == n.grid());
  for (double v : s.values()) REQUIRE(v == 2.0);
}

TEST_CASE("scaled electron count follows alpha^m / beta^(3p)") {
  const DensityField n = gaussian(1.0, 1.0, 64);
  const DensityField s = scale_density(n, {2.0, 2.0, 1.0, 1.0});
  CHECK(std::abs(integrate(s.field()) - 0.25) < 1e-10);
  CHECK(rel(s.electrons(), n.electrons() * 0.25) < 1e-15);
}

TEST_CASE("scaled samples equal alpha^m n(beta^p r) at the scaled points") {
  const DensityModel model(DensityFamily::gaussian, 1.0, 1.0);
  const DensityField n = sample_density(model, default_grid(model, 3, 24));
  const ScalingParams sp(1.5, 0.7, 2.0, -1.5);
  const DensityField s = scale_density(n, sp);
  const double amp = sp.amplitude();
  const double contraction = sp.contraction();
  double worst = 0.0;
  for (std::size_t i = 0; i < s.values().size(); i += 97) {
    const auto r = s.grid().position(i);
    const double radius = contraction * std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    worst = std::max(worst, std::abs(s.values()[i] - amp * model.value_at(radius, 3)));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("overflowing factors are reported") {
  const DensityField n = gaussian();
  try {
    scale_density(n, {10.0, 1.0, 400.0, 0.0});
    FAIL("expected Overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Overflow);
  }
  CHECK_THROWS_AS(scale_density(n, {1.0, 10.0, 0.0, 120.0}), Error);
}

TEST_CASE("discrete vW and TF homogeneity are exact on co-scaled grids") {
  const DensityField n = gaussian(1.3, 0.9, 32);
  const double vw = t_vw(n).value;
  const double tf = t_tf(n).value;
  auto tuples = standard_sweep();
  const auto extra = random_tuples(20, 11);
  tuples.insert(tuples.end(), extra.begin(), extra.end());
  for (const auto& s : tuples) {
    const DensityField scaled = scale_density(n, s);
    CHECK(rel(t_vw(scaled).value / vw, s.kinetic_factor()) <= 1e-12);
    CHECK(rel(t_tf(scaled).value / tf, s.naive_tf_factor()) <= 1e-12);
  }
}

TEST_CASE("scaling composes when exponents match") {
  const DensityField n = gaussian();
  const ScalingParams a(1.7, 0.6, 0.5, 2.0);
  const ScalingParams b(0.4, 1.9, 0.5, 2.0);
  const ScalingParams ab(1.7 * 0.4, 0.6 * 1.9, 0.5, 2.0);
  const DensityField twice = scale_density(scale_density(n, a), b);
  const DensityField once = scale_density(n, ab);
  CHECK(rel(twice.grid().spacing(), once.grid().spacing()) < 1e-14);
  double worst = 0.0;
  for (std::size_t i = 0; i < n.values().size(); ++i) {
    worst = std::max(worst, std::abs(twice.values()[i] - once.values()[i]) / once.max_value());
  }
  CHECK(worst < 1e-14);
  CHECK(rel(t_vw(twice).value, t_vw(once).value) < 1e-13);
}

TEST_CASE("scaling preserves nonnegativity") {
  const DensityField n = gaussian();
  for (const auto& s : random_tuples(10, 3)) {
    const DensityField scaled = scale_density(n, s);
    CHECK(*std::min_element(scaled.values().begin(), scaled.values().end()) >= 0.0);
  }
}

TEST_CASE("scale_orbitals") {
  const DensityField n = gaussian(2.0);
  const OrbitalSet phi = doubly_occupied_orbital_set(n);

  SUBCASE("identity") {
    const OrbitalSet same = scale_orbitals(phi, ScalingParams::identity());
    CHECK(same.grid() == phi.grid());
    CHECK(same.amplitude_squared() == phi.amplitude_squared());
    CHECK(same.orbital(0).values()[100] == phi.orbital(0).values()[100]);
  }
  SUBCASE("orbital values scale by alpha^(m/2)") {
    const ComplexField before = phi.orbital(0);
    for (const auto& [sp, factor] : {std::pair{ScalingParams(4.0, 1.0, 1.0, 0.0), 2.0},
                                     std::pair{ScalingParams(4.0, 1.0, 0.5, 0.0), std::sqrt(2.0)}}) {
      const OrbitalSet s = scale_orbitals(phi, sp);
      const ComplexField after = s.orbital(0);
      double worst = 0.0;
      for (std::size_t i = 0; i < before.size(); ++i) {
        worst = std::max(worst, std::abs(after[i] - factor * before[i]) / std::abs(before[i]));
      }
      CHECK(worst < 1e-15);
      CHECK(s.occupations() == phi.occupations());
    }
  }
  SUBCASE("induced density equals scale_density sample for sample") {
    const ScalingParams s(2.0, 3.0, 1.0, 1.0);
    const DensityField via_orbitals = scale_orbitals(phi, s).density();
    const DensityField via_density = scale_density(phi.density(), s);
    CHECK(via_orbitals.grid() == via_density.grid());
    double worst = 0.0;
    for (std::size_t i = 0; i < via_density.values().size(); ++i) {
      worst = std::max(worst, std::abs(via_orbitals.values()[i] - via_density.values()[i]));
    }
    CHECK(worst == 0.0);
  }
  SUBCASE("orbital kinetic energy obeys the kinetic factor") {
    const double base = t_s_orbital(phi).value;
    for (const auto& s : standard_sweep()) {
      CHECK(rel(t_s_orbital(scale_orbitals(phi, s)).value / base, s.kinetic_factor()) <= 1e-12);
    }
  }
}

TEST_CASE("homogeneity exponents") {
  const DensityField n = gaussian();
  const auto probe = default_probe_ladder();
  REQUIRE(probe.size() == 8);

  const auto vw = homogeneity_exponents([](const DensityField& d) { return t_vw(d).value; }, n, probe);
  CHECK(std::abs(vw.slope_alpha - 1.0) < 1e-6);
  CHECK(std::abs(vw.slope_beta + 1.0) < 1e-6);

  const auto tf = homogeneity_exponents([](const DensityField& d) { return t_tf(d).value; }, n, probe);
  CHECK(std::abs(tf.slope_alpha - 5.0 / 3.0) < 1e-6);
  CHECK(std::abs(tf.slope_beta + 3.0) < 1e-6);

  const auto count = homogeneity_exponents([](const DensityField& d) { return integrate(d.field()); }, n, probe);
  CHECK(std::abs(count.slope_alpha - 1.0) < 1e-6);
  CHECK(std::abs(count.slope_beta + 3.0) < 1e-6);

  SUBCASE("bad probes") {
    CHECK_THROWS_AS(homogeneity_exponents([](const DensityField&) { return 1.0; }, n,
                                          {probe.begin(), probe.begin() + 3}),
                    Error);
    std::vector<ScalingParams> alpha_only(probe.begin(), probe.begin() + 4);
    CHECK_THROWS_AS(homogeneity_exponents([](const DensityField&) { return 1.0; }, n, alpha_only), Error);
    try {
      homogeneity_exponents([](const DensityField&) { return 0.0; }, n, probe);
      FAIL("expected NonPositiveValue");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonPositiveValue);
    }
  }
}

TEST_CASE("standard sweep covers the acceptance grid") {
  const auto sweep = standard_sweep();
  CHECK(sweep.size() == 12);
  for (const auto& s : sweep) {
    CHECK((s.alpha == 0.5 || s.alpha == 2.0));
    CHECK((s.beta == 0.5 || s.beta == 2.0));
    for (double e : {s.m, s.p}) CHECK((e == -1.0 || e == 0.5 || e == 1.0 || e == 2.0));
  }
}
