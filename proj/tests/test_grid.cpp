#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

#include "kelab/errors.hpp"
#include "kelab/grid.hpp"
#include "kelab/parallel.hpp"

using namespace kelab;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField sample(const Grid& g, const std::function<double(double, double, double)>& f) {
  ScalarField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto r = g.position(i);
    out[i] = f(r[0], r[1], r[2]);
  }
  return out;
}

double max_interior_error(const ScalarField& got, const std::function<double(double)>& want, int band) {
  const Grid& g = got.grid();
  double worst = 0.0;
  for (int i = band; i < g.points_per_axis() - band; ++i) {
    worst = std::max(worst, std::abs(got[static_cast<std::size_t>(i)] - want(g.coordinate(0, i))));
  }
  return worst;
}

double periodic_sine_error(int n, bool second) {
  const double L = 2.0;
  const Grid g = Grid::periodic_box(1, n, L);
  const double k = 2.0 * pi / L;
  const ScalarField f = sample(g, [&](double x, double, double) { return std::sin(k * x); });
  const ScalarField d = second ? second_derivative(f, 0) : derivative(f, 0);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = g.coordinate(0, i);
    const double want = second ? -k * k * std::sin(k * x) : k * std::cos(k * x);
    worst = std::max(worst, std::abs(d[static_cast<std::size_t>(i)] - want));
  }
  return worst;
}

}  // namespace

TEST_CASE("grid construction rejects bad shapes") {
  CHECK_THROWS_AS(Grid(2, 16, 0.1, Boundary::open), Error);
  CHECK_THROWS_AS(Grid(3, 7, 0.1, Boundary::open), Error);
  CHECK_THROWS_AS(Grid(1, 16, 0.0, Boundary::open), Error);
  CHECK_THROWS_AS(Grid(1, 16, -1.0, Boundary::periodic), Error);
  CHECK_NOTHROW(Grid(1, 8, 1.0, Boundary::open));
}

TEST_CASE("volumes follow the boundary convention") {
  const Grid p = Grid::periodic_box(3, 16, 8.0);
  CHECK(p.spacing() == doctest::Approx(0.5));
  CHECK(p.volume() == doctest::Approx(512.0));
  const Grid o = Grid::open_box(3, 17, -4.0, 4.0);
  CHECK(o.extent() == doctest::Approx(8.0));
  CHECK(o.volume() == doctest::Approx(512.0));
}

TEST_CASE("flat indexing round-trips") {
  const Grid g = Grid::open_box(3, 9, -1.0, 1.0);
  for (std::size_t flat : {std::size_t{0}, std::size_t{1}, std::size_t{80}, std::size_t{500}, g.size() - 1}) {
    const auto ijk = g.indices(flat);
    CHECK(g.flat_index(ijk[0], ijk[1], ijk[2]) == flat);
  }
  CHECK(g.on_hull(0));
  CHECK_FALSE(g.on_hull(g.flat_index(4, 4, 4)));
}

TEST_CASE("integrate: constant on a periodic grid gives the volume") {
  const Grid g = Grid::periodic_box(3, 16, 8.0);
  ScalarField one(g, std::vector<double>(g.size(), 1.0));
  CHECK(integrate(one) == 512.0);
  CHECK(integrate(ScalarField(g)) == 0.0);
}

TEST_CASE("integrate: 3-D gaussian on [-8,8]^3 matches pi^(3/2)") {
  const Grid g = Grid::open_box(3, 64, -8.0, 8.0);
  const ScalarField f = sample(g, [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z)); });
  CHECK(std::abs(integrate(f) / std::pow(pi, 1.5) - 1.0) < 1e-6);
}

TEST_CASE("integrate is linear") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const Grid& g : {Grid::open_box(3, 12, -1.0, 2.0), Grid::periodic_box(1, 40, 3.0)}) {
    ScalarField f(g), h(g), mix(g);
    const double a = 1.7, b = -0.3;
    for (std::size_t i = 0; i < g.size(); ++i) {
      f[i] = u(rng);
      h[i] = u(rng);
      mix[i] = a * f[i] + b * h[i];
    }
    const double lhs = integrate(mix);
    const double rhs = a * integrate(f) + b * integrate(h);
    CHECK(std::abs(lhs - rhs) <= 1e-13 * (std::abs(a * integrate(f)) + std::abs(b * integrate(h))));
  }
}

TEST_CASE("complex quadrature and inner product") {
  const Grid g = Grid::periodic_box(1, 32, 2.0 * pi);
  ComplexField a(g), b(g);
  for (int i = 0; i < 32; ++i) {
    const double x = g.coordinate(0, i);
    a[static_cast<std::size_t>(i)] = std::polar(1.0, x);
    b[static_cast<std::size_t>(i)] = std::polar(1.0, 2.0 * x);
  }
  CHECK(std::abs(inner_product(a, a) - std::complex<double>(2.0 * pi)) < 1e-12);
  CHECK(std::abs(inner_product(a, b)) < 1e-12);
}

TEST_CASE("stencils are exact for low-degree polynomials on open grids") {
  const Grid g = Grid::open_box(1, 21, -1.0, 1.5);
  SUBCASE("f = x has derivative 1 everywhere") {
    const ScalarField d = derivative(sample(g, [](double x, double, double) { return x; }), 0);
    CHECK(max_interior_error(d, [](double) { return 1.0; }, 0) < 1e-12);
  }
  SUBCASE("f = x^2 has second derivative 2 in the interior") {
    const ScalarField d2 = second_derivative(sample(g, [](double x, double, double) { return x * x; }), 0);
    CHECK(max_interior_error(d2, [](double) { return 2.0; }, 2) < 1e-10);
    CHECK(max_interior_error(d2, [](double) { return 2.0; }, 0) < 1e-9);
  }
  SUBCASE("quartic: central and one-sided first-derivative rows are exact") {
    const ScalarField d = derivative(sample(g, [](double x, double, double) { return std::pow(x, 4); }), 0);
    CHECK(max_interior_error(d, [](double x) { return 4.0 * x * x * x; }, 0) < 1e-10);
  }
}

TEST_CASE("constants differentiate to exactly zero") {
  const double c = 3.7e5;
  for (const Grid& g : {Grid::periodic_box(3, 10, 2.5), Grid::open_box(3, 10, -1.0, 1.0)}) {
    const ScalarField f(g, std::vector<double>(g.size(), c));
    const VectorField grad = gradient(f);
    REQUIRE(grad.components.size() == 3);
    const ScalarField lap = laplacian(f);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (const auto& comp : grad.components) worst = std::max(worst, std::abs(comp[i]));
      worst = std::max(worst, std::abs(lap[i]));
    }
    CHECK(worst <= 1e-15 * c);
  }
}

TEST_CASE("fourth-order convergence under grid doubling") {
  const double order_first = std::log2(periodic_sine_error(32, false) / periodic_sine_error(64, false));
  const double order_second = std::log2(periodic_sine_error(32, true) / periodic_sine_error(64, true));
  CHECK(order_first >= 3.9);
  CHECK(order_second >= 3.9);
  CHECK(periodic_sine_error(64, false) < 1e-4);
}

TEST_CASE("laplacian of a plane wave") {
  const double L = 3.0;
  const int n = 32;
  const Grid g = Grid::periodic_box(3, n, L);
  const double k = 2.0 * pi / L;
  ComplexField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::polar(1.0, k * g.position(i)[1]);
  const ComplexField lap = laplacian(f);
  const double h = L / n;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(lap[i] + k * k * f[i]) / (k * k));
  // Symbol of the five-point stencil: (kh)^4 / 90 leading error.
  CHECK(worst < std::pow(k * h, 4) / 90.0 * 1.01);
  CHECK(worst > 0.0);
}

TEST_CASE("scaled grid keeps the index lattice") {
  const Grid g = Grid::open_box(3, 12, -2.0, 3.0);
  const Grid s = g.scaled(0.25);
  CHECK(s.points_per_axis() == g.points_per_axis());
  CHECK(s.spacing() == g.spacing() * 0.25);
  CHECK(s.origin()[0] == g.origin()[0] * 0.25);
  CHECK_THROWS_AS(g.scaled(0.0), Error);
  CHECK_THROWS_AS(g.scaled(std::numeric_limits<double>::infinity()), Error);
}

TEST_CASE("results do not depend on the thread count") {
  const Grid g = Grid::open_box(3, 40, -5.0, 5.0);
  const ScalarField f = sample(g, [](double x, double y, double z) { return std::exp(-(x * x + 2 * y * y + z * z)); });
  parallel::set_max_threads(1);
  const double one = integrate(f);
  const ScalarField lap1 = laplacian(f);
  parallel::set_max_threads(4);
  const double four = integrate(f);
  const ScalarField lap4 = laplacian(f);
  parallel::set_max_threads(0);
  CHECK(one == four);
  bool same = true;
  for (std::size_t i = 0; i < g.size(); ++i) same = same && lap1[i] == lap4[i];
  CHECK(same);
}
