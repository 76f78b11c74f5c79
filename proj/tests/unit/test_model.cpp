#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pfmcl/model.hpp"
#include "pfmcl/spectral.hpp"

using namespace pfmcl;

namespace {
ModelParams with_angle(double theta) {
  ModelParams p;
  p.theta_s = theta;
  return p;
}
}  // namespace

TEST_CASE("double well values and symmetry") {
  ModelParams p;
  CHECK(double_well_F(1.0, p) == 0.0);
  CHECK(double_well_F(-1.0, p) == 0.0);
  CHECK(double_well_F(0.0, p) == doctest::Approx(1.0 / (4.0 * 0.05)));
  for (double v : {0.1, 0.7, 1.3, 2.0}) CHECK(double_well_F(v, p) == double_well_F(-v, p));
}

TEST_CASE("double well derivative") {
  ModelParams p;
  CHECK(f_deriv(0.0, p) == 0.0);
  CHECK(f_deriv(1.0, p) == 0.0);
  CHECK(f_deriv(-1.0, p) == 0.0);
  CHECK(f_deriv(0.5, p) == doctest::Approx(0.5 * (0.25 - 1.0) / 0.05));
  CHECK(f_deriv(0.5, p) == doctest::Approx(-7.5));
}

TEST_CASE("wall energy G and g") {
  auto p = with_angle(std::numbers::pi / 2);
  for (double v : {-1.2, -0.3, 0.0, 0.8}) {
    CHECK(std::abs(boundary_G(v, p)) < 1e-16);
    CHECK(std::abs(boundary_g(v, p)) < 1e-16);
    CHECK(std::abs(Z_of(v, p)) < 1e-16);
  }
  auto q = with_angle(64.0 * std::numbers::pi / 180.0);
  CHECK(boundary_G(1.0, q) == doctest::Approx(-(std::sqrt(2.0) / 3.0) * std::cos(64.0 * std::numbers::pi / 180.0)));
  CHECK(boundary_G(1.0, q) == doctest::Approx(-boundary_G(-1.0, q)));
  CHECK(std::abs(boundary_g(1.0, q)) < 1e-16);
  CHECK(std::abs(boundary_g(-1.0, q)) < 1e-16);
  auto r = with_angle(77.6 * std::numbers::pi / 180.0);
  CHECK(boundary_g(0.0, r) ==
        doctest::Approx(-(std::sqrt(2.0) * std::numbers::pi / 6.0) * std::cos(77.6 * std::numbers::pi / 180.0)));
}

TEST_CASE("derivatives match centered differences") {
  ModelParams p = with_angle(1.0);
  const double h = 1e-5;
  for (double v = -1.5; v <= 1.5; v += 0.1) {
    double fd = (double_well_F(v + h, p) - double_well_F(v - h, p)) / (2 * h);
    CHECK(f_deriv(v, p) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    double gd = (boundary_G(v + h, p) - boundary_G(v - h, p)) / (2 * h);
    CHECK(boundary_g(v, p) == doctest::Approx(gd).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("Z times sqrt(G + C) reproduces g") {
  ModelParams p = with_angle(0.4);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (int i = 0; i < 1000; ++i) {
    double v = U(rng);
    CHECK(std::abs(Z_of(v, p) * std::sqrt(boundary_G(v, p) + p.C()) - boundary_g(v, p)) < 1e-14);
  }
  CHECK(Z_of(1.0, p) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("parameter validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.epsilon = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ModelParams{};
  p.eta = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ModelParams{};
  p.ell = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK(ModelParams{}.C() > std::sqrt(2.0) / 3.0);
}

TEST_CASE("init_aux identities") {
  auto g = make_grid(8, 7, 10.0);
  ModelParams p = with_angle(1.1);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1.2, 1.2);
  Field phi(g);
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i) phi(j, i) = U(rng);
  AuxFields a = init_aux(phi, p);
  CHECK((a.U.nodal() + 1.0 - phi.nodal() * phi.nodal()).abs().maxCoeff() < 1e-14);
  Trace t = nodal::trace(*g, phi.nodal());
  Trace G = t.unaryExpr([&p](double v) { return boundary_G(v, p); });
  CHECK((a.W * a.W - G - p.C()).abs().maxCoeff() < 1e-14);

  Field one(g, Nodal::Ones(g->ny(), g->nx()));
  CHECK(init_aux(one, p).U.nodal().abs().maxCoeff() == 0.0);
  Field zero(g);
  AuxFields z = init_aux(zero, with_angle(std::numbers::pi / 2));
  CHECK((z.U.nodal() + 1.0).abs().maxCoeff() == 0.0);
  CHECK((z.W - std::sqrt(p.C())).abs().maxCoeff() < 1e-15);
  CHECK(z.W_top().values.size() == g->nx());
}

namespace {
// Trigonometric interpolant of row j at an arbitrary x.
double interpolate_row(const Grid& g, const Nodal& f, int j, double x) {
  FourierRows c = g.forward_x(f);
  double v = c(j, 0).real();
  for (int k = 1; k <= g.m(); ++k) {
    std::complex<double> e = std::polar(1.0, g.wavenumber(k) * x);
    v += 2.0 * (c(j, k) * e).real();
  }
  return v / g.nx();
}
}  // namespace

TEST_CASE("stripe initial condition") {
  ModelParams p;
  auto g = make_grid(128, 31, p.L_x);
  Field f = initial_phi_stripe(g, p);
  CHECK(f.nodal().abs().maxCoeff() <= 1.0);
  CHECK(f(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
  // a finer grid resolves the interfaces well enough to interpolate between nodes
  auto fine = make_grid(1024, 4, p.L_x);
  Field ff = initial_phi_stripe(fine, p);
  CHECK(interpolate_row(*fine, ff.nodal(), 1, 0.5 * p.L_x) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(interpolate_row(*fine, ff.nodal(), 1, 0.25 * p.L_x)) < 1e-9);
  CHECK(std::abs(interpolate_row(*fine, ff.nodal(), 1, 0.75 * p.L_x)) < 1e-9);
  for (int j = 1; j < g->ny(); ++j) CHECK((f.nodal().row(j) - f.nodal().row(0)).abs().maxCoeff() == 0.0);
}

TEST_CASE("Couette initial velocity") {
  ModelParams p;
  p.u_w_top = 0.7;
  p.u_w_bottom = -0.7;
  auto g = make_grid(4, 6, p.L_x);
  VectorField u = initial_velocity_couette(g, p);
  CHECK(u.y.nodal().abs().maxCoeff() == 0.0);
  CHECK(u.x(g->ny() - 1, 0) == doctest::Approx(0.7));
  CHECK(u.x(0, 3) == doctest::Approx(-0.7));
  CHECK(std::abs(u.x(3, 2)) < 1e-15);  // y_3 = 0 for n = 6
  p.u_w_top = 0.2;
  p.u_w_bottom = -0.2;
  VectorField v = initial_velocity_couette(g, p);
  for (int j = 0; j < g->ny(); ++j) CHECK(v.x(j, 0) == doctest::Approx(0.2 * g->y()[j]));
  // divergence-free
  Nodal div = nodal::dx(*g, v.x.nodal()) + nodal::dy(*g, v.y.nodal());
  CHECK(div.abs().maxCoeff() < 1e-13);
}

TEST_CASE("drop initial condition") {
  ModelParams p;
  auto g = make_grid(64, 31, p.L_x);
  Field f = initial_phi_drop(g, p, 0.5 * p.L_x, 0.5);
  // node nearest to the drop center on the bottom wall
  int ic = static_cast<int>(std::lround(0.5 * p.L_x / g->dx()));
  CHECK(f(0, ic) > 0.99);
  CHECK(f(0, 0) < -0.999999);
  CHECK(f(g->ny() - 1, ic) < -0.999999);
  CHECK(f.nodal().abs().maxCoeff() <= 1.0);
  // interface locus: value 0 at distance = radius
  ModelParams q = p;
  auto h = make_grid(4, 4, 10.0);
  double cx = h->x()[4] - 0.5;  // node 4 sits 0.5 to the right of the center
  Field d = initial_phi_drop(h, q, cx, 0.5);
  CHECK(std::abs(d(0, 4)) < 1e-14);
  CHECK_THROWS_AS(initial_phi_drop(g, p, 5.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(initial_phi_drop(g, p, 5.0, 0.0), std::invalid_argument);
  Field m = initial_phi_drop(g, p, 0.5 * p.L_x, 0.5, -1.0);
  CHECK((m.nodal() + f.nodal()).abs().maxCoeff() == 0.0);
}
