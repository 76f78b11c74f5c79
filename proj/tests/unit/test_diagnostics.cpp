#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pfmcl/diagnostics.hpp"
#include "pfmcl/spectral.hpp"
#include "pfmcl/stepper.hpp"

using namespace pfmcl;

namespace {

Field constant(const GridPtr& g, double v) { return Field(g, Nodal::Constant(g->ny(), g->nx(), v)); }

VectorField zero_velocity(const GridPtr& g) { return {Field(g), Field(g, YSpace::Dirichlet)}; }

// composite Simpson rule on [a, b] with an even number of panels
template <class F>
double simpson(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("original energy: uniform states") {
  auto g = make_grid(8, 6, 10.0);
  ModelParams p;
  p.theta_s = std::numbers::pi / 2;
  CHECK(std::abs(energy_original(*g, p, zero_velocity(g), constant(g, 1.0))) < 1e-12);
  ModelParams q;  // theta_s = 64 degrees, G(0) = 0 anyway
  CHECK(energy_original(*g, q, zero_velocity(g), constant(g, 0.0)) ==
        doctest::Approx(q.lambda * 2.0 * q.L_x / (4.0 * q.epsilon)).epsilon(1e-13));

  // kinetic part alone
  VectorField u = zero_velocity(g);
  u.x.nodal().setConstant(0.5);
  CHECK(energy_original(*g, p, u, constant(g, 1.0)) == doctest::Approx(0.5 * 0.25 * 2.0 * p.L_x));
}

TEST_CASE("original energy of the stripe against a 1D quadrature oracle") {
  ModelParams p;
  p.theta_s = std::numbers::pi / 2;
  auto g = make_grid(512, 4, p.L_x);
  Field phi = initial_phi_stripe(g, p);
  const double a = 1.0 / (std::sqrt(2.0) * p.epsilon), L = p.L_x;
  auto density = [&](double x) {
    double s = 0.25 * L - std::abs(x - 0.5 * L);
    double t = std::tanh(a * s);
    double d = a * (1.0 - t * t);  // |d phi / dx|
    double q = t * t - 1.0;
    return 0.5 * p.epsilon * d * d + q * q / (4.0 * p.epsilon);
  };
  // the profile has kinks at x = 0.5 L and x = 0 (mod L); integrate piecewise
  double line = simpson(density, 0.0, 0.5 * L, 200000) + simpson(density, 0.5 * L, L, 200000);
  double oracle = p.lambda * 2.0 * line;
  CHECK(energy_original(*g, p, zero_velocity(g), phi) == doctest::Approx(oracle).epsilon(1e-9));
  // and close to four flat interfaces of tension 2 sqrt(2)/3
  CHECK(oracle == doctest::Approx(p.lambda * 4.0 * 2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-6));
}

TEST_CASE("IEQ energy at t = 0 and for a wetting state") {
  auto g = make_grid(32, 9, 10.0);
  ModelParams p;
  StepContext ctx(g, p, SchemeConfig{});
  State s = make_initial_state(g, p, initial_phi_stripe(g, p), initial_velocity_couette(g, p));
  for (Scheme sc : {Scheme::CN, Scheme::BDF2})
    CHECK(energy_ieq(s, p, sc, 0.01) == doctest::Approx(energy_original(s, p)).epsilon(1e-12));
  CHECK(std::abs(u_gap(s)) < 1e-12);

  State one = make_initial_state(g, p, constant(g, 1.0), zero_velocity(g));
  double wall = p.lambda * boundary_G(1.0, p) * 2.0 * p.L_x;
  CHECK(energy_ieq(one, p, Scheme::CN, 0.01) == doctest::Approx(wall).epsilon(1e-12));
  CHECK(energy_quadratic(*g, p, one.cur.u, one.cur.phi, one.cur.U, one.cur.W) ==
        doctest::Approx(wall).epsilon(1e-12));
}

TEST_CASE("pressure contribution scales with dt squared") {
  auto g = make_grid(16, 8, 10.0);
  ModelParams p;
  State s = make_initial_state(g, p, constant(g, 1.0), zero_velocity(g));
  s.has_prev = true;
  s.prev = s.cur;
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i)
      s.cur.p(j, i) = std::cos(2 * std::numbers::pi * g->x()[i] / p.L_x) * g->y()[j] * g->y()[j];
  const double base = energy_quadratic(*g, p, s.cur.u, s.cur.phi, s.cur.U, s.cur.W);
  const double gp = pressure_gradient_sq(*g, s.cur.p.nodal());
  CHECK(gp > 0.0);
  for (Scheme sc : {Scheme::CN, Scheme::BDF2}) {
    double e1 = energy_ieq(s, p, sc, 0.01) - base;
    double e2 = energy_ieq(s, p, sc, 0.02) - base;
    CHECK(e2 == doctest::Approx(4.0 * e1).epsilon(1e-12));
  }
  CHECK(energy_ieq(s, p, Scheme::CN, 0.1) - base == doctest::Approx(0.01 / 8.0 * gp));
  CHECK(energy_ieq(s, p, Scheme::BDF2, 0.1) - base == doctest::Approx(0.01 / 3.0 * gp));
}

TEST_CASE("volume, u_gap and L2 error") {
  auto g = make_grid(8, 6, 10.0);
  CHECK(volume(constant(g, 1.0)) == doctest::Approx(20.0));
  Field a = constant(g, 0.3);
  CHECK(l2_error(a, a) == 0.0);
  CHECK(l2_error(a, constant(g, 0.0)) == doctest::Approx(0.3 * std::sqrt(20.0)));
  CHECK(l2_norm(a) == doctest::Approx(0.3 * std::sqrt(20.0)));
  auto h = make_grid(8, 7, 10.0);
  CHECK_THROWS_AS(l2_error(a, constant(h, 0.3)), std::invalid_argument);
  CHECK(to_string(scheme_from_string("bdf2")) == "bdf2");
  CHECK_THROWS_AS(scheme_from_string("rk4"), std::invalid_argument);
}

TEST_CASE("energy law residual is zero for a stationary state") {
  auto g = make_grid(8, 7, 10.0);
  ModelParams p;
  for (Scheme sc : {Scheme::CN, Scheme::BDF2}) {
    SchemeConfig c;
    c.scheme = sc;
    c.solver_tol = 1e-12;
    StepContext ctx(g, p, c);
    State s = make_initial_state(g, p, constant(g, 1.0), zero_velocity(g));
    DiagnosticsRecord r0 = initial_record(ctx, s);
    StepResult a = advance(ctx, s);
    StepResult b = advance(ctx, a.state);
    CHECK(std::abs(energy_law_check(a.record, b.record, sc, c.dt)) < 1e-12 * std::abs(r0.E_ieq));
    CHECK(b.record.dissipation.total() == doctest::Approx(0.0).scale(1.0));
    const Dissipation& d = b.record.dissipation;
    CHECK(d.mu >= 0.0);
    CHECK(d.viscous >= 0.0);
    CHECK(d.phidot >= 0.0);
    CHECK(d.slip >= 0.0);
  }
}
