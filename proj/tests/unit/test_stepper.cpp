#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pfmcl/spectral.hpp"
#include "pfmcl/stepper.hpp"
#include "scheme_residual.hpp"

using namespace pfmcl;

namespace {

SchemeConfig config(Scheme s, double dt, double tol = 1e-10) {
  SchemeConfig c;
  c.scheme = s;
  c.dt = dt;
  c.solver_tol = tol;
  return c;
}

ModelParams sheared(double uw) {
  ModelParams p;
  p.u_w_top = uw;
  p.u_w_bottom = -uw;
  p.theta_s = 77.6 * std::numbers::pi / 180.0;
  return p;
}

State stripe_state(const GridPtr& g, const ModelParams& p) {
  return make_initial_state(g, p, initial_phi_stripe(g, p), initial_velocity_couette(g, p));
}

// slip-Couette profile balancing the Navier condition at both walls
VectorField slip_couette(const GridPtr& g, const ModelParams& p, double u0) {
  VectorField u{Field(g), Field(g, YSpace::Dirichlet)};
  const double a = p.ell * u0 / (1.0 + p.ell);
  for (int j = 0; j < g->ny(); ++j) u.x.nodal().row(j).setConstant(a * g->y()[j]);
  return u;
}

double max_diff(const Nodal& a, const Nodal& b) { return (a - b).abs().maxCoeff(); }

}  // namespace

TEST_CASE("extrapolation of the frozen levels") {
  CHECK(extrapolate_star(3.0, 1.0, StarKind::Half) == doctest::Approx(4.0));
  CHECK(extrapolate_star(3.0, 1.0, StarKind::Full) == doctest::Approx(5.0));
  CHECK(extrapolate_star(2.0, 2.0, StarKind::Half) == doctest::Approx(2.0));
  Nodal a = Nodal::Constant(3, 5, 1.0), b = Nodal::Constant(3, 5, -1.0);
  CHECK(extrapolate_star(a, b, StarKind::Full).maxCoeff() == doctest::Approx(3.0));
  CHECK(extrapolate_star(a, b, StarKind::Half).minCoeff() == doctest::Approx(2.0));
}

TEST_CASE("skew convection: transport of a wave and zero self-work") {
  auto g = make_grid(16, 12, 2.0 * std::numbers::pi);
  const GridPtr& gp = g;
  VectorField u{Field(gp), Field(gp, YSpace::Dirichlet)};
  VectorField v{Field(gp), Field(gp, YSpace::Dirichlet)};
  u.x.nodal().setConstant(0.7);
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i) v.x(j, i) = std::sin(2.0 * g->x()[i]);
  VectorField b = skew_convection_B(u, v);
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i)
      CHECK(b.x(j, i) == doctest::Approx(1.4 * std::cos(2.0 * g->x()[i])).epsilon(1e-10));
  CHECK(b.y.nodal().abs().maxCoeff() < 1e-12);

  // (B(u, v), v) = 0 for a compressible u with u_y = 0 on the walls
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i) {
      double x = g->x()[i], y = g->y()[j];
      u.x(j, i) = std::cos(x) * y + 0.3 * y * y;
      u.y(j, i) = std::sin(2 * x) * (1 - y * y);
      v.x(j, i) = std::exp(0.3 * y) * std::sin(x + 0.4);
      v.y(j, i) = std::cos(3 * x) * (1 - y * y) * y;
    }
  b = skew_convection_B(u, v);
  double work = nodal::inner(*g, b.x.nodal(), v.x.nodal()) + nodal::inner(*g, b.y.nodal(), v.y.nodal());
  CHECK(std::abs(work) < 1e-12);
}

TEST_CASE("step context validation") {
  auto g = make_grid(8, 6, 5.0);
  CHECK_THROWS_AS(StepContext(g, ModelParams{}, SchemeConfig{}), std::invalid_argument);
  auto g10 = make_grid(8, 6, 10.0);
  SchemeConfig bad;
  bad.dt = -1.0;
  CHECK_THROWS_AS(StepContext(g10, ModelParams{}, bad), std::invalid_argument);
  StepContext ctx(g10, ModelParams{}, SchemeConfig{});
  State s = stripe_state(g10, ctx.params);
  CHECK_THROWS_AS(assemble_cn_rhs(ctx, s), std::logic_error);
  CHECK_THROWS_AS(assemble_bdf2_rhs(ctx, s), std::logic_error);
  CHECK_NOTHROW(assemble_startup_rhs(ctx, s));
}

TEST_CASE("rest state has a right-hand side consistent with a zero step") {
  // phi = 1, u = 0: every scheme's system is solved by the unchanged state
  auto g = make_grid(8, 7, 10.0);
  ModelParams p;
  Field one(g, Nodal::Constant(g->ny(), g->nx(), 1.0));
  VectorField u0{Field(g), Field(g, YSpace::Dirichlet)};
  StepContext ctx(g, p, config(Scheme::CN, 0.01));
  State s = make_initial_state(g, p, one, u0);
  StepResult r = advance(ctx, s);
  CHECK(max_diff(r.state.cur.phi.nodal(), one.nodal()) < 1e-12);
  CHECK(r.state.cur.u.x.nodal().abs().maxCoeff() < 1e-12);
  CHECK(r.state.cur.mu.nodal().abs().maxCoeff() < 1e-10);
  StepRhs rhs = assemble_cn_rhs(ctx, r.state);
  CHECK(max_diff(rhs.f1.nodal(), one.nodal()) < 1e-12);
  CHECK(rhs.f3.x.nodal().abs().maxCoeff() < 1e-12);
}

TEST_CASE("CN auxiliary update") {
  auto g = make_grid(8, 7, 10.0);
  ModelParams p;
  State s = stripe_state(g, p);
  Field phis(g, 0.9 * s.cur.phi.nodal());
  Trace z = Z_trace(nodal::trace(*g, phis.nodal()), p);
  Field phinew(g, s.cur.phi.nodal() + 0.01 * s.cur.phi.nodal().square());
  auto [U, W] = update_aux_cn(s, phis, z, phinew);
  Nodal dphi = phinew.nodal() - s.cur.phi.nodal();
  CHECK(max_diff(U.nodal() - s.cur.U.nodal(), 2.0 * phis.nodal() * dphi) < 1e-14);
  CHECK(((W - s.cur.W) - 0.5 * z * nodal::trace(*g, dphi)).abs().maxCoeff() < 1e-14);
}

TEST_CASE("steady slip-Couette flow is preserved") {
  auto g = make_grid(8, 9, 10.0);
  const double u0 = 0.3;
  ModelParams p = sheared(u0);
  Field one(g, Nodal::Constant(g->ny(), g->nx(), 1.0));
  VectorField ue = slip_couette(g, p, u0);
  for (Scheme sc : {Scheme::CN, Scheme::BDF2}) {
    CAPTURE(to_string(sc));
    StepContext ctx(g, p, config(sc, 0.01));
    State s = make_initial_state(g, p, one, ue);
    for (int k = 0; k < 5; ++k) {
      StepResult r = advance(ctx, s);
      CHECK(max_diff(r.state.cur.u.x.nodal(), s.cur.u.x.nodal()) <= 1e-6);
      CHECK(r.state.cur.u.y.nodal().abs().maxCoeff() <= 1e-6);
      CHECK(max_diff(r.state.cur.phi.nodal(), one.nodal()) <= 1e-10);
      s = r.state;
    }
    CHECK(max_diff(s.cur.u.x.nodal(), ue.x.nodal()) <= 1e-8);
  }
}

TEST_CASE("solved steps satisfy the time-discrete equations") {
  auto g = make_grid(16, 11, 10.0);
  ModelParams p = sheared(0.2);
  for (Scheme sc : {Scheme::CN, Scheme::BDF2}) {
    for (bool dl : {false, true}) {
      CAPTURE(to_string(sc));
      CAPTURE(dl);
      SchemeConfig c = config(sc, 0.01, 1e-12);
      c.dealias = dl;
      StepContext ctx(g, p, c);
      State s = stripe_state(g, p);
      for (int k = 0; k < 3; ++k) {
        StepResult r = advance(ctx, s);
        oracle::SchemeResiduals e = oracle::scheme_residuals(ctx, s, r);
        CAPTURE(k);
        CHECK(e.transport <= 1e-8 * e.transport_scale);
        CHECK(e.chem <= 1e-8 * e.chem_scale);
        CHECK(e.momentum <= 1e-8 * e.momentum_scale);
        CHECK(e.aux_U <= 1e-13);
        CHECK(e.aux_W <= 1e-13);
        s = r.state;
      }
    }
  }
}

TEST_CASE("volume, divergence and energy laws over a short sheared run") {
  auto g = make_grid(24, 13, 10.0);
  ModelParams p = sheared(0.2);
  for (Scheme sc : {Scheme::CN, Scheme::BDF2}) {
    CAPTURE(to_string(sc));
    StepContext ctx(g, p, config(sc, 0.01));
    State s = stripe_state(g, p);
    const double v0 = volume(s);
    DiagnosticsRecord prev = initial_record(ctx, s);
    const double e0 = std::abs(prev.E_ieq);
    for (int k = 0; k < 8; ++k) {
      StepResult r = advance(ctx, s);
      const DiagnosticsRecord& rec = r.record;
      CAPTURE(k);
      CHECK(std::abs(rec.volume - v0) <= 1e-12 * g->domain_measure());
      CHECK(std::abs(rec.mu_mean - nodal::mean(*g, r.state.cur.mu.nodal())) < 1e-12 * (1 + std::abs(rec.mu_mean)));
      // the projected velocity is weakly divergence-free against the pressure space
      Nodal div = nodal::div_weak(*g, r.state.cur.u.x.nodal(), r.state.cur.u.y.nodal());
      CHECK(ctx.pressure.project_to_space(div).abs().maxCoeff() < 1e-9);
      if (k == 0) {
        CHECK(r.detail.kind == StepKind::Startup);
        CHECK(rec.energy_residual >= -1e-10 * e0);
      } else if (sc == Scheme::CN) {
        CHECK(std::abs(rec.energy_residual) <= 1e-7 * e0);
        CHECK(std::abs(energy_law_check(prev, rec, sc, ctx.config.dt) - rec.energy_residual) < 1e-9 * e0);
      } else {
        CHECK(rec.energy_residual >= -1e-10 * e0);
      }
      prev = rec;
      s = r.state;
    }
  }
}

TEST_CASE("relaxation energy is nonincreasing for a large step") {
  auto g = make_grid(16, 9, 10.0);
  ModelParams p;
  for (Scheme sc : {Scheme::CN, Scheme::BDF2}) {
    CAPTURE(to_string(sc));
    StepContext ctx(g, p, config(sc, 0.5, 1e-10));
    State s = stripe_state(g, p);
    double e = initial_record(ctx, s).E_ieq;
    const double e0 = std::abs(e);
    for (int k = 0; k < 6; ++k) {
      StepResult r = advance(ctx, s);
      CHECK(r.record.E_ieq <= e + 1e-10 * e0);
      e = r.record.E_ieq;
      s = r.state;
    }
  }
}

TEST_CASE("warm start changes only the iteration count") {
  auto g = make_grid(16, 9, 10.0);
  ModelParams p = sheared(0.2);
  SchemeConfig cold = config(Scheme::BDF2, 0.01, 1e-12);
  cold.warm_start = false;
  SchemeConfig warm = config(Scheme::BDF2, 0.01, 1e-12);
  StepContext cc(g, p, cold), cw(g, p, warm);
  State s = stripe_state(g, p);
  s = advance(cc, s).state;
  StepResult a = advance(cc, s), b = advance(cw, s);
  CHECK(max_diff(a.state.cur.phi.nodal(), b.state.cur.phi.nodal()) < 1e-9);
  CHECK(max_diff(a.state.cur.u.x.nodal(), b.state.cur.u.x.nodal()) < 1e-9);
  CHECK(b.record.iterations <= a.record.iterations);
}

TEST_CASE("optional aux restart after the startup step") {
  auto g = make_grid(12, 9, 10.0);
  ModelParams p = sheared(0.2);
  State s0 = stripe_state(g, p);
  SchemeConfig c = config(Scheme::BDF2, 0.02);
  StepResult plain = advance(StepContext(g, p, c), s0);
  c.startup_reinit_aux = true;
  StepResult re = advance(StepContext(g, p, c), s0);

  CHECK(max_diff(re.state.cur.phi.nodal(), plain.state.cur.phi.nodal()) == 0.0);
  AuxFields a = init_aux(re.state.cur.phi, p);
  CHECK(max_diff(re.state.cur.U.nodal(), a.U.nodal()) == 0.0);
  CHECK((re.state.cur.W - a.W).abs().maxCoeff() == 0.0);
  CHECK(re.record.u_gap == 0.0);
  CHECK(std::abs(plain.record.u_gap) > 0.0);
  // the slack shifts by exactly the energy change of the restart
  const double e_plain = energy_quadratic(*g, p, plain.state.cur.u, plain.state.cur.phi,
                                          plain.state.cur.U, plain.state.cur.W);
  const double e_re = energy_quadratic(*g, p, re.state.cur.u, re.state.cur.phi, re.state.cur.U, re.state.cur.W);
  CHECK(re.record.energy_residual == doctest::Approx(plain.record.energy_residual + e_plain - e_re));
  // later steps are unaffected by the flag itself
  StepResult next = advance(StepContext(g, p, c), re.state);
  CHECK(next.state.step == 2);
}
