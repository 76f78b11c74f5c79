#include "pfmcl/stepper.hpp"

#include <cmath>
#include <stdexcept>

#include "pfmcl/spectral.hpp"

namespace pfmcl {

using nodal::product;

void SchemeConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("scheme config: dt must be positive");
  if (!(solver_tol > 0.0)) throw std::invalid_argument("scheme config: solver_tol must be positive");
  if (solver_maxit < 1) throw std::invalid_argument("scheme config: solver_maxit must be >= 1");
  if (!(t_max >= 0.0)) throw std::invalid_argument("scheme config: t_max must be nonnegative");
}

double extrapolate_star(double s_n, double s_nm1, StarKind kind) {
  return kind == StarKind::Half ? 1.5 * s_n - 0.5 * s_nm1 : 2.0 * s_n - s_nm1;
}

Nodal extrapolate_star(const Nodal& s_n, const Nodal& s_nm1, StarKind kind) {
  return kind == StarKind::Half ? Nodal(1.5 * s_n - 0.5 * s_nm1) : Nodal(2.0 * s_n - s_nm1);
}

VectorField skew_convection_B(const VectorField& u, const VectorField& v, bool dealias) {
  const Grid& g = u.x.grid();
  const GridPtr& gp = u.x.grid_ptr();
  Nodal bx = skew_convection_component(g, u.x.nodal(), u.y.nodal(), v.x.nodal(), dealias);
  Nodal by = skew_convection_component(g, u.x.nodal(), u.y.nodal(), v.y.nodal(), dealias);
  by.row(0).setZero();
  by.row(g.ny() - 1).setZero();
  return {Field(gp, bx), Field(gp, by, YSpace::Dirichlet)};
}

StepContext::StepContext(GridPtr g, ModelParams p, SchemeConfig c)
    : grid(std::move(g)), params(p), config(c), pressure(grid) {
  params.validate();
  config.validate();
  if (std::abs(grid->lx() - params.L_x) > 1e-12 * params.L_x)
    throw std::invalid_argument("step context: grid length does not match L_x");
}

Trace StepContext::wall_speed() const {
  Trace t(2, grid->nx());
  t.row(0).setConstant(params.u_w_bottom);
  t.row(1).setConstant(params.u_w_top);
  return t;
}

namespace {

struct Frozen {
  Nodal phi;
  Nodal ux;
  Nodal uy;
  Trace z;
  Trace dphi;
};

Frozen freeze(const StepContext& ctx, const State& s, StepKind kind) {
  const Grid& g = *ctx.grid;
  Frozen f;
  if (kind == StepKind::Startup) {
    f.phi = s.cur.phi.nodal();
    f.ux = s.cur.u.x.nodal();
    f.uy = s.cur.u.y.nodal();
  } else {
    if (!s.has_prev) throw std::logic_error("step: previous time level is missing");
    StarKind k = kind == StepKind::CN ? StarKind::Half : StarKind::Full;
    f.phi = extrapolate_star(s.cur.phi.nodal(), s.prev.phi.nodal(), k);
    f.ux = extrapolate_star(s.cur.u.x.nodal(), s.prev.u.x.nodal(), k);
    f.uy = extrapolate_star(s.cur.u.y.nodal(), s.prev.u.y.nodal(), k);
  }
  Trace pt = nodal::trace(g, f.phi);
  f.z = Z_trace(pt, ctx.params);
  f.dphi = nodal::dx_trace(g, pt);
  return f;
}

OperatorCoeffs make_coeffs(const StepContext& ctx, const Frozen& f, StepKind kind) {
  const ModelParams& p = ctx.params;
  const double dt = ctx.config.dt;
  const double lam = p.lambda, eps = p.epsilon;
  OperatorCoeffs c;
  switch (kind) {
    case StepKind::CN:
      c.a_c = dt / 2;
      c.a_M = p.mobility_M * dt;
      c.s_kappa = lam * eps / 2;
      c.s_f = lam / eps;
      c.kappa = 1.0 / dt;
      c.theta = 0.5;
      c.s_z = lam / 4;
      c.m_u = 0.5;
      c.a_b = dt / 4;
      c.a_nu = p.nu * dt / 4;
      c.a_ell = p.nu * dt * p.ell_of(0.0) / 4;
      break;
    case StepKind::BDF2:
      c.a_c = 2 * dt / 3;
      c.a_M = 2 * p.mobility_M * dt / 3;
      c.s_kappa = lam * eps;
      c.s_f = 2 * lam / eps;
      c.kappa = 3.0 / (2 * dt);
      c.theta = 1.0;
      c.s_z = lam / 2;
      c.m_u = 1.0;
      c.a_b = 2 * dt / 3;
      c.a_nu = 2 * p.nu * dt / 3;
      c.a_ell = 2 * p.nu * dt * p.ell_of(0.0) / 3;
      break;
    case StepKind::Startup:
      c.a_c = dt;
      c.a_M = p.mobility_M * dt;
      c.s_kappa = lam * eps;
      c.s_f = 2 * lam / eps;
      c.kappa = 1.0 / dt;
      c.theta = 1.0;
      c.s_z = lam / 2;
      c.m_u = 1.0;
      c.a_b = dt;
      c.a_nu = p.nu * dt;
      c.a_ell = p.nu * dt * p.ell_of(0.0);
      break;
  }
  c.lam_gam = lam / p.gamma;
  c.phi_star = f.phi;
  c.ux_star = f.ux;
  c.uy_star = f.uy;
  c.z2 = f.z * f.z;
  c.dphi_star = f.dphi;
  c.dealias = ctx.config.dealias;
  return c;
}

Nodal weak_div_flux(const Grid& g, const VectorField& u, const Nodal& phi, bool d) {
  return nodal::div_weak(g, product(g, u.x.nodal(), phi, d), product(g, u.y.nodal(), phi, d));
}

StepRhs cn_rhs(const StepContext& ctx, const State& s, const Frozen& f) {
  const Grid& g = *ctx.grid;
  const GridPtr& gp = ctx.grid;
  const ModelParams& p = ctx.params;
  const double dt = ctx.config.dt;
  const bool d = ctx.config.dealias;
  const Level& n = s.cur;
  const double lam = p.lambda, eps = p.epsilon, nu = p.nu, ell = p.ell_of(0.0);

  StepRhs r;
  r.f1 = Field(gp, n.phi.nodal() + 0.5 * dt * weak_div_flux(g, n.u, f.phi, d));
  r.f2 = Field(gp, 0.5 * lam * eps * nodal::laplacian(g, n.phi.nodal()) -
                       (lam / eps) * product(g, f.phi, n.U.nodal(), d) +
                       (lam / eps) * product(g, f.phi, product(g, f.phi, n.phi.nodal(), d), d));
  Nodal px = nodal::dx(g, n.p.nodal());
  Nodal py = nodal::dy(g, n.p.nodal());
  Nodal bx = skew_convection_component(g, f.ux, f.uy, n.u.x.nodal(), d);
  Nodal by = skew_convection_component(g, f.ux, f.uy, n.u.y.nodal(), d);
  r.f3.x = Field(gp, 0.5 * n.u.x.nodal() - 0.25 * dt * bx +
                         0.25 * nu * dt * nodal::laplacian(g, n.u.x.nodal()) - 0.5 * dt * px);
  r.f3.y = Field(gp, 0.5 * n.u.y.nodal() - 0.25 * dt * by +
                         0.25 * nu * dt * nodal::laplacian(g, n.u.y.nodal()) - 0.5 * dt * py,
                 YSpace::Dirichlet);

  Trace phit = nodal::trace(g, n.phi.nodal());
  Trace uxt = nodal::trace(g, n.u.x.nodal());
  Trace rate = phit / dt - 0.5 * uxt * f.dphi;
  r.g1 = -nu * nodal::normal_derivative(g, n.u.x.nodal()) - nu * ell * (uxt - 2.0 * ctx.wall_speed()) +
         (2.0 * lam / p.gamma) * rate * f.dphi;
  r.g2 = -eps * nodal::normal_derivative(g, n.phi.nodal()) + (2.0 / p.gamma) * rate -
         2.0 * f.z * n.W + 0.5 * f.z * f.z * phit;
  r.g1_scale = dt / 4;
  r.g2_scale = lam / 2;
  return r;
}

StepRhs bdf2_rhs(const StepContext& ctx, const State& s, const Frozen& f) {
  const Grid& g = *ctx.grid;
  const GridPtr& gp = ctx.grid;
  const ModelParams& p = ctx.params;
  const double dt = ctx.config.dt;
  const bool d = ctx.config.dealias;
  const Level& n = s.cur;
  const Level& o = s.prev;
  const double lam = p.lambda, eps = p.epsilon, nu = p.nu, ell = p.ell_of(0.0);

  Nodal phi4 = 4.0 * n.phi.nodal() - o.phi.nodal();
  Nodal Uh = (4.0 * n.U.nodal() - o.U.nodal()) / 3.0;
  Trace Wh = (4.0 * n.W - o.W) / 3.0;

  StepRhs r;
  r.f1 = Field(gp, phi4 / 3.0);
  r.f2 = Field(gp, -(lam / eps) * product(g, f.phi, Uh, d) +
                       (2.0 * lam / (3.0 * eps)) * product(g, f.phi, product(g, f.phi, phi4, d), d));
  Nodal px = nodal::dx(g, n.p.nodal());
  Nodal py = nodal::dy(g, n.p.nodal());
  r.f3.x = Field(gp, (4.0 * n.u.x.nodal() - o.u.x.nodal()) / 3.0 - (2.0 * dt / 3.0) * px);
  r.f3.y = Field(gp, (4.0 * n.u.y.nodal() - o.u.y.nodal()) / 3.0 - (2.0 * dt / 3.0) * py,
                 YSpace::Dirichlet);
  Trace phi4t = nodal::trace(g, phi4);
  r.g1 = nu * ell * ctx.wall_speed() + (lam / p.gamma) * (phi4t / (2.0 * dt)) * f.dphi;
  r.g2 = phi4t / (2.0 * p.gamma * dt) - f.z * Wh + f.z * f.z * phi4t / 6.0;
  r.g1_scale = 2.0 * dt / 3.0;
  r.g2_scale = lam;
  return r;
}

StepRhs startup_rhs(const StepContext& ctx, const State& s, const Frozen& f) {
  const Grid& g = *ctx.grid;
  const GridPtr& gp = ctx.grid;
  const ModelParams& p = ctx.params;
  const double dt = ctx.config.dt;
  const bool d = ctx.config.dealias;
  const Level& n = s.cur;
  const double lam = p.lambda, eps = p.epsilon, nu = p.nu, ell = p.ell_of(0.0);

  StepRhs r;
  r.f1 = n.phi;
  r.f2 = Field(gp, -(lam / eps) * (product(g, f.phi, n.U.nodal(), d) -
                                   2.0 * product(g, f.phi, product(g, f.phi, n.phi.nodal(), d), d)));
  r.f3.x = Field(gp, n.u.x.nodal() - dt * nodal::dx(g, n.p.nodal()));
  r.f3.y = Field(gp, n.u.y.nodal() - dt * nodal::dy(g, n.p.nodal()), YSpace::Dirichlet);
  Trace phit = nodal::trace(g, n.phi.nodal());
  r.g1 = nu * ell * ctx.wall_speed() + (lam / p.gamma) * (phit / dt) * f.dphi;
  r.g2 = phit / (p.gamma * dt) - f.z * (n.W - 0.5 * f.z * phit);
  r.g1_scale = dt;
  r.g2_scale = lam;
  return r;
}

double projection_factor(StepKind kind, double dt) {
  switch (kind) {
    case StepKind::CN: return dt / 2;
    case StepKind::BDF2: return 2 * dt / 3;
    case StepKind::Startup: return dt;
  }
  return dt;
}

}  // namespace

StepSystem build_system(const StepContext& ctx, const State& s, StepKind kind) {
  Frozen f = freeze(ctx, s, kind);
  StepSystem sys;
  sys.coeffs = make_coeffs(ctx, f, kind);
  switch (kind) {
    case StepKind::CN: sys.rhs = cn_rhs(ctx, s, f); break;
    case StepKind::BDF2: sys.rhs = bdf2_rhs(ctx, s, f); break;
    case StepKind::Startup: sys.rhs = startup_rhs(ctx, s, f); break;
  }
  sys.z_star = f.z;
  sys.phi_star = f.phi;
  sys.projection_factor = projection_factor(kind, ctx.config.dt);
  return sys;
}

CnRhs assemble_cn_rhs(const StepContext& ctx, const State& s) {
  return cn_rhs(ctx, s, freeze(ctx, s, StepKind::CN));
}

StepRhs assemble_bdf2_rhs(const StepContext& ctx, const State& s) {
  return bdf2_rhs(ctx, s, freeze(ctx, s, StepKind::BDF2));
}

StepRhs assemble_startup_rhs(const StepContext& ctx, const State& s) {
  return startup_rhs(ctx, s, freeze(ctx, s, StepKind::Startup));
}

Eigen::VectorXd rhs_vector(const Grid& g, const StepRhs& r) {
  using L = CoupledLayout;
  CoupledLayout lay(g);
  Eigen::VectorXd b(lay.size());
  Nodal b2 = r.f2.nodal();
  nodal::add_boundary_spike(g, b2, r.g2_scale * r.g2);
  Nodal b3 = r.f3.x.nodal();
  nodal::add_boundary_spike(g, b3, r.g1_scale * r.g1);
  Nodal b4 = r.f3.y.nodal();
  b4.row(0).setZero();
  b4.row(g.ny() - 1).setZero();
  lay.block(b, L::Mu) = r.f1.nodal();
  lay.block(b, L::Phi) = b2;
  lay.block(b, L::Ux) = b3;
  lay.block(b, L::Uy) = b4;
  return b;
}

std::pair<Field, Trace> update_aux_cn(const State& s, const Field& phi_star, const Trace& z_star,
                                      const Field& phi_new, bool dealias) {
  const Grid& g = *s.grid;
  Nodal dphi = phi_new.nodal() - s.cur.phi.nodal();
  Field U(s.grid, s.cur.U.nodal() + 2.0 * product(g, phi_star.nodal(), dphi, dealias));
  Trace W = s.cur.W + 0.5 * z_star * nodal::trace(g, dphi);
  return {U, W};
}

namespace {

StepResult run_step(const StepContext& ctx, const State& s, StepKind kind) {
  using L = CoupledLayout;
  const Grid& g = *ctx.grid;
  const GridPtr& gp = ctx.grid;
  const ModelParams& p = ctx.params;
  const SchemeConfig& cfg = ctx.config;
  const double dt = cfg.dt;
  const bool d = cfg.dealias;
  const Level& n = s.cur;

  StepSystem sys = build_system(ctx, s, kind);
  CoupledOperator A(gp, sys.coeffs);
  const CoupledLayout& lay = A.layout();
  Eigen::VectorXd b = rhs_vector(g, sys.rhs);

  // phi = phi' + mean(phi^n) with phi' and mu mean-free
  const double phibar = nodal::mean(g, n.phi.nodal());
  Eigen::VectorXd xbar = Eigen::VectorXd::Zero(lay.size());
  lay.block(xbar, L::Phi).setConstant(phibar);
  Eigen::VectorXd bs = b - A.apply_raw(xbar);
  A.project(bs);

  Preconditioner P(gp, sys.coeffs);

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(lay.size());
  const bool warm = cfg.warm_start && s.has_prev && kind != StepKind::Startup;
  if (warm) {
    lay.block(x0, L::Mu) = n.mu.nodal();
    lay.block(x0, L::Phi) = 2.0 * n.phi.nodal() - s.prev.phi.nodal();
    lay.block(x0, L::Ux) = 2.0 * n.u.x.nodal() - s.prev.u.x.nodal();
    lay.block(x0, L::Uy) = 2.0 * n.u.y.nodal() - s.prev.u.y.nodal();
    A.project(x0);
  }

  auto op = [&A](const Eigen::VectorXd& v) { return A.apply(v); };
  auto pre = [&P, &A](const Eigen::VectorXd& v) {
    Eigen::VectorXd z = P.apply(v);
    A.project(z);
    return z;
  };
  auto dot = [&A](const Eigen::VectorXd& a, const Eigen::VectorXd& c) { return A.dot(a, c); };
  // round-off floor relative to the unshifted right-hand side
  const double floor = 1e-14 * std::sqrt(A.dot(b, b));
  KrylovResult kr =
      bicgstab(op, pre, bs, cfg.solver_tol, cfg.solver_maxit, warm ? &x0 : nullptr, dot, floor);

  Eigen::VectorXd x = kr.x;
  lay.block(x, L::Phi) += phibar;
  // mean of mu from the mean of the chemical-potential equation
  Eigen::VectorXd res = A.apply_raw(x) - b;
  const double mubar = nodal::mean(g, Nodal(lay.block(res, L::Phi)));

  StepDetail det;
  det.kind = kind;
  det.solution = kr.x;
  det.iterations = kr.iterations;
  det.solver_residual = kr.residual;
  det.mu = Field(gp, Nodal(lay.block(x, L::Mu)) + mubar);
  det.phi_new = Field(gp, Nodal(lay.block(x, L::Phi)));
  det.u_tilde.x = Field(gp, Nodal(lay.block(x, L::Ux)));
  Nodal uty = lay.block(x, L::Uy);
  uty.row(0).setZero();
  uty.row(g.ny() - 1).setZero();
  det.u_tilde.y = Field(gp, uty, YSpace::Dirichlet);

  const Nodal& phin = n.phi.nodal();
  const Nodal& phinew = det.phi_new.nodal();
  const Trace& z = sys.z_star;
  Nodal phi_rate;  // dt * (discrete time derivative of phi)
  VectorField ubar;  // velocity at which the dissipation is evaluated
  switch (kind) {
    case StepKind::CN: {
      auto [U, W] = update_aux_cn(s, Field(gp, sys.phi_star), z, det.phi_new, d);
      det.U_new = U;
      det.W_new = W;
      phi_rate = phinew - phin;
      ubar.x = Field(gp, 0.5 * (det.u_tilde.x.nodal() + n.u.x.nodal()));
      ubar.y = Field(gp, 0.5 * (det.u_tilde.y.nodal() + n.u.y.nodal()));
      break;
    }
    case StepKind::BDF2: {
      Nodal phi4 = 4.0 * phin - s.prev.phi.nodal();
      Nodal inc = 3.0 * phinew - phi4;
      det.U_new = Field(gp, (4.0 * n.U.nodal() - s.prev.U.nodal()) / 3.0 +
                                (2.0 / 3.0) * product(g, sys.phi_star, inc, d));
      det.W_new = (4.0 * n.W - s.prev.W) / 3.0 + (1.0 / 6.0) * z * nodal::trace(g, inc);
      phi_rate = 0.5 * (3.0 * phinew - 4.0 * phin + s.prev.phi.nodal());
      ubar = det.u_tilde;
      break;
    }
    case StepKind::Startup: {
      Nodal dphi = phinew - phin;
      det.U_new = Field(gp, n.U.nodal() + 2.0 * product(g, sys.phi_star, dphi, d));
      det.W_new = n.W + 0.5 * z * nodal::trace(g, dphi);
      phi_rate = dphi;
      ubar = det.u_tilde;
      break;
    }
  }
  det.phidot = nodal::trace(g, phi_rate) / dt + nodal::trace(g, ubar.x.nodal()) * sys.coeffs.dphi_star;

  ProjectionResult pr = project_pressure(ctx.pressure, det.u_tilde, n.p, sys.projection_factor,
                                         cfg.rotational_pressure, p.nu);
  det.psi = pr.psi;

  StepResult out;
  out.state.grid = gp;
  out.state.t = s.t + dt;
  out.state.step = s.step + 1;
  out.state.prev = n;
  out.state.has_prev = true;
  out.state.cur = Level{det.phi_new, pr.u, pr.p, det.mu, det.U_new, det.W_new};

  Dissipation& D = out.record.dissipation;
  const double ell = p.ell_of(0.0);
  D.mu = p.mobility_M * nodal::inner(g, nodal::stiffness(g, det.mu.nodal()), det.mu.nodal());
  D.viscous = p.nu * (nodal::inner(g, nodal::stiffness(g, ubar.x.nodal()), ubar.x.nodal()) +
                      nodal::inner(g, nodal::stiffness(g, ubar.y.nodal()), ubar.y.nodal()));
  D.phidot = p.lambda / p.gamma * nodal::boundary_inner(g, det.phidot, det.phidot);
  Trace uw = ctx.wall_speed();
  Trace us = nodal::trace(g, ubar.x.nodal()) - uw;
  D.slip = p.nu * ell * nodal::boundary_inner(g, us, us);
  D.wall_work = p.nu * ell * nodal::boundary_inner(g, us, uw);

  DiagnosticsRecord& rec = out.record;
  rec.step = out.state.step;
  rec.t = out.state.t;
  rec.E_original = energy_original(out.state, p);
  rec.E_ieq = energy_ieq(out.state, p, cfg.scheme, dt);
  rec.volume = volume(out.state);
  rec.iterations = kr.iterations;
  rec.solver_residual = kr.residual;
  rec.u_gap = u_gap(out.state);
  rec.mu_mean = mubar;
  switch (kind) {
    case StepKind::CN:
      rec.energy_residual = rec.E_ieq - energy_ieq(s, p, Scheme::CN, dt) + dt * D.total();
      break;
    case StepKind::BDF2:
      rec.energy_residual = energy_ieq(s, p, Scheme::BDF2, dt) - dt * D.total() - rec.E_ieq;
      break;
    case StepKind::Startup: {
      const Level& c = out.state.cur;
      double e1 = energy_quadratic(g, p, c.u, c.phi, c.U, c.W);
      double e0 = energy_quadratic(g, p, n.u, n.phi, n.U, n.W);
      rec.energy_residual = e0 - dt * D.total() - e1;
      break;
    }
  }
  out.detail = std::move(det);
  return out;
}

}  // namespace

StepResult step_cn(const StepContext& ctx, const State& s) { return run_step(ctx, s, StepKind::CN); }

StepResult step_bdf2(const StepContext& ctx, const State& s) {
  return run_step(ctx, s, StepKind::BDF2);
}

StepResult startup_first_order(const StepContext& ctx, const State& s0) {
  StepResult r = run_step(ctx, s0, StepKind::Startup);
  if (!ctx.config.startup_reinit_aux) return r;
  // restart the auxiliary variables from phi^1 so their startup error does not persist
  const Grid& g = *ctx.grid;
  const ModelParams& p = ctx.params;
  Level& c = r.state.cur;
  const double before = energy_quadratic(g, p, c.u, c.phi, c.U, c.W);
  AuxFields a = init_aux(c.phi, p);
  c.U = a.U;
  c.W = a.W;
  const double after = energy_quadratic(g, p, c.u, c.phi, c.U, c.W);
  r.record.E_ieq = energy_ieq(r.state, p, ctx.config.scheme, ctx.config.dt);
  r.record.u_gap = u_gap(r.state);
  r.record.energy_residual += before - after;
  r.detail.U_new = c.U;
  r.detail.W_new = c.W;
  return r;
}

StepResult advance(const StepContext& ctx, const State& s) {
  if (!s.has_prev) return startup_first_order(ctx, s);
  return ctx.config.scheme == Scheme::CN ? step_cn(ctx, s) : step_bdf2(ctx, s);
}

State make_initial_state(const GridPtr& grid, const ModelParams& p, const Field& phi0,
                         const VectorField& u0) {
  State s;
  s.grid = grid;
  s.t = 0.0;
  s.step = 0;
  AuxFields aux = init_aux(phi0, p);
  s.cur.phi = phi0;
  s.cur.u = u0;
  s.cur.u.y.set_space(YSpace::Dirichlet);
  s.cur.u.y.nodal().row(0).setZero();
  s.cur.u.y.nodal().row(grid->ny() - 1).setZero();
  s.cur.p = Field(grid, YSpace::Pressure);
  s.cur.mu = Field(grid);
  s.cur.U = aux.U;
  s.cur.W = aux.W;
  s.has_prev = false;
  return s;
}

DiagnosticsRecord initial_record(const StepContext& ctx, const State& s) {
  DiagnosticsRecord r;
  r.step = s.step;
  r.t = s.t;
  r.E_original = energy_original(s, ctx.params);
  r.E_ieq = energy_ieq(s, ctx.params, ctx.config.scheme, ctx.config.dt);
  r.volume = volume(s);
  r.u_gap = u_gap(s);
  return r;
}

}  // namespace pfmcl
