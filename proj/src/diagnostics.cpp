#include "pfmcl/diagnostics.hpp"

#include <stdexcept>

#include "pfmcl/spectral.hpp"

namespace pfmcl {

std::string to_string(Scheme s) { return s == Scheme::CN ? "cn" : "bdf2"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "cn" || s == "CN") return Scheme::CN;
  if (s == "bdf2" || s == "BDF2") return Scheme::BDF2;
  throw std::invalid_argument("unknown scheme '" + s + "' (expected cn or bdf2)");
}

namespace {

double grad_sq(const Grid& g, const Nodal& a) { return nodal::inner(g, nodal::stiffness(g, a), a); }

double kinetic(const Grid& g, const VectorField& u) {
  return 0.5 * (nodal::inner(g, u.x.nodal(), u.x.nodal()) + nodal::inner(g, u.y.nodal(), u.y.nodal()));
}

}  // namespace

double pressure_gradient_sq(const Grid& g, const Nodal& q) {
  Nodal gx = nodal::dx(g, q);
  Nodal gy = nodal::dy(g, q);
  gy.row(0).setZero();
  gy.row(g.ny() - 1).setZero();
  return nodal::inner(g, gx, gx) + nodal::inner(g, gy, gy);
}

double energy_quadratic(const Grid& g, const ModelParams& p, const VectorField& u, const Field& phi,
                        const Field& U, const Trace& W) {
  double bulk = 0.5 * p.epsilon * grad_sq(g, phi.nodal()) +
                nodal::inner(g, U.nodal(), U.nodal()) / (4.0 * p.epsilon);
  double wall = nodal::boundary_inner(g, W, W) - p.C() * g.boundary_measure();
  return kinetic(g, u) + p.lambda * bulk + p.lambda * wall;
}

double energy_original(const Grid& g, const ModelParams& p, const VectorField& u, const Field& phi) {
  Nodal F = phi.nodal().unaryExpr([&p](double v) { return double_well_F(v, p); });
  Trace G = nodal::trace(g, phi.nodal()).unaryExpr([&p](double v) { return boundary_G(v, p); });
  double bulk = 0.5 * p.epsilon * grad_sq(g, phi.nodal()) + nodal::integrate(g, F);
  return kinetic(g, u) + p.lambda * bulk + p.lambda * G.sum() * g.dx();
}

double energy_original(const State& s, const ModelParams& p) {
  return energy_original(*s.grid, p, s.cur.u, s.cur.phi);
}

double energy_ieq(const State& s, const ModelParams& p, Scheme scheme, double dt) {
  const Grid& g = *s.grid;
  const Level& c = s.cur;
  double e = energy_quadratic(g, p, c.u, c.phi, c.U, c.W);
  if (!s.has_prev) return e;
  double gp = pressure_gradient_sq(g, c.p.nodal());
  if (scheme == Scheme::CN) return e + dt * dt / 8.0 * gp;

  const Level& q = s.prev;
  const GridPtr& gr = s.grid;
  VectorField ue{Field(gr, 2.0 * c.u.x.nodal() - q.u.x.nodal()),
                 Field(gr, 2.0 * c.u.y.nodal() - q.u.y.nodal())};
  Field phie(gr, 2.0 * c.phi.nodal() - q.phi.nodal());
  Field Ue(gr, 2.0 * c.U.nodal() - q.U.nodal());
  Trace We = 2.0 * c.W - q.W;
  double ee = energy_quadratic(g, p, ue, phie, Ue, We);
  return 0.5 * (e + ee) + dt * dt / 3.0 * gp;
}

double volume(const Field& phi) { return nodal::integrate(phi.grid(), phi.nodal()); }

double volume(const State& s) { return volume(s.cur.phi); }

double u_gap(const State& s) {
  const Grid& g = *s.grid;
  Nodal q = s.cur.phi.nodal() * s.cur.phi.nodal() - 1.0;
  return nodal::inner(g, s.cur.U.nodal(), s.cur.U.nodal()) - nodal::inner(g, q, q);
}

double l2_norm(const Field& a) {
  return std::sqrt(std::max(nodal::inner(a.grid(), a.nodal(), a.nodal()), 0.0));
}

double l2_error(const Field& a, const Field& b) {
  const Grid& ga = a.grid();
  const Grid& gb = b.grid();
  if (ga.nx() != gb.nx() || ga.ny() != gb.ny() || ga.lx() != gb.lx())
    throw std::invalid_argument("l2_error: fields live on different grids");
  Nodal d = a.nodal() - b.nodal();
  return std::sqrt(std::max(nodal::inner(ga, d, d), 0.0));
}

double energy_law_check(const DiagnosticsRecord& rec_n, const DiagnosticsRecord& rec_np1,
                        Scheme scheme, double dt) {
  double d = dt * rec_np1.dissipation.total();
  if (scheme == Scheme::CN) return rec_np1.E_ieq - rec_n.E_ieq + d;
  return rec_n.E_ieq - d - rec_np1.E_ieq;
}

}  // namespace pfmcl
