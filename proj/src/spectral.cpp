#include "pfmcl/spectral.hpp"

#include <stdexcept>
#include <vector>

namespace pfmcl {
namespace nodal {

namespace {

void check_shape(const Grid& g, const Nodal& a, const char* what) {
  if (a.rows() != g.ny() || a.cols() != g.nx())
    throw std::invalid_argument(std::string(what) + ": array shape does not match grid");
}

}  // namespace

Nodal dx(const Grid& g, const Nodal& a) {
  check_shape(g, a, "dx");
  FourierRows c = g.forward_x(a);
  for (int k = 0; k <= g.m(); ++k) c.col(k) *= std::complex<double>(0.0, g.wavenumber(k));
  return g.backward_x(c);
}

Nodal dy(const Grid& g, const Nodal& a) {
  check_shape(g, a, "dy");
  Nodal out(g.ny(), g.nx());
  out.matrix().noalias() = g.dy_matrix() * a.matrix();
  return out;
}

Nodal laplacian(const Grid& g, const Nodal& a) {
  check_shape(g, a, "laplacian");
  FourierRows c = g.forward_x(a);
  for (int k = 0; k <= g.m(); ++k) {
    double kw = g.wavenumber(k);
    c.col(k) *= -kw * kw;
  }
  Nodal out = g.backward_x(c);
  out.matrix().noalias() += g.dy_matrix() * (g.dy_matrix() * a.matrix());
  return out;
}

Nodal dy_weak(const Grid& g, const Nodal& a) {
  check_shape(g, a, "dy_weak");
  Nodal out(g.ny(), g.nx());
  out.matrix().noalias() = g.dy_weak_matrix() * a.matrix();
  return out;
}

Nodal stiffness(const Grid& g, const Nodal& a) {
  check_shape(g, a, "stiffness");
  FourierRows c = g.forward_x(a);
  for (int k = 0; k <= g.m(); ++k) {
    double kw = g.wavenumber(k);
    c.col(k) *= kw * kw;
  }
  Nodal out = g.backward_x(c);
  out.matrix().noalias() += g.dy_weak_matrix() * (g.dy_matrix() * a.matrix());
  return out;
}

Nodal div_weak(const Grid& g, const Nodal& wx, const Nodal& wy) {
  Nodal out = dy_weak(g, wy);
  out -= dx(g, wx);
  return out;
}

Nodal product(const Grid& g, const Nodal& a, const Nodal& b, bool dealias) {
  check_shape(g, a, "product");
  check_shape(g, b, "product");
  if (!dealias) return a * b;

  const int nx = g.nx();
  const int np = g.padded_nx();
  const int mc = g.m() + 1;
  const int npc = np / 2 + 1;
  std::vector<std::complex<double>> ca(mc), cb(mc), pa(npc), pb(npc), pc(npc), cc(mc);
  std::vector<double> ra(np), rb(np);
  Nodal out(g.ny(), nx);
  for (int j = 0; j < g.ny(); ++j) {
    g.forward_row(&a(j, 0), ca.data());
    g.forward_row(&b(j, 0), cb.data());
    std::fill(pa.begin(), pa.end(), 0.0);
    std::fill(pb.begin(), pb.end(), 0.0);
    for (int k = 0; k < mc; ++k) {
      pa[k] = ca[k] / static_cast<double>(nx);
      pb[k] = cb[k] / static_cast<double>(nx);
    }
    g.backward_row_padded(pa.data(), ra.data());
    g.backward_row_padded(pb.data(), rb.data());
    for (int i = 0; i < np; ++i) ra[i] *= rb[i];
    g.forward_row_padded(ra.data(), pc.data());
    for (int k = 0; k < mc; ++k) cc[k] = pc[k] * (static_cast<double>(nx) / np);
    g.backward_row(cc.data(), &out(j, 0));
  }
  return out;
}

double integrate(const Grid& g, const Nodal& a) {
  check_shape(g, a, "integrate");
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) s += g.wy()[j] * a.row(j).sum();
  return s * g.dx();
}

double inner(const Grid& g, const Nodal& a, const Nodal& b) {
  check_shape(g, a, "inner");
  check_shape(g, b, "inner");
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j) s += g.wy()[j] * (a.row(j) * b.row(j)).sum();
  return s * g.dx();
}

double mean(const Grid& g, const Nodal& a) { return integrate(g, a) / g.domain_measure(); }

Trace trace(const Grid& g, const Nodal& a) {
  check_shape(g, a, "trace");
  Trace t(2, g.nx());
  t.row(0) = a.row(0);
  t.row(1) = a.row(g.ny() - 1);
  return t;
}

Trace normal_derivative(const Grid& g, const Nodal& a) {
  check_shape(g, a, "normal_derivative");
  const auto& d = g.dy_matrix();
  const int n = g.n();
  Trace t(2, g.nx());
  t.row(0) = -(d.row(0) * a.matrix()).array();
  t.row(1) = (d.row(n) * a.matrix()).array();
  return t;
}

Trace dx_trace(const Grid& g, const Trace& t) {
  Trace out(2, g.nx());
  std::vector<std::complex<double>> c(g.m() + 1);
  for (int w = 0; w < 2; ++w) {
    g.forward_row(&t(w, 0), c.data());
    for (int k = 0; k <= g.m(); ++k) c[k] *= std::complex<double>(0.0, g.wavenumber(k));
    g.backward_row(c.data(), &out(w, 0));
  }
  return out;
}

double boundary_inner(const Grid& g, const Trace& a, const Trace& b) {
  return (a * b).sum() * g.dx();
}

double boundary_mean(const Grid& g, const Trace& a) {
  return a.sum() * g.dx() / g.boundary_measure();
}

void add_boundary_spike(const Grid& g, Nodal& out, const Trace& t) {
  const double s = 1.0 / g.wall_weight();
  out.row(0) += s * t.row(0);
  out.row(g.ny() - 1) += s * t.row(1);
}

}  // namespace nodal

namespace {

void same_grid(const Field& a, const Field& b, const char* what) {
  if (a.grid_ptr() != b.grid_ptr() && (a.grid().nx() != b.grid().nx() ||
                                        a.grid().ny() != b.grid().ny() ||
                                        a.grid().lx() != b.grid().lx()))
    throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

int wall_row(Wall w) { return w == Wall::Bottom ? 0 : 1; }

}  // namespace

Field diff_x(const Field& f) { return Field(f.grid_ptr(), nodal::dx(f.grid(), f.nodal())); }

Field diff_y(const Field& f) { return Field(f.grid_ptr(), nodal::dy(f.grid(), f.nodal())); }

double inner_product(const Field& a, const Field& b) {
  same_grid(a, b, "inner_product");
  return nodal::inner(a.grid(), a.nodal(), b.nodal());
}

double boundary_inner_product(const BoundaryField& a, const BoundaryField& b, const Grid& g) {
  if (a.values.size() != g.nx() || b.values.size() != g.nx())
    throw std::invalid_argument("boundary_inner_product: size does not match grid");
  return (a.values * b.values).sum() * g.dx();
}

BoundaryField boundary_trace(const Field& f, Wall wall) {
  Trace t = nodal::trace(f.grid(), f.nodal());
  return BoundaryField{wall, t.row(wall_row(wall)).transpose()};
}

BoundaryField tangential_deriv(const BoundaryField& bf, const Grid& g) {
  if (bf.values.size() != g.nx())
    throw std::invalid_argument("tangential_deriv: size does not match grid");
  Trace t(2, g.nx());
  t.row(0) = bf.values.transpose();
  t.row(1) = bf.values.transpose();
  Trace d = nodal::dx_trace(g, t);
  return BoundaryField{bf.wall, d.row(0).transpose()};
}

Field nodal_product(const Field& a, const Field& b, bool dealias) {
  same_grid(a, b, "nodal_product");
  return Field(a.grid_ptr(), nodal::product(a.grid(), a.nodal(), b.nodal(), dealias));
}

}  // namespace pfmcl
