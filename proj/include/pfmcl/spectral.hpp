#pragma once

#include "pfmcl/field.hpp"

namespace pfmcl {

// Nodal kernels. All act on arrays shaped (n_y, n_x) for the given grid.
namespace nodal {

Nodal dx(const Grid& g, const Nodal& a);
Nodal dy(const Grid& g, const Nodal& a);
/// Strong Laplacian d_xx + d_yy.
Nodal laplacian(const Grid& g, const Nodal& a);
/// Representative of v -> (g, dv/dy)_N, i.e. W^{-1} D^T W g.
Nodal dy_weak(const Grid& g, const Nodal& a);
/// Representative of v -> (grad a, grad v)_N.
Nodal stiffness(const Grid& g, const Nodal& a);
/// Representative of the functional v -> (w, grad v)_N for a vector w.
Nodal div_weak(const Grid& g, const Nodal& wx, const Nodal& wy);

/// Pointwise product; with dealias set the x-direction is evaluated on a
/// 3/2-padded grid and truncated back to |k| <= m.
Nodal product(const Grid& g, const Nodal& a, const Nodal& b, bool dealias);

double integrate(const Grid& g, const Nodal& a);
double inner(const Grid& g, const Nodal& a, const Nodal& b);
double mean(const Grid& g, const Nodal& a);

Trace trace(const Grid& g, const Nodal& a);
/// Outward normal derivative on both walls (+d_y on top, -d_y on bottom).
Trace normal_derivative(const Grid& g, const Nodal& a);
Trace dx_trace(const Grid& g, const Trace& t);
double boundary_inner(const Grid& g, const Trace& a, const Trace& b);
double boundary_mean(const Grid& g, const Trace& a);

/// Adds the representative of v -> (t, v)_Gamma: t / w_wall on the wall rows.
void add_boundary_spike(const Grid& g, Nodal& out, const Trace& t);

}  // namespace nodal

Field diff_x(const Field& f);
Field diff_y(const Field& f);
double inner_product(const Field& a, const Field& b);
double boundary_inner_product(const BoundaryField& a, const BoundaryField& b, const Grid& g);
BoundaryField boundary_trace(const Field& f, Wall wall);
BoundaryField tangential_deriv(const BoundaryField& bf, const Grid& g);
Field nodal_product(const Field& a, const Field& b, bool dealias);

}  // namespace pfmcl
