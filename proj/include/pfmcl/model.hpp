#pragma once

#include <cmath>
#include <numbers>

#include "pfmcl/field.hpp"

namespace pfmcl {

/// Physical and model constants. Defaults are the shear-flow parameter set.
struct ModelParams {
  double lambda = 20.0;
  double epsilon = 0.05;
  double mobility_M = 0.0125;
  double nu = 1.0 / 0.6;
  double gamma = 100.0;
  double ell = 1.0 / 0.19;
  double theta_s = 64.0 * std::numbers::pi / 180.0;
  double u_w_top = 0.0;
  double u_w_bottom = 0.0;
  double eta = 0.1;
  double L_x = 10.0;

  double C() const { return std::sqrt(2.0) / 3.0 + eta; }
  /// Slip coefficient; constant for now, phi kept for a phase-dependent law.
  double ell_of(double /*phi*/) const { return ell; }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

double double_well_F(double phi, const ModelParams& p);
double f_deriv(double phi, const ModelParams& p);
double boundary_G(double phi, const ModelParams& p);
double boundary_g(double phi, const ModelParams& p);
double Z_of(double phi, const ModelParams& p);

/// Z evaluated at every wall node.
Trace Z_trace(const Trace& phi, const ModelParams& p);

struct AuxFields {
  Field U;
  Trace W;
  BoundaryField W_top() const;
  BoundaryField W_bottom() const;
};

/// U = phi^2 - 1 at every node and W = sqrt(G(phi) + C) at wall nodes.
AuxFields init_aux(const Field& phi, const ModelParams& p);

/// Two-interface stripe: tanh((L_x/4 - |x - L_x/2|) / (sqrt(2) eps)).
Field initial_phi_stripe(const GridPtr& grid, const ModelParams& p);

/// Linear shear between the walls; u_y = 0.
VectorField initial_velocity_couette(const GridPtr& grid, const ModelParams& p);

/// Half-disk of the given radius sitting on y = -1 at center_x, with a tanh
/// profile of width sqrt(2) eps. phi = inside inside the drop and -inside
/// outside. Throws for radius outside (0, 1).
Field initial_phi_drop(const GridPtr& grid, const ModelParams& p, double center_x,
                       double radius, double inside = 1.0);

}  // namespace pfmcl
