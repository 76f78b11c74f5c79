#include "pfmcl/model.hpp"

#include <stdexcept>
#include <string>

namespace pfmcl {

void ModelParams::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("model parameters: ") + what);
  };
  need(epsilon > 0.0, "epsilon must be positive");
  need(mobility_M > 0.0, "mobility_M must be positive");
  need(nu > 0.0, "nu must be positive");
  need(gamma > 0.0, "gamma must be positive");
  need(lambda > 0.0, "lambda must be positive");
  need(ell >= 0.0, "ell must be nonnegative");
  need(L_x > 0.0, "L_x must be positive");
  need(eta > 0.0, "eta must be positive (C must exceed sqrt(2)/3)");
  need(std::isfinite(theta_s) && std::isfinite(u_w_top) && std::isfinite(u_w_bottom),
       "theta_s and wall speeds must be finite");
}

double double_well_F(double phi, const ModelParams& p) {
  double q = phi * phi - 1.0;
  return q * q / (4.0 * p.epsilon);
}

double f_deriv(double phi, const ModelParams& p) { return phi * (phi * phi - 1.0) / p.epsilon; }

double boundary_G(double phi, const ModelParams& p) {
  return -(std::sqrt(2.0) / 3.0) * std::cos(p.theta_s) * std::sin(0.5 * std::numbers::pi * phi);
}

double boundary_g(double phi, const ModelParams& p) {
  return -(std::sqrt(2.0) * std::numbers::pi / 6.0) * std::cos(p.theta_s) *
         std::cos(0.5 * std::numbers::pi * phi);
}

double Z_of(double phi, const ModelParams& p) {
  return boundary_g(phi, p) / std::sqrt(boundary_G(phi, p) + p.C());
}

Trace Z_trace(const Trace& phi, const ModelParams& p) {
  return phi.unaryExpr([&p](double v) { return Z_of(v, p); });
}

BoundaryField AuxFields::W_top() const { return BoundaryField{Wall::Top, W.row(1).transpose()}; }

BoundaryField AuxFields::W_bottom() const {
  return BoundaryField{Wall::Bottom, W.row(0).transpose()};
}

AuxFields init_aux(const Field& phi, const ModelParams& p) {
  AuxFields a;
  a.U = Field(phi.grid_ptr(), phi.nodal() * phi.nodal() - 1.0);
  const int ny = phi.grid().ny();
  a.W.resize(2, phi.grid().nx());
  a.W.row(0) = phi.nodal().row(0).unaryExpr([&p](double v) { return std::sqrt(boundary_G(v, p) + p.C()); });
  a.W.row(1) =
      phi.nodal().row(ny - 1).unaryExpr([&p](double v) { return std::sqrt(boundary_G(v, p) + p.C()); });
  return a;
}

Field initial_phi_stripe(const GridPtr& grid, const ModelParams& p) {
  Field f(grid);
  const double lx = grid->lx();
  const double w = std::sqrt(2.0) * p.epsilon;
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i)
      f(j, i) = std::tanh((0.25 * lx - std::abs(grid->x()[i] - 0.5 * lx)) / w);
  return f;
}

VectorField initial_velocity_couette(const GridPtr& grid, const ModelParams& p) {
  VectorField u{Field(grid), Field(grid, YSpace::Dirichlet)};
  for (int j = 0; j < grid->ny(); ++j) {
    double y = grid->y()[j];
    u.x.nodal().row(j).setConstant(p.u_w_bottom * (1.0 - y) / 2.0 + p.u_w_top * (1.0 + y) / 2.0);
  }
  return u;
}

Field initial_phi_drop(const GridPtr& grid, const ModelParams& p, double center_x, double radius,
                       double inside) {
  if (!(radius > 0.0 && radius < 1.0))
    throw std::invalid_argument("initial_phi_drop: radius must lie in (0, 1)");
  Field f(grid);
  const double lx = grid->lx();
  const double w = std::sqrt(2.0) * p.epsilon;
  for (int j = 0; j < grid->ny(); ++j) {
    double dy = grid->y()[j] + 1.0;
    for (int i = 0; i < grid->nx(); ++i) {
      double dx = std::remainder(grid->x()[i] - center_x, lx);
      double r = std::sqrt(dx * dx + dy * dy);
      f(j, i) = inside * std::tanh((radius - r) / w);
    }
  }
  return f;
}

}  // namespace pfmcl
