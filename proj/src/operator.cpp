#include <stdexcept>

#include "pfmcl/solver.hpp"
#include "pfmcl/spectral.hpp"

namespace pfmcl {

Eigen::VectorXd pack(const CoupledVector& x) {
  const Grid& g = x.mu.grid();
  CoupledLayout lay(g);
  Eigen::VectorXd v(lay.size());
  lay.block(v, CoupledLayout::Mu) = x.mu.nodal();
  lay.block(v, CoupledLayout::Phi) = x.phi.nodal();
  lay.block(v, CoupledLayout::Ux) = x.u.x.nodal();
  lay.block(v, CoupledLayout::Uy) = x.u.y.nodal();
  return v;
}

CoupledVector unpack(const GridPtr& grid, const Eigen::VectorXd& v) {
  CoupledLayout lay(*grid);
  if (v.size() != lay.size()) throw std::invalid_argument("unpack: vector length does not match grid");
  CoupledVector x;
  x.mu = Field(grid, Nodal(lay.block(v, CoupledLayout::Mu)));
  x.phi = Field(grid, Nodal(lay.block(v, CoupledLayout::Phi)));
  x.u.x = Field(grid, Nodal(lay.block(v, CoupledLayout::Ux)));
  x.u.y = Field(grid, Nodal(lay.block(v, CoupledLayout::Uy)), YSpace::Dirichlet);
  return x;
}

Nodal skew_convection_component(const Grid& g, const Nodal& ux, const Nodal& uy, const Nodal& a,
                                bool dealias) {
  using namespace nodal;
  Nodal adv = product(g, ux, dx(g, a), dealias) + product(g, uy, dy(g, a), dealias);
  Nodal flux = dx(g, product(g, ux, a, dealias)) - dy_weak(g, product(g, uy, a, dealias));
  return 0.5 * (adv + flux);
}

CoupledOperator::CoupledOperator(GridPtr grid, OperatorCoeffs coeffs)
    : grid_(std::move(grid)), layout_(*grid_), c_(std::move(coeffs)) {
  const Grid& g = *grid_;
  auto check = [&g](const auto& a, int rows, const char* what) {
    if (a.rows() != rows || a.cols() != g.nx())
      throw std::invalid_argument(std::string("operator coefficients: bad shape for ") + what);
  };
  check(c_.phi_star, g.ny(), "phi_star");
  check(c_.ux_star, g.ny(), "ux_star");
  check(c_.uy_star, g.ny(), "uy_star");
  check(c_.z2, 2, "z2");
  check(c_.dphi_star, 2, "dphi_star");
  wvec_.resize(layout_.size());
  for (int b = 0; b < 4; ++b)
    layout_.block(wvec_, static_cast<CoupledLayout::Block>(b)) = g.weights();
}

Eigen::VectorXd CoupledOperator::apply_raw(const Eigen::VectorXd& xv) const {
  using namespace nodal;
  using L = CoupledLayout;
  const Grid& g = *grid_;
  const int top = g.ny() - 1;
  const bool d = c_.dealias;

  const Nodal mu = layout_.block(xv, L::Mu);
  const Nodal phi = layout_.block(xv, L::Phi);
  const Nodal ux = layout_.block(xv, L::Ux);
  Nodal uy = layout_.block(xv, L::Uy);
  uy.row(0).setZero();
  uy.row(top).setZero();

  Eigen::VectorXd out(layout_.size());
  auto o1 = layout_.block(out, L::Mu);
  auto o2 = layout_.block(out, L::Phi);
  auto o3 = layout_.block(out, L::Ux);
  auto o4 = layout_.block(out, L::Uy);

  // phase transport
  Nodal r1 = phi + c_.a_M * stiffness(g, mu);
  if (c_.a_c != 0.0)
    r1 -= c_.a_c * div_weak(g, product(g, ux, c_.phi_star, d), product(g, uy, c_.phi_star, d));
  o1 = r1;

  // chemical potential
  Trace phit = trace(g, phi);
  Trace uxt = trace(g, ux);
  Trace phidot = c_.kappa * phit + c_.theta * uxt * c_.dphi_star;
  Nodal r2 = -mu + c_.s_kappa * stiffness(g, phi) +
             c_.s_f * product(g, c_.phi_star, product(g, c_.phi_star, phi, d), d);
  add_boundary_spike(g, r2, c_.lam_gam * phidot + c_.s_z * c_.z2 * phit);
  o2 = r2;

  // momentum
  Nodal r3 = c_.m_u * ux + c_.a_nu * stiffness(g, ux);
  Nodal r4 = c_.m_u * uy + c_.a_nu * stiffness(g, uy);
  if (c_.a_b != 0.0) {
    r3 += c_.a_b * skew_convection_component(g, c_.ux_star, c_.uy_star, ux, d);
    r4 += c_.a_b * skew_convection_component(g, c_.ux_star, c_.uy_star, uy, d);
  }
  if (c_.a_c != 0.0) {
    r3 += c_.a_c * product(g, c_.phi_star, dx(g, mu), d);
    r4 += c_.a_c * product(g, c_.phi_star, dy(g, mu), d);
  }
  add_boundary_spike(g, r3, c_.a_ell * uxt + c_.a_c * c_.lam_gam * phidot * c_.dphi_star);
  r4.row(0) = layout_.block(xv, L::Uy).row(0);
  r4.row(top) = layout_.block(xv, L::Uy).row(top);
  o3 = r3;
  o4 = r4;
  return out;
}

Eigen::VectorXd CoupledOperator::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = apply_raw(x);
  project(y);
  return y;
}

void CoupledOperator::project(Eigen::VectorXd& v) const {
  using L = CoupledLayout;
  const Grid& g = *grid_;
  for (L::Block b : {L::Mu, L::Phi}) {
    auto blk = layout_.block(v, b);
    blk -= nodal::mean(g, Nodal(blk));
  }
  auto uy = layout_.block(v, L::Uy);
  uy.row(0).setZero();
  uy.row(g.ny() - 1).setZero();
}

double CoupledOperator::dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return (wvec_.array() * a.array() * b.array()).sum();
}

}  // namespace pfmcl
