#include <stdexcept>

#include "pfmcl/solver.hpp"
#include "pfmcl/spectral.hpp"

namespace pfmcl {

namespace {

void check_factor(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, int k) {
  double d = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  double s = lu.matrixLU().diagonal().cwiseAbs().maxCoeff();
  if (!(d > 1e-14 * s))
    throw std::runtime_error("preconditioner: singular factorization in Fourier mode " +
                             std::to_string(k));
}

}  // namespace

Preconditioner::Preconditioner(GridPtr grid, const OperatorCoeffs& c)
    : grid_(std::move(grid)), layout_(*grid_) {
  const Grid& g = *grid_;
  const int ny = g.ny();
  const int n = g.n();
  const int ni = ny - 2;

  c1_ = nodal::mean(g, c.phi_star * c.phi_star);
  c2_ = nodal::boundary_mean(g, c.z2);
  c3_ = nodal::boundary_mean(g, c.dphi_star * c.dphi_star);

  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(g.wy().data(), ny);
  Eigen::MatrixXd mw = w.asDiagonal();
  Eigen::MatrixXd s = g.dy_matrix().transpose() * mw * g.dy_matrix();
  Eigen::MatrixXd bnd = Eigen::MatrixXd::Zero(ny, ny);
  bnd(0, 0) = 1.0;
  bnd(n, n) = 1.0;
  // (w, d_y mu) on interior rows
  Eigen::MatrixXd gy = (mw * g.dy_matrix()).middleRows(1, ni);

  const double wall_phi = c.lam_gam * c.kappa + c.s_z * c2_;
  const double wall_u = c.a_ell + c.a_c * c.lam_gam * c.theta * c3_;
  const double schur = c.a_c * c.a_c * c1_;

  chem_.reserve(g.m() + 1);
  ux_.reserve(g.m() + 1);
  uy_.reserve(g.m() + 1);
  for (int k = 0; k <= g.m(); ++k) {
    double kw = g.wavenumber(k);
    Eigen::MatrixXd kk = kw * kw * mw + s;
    Eigen::MatrixXd bu = c.m_u * mw + c.a_nu * kk;
    ux_.emplace_back(Eigen::MatrixXd(bu + wall_u * bnd));
    check_factor(ux_.back(), k);
    uy_.emplace_back(Eigen::MatrixXd(bu.block(1, 1, ni, ni)));
    check_factor(uy_.back(), k);

    // mobility block plus the velocity Schur complement of the mu-u coupling
    Eigen::MatrixXd smu = c.a_M * kk;
    if (schur > 0.0) {
      smu += schur * (kw * kw * mw * ux_.back().solve(mw) + gy.transpose() * uy_.back().solve(gy));
    }

    const int nb = (k == 0) ? 2 * ny + 2 : 2 * ny;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nb, nb);
    a.topLeftCorner(ny, ny) = smu;
    a.block(0, ny, ny, ny) = mw;
    a.block(ny, 0, ny, ny) = -mw;
    a.block(ny, ny, ny, ny) = c.s_kappa * kk + c.s_f * c1_ * mw + wall_phi * bnd;
    if (k == 0) {
      // mean constraints on mu and phi with their multipliers
      a.block(0, 2 * ny, ny, 1) = w;
      a.block(ny, 2 * ny + 1, ny, 1) = w;
      a.block(2 * ny, 0, 1, ny) = w.transpose();
      a.block(2 * ny + 1, ny, 1, ny) = w.transpose();
    }
    chem_.emplace_back(a);
    check_factor(chem_.back(), k);
  }
}

Eigen::VectorXd Preconditioner::apply(const Eigen::VectorXd& r) const {
  using L = CoupledLayout;
  const Grid& g = *grid_;
  const int ny = g.ny();
  const int mc = g.m() + 1;
  if (r.size() != layout_.size()) throw std::invalid_argument("preconditioner: size mismatch");

  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(g.wy().data(), ny);
  FourierRows rmu = g.forward_x(Nodal(layout_.block(r, L::Mu)));
  FourierRows rphi = g.forward_x(Nodal(layout_.block(r, L::Phi)));
  FourierRows rux = g.forward_x(Nodal(layout_.block(r, L::Ux)));
  FourierRows ruy = g.forward_x(Nodal(layout_.block(r, L::Uy)));

  FourierRows smu(ny, mc), sphi(ny, mc), sux(ny, mc), suy(ny, mc);
  suy.setZero();
  for (int k = 0; k < mc; ++k) {
    const int nb = (k == 0) ? 2 * ny + 2 : 2 * ny;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nb, 2);
    for (int j = 0; j < ny; ++j) {
      rhs(j, 0) = w[j] * rmu(j, k).real();
      rhs(j, 1) = w[j] * rmu(j, k).imag();
      rhs(ny + j, 0) = w[j] * rphi(j, k).real();
      rhs(ny + j, 1) = w[j] * rphi(j, k).imag();
    }
    Eigen::MatrixXd sol = chem_[k].solve(rhs);
    for (int j = 0; j < ny; ++j) {
      smu(j, k) = {sol(j, 0), sol(j, 1)};
      sphi(j, k) = {sol(ny + j, 0), sol(ny + j, 1)};
    }

    Eigen::MatrixXd ru(ny, 2);
    for (int j = 0; j < ny; ++j) ru.row(j) << w[j] * rux(j, k).real(), w[j] * rux(j, k).imag();
    Eigen::MatrixXd su = ux_[k].solve(ru);
    for (int j = 0; j < ny; ++j) sux(j, k) = {su(j, 0), su(j, 1)};

    Eigen::MatrixXd rv(ny - 2, 2);
    for (int j = 1; j < ny - 1; ++j)
      rv.row(j - 1) << w[j] * ruy(j, k).real(), w[j] * ruy(j, k).imag();
    Eigen::MatrixXd sv = uy_[k].solve(rv);
    for (int j = 1; j < ny - 1; ++j) suy(j, k) = {sv(j - 1, 0), sv(j - 1, 1)};
  }

  Eigen::VectorXd out(layout_.size());
  layout_.block(out, L::Mu) = g.backward_x(smu);
  layout_.block(out, L::Phi) = g.backward_x(sphi);
  layout_.block(out, L::Ux) = g.backward_x(sux);
  layout_.block(out, L::Uy) = g.backward_x(suy);
  return out;
}

}  // namespace pfmcl
