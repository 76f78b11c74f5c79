#include <stdexcept>

#include "pfmcl/solver.hpp"
#include "pfmcl/spectral.hpp"

namespace pfmcl {

PressureSolver::PressureSolver(GridPtr grid) : grid_(std::move(grid)) {
  const Grid& g = *grid_;
  const int ny = g.ny();
  const int nq = g.n() - 1;
  vq_ = g.legendre_vandermonde().leftCols(nq);

  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(g.wy().data(), ny);
  Eigen::MatrixXd gq = g.dy_matrix() * vq_;
  gq.row(0).setZero();
  gq.row(ny - 1).setZero();
  Eigen::MatrixXd sq = gq.transpose() * w.asDiagonal() * gq;
  Eigen::MatrixXd mq = vq_.transpose() * w.asDiagonal() * vq_;

  // L_0 spans the kernel of S_Q and is M_Q-orthogonal to the rest, so the
  // zero mode drops out by solving on degrees 1..n-2 only.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(sq.bottomRightCorner(nq - 1, nq - 1),
                                                               mq.bottomRightCorner(nq - 1, nq - 1));
  if (es.info() != Eigen::Success) throw std::runtime_error("pressure solver: eigensolve failed");
  eig_z_ = Eigen::MatrixXd::Zero(nq, nq);
  eig_z_(0, 0) = 1.0 / std::sqrt(mq(0, 0));
  eig_z_.bottomRightCorner(nq - 1, nq - 1) = es.eigenvectors();
  eig_l_.resize(nq);
  eig_l_(0) = 0.0;
  eig_l_.tail(nq - 1) = es.eigenvalues();
}

void PressureSolver::gradient(const Nodal& q, Nodal& gx, Nodal& gy) const {
  const Grid& g = *grid_;
  gx = nodal::dx(g, q);
  gy = nodal::dy(g, q);
  gy.row(0).setZero();
  gy.row(g.ny() - 1).setZero();
}

Nodal PressureSolver::solve_functional(const Nodal& r) const {
  const Grid& g = *grid_;
  const int ny = g.ny();
  const int nq = g.n() - 1;
  FourierRows rh = g.forward_x(r);
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(g.wy().data(), ny);
  Eigen::MatrixXd ft = vq_.transpose() * w.asDiagonal();
  Eigen::MatrixXcd f = ft.cast<std::complex<double>>() * rh.matrix();
  Eigen::MatrixXcd proj = eig_z_.transpose().cast<std::complex<double>>() * f;
  for (int k = 0; k <= g.m(); ++k) {
    double k2 = g.wavenumber(k) * g.wavenumber(k);
    for (int i = 0; i < nq; ++i) {
      if (k == 0 && i == 0)
        proj(i, k) = 0.0;
      else
        proj(i, k) /= (k2 + eig_l_(i));
    }
  }
  Eigen::MatrixXcd c = eig_z_.cast<std::complex<double>>() * proj;
  FourierRows ph(ny, g.m() + 1);
  ph.matrix() = vq_.cast<std::complex<double>>() * c;
  return g.backward_x(ph);
}

Nodal PressureSolver::solve_projection(const Nodal& ux, const Nodal& uy, double factor) const {
  const Grid& g = *grid_;
  Nodal uyh = uy;
  uyh.row(0).setZero();
  uyh.row(g.ny() - 1).setZero();
  return solve_functional(nodal::div_weak(g, ux, uyh) / factor);
}

Nodal PressureSolver::solve_neumann(const Nodal& rhs) const {
  const Grid& g = *grid_;
  Nodal r = rhs - nodal::mean(g, rhs);
  return solve_functional(-r);
}

Nodal PressureSolver::project_to_space(const Nodal& a) const {
  const Grid& g = *grid_;
  FourierRows c = legendre_forward(g, a);
  c.row(g.n() - 1).setZero();
  c.row(g.n()).setZero();
  c(0, 0) = 0.0;
  return legendre_backward(g, c);
}

ProjectionResult project_pressure(const PressureSolver& solver, const VectorField& u_tilde,
                                  const Field& p_old, double factor, bool rotational, double nu) {
  const GridPtr& gp = u_tilde.x.grid_ptr();
  const Grid& g = *gp;
  Nodal psi = solver.solve_projection(u_tilde.x.nodal(), u_tilde.y.nodal(), factor);
  Nodal gx, gy;
  solver.gradient(psi, gx, gy);
  ProjectionResult out;
  out.u.x = Field(gp, u_tilde.x.nodal() - factor * gx);
  Nodal uy = u_tilde.y.nodal() - factor * gy;
  uy.row(0).setZero();
  uy.row(g.ny() - 1).setZero();
  out.u.y = Field(gp, uy, YSpace::Dirichlet);
  Nodal p = p_old.nodal() + psi;
  if (rotational) {
    Nodal div = nodal::dx(g, u_tilde.x.nodal()) + nodal::dy(g, u_tilde.y.nodal());
    p -= nu * solver.project_to_space(div);
  }
  out.p = Field(gp, p, YSpace::Pressure);
  out.psi = Field(gp, psi, YSpace::Pressure);
  return out;
}

Field poisson_neumann_solve(const PressureSolver& solver, const Field& rhs) {
  return Field(rhs.grid_ptr(), solver.solve_neumann(rhs.nodal()), YSpace::Pressure);
}

}  // namespace pfmcl
