#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfmcl/field.hpp"
#include "pfmcl/model.hpp"

namespace pfmcl {

/// Flat storage of X = (mu, phi, u_x, u_y), each block n_y x n_x row-major.
class CoupledLayout {
 public:
  enum Block { Mu = 0, Phi = 1, Ux = 2, Uy = 3 };
  using Map = Eigen::Map<Nodal>;
  using ConstMap = Eigen::Map<const Nodal>;

  explicit CoupledLayout(const Grid& g) : ny_(g.ny()), nx_(g.nx()) {}
  int block_size() const { return ny_ * nx_; }
  int size() const { return 4 * block_size(); }

  Map block(Eigen::VectorXd& v, Block b) const {
    return Map(v.data() + b * block_size(), ny_, nx_);
  }
  ConstMap block(const Eigen::VectorXd& v, Block b) const {
    return ConstMap(v.data() + b * block_size(), ny_, nx_);
  }

 private:
  int ny_;
  int nx_;
};

/// CoupledVector in structured form.
struct CoupledVector {
  Field mu;
  Field phi;
  VectorField u;
};

Eigen::VectorXd pack(const CoupledVector& x);
CoupledVector unpack(const GridPtr& grid, const Eigen::VectorXd& v);

/// Coefficients of the coupled (mu, phi, u) system for one step. Each scheme
/// fills the scalars; the frozen fields are the extrapolated phi*, u*, the
/// wall values of Z(phi*)^2 and of d_x phi*.
///
///   eq1 = phi - a_c (u phi*, grad w) + a_M (grad mu, grad w)
///   eq2 = -mu + s_kappa (grad phi, grad psi) + s_f (phi*^2 phi, psi)
///         + (lambda/gamma)(kappa phi + theta u_x dphi*, psi)_G + s_z (Z*^2 phi, psi)_G
///   eq3 = m_u u + a_b B(u*, u) + a_nu (grad u, grad v) + a_c phi* grad mu
///         + a_ell (u_x, v_x)_G + a_c (lambda/gamma)(kappa phi + theta u_x dphi*, dphi* v_x)_G
struct OperatorCoeffs {
  double a_c = 0.0;
  double a_M = 0.0;
  double s_kappa = 0.0;
  double s_f = 0.0;
  double kappa = 0.0;
  double theta = 0.0;
  double s_z = 0.0;
  double m_u = 0.0;
  double a_b = 0.0;
  double a_nu = 0.0;
  double a_ell = 0.0;
  double lam_gam = 0.0;  // lambda / gamma
  Nodal phi_star;
  Nodal ux_star;
  Nodal uy_star;
  Trace z2;
  Trace dphi_star;
  bool dealias = false;
};

/// Matrix-free coupled operator. Outputs are nodal representatives of the
/// Galerkin residual (the functional divided by the diagonal LGL mass), so
/// (A X, Y)_N equals the bilinear form a(X, Y).
class CoupledOperator {
 public:
  CoupledOperator(GridPtr grid, OperatorCoeffs coeffs);

  const Grid& grid() const { return *grid_; }
  const CoupledLayout& layout() const { return layout_; }
  const OperatorCoeffs& coeffs() const { return c_; }

  /// Raw action. u_y values on the wall rows are ignored and echoed back in
  /// the corresponding output rows, which keeps the operator square on the
  /// full coefficient vector.
  Eigen::VectorXd apply_raw(const Eigen::VectorXd& x) const;
  /// Raw action followed by the mean projection of the mu and phi rows.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

  /// Subtracts the quadrature means of the mu and phi blocks and zeroes u_y on
  /// the walls.
  void project(Eigen::VectorXd& v) const;

  /// Quadrature inner product summed over the four blocks.
  double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

 private:
  GridPtr grid_;
  CoupledLayout layout_;
  OperatorCoeffs c_;
  Eigen::VectorXd wvec_;
};

/// Skew-symmetric convection: representative of
/// v -> ((u.grad) a, v)/2 - ((u.grad) v, a)/2 for one scalar component a.
Nodal skew_convection_component(const Grid& g, const Nodal& ux, const Nodal& uy, const Nodal& a,
                                bool dealias);

/// Per-Fourier-mode direct solver for the constant-coefficient approximation
/// of the coupled operator. Convection and the wall cross terms between phi
/// and u are dropped; phi*^2, Z*^2 and (d_x phi*)^2 are replaced by their
/// domain / wall means. The u phi* / phi* grad mu coupling is not kept as a
/// block but its velocity Schur complement a_c^2 <phi*^2> div B_u^{-1} grad is
/// added to the mobility block, since it dominates a_M K for large dt.
class Preconditioner {
 public:
  Preconditioner(GridPtr grid, const OperatorCoeffs& coeffs);
  Eigen::VectorXd apply(const Eigen::VectorXd& r) const;

  double mean_phi_star_sq() const { return c1_; }
  double mean_z2() const { return c2_; }
  double mean_dphi_star_sq() const { return c3_; }

 private:
  GridPtr grid_;
  CoupledLayout layout_;
  double c1_ = 0.0, c2_ = 0.0, c3_ = 0.0;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> chem_;  // (mu, phi) per mode
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> ux_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> uy_;  // interior rows only
};

struct SolverError : std::runtime_error {
  SolverError(const std::string& what, Eigen::VectorXd best, double residual, int iterations)
      : std::runtime_error(what), best_iterate(std::move(best)), residual(residual),
        iterations(iterations) {}
  Eigen::VectorXd best_iterate;
  double residual;
  int iterations;
};

struct KrylovResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;  // final relative residual
  int restarts = 0;
};

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using InnerProduct = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

/// Right-preconditioned BiCGSTAB. Stops when ||b - A x|| <= tol ||b|| in the
/// given inner product. A rho breakdown restarts once from the current
/// iterate; a second breakdown or exceeding maxit throws SolverError.
/// abs_floor: residual norm that counts as converged regardless of ||b||,
/// for right-hand sides that are themselves round-off.
KrylovResult bicgstab(const LinearMap& op, const LinearMap& precond, const Eigen::VectorXd& b,
                      double tol, int maxit, const Eigen::VectorXd* x0 = nullptr,
                      const InnerProduct& dot = nullptr, double abs_floor = 0.0);

/// Neumann Poisson / projection solver on the pressure space: Fourier modes
/// times Legendre polynomials of degree <= n - 2, minus the constant. The
/// discrete gradient grad_h zeroes the y-component on the wall rows so that
/// corrected velocities keep u_y = 0 there exactly.
class PressureSolver {
 public:
  explicit PressureSolver(GridPtr grid);

  /// grad_h of a nodal scalar.
  void gradient(const Nodal& q, Nodal& gx, Nodal& gy) const;

  /// Solves (grad_h psi, grad_h q)_N = (u, grad_h q)_N / factor for psi.
  Nodal solve_projection(const Nodal& ux, const Nodal& uy, double factor) const;

  /// Weak solution of lap psi = rhs with d_n psi = 0 on the walls and mean(psi) = 0.
  Nodal solve_neumann(const Nodal& rhs) const;

  /// L2 projection onto the pressure space (constant removed).
  Nodal project_to_space(const Nodal& a) const;

 private:
  /// Solves (k^2 M_Q + S_Q) c = f per mode for the functional f = (r, q)_N.
  Nodal solve_functional(const Nodal& r) const;

  GridPtr grid_;
  Eigen::MatrixXd vq_;     // n_y x (n - 1): L_l(y_j)
  Eigen::MatrixXd eig_z_;  // generalized eigenvectors, M_Q-orthonormal
  Eigen::VectorXd eig_l_;  // generalized eigenvalues
};

struct ProjectionResult {
  VectorField u;
  Field p;
  Field psi;
};

/// Pressure-correction step: psi solves the projection problem for u_tilde
/// with the given factor, u = u_tilde - factor grad_h psi, p = p_old + psi
/// (minus nu div u_tilde projected onto the pressure space when rotational).
ProjectionResult project_pressure(const PressureSolver& solver, const VectorField& u_tilde,
                                  const Field& p_old, double factor, bool rotational, double nu);

Field poisson_neumann_solve(const PressureSolver& solver, const Field& rhs);

}  // namespace pfmcl
