#pragma once

#include <memory>

#include "pfmcl/diagnostics.hpp"
#include "pfmcl/solver.hpp"

namespace pfmcl {

struct SchemeConfig {
  Scheme scheme = Scheme::CN;
  double dt = 0.01;
  double t_max = 1.0;
  double solver_tol = 1e-8;
  int solver_maxit = 500;
  bool rotational_pressure = false;
  bool dealias = false;
  /// Start BiCGSTAB from an extrapolation of the previous levels instead of zero.
  bool warm_start = true;
  /// After the startup step set U = phi^2 - 1 and W = sqrt(G(phi) + C) from phi^1.
  bool startup_reinit_aux = false;

  void validate() const;
};

enum class StarKind { Half, Full };

/// (3/2) S^n - (1/2) S^{n-1} or 2 S^n - S^{n-1}.
double extrapolate_star(double s_n, double s_nm1, StarKind kind);
Nodal extrapolate_star(const Nodal& s_n, const Nodal& s_nm1, StarKind kind);

/// Skew-symmetric convection B(u, v) = (u.grad) v + (div u) v / 2 in its
/// Galerkin-consistent form; the y-component is zero on the wall rows.
VectorField skew_convection_B(const VectorField& u, const VectorField& v, bool dealias = false);

/// Right-hand side of the coupled system: bulk parts f and wall parts g. The
/// wall parts enter the weak form as g2_scale (g2, psi)_G and g1_scale (g1, v_x)_G.
struct StepRhs {
  Field f1;
  Field f2;
  VectorField f3;
  Trace g1;  // tangential component, both walls
  Trace g2;
  double g1_scale = 1.0;
  double g2_scale = 1.0;
};
using CnRhs = StepRhs;

/// Everything a step needs besides the state.
struct StepContext {
  StepContext(GridPtr grid, ModelParams params, SchemeConfig config);
  GridPtr grid;
  ModelParams params;
  SchemeConfig config;
  PressureSolver pressure;

  /// Wall speeds as a trace (row 0 bottom, row 1 top).
  Trace wall_speed() const;
};

/// Frozen data and operator coefficients for one step of a given kind.
enum class StepKind { CN, BDF2, Startup };

struct StepSystem {
  OperatorCoeffs coeffs;
  StepRhs rhs;
  Trace z_star;
  Nodal phi_star;
  double projection_factor = 0.0;
};

StepSystem build_system(const StepContext& ctx, const State& s, StepKind kind);

CnRhs assemble_cn_rhs(const StepContext& ctx, const State& s);
StepRhs assemble_bdf2_rhs(const StepContext& ctx, const State& s);
StepRhs assemble_startup_rhs(const StepContext& ctx, const State& s);

/// Nodal weak right-hand side vector (mu, phi, u_x, u_y blocks).
Eigen::VectorXd rhs_vector(const Grid& g, const StepRhs& rhs);

/// Intermediate quantities of a step, exposed for diagnostics and tests.
struct StepDetail {
  StepKind kind = StepKind::CN;
  Field mu;
  Field phi_new;
  VectorField u_tilde;
  Field U_new;
  Trace W_new;
  Trace phidot;  // wall material derivative used in the dissipation
  Field psi;
  Eigen::VectorXd solution;  // (mu, phi - mean, u_tilde) as solved
  int iterations = 0;
  double solver_residual = 0.0;
};

struct StepResult {
  State state;
  DiagnosticsRecord record;
  StepDetail detail;
};

/// CN U and W updates: U + 2 phi* dphi, W + Z* dphi / 2.
std::pair<Field, Trace> update_aux_cn(const State& s, const Field& phi_star, const Trace& z_star,
                                      const Field& phi_new, bool dealias = false);

StepResult step_cn(const StepContext& ctx, const State& s);
StepResult step_bdf2(const StepContext& ctx, const State& s);
/// First-order backward-Euler IEQ step from level 0.
StepResult startup_first_order(const StepContext& ctx, const State& s0);
/// startup when no previous level exists, otherwise the configured scheme.
StepResult advance(const StepContext& ctx, const State& s);

/// State at t = 0 with U, W initialized exactly and p = 0.
State make_initial_state(const GridPtr& grid, const ModelParams& p, const Field& phi0,
                         const VectorField& u0);

/// Diagnostics of a level that was not produced by a step (initial condition).
DiagnosticsRecord initial_record(const StepContext& ctx, const State& s);

}  // namespace pfmcl
