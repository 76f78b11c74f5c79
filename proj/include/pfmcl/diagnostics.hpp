#pragma once

#include <string>
#include <vector>

#include "pfmcl/field.hpp"
#include "pfmcl/model.hpp"

namespace pfmcl {

enum class Scheme { CN, BDF2 };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// One time level of the discrete solution.
struct Level {
  Field phi;
  VectorField u;
  Field p;
  Field mu;  // chemical potential of the step that produced this level
  Field U;
  Trace W;  // row 0 bottom wall, row 1 top wall
};

struct State {
  GridPtr grid;
  double t = 0.0;
  long step = 0;
  Level cur;
  Level prev;
  bool has_prev = false;

  BoundaryField W_top() const { return {Wall::Top, cur.W.row(1).transpose()}; }
  BoundaryField W_bottom() const { return {Wall::Bottom, cur.W.row(0).transpose()}; }
};

/// Dissipation terms of one step; each is already multiplied by its physical
/// coefficient (M, nu, lambda/gamma, nu ell) but not by dt.
struct Dissipation {
  double mu = 0.0;       // M ||grad mu||^2
  double viscous = 0.0;  // nu ||grad u~||^2
  double phidot = 0.0;   // (lambda/gamma) ||phi_dot||_G^2
  double slip = 0.0;     // nu ell ||u~_s||_G^2
  double wall_work = 0.0;  // nu ell (u~_s, u_w)_G
  double total() const { return mu + viscous + phidot + slip + wall_work; }
};

struct DiagnosticsRecord {
  long step = 0;
  double t = 0.0;
  double E_original = 0.0;
  double E_ieq = 0.0;
  double volume = 0.0;
  int iterations = 0;
  double solver_residual = 0.0;
  /// CN: signed residual of the discrete energy identity; BDF2 and the
  /// startup step: slack of the energy inequality (>= 0 expected).
  double energy_residual = 0.0;
  Dissipation dissipation;
  double u_gap = 0.0;
  double mu_mean = 0.0;
};

/// Plain IEQ energy E(u, phi, U, W), including the -lambda C |Gamma| shift.
double energy_quadratic(const Grid& g, const ModelParams& p, const VectorField& u, const Field& phi,
                        const Field& U, const Trace& W);

double energy_original(const State& s, const ModelParams& p);
double energy_original(const Grid& g, const ModelParams& p, const VectorField& u, const Field& phi);

/// Scheme energy at the current level: CN adds dt^2/8 ||grad_h p||^2; BDF2
/// averages the current and the extrapolated level and adds dt^2/3 ||grad_h p||^2.
/// Without a previous level both reduce to the plain IEQ energy.
double energy_ieq(const State& s, const ModelParams& p, Scheme scheme, double dt);

double volume(const State& s);
double volume(const Field& phi);
double u_gap(const State& s);
double l2_error(const Field& a, const Field& b);
double l2_norm(const Field& a);

/// CN: E^{n+1} - E^n + dt D (zero up to solver tolerance).
/// BDF2: E^n - dt D - E^{n+1} (nonnegative).
double energy_law_check(const DiagnosticsRecord& rec_n, const DiagnosticsRecord& rec_np1,
                        Scheme scheme, double dt);

/// ||grad_h q||^2 with the wall-row y-derivative excluded (pressure space norm).
double pressure_gradient_sq(const Grid& g, const Nodal& q);

}  // namespace pfmcl
