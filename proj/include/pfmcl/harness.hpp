#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfmcl/stepper.hpp"

namespace pfmcl {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or incompatible checkpoint file.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A run that stopped because the linear solver failed. Carries enough to
/// locate the failure; the last good state is dumped next to the outputs.
struct RunError : std::runtime_error {
  RunError(const std::string& what, long step, double t, double residual, int iterations,
           std::string dump)
      : std::runtime_error(what), step(step), t(t), residual(residual), iterations(iterations),
        dump(std::move(dump)) {}
  long step;
  double t;
  double residual;
  int iterations;
  std::string dump;
};

using KeyValues = std::map<std::string, std::string>;

/// Everything that determines a run. Text form is flat "key = value" lines;
/// see config_keys() for the schema.
struct RunConfig {
  std::string preset = "relaxation";
  ModelParams params;
  SchemeConfig scheme;
  int nx = 257;  // odd: 2m + 1 points in x
  int ny = 32;   // n + 1 Lobatto points in y

  std::string initial = "stripe";     // stripe | drop | uniform
  std::string velocity = "couette";   // couette | zero | slip-couette
  double drop_radius = 0.5;
  double drop_center = 5.0;
  double drop_phase = -1.0;  // phase value inside the drop
  double uniform_phi = 1.0;

  std::string out_dir;            // empty: no files
  double snapshot_every = 0.0;    // time between snapshots, 0 = none
  int checkpoint_every = 0;       // steps between checkpoints, 0 = none
  int csv_every = 1;              // steps between time-series rows
  double wall_profile_at = -1.0;  // time of the wall slip profile, < 0 = none
  unsigned seed = 0;
  std::string restart;            // checkpoint to resume from

  int m() const { return (nx - 1) / 2; }
  int n() const { return ny - 1; }
  void validate() const;
};

struct ConfigKey {
  std::string name;
  std::string doc;
};
const std::vector<ConfigKey>& config_keys();

/// Names of the built-in presets and the parent each inherits from.
std::vector<std::string> preset_names();
KeyValues preset_values(const std::string& name);  // flattened along the parent chain

KeyValues parse_config_text(const std::string& text, const std::string& origin = "<text>");
KeyValues parse_config_file(const std::string& path);

/// Defaults, then the preset chain named by overrides["preset"] (or the
/// default preset), then the overrides. Throws ConfigError.
RunConfig resolve_config(const KeyValues& overrides);
void apply_key(RunConfig& c, const std::string& key, const std::string& value);
KeyValues to_key_values(const RunConfig& c);
void log_config(std::ostream& os, const RunConfig& c);

// ---- data output ----

std::string csv_header();
std::string csv_row(const DiagnosticsRecord& r);

void write_snapshot(const std::string& path, const State& s);
void write_coordinates(const std::string& path, const Grid& g);
/// x, u_x and the slip u_x - u_w along one wall.
void write_wall_profile(const std::string& path, const Grid& g, const BoundaryField& ux,
                        double wall_speed);
BoundaryField wall_velocity(const State& s, Wall w);

void write_checkpoint(const std::string& path, const State& s);
State read_checkpoint(const std::string& path);

// ---- driving a run ----

/// Owns the context and state of one run.
class Simulation {
 public:
  explicit Simulation(const RunConfig& cfg);

  const RunConfig& config() const { return cfg_; }
  const StepContext& context() const { return ctx_; }
  const GridPtr& grid() const { return ctx_.grid; }
  const State& state() const { return state_; }
  const std::vector<DiagnosticsRecord>& records() const { return records_; }
  const StepResult& last() const { return last_; }
  /// Steps needed to reach t_max from the current state.
  long remaining_steps() const;
  void step();

 private:
  RunConfig cfg_;
  StepContext ctx_;
  State state_;
  std::vector<DiagnosticsRecord> records_;
  StepResult last_;
};

State initial_state(const RunConfig& cfg, const GridPtr& grid);

struct RunSummary {
  std::vector<DiagnosticsRecord> records;
  State final_state;
  double mean_iterations = 0.0;  // over steps after the startup step
};

using StepCallback = std::function<void(const Simulation&)>;

/// March to t_max writing the configured artifacts; on_step sees the state
/// after every step. Throws ConfigError, RunError, FormatError or
/// std::ios_base::failure.
RunSummary run(const RunConfig& cfg, std::ostream* log = nullptr, const StepCallback& on_step = {});

// ---- experiments ----

struct TemporalOptions {
  double dt0 = 0.016;
  int levels = 5;
  double dt_ref = 2.5e-4;
  double t_final = 0.4;
};

struct ConvergenceRow {
  std::string scheme;
  double dt = 0.0;
  int nx = 0, ny = 0;
  double err_phi = 0.0;
  double err_u = 0.0;
};

struct TemporalResult {
  std::vector<ConvergenceRow> rows;
  double slope_phi_cn = 0.0, slope_u_cn = 0.0;
  double slope_phi_bdf2 = 0.0, slope_u_bdf2 = 0.0;
};

/// Least-squares slope of log(err) against log(h).
double fitted_slope(const std::vector<double>& h, const std::vector<double>& err);

TemporalResult experiment_temporal_convergence(const RunConfig& base, const TemporalOptions& o,
                                               std::ostream* log = nullptr);

struct SpatialOptions {
  std::vector<int> nx_list{41, 81, 121, 161, 201, 241};
  std::vector<int> ny_list{8, 12, 16, 20, 24, 32, 40};
  int nx_ref = 511;
  int ny_ref = 64;
  double dt = 5e-4;
  double t_final = 0.2;
  double solver_tol = 1e-10;  // keeps the solver floor below the spatial errors
};

struct SpatialResult {
  std::vector<ConvergenceRow> x_sweep;  // ny = ny_ref
  std::vector<ConvergenceRow> y_sweep;  // nx = nx_ref
};

SpatialResult experiment_spatial_convergence(const RunConfig& base, const SpatialOptions& o,
                                             std::ostream* log = nullptr);

struct IterationRow {
  std::string parameter;  // default | grid | gamma | dt | lambda
  std::string value;
  double mean_cn = 0.0;
  double mean_bdf2 = 0.0;
};

struct IterationOptions {
  int steps = 20;  // steps after startup per run
  bool grid = true, gamma = true, dt = true, lambda = true;
};

std::vector<IterationRow> experiment_iterations(const RunConfig& base, const IterationOptions& o,
                                                std::ostream* log = nullptr);

struct DropReport {
  double theta_s = 0.0;
  std::optional<double> detachment_time;
  double volume_drift = 0.0;  // relative to |Omega|
  double t_final = 0.0;
};

/// True when the bottom-wall trace has left the drop phase everywhere.
bool detached(const State& s, double drop_phase);

DropReport experiment_drop_shear(const RunConfig& cfg, std::ostream* log = nullptr);

}  // namespace pfmcl
