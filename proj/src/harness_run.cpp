#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include "json.hpp"

#include "pfmcl/harness.hpp"
#include "pfmcl/spectral.hpp"

namespace pfmcl {

namespace fs = std::filesystem;

namespace {

std::string numbered(const std::string& dir, const char* stem, long k, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06ld.%s", stem, k, ext);
  return (fs::path(dir) / buf).string();
}

VectorField initial_velocity(const RunConfig& cfg, const GridPtr& g) {
  const ModelParams& p = cfg.params;
  if (cfg.velocity == "couette") return initial_velocity_couette(g, p);
  VectorField u{Field(g), Field(g, YSpace::Dirichlet)};
  if (cfg.velocity == "slip-couette") {
    // linear profile satisfying the Navier slip condition on both walls
    const double a = p.ell * (p.u_w_top - p.u_w_bottom) / (2.0 * (1.0 + p.ell));
    const double b = 0.5 * (p.u_w_top + p.u_w_bottom);
    for (int j = 0; j < g->ny(); ++j) u.x.nodal().row(j).setConstant(a * g->y()[j] + b);
  }
  return u;
}

}  // namespace

State initial_state(const RunConfig& cfg, const GridPtr& g) {
  const ModelParams& p = cfg.params;
  Field phi;
  if (cfg.initial == "stripe") phi = initial_phi_stripe(g, p);
  else if (cfg.initial == "drop")
    phi = initial_phi_drop(g, p, cfg.drop_center, cfg.drop_radius, cfg.drop_phase);
  else phi = Field(g, Nodal::Constant(g->ny(), g->nx(), cfg.uniform_phi));
  return make_initial_state(g, p, phi, initial_velocity(cfg, g));
}

Simulation::Simulation(const RunConfig& cfg)
    : cfg_(cfg), ctx_((cfg.validate(), make_grid(cfg.m(), cfg.n(), cfg.params.L_x)), cfg.params, cfg.scheme) {
  if (!cfg_.restart.empty()) {
    state_ = read_checkpoint(cfg_.restart);
    const Grid& g = *state_.grid;
    if (g.m() != grid()->m() || g.n() != grid()->n() || g.lx() != grid()->lx())
      throw ConfigError("config: checkpoint grid " + std::to_string(g.nx()) + "x" +
                        std::to_string(g.ny()) + " does not match the configured grid");
    state_.grid = grid();
    for (Level* l : {&state_.cur, &state_.prev}) {
      if (l == &state_.prev && !state_.has_prev) continue;
      for (Field* f : {&l->phi, &l->u.x, &l->u.y, &l->p, &l->mu, &l->U})
        *f = Field(grid(), f->nodal(), f->space());
    }
  } else {
    state_ = initial_state(cfg_, grid());
  }
  records_.push_back(initial_record(ctx_, state_));
}

long Simulation::remaining_steps() const {
  return std::max(0L, std::lround((cfg_.scheme.t_max - state_.t) / cfg_.scheme.dt));
}

void Simulation::step() {
  last_ = advance(ctx_, state_);
  state_ = last_.state;
  records_.push_back(last_.record);
}

RunSummary run(const RunConfig& cfg, std::ostream* log, const StepCallback& on_step) {
  Simulation sim(cfg);
  const bool io = !cfg.out_dir.empty();
  if (log) log_config(*log, sim.config());

  std::ofstream csv;
  if (io) {
    fs::create_directories(cfg.out_dir);
    std::ofstream params(fs::path(cfg.out_dir) / "params.txt");
    log_config(params, sim.config());
    write_coordinates((fs::path(cfg.out_dir) / "coordinates.txt").string(), *sim.grid());
    csv.open(fs::path(cfg.out_dir) / "timeseries.csv");
    if (!csv || !params) throw std::ios_base::failure("cannot write into '" + cfg.out_dir + "'");
    csv << csv_header() << "\n" << csv_row(sim.records().back()) << "\n";
  }

  const double dt = cfg.scheme.dt;
  auto snap_index = [&](double t) { return std::floor(t / cfg.snapshot_every + 1e-6 * dt / cfg.snapshot_every); };
  double last_snap = -1.0;
  if (io && cfg.snapshot_every > 0.0) {
    last_snap = snap_index(sim.state().t);
    write_snapshot(numbered(cfg.out_dir, "snapshot", sim.state().step, "txt"), sim.state());
  }
  bool profile_done = cfg.wall_profile_at < 0.0;

  const long total = sim.remaining_steps();
  const long report = std::max(1L, total / 10);
  for (long k = 0; k < total; ++k) {
    try {
      sim.step();
    } catch (const SolverError& e) {
      std::string dump;
      if (io) {
        dump = (fs::path(cfg.out_dir) / "failure_state.ckpt").string();
        write_checkpoint(dump, sim.state());
      }
      throw RunError(e.what(), sim.state().step + 1, sim.state().t + dt, e.residual, e.iterations, dump);
    }
    const State& s = sim.state();
    const DiagnosticsRecord& r = sim.records().back();
    if (io) {
      if (s.step % cfg.csv_every == 0 || k + 1 == total) csv << csv_row(r) << "\n";
      if (cfg.snapshot_every > 0.0 && snap_index(s.t) > last_snap) {
        last_snap = snap_index(s.t);
        write_snapshot(numbered(cfg.out_dir, "snapshot", s.step, "txt"), s);
      }
      if (cfg.checkpoint_every > 0 && s.step % cfg.checkpoint_every == 0)
        write_checkpoint((fs::path(cfg.out_dir) / "checkpoint.ckpt").string(), s);
      if (!profile_done && s.t >= cfg.wall_profile_at - 0.5 * dt) {
        write_wall_profile((fs::path(cfg.out_dir) / "wall_slip_bottom.csv").string(), *s.grid,
                           wall_velocity(s, Wall::Bottom), cfg.params.u_w_bottom);
        profile_done = true;
      }
    }
    if (log && ((k + 1) % report == 0 || k + 1 == total)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "step %ld t=%.4f E_ieq=%.10g E=%.10g iterations=%d\n", s.step, s.t,
                    r.E_ieq, r.E_original, r.iterations);
      *log << buf << std::flush;
    }
    if (on_step) on_step(sim);
  }

  RunSummary out;
  out.records = sim.records();
  out.final_state = sim.state();
  long n = 0;
  double sum = 0.0;
  for (const auto& r : out.records)
    if (r.step >= 2) {
      sum += r.iterations;
      ++n;
    }
  out.mean_iterations = n ? sum / n : 0.0;

  if (io) {
    const auto& recs = out.records;
    nlohmann::json j = {
        {"preset", cfg.preset},
        {"steps", out.final_state.step},
        {"t_final", out.final_state.t},
        {"mean_iterations", out.mean_iterations},
        {"E_ieq_initial", recs.front().E_ieq},
        {"E_ieq_final", recs.back().E_ieq},
        {"volume_drift", std::abs(recs.back().volume - recs.front().volume) / sim.grid()->domain_measure()},
    };
    std::ofstream(fs::path(cfg.out_dir) / "summary.json") << j.dump(2) << "\n";
  }
  return out;
}

// ---- experiments ----

namespace {

State march(RunConfig c) {
  c.out_dir.clear();
  c.restart.clear();
  Simulation sim(c);
  for (long k = sim.remaining_steps(); k > 0; --k) sim.step();
  return sim.state();
}

double velocity_error(const State& a, const State& b) {
  double ex = l2_error(a.cur.u.x, b.cur.u.x), ey = l2_error(a.cur.u.y, b.cur.u.y);
  return std::sqrt(ex * ex + ey * ey);
}

}  // namespace

double fitted_slope(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  if (n < 2 || err.size() != n) throw std::invalid_argument("fitted_slope: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TemporalResult experiment_temporal_convergence(const RunConfig& base, const TemporalOptions& o,
                                               std::ostream* log) {
  RunConfig c = base;
  c.scheme.t_max = o.t_final;
  c.snapshot_every = 0.0;
  c.checkpoint_every = 0;
  c.wall_profile_at = -1.0;

  RunConfig rc = c;
  rc.scheme.scheme = Scheme::BDF2;
  rc.scheme.dt = o.dt_ref;
  if (log) *log << "reference: bdf2 dt=" << o.dt_ref << " to t=" << o.t_final << "\n" << std::flush;
  const State ref = march(rc);

  TemporalResult out;
  for (Scheme sc : {Scheme::CN, Scheme::BDF2}) {
    std::vector<double> h, ep, eu;
    for (int k = 0; k < o.levels; ++k) {
      RunConfig r = c;
      r.scheme.scheme = sc;
      r.scheme.dt = o.dt0 / std::pow(2.0, k);
      State s = march(r);
      ConvergenceRow row{to_string(sc), r.scheme.dt, c.nx, c.ny, l2_error(s.cur.phi, ref.cur.phi),
                         velocity_error(s, ref)};
      if (log) *log << row.scheme << " dt=" << row.dt << " err_phi=" << row.err_phi << " err_u=" << row.err_u << "\n" << std::flush;
      out.rows.push_back(row);
      h.push_back(row.dt);
      ep.push_back(row.err_phi);
      eu.push_back(row.err_u);
    }
    if (o.levels >= 2) {
      double sp = fitted_slope(h, ep), su = fitted_slope(h, eu);
      if (sc == Scheme::CN) {
        out.slope_phi_cn = sp;
        out.slope_u_cn = su;
      } else {
        out.slope_phi_bdf2 = sp;
        out.slope_u_bdf2 = su;
      }
    }
  }
  return out;
}

SpatialResult experiment_spatial_convergence(const RunConfig& base, const SpatialOptions& o,
                                             std::ostream* log) {
  RunConfig c = base;
  c.scheme.dt = o.dt;
  c.scheme.t_max = o.t_final;
  c.scheme.solver_tol = o.solver_tol;
  c.snapshot_every = 0.0;
  c.checkpoint_every = 0;
  c.wall_profile_at = -1.0;

  RunConfig rc = c;
  rc.nx = o.nx_ref;
  rc.ny = o.ny_ref;
  if (log) *log << "reference grid " << o.nx_ref << "x" << o.ny_ref << "\n" << std::flush;
  const State ref = march(rc);

  auto error_row = [&](int nx, int ny) {
    RunConfig r = c;
    r.nx = nx;
    r.ny = ny;
    State s = march(r);
    Field phi = interpolate(s.cur.phi, ref.grid);
    Field ux = interpolate(s.cur.u.x, ref.grid), uy = interpolate(s.cur.u.y, ref.grid);
    double ex = l2_error(ux, ref.cur.u.x), ey = l2_error(uy, ref.cur.u.y);
    ConvergenceRow row{to_string(c.scheme.scheme), c.scheme.dt, nx, ny, l2_error(phi, ref.cur.phi),
                       std::sqrt(ex * ex + ey * ey)};
    if (log) *log << nx << "x" << ny << " err_phi=" << row.err_phi << " err_u=" << row.err_u << "\n" << std::flush;
    return row;
  };

  SpatialResult out;
  for (int nx : o.nx_list) out.x_sweep.push_back(error_row(nx, o.ny_ref));
  for (int ny : o.ny_list) out.y_sweep.push_back(error_row(o.nx_ref, ny));
  return out;
}

std::vector<IterationRow> experiment_iterations(const RunConfig& base, const IterationOptions& o,
                                                std::ostream* log) {
  auto mean_its = [&](RunConfig c) {
    c.out_dir.clear();
    c.restart.clear();
    c.snapshot_every = 0.0;
    c.scheme.t_max = (o.steps + 1) * c.scheme.dt;
    Simulation sim(c);
    double sum = 0.0;
    for (int k = 0; k <= o.steps; ++k) {
      sim.step();
      if (k > 0) sum += sim.records().back().iterations;
    }
    return sum / o.steps;
  };
  std::vector<IterationRow> rows;
  auto add = [&](const std::string& name, const std::string& value, RunConfig c) {
    IterationRow r{name, value, 0.0, 0.0};
    c.scheme.scheme = Scheme::CN;
    r.mean_cn = mean_its(c);
    c.scheme.scheme = Scheme::BDF2;
    r.mean_bdf2 = mean_its(c);
    if (log) *log << name << "=" << value << " cn=" << r.mean_cn << " bdf2=" << r.mean_bdf2 << "\n" << std::flush;
    rows.push_back(r);
  };

  add("default", "", base);
  if (o.grid)
    for (auto [nx, ny] : {std::pair{129, 16}, std::pair{257, 32}}) {
      RunConfig c = base;
      c.nx = nx;
      c.ny = ny;
      add("grid", std::to_string(nx) + "x" + std::to_string(ny), c);
    }
  if (o.gamma)
    for (double v : {100.0, 10.0, 1.0}) {
      RunConfig c = base;
      c.params.gamma = v;
      add("gamma", std::to_string(v), c);
    }
  if (o.dt)
    for (double v : {0.001, 0.1, 1.0}) {
      RunConfig c = base;
      c.scheme.dt = v;
      add("dt", std::to_string(v), c);
    }
  if (o.lambda)
    for (double v : {1.0, 60.0, 144.0}) {
      RunConfig c = base;
      c.params.lambda = v;
      add("lambda", std::to_string(v), c);
    }
  return rows;
}

bool detached(const State& s, double drop_phase) {
  return (s.cur.phi.nodal().row(0) * drop_phase < 0.0).all();
}

DropReport experiment_drop_shear(const RunConfig& cfg, std::ostream* log) {
  DropReport rep;
  rep.theta_s = cfg.params.theta_s;
  double v0 = std::numeric_limits<double>::quiet_NaN();
  auto watch = [&](const Simulation& sim) {
    const State& s = sim.state();
    if (std::isnan(v0)) v0 = sim.records().front().volume;
    rep.volume_drift =
        std::max(rep.volume_drift, std::abs(sim.records().back().volume - v0) / sim.grid()->domain_measure());
    if (!rep.detachment_time && detached(s, cfg.drop_phase)) {
      rep.detachment_time = s.t;
      if (log) *log << "detached at t=" << s.t << "\n" << std::flush;
    }
  };
  RunSummary sum = run(cfg, log, watch);
  rep.t_final = sum.final_state.t;
  return rep;
}

}  // namespace pfmcl
