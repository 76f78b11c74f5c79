// pfmcl: command-line driver for runs and the experiment sweeps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pfmcl/harness.hpp"

using namespace pfmcl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string config, preset, scheme, out;
  double dt = 0, tmax = -1;
  int nx = 0, ny = 0;
  bool rotational = false, dealias = false;
  std::vector<std::string> sets;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "flat key = value config file");
  app->add_option("--preset", f.preset, "built-in preset");
  app->add_option("--scheme", f.scheme, "cn | bdf2");
  app->add_option("--dt", f.dt, "time step");
  app->add_option("--nx", f.nx, "points in x (odd)");
  app->add_option("--ny", f.ny, "Lobatto points in y");
  app->add_option("--tmax", f.tmax, "final time");
  app->add_option("--out", f.out, "output directory");
  app->add_flag("--rotational-pressure", f.rotational, "rotational pressure update");
  app->add_flag("--dealias", f.dealias, "3/2-rule dealiasing in x");
  app->add_option("--set", f.sets, "extra key=value override (repeatable)");
}

RunConfig build_config(const CommonFlags& f, const std::string& default_preset) {
  KeyValues kv;
  if (!f.config.empty()) kv = parse_config_file(f.config);
  if (!f.preset.empty()) kv["preset"] = f.preset;
  else if (!kv.count("preset")) kv["preset"] = default_preset;
  auto num = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.17g", v);
    return std::string(b);
  };
  if (!f.scheme.empty()) kv["scheme"] = f.scheme;
  if (f.dt != 0) kv["dt"] = num(f.dt);
  if (f.tmax >= 0) kv["t_max"] = num(f.tmax);
  if (f.nx != 0) kv["nx"] = std::to_string(f.nx);
  if (f.ny != 0) kv["ny"] = std::to_string(f.ny);
  if (!f.out.empty()) kv["out"] = f.out;
  if (f.rotational) kv["rotational_pressure"] = "true";
  if (f.dealias) kv["dealias"] = "true";
  for (const auto& s : f.sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return resolve_config(kv);
}

void write_text(const std::string& dir, const std::string& name, const std::string& body) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  std::ofstream f(fs::path(dir) / name);
  f << body;
  if (!f) throw std::ios_base::failure("cannot write " + (fs::path(dir) / name).string());
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string s = "scheme,dt,nx,ny,err_phi,err_u\n";
  char b[256];
  for (const auto& r : rows) {
    std::snprintf(b, sizeof b, "%s,%.17g,%d,%d,%.17g,%.17g\n", r.scheme.c_str(), r.dt, r.nx, r.ny,
                  r.err_phi, r.err_u);
    s += b;
  }
  return s;
}

int fail(const std::string& kind, const std::string& msg, int code, json extra = json::object()) {
  json j = {{"error", kind}, {"message", msg}};
  j.update(extra);
  std::cerr << j.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-field moving contact line solver"};
  app.require_subcommand(1);

  CommonFlags run_f, ct_f, cs_f, it_f, drop_f;
  auto* run_cmd = app.add_subcommand("run", "march one configuration to t_max");
  add_common(run_cmd, run_f);

  auto* ct = app.add_subcommand("convergence-time", "dt ladder against a fine BDF2 reference");
  add_common(ct, ct_f);
  TemporalOptions topt;
  ct->add_option("--levels", topt.levels, "number of dt levels");
  ct->add_option("--dt0", topt.dt0, "largest dt");
  ct->add_option("--dt-ref", topt.dt_ref, "reference dt");
  ct->add_option("--t-final", topt.t_final, "comparison time");

  auto* cs = app.add_subcommand("convergence-space", "resolution sweeps against a fine grid");
  add_common(cs, cs_f);
  SpatialOptions sopt;
  cs->add_option("--nx-list", sopt.nx_list, "x resolutions (odd)");
  cs->add_option("--ny-list", sopt.ny_list, "y resolutions");
  cs->add_option("--nx-ref", sopt.nx_ref, "reference nx");
  cs->add_option("--ny-ref", sopt.ny_ref, "reference ny");
  cs->add_option("--t-final", sopt.t_final, "comparison time");
  cs->add_option("--step", sopt.dt, "time step of every run");
  cs->add_option("--solver-tol", sopt.solver_tol, "BiCGSTAB tolerance of every run");

  auto* it = app.add_subcommand("iterations", "mean BiCGSTAB iterations over parameter sweeps");
  add_common(it, it_f);
  IterationOptions iopt;
  it->add_option("--steps", iopt.steps, "steps per run after startup");

  auto* drop = app.add_subcommand("drop", "drop in shear flow; reports the detachment time");
  add_common(drop, drop_f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    if (run_cmd->parsed()) {
      RunConfig cfg = build_config(run_f, "relaxation");
      RunSummary s = run(cfg, &std::cout);
      std::cout << "done: " << s.final_state.step << " steps, mean iterations " << s.mean_iterations << "\n";
    } else if (ct->parsed()) {
      RunConfig cfg = build_config(ct_f, "convergence");
      log_config(std::cout, cfg);
      TemporalResult r = experiment_temporal_convergence(cfg, topt, &std::cout);
      json j = {{"slope_phi_cn", r.slope_phi_cn},
                {"slope_u_cn", r.slope_u_cn},
                {"slope_phi_bdf2", r.slope_phi_bdf2},
                {"slope_u_bdf2", r.slope_u_bdf2}};
      std::cout << j.dump(2) << "\n";
      write_text(cfg.out_dir, "convergence_time.csv", convergence_csv(r.rows));
      write_text(cfg.out_dir, "convergence_time.json", j.dump(2) + "\n");
    } else if (cs->parsed()) {
      RunConfig cfg = build_config(cs_f, "convergence");
      log_config(std::cout, cfg);
      SpatialResult r = experiment_spatial_convergence(cfg, sopt, &std::cout);
      write_text(cfg.out_dir, "convergence_space_x.csv", convergence_csv(r.x_sweep));
      write_text(cfg.out_dir, "convergence_space_y.csv", convergence_csv(r.y_sweep));
    } else if (it->parsed()) {
      RunConfig cfg = build_config(it_f, "iterations");
      log_config(std::cout, cfg);
      auto rows = experiment_iterations(cfg, iopt, &std::cout);
      std::string csv = "parameter,value,mean_cn,mean_bdf2\n";
      char b[256];
      for (const auto& r : rows) {
        std::snprintf(b, sizeof b, "%s,%s,%.6g,%.6g\n", r.parameter.c_str(), r.value.c_str(), r.mean_cn,
                      r.mean_bdf2);
        csv += b;
      }
      std::cout << csv;
      write_text(cfg.out_dir, "iterations.csv", csv);
    } else if (drop->parsed()) {
      RunConfig cfg = build_config(drop_f, "drop");
      DropReport r = experiment_drop_shear(cfg, &std::cout);
      json j = {{"theta_s", r.theta_s},
                {"detachment_time", r.detachment_time ? json(*r.detachment_time) : json(nullptr)},
                {"volume_drift", r.volume_drift},
                {"t_final", r.t_final}};
      std::cout << j.dump(2) << "\n";
      write_text(cfg.out_dir, "drop_report.json", j.dump(2) + "\n");
    }
  } catch (const ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const RunError& e) {
    return fail("solver", e.what(), 3,
                {{"step", e.step}, {"t", e.t}, {"residual", e.residual}, {"iterations", e.iterations},
                 {"dump", e.dump}});
  } catch (const FormatError& e) {
    return fail("format", e.what(), 4);
  } catch (const std::ios_base::failure& e) {
    return fail("io", e.what(), 4);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}
