#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "pfmcl/harness.hpp"
#include "pfmcl/spectral.hpp"

namespace pfmcl {

namespace {

std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode);
  if (!f) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  return f;
}

constexpr char kMagic[8] = {'P', 'F', 'M', 'C', 'L', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& o, const T& v) {
  o.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in, const std::string& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw FormatError("checkpoint '" + path + "': truncated file");
  return v;
}

void put_array(std::ostream& o, const double* d, std::size_t n) {
  o.write(reinterpret_cast<const char*>(d), static_cast<std::streamsize>(n * sizeof(double)));
}

void get_array(std::istream& in, double* d, std::size_t n, const std::string& path) {
  in.read(reinterpret_cast<char*>(d), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw FormatError("checkpoint '" + path + "': truncated file");
}

void put_level(std::ostream& o, const Level& l) {
  for (const Field* f : {&l.phi, &l.u.x, &l.u.y, &l.p, &l.mu, &l.U})
    put_array(o, f->nodal().data(), f->nodal().size());
  put_array(o, l.W.data(), l.W.size());
}

Level get_level(std::istream& in, const GridPtr& g, const std::string& path) {
  Level l;
  auto field = [&](YSpace sp) {
    Field f(g, sp);
    get_array(in, f.nodal().data(), f.nodal().size(), path);
    return f;
  };
  l.phi = field(YSpace::Full);
  l.u.x = field(YSpace::Full);
  l.u.y = field(YSpace::Dirichlet);
  l.p = field(YSpace::Pressure);
  l.mu = field(YSpace::Full);
  l.U = field(YSpace::Full);
  l.W.resize(2, g->nx());
  get_array(in, l.W.data(), l.W.size(), path);
  return l;
}

}  // namespace

std::string csv_header() {
  return "step,t,E_original,E_ieq,volume,iterations,solver_residual,energy_residual,"
         "D_mu,D_viscous,D_phidot,D_slip,D_wall_work,u_gap,mu_mean";
}

std::string csv_row(const DiagnosticsRecord& r) {
  const Dissipation& d = r.dissipation;
  std::string s = std::to_string(r.step);
  for (double v : {r.t, r.E_original, r.E_ieq, r.volume}) s += "," + g17(v);
  s += "," + std::to_string(r.iterations);
  for (double v : {r.solver_residual, r.energy_residual, d.mu, d.viscous, d.phidot, d.slip,
                   d.wall_work, r.u_gap, r.mu_mean})
    s += "," + g17(v);
  return s;
}

void write_snapshot(const std::string& path, const State& s) {
  const Grid& g = *s.grid;
  auto f = open_out(path);
  f << "# pfmcl snapshot\n"
    << "# nx " << g.nx() << "\n# ny " << g.ny() << "\n# lx " << g17(g.lx()) << "\n# t "
    << g17(s.t) << "\n# step " << s.step << "\n# fields phi ux uy p mu\n"
    << "# layout: one block per field, ny lines of nx values (row j is y_j, x fastest)\n";
  const Level& c = s.cur;
  for (const Field* fld : {&c.phi, &c.u.x, &c.u.y, &c.p, &c.mu}) {
    const Nodal& a = fld->nodal();
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) f << (i ? " " : "") << g17(a(j, i));
      f << "\n";
    }
  }
  if (!f) throw std::ios_base::failure("write failed for '" + path + "'");
}

void write_coordinates(const std::string& path, const Grid& g) {
  auto f = open_out(path);
  f << "# x (" << g.nx() << " values)\n";
  for (int i = 0; i < g.nx(); ++i) f << (i ? " " : "") << g17(g.x()[i]);
  f << "\n# y (" << g.ny() << " Lobatto nodes, ascending)\n";
  for (int j = 0; j < g.ny(); ++j) f << (j ? " " : "") << g17(g.y()[j]);
  f << "\n";
}

BoundaryField wall_velocity(const State& s, Wall w) {
  const Grid& g = *s.grid;
  BoundaryField b;
  b.wall = w;
  b.values = s.cur.u.x.nodal().row(w == Wall::Bottom ? 0 : g.ny() - 1).transpose();
  return b;
}

void write_wall_profile(const std::string& path, const Grid& g, const BoundaryField& ux,
                        double wall_speed) {
  auto f = open_out(path);
  f << "x,u_x,u_slip\n";
  for (int i = 0; i < g.nx(); ++i)
    f << g17(g.x()[i]) << "," << g17(ux.values[i]) << "," << g17(ux.values[i] - wall_speed) << "\n";
}

void write_checkpoint(const std::string& path, const State& s) {
  const Grid& g = *s.grid;
  auto f = open_out(path, std::ios::out | std::ios::binary);
  f.write(kMagic, sizeof kMagic);
  put(f, kVersion);
  put(f, static_cast<std::int32_t>(g.m()));
  put(f, static_cast<std::int32_t>(g.n()));
  put(f, g.lx());
  put(f, s.t);
  put(f, static_cast<std::int64_t>(s.step));
  put(f, static_cast<std::uint8_t>(s.has_prev ? 1 : 0));
  put_level(f, s.cur);
  if (s.has_prev) put_level(f, s.prev);
  if (!f) throw std::ios_base::failure("write failed for '" + path + "'");
}

State read_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open '" + path + "'");
  char magic[sizeof kMagic];
  f.read(magic, sizeof magic);
  if (!f || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw FormatError("checkpoint '" + path + "': not a pfmcl checkpoint (bad magic)");
  auto version = get<std::uint32_t>(f, path);
  if (version != kVersion)
    throw FormatError("checkpoint '" + path + "': unsupported format version " + std::to_string(version));
  auto m = get<std::int32_t>(f, path);
  auto n = get<std::int32_t>(f, path);
  auto lx = get<double>(f, path);
  if (m < 4 || n < 4 || m > (1 << 20) || n > (1 << 14) || !(lx > 0.0))
    throw FormatError("checkpoint '" + path + "': invalid grid header");
  State s;
  s.grid = make_grid(m, n, lx);
  s.t = get<double>(f, path);
  s.step = get<std::int64_t>(f, path);
  auto hp = get<std::uint8_t>(f, path);
  if (hp > 1) throw FormatError("checkpoint '" + path + "': invalid level flag");
  s.has_prev = hp == 1;
  s.cur = get_level(f, s.grid, path);
  if (s.has_prev) s.prev = get_level(f, s.grid, path);
  if (f.peek() != std::char_traits<char>::eof())
    throw FormatError("checkpoint '" + path + "': trailing data");
  return s;
}

}  // namespace pfmcl
