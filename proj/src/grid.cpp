#include "pfmcl/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fftw3.h>

namespace pfmcl {

double legendre(int k, double y) {
  if (k == 0) return 1.0;
  double p0 = 1.0, p1 = y;
  for (int j = 2; j <= k; ++j) {
    double p2 = ((2.0 * j - 1.0) * y * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

std::pair<double, double> legendre_with_derivative(int k, double y) {
  if (k == 0) return {1.0, 0.0};
  double p0 = 1.0, p1 = y;
  double d0 = 0.0, d1 = 1.0;
  for (int j = 2; j <= k; ++j) {
    double p2 = ((2.0 * j - 1.0) * y * p1 - (j - 1.0) * p0) / j;
    double d2 = d0 + (2.0 * j - 1.0) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  return {p1, d1};
}

LobattoRule lobatto_rule(int n) {
  if (n < 1) throw std::invalid_argument("lobatto_rule: degree must be >= 1");
  LobattoRule r;
  r.nodes.assign(n + 1, 0.0);
  r.weights.assign(n + 1, 0.0);
  r.nodes[0] = -1.0;
  r.nodes[n] = 1.0;
  // interior nodes are the roots of L'_n; Newton on (1 - y^2) L'_n from
  // Chebyshev-Gauss-Lobatto guesses
  for (int j = 1; j < n; ++j) {
    double y = -std::cos(std::numbers::pi * j / n);
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre_with_derivative(n, y);
      // q = (1 - y^2) L'_n,  q' = -n(n+1) L_n
      double q = (1.0 - y * y) * dp;
      double dq = -n * (n + 1.0) * p;
      double step = q / dq;
      y -= step;
      if (std::abs(step) < 1e-16) break;
    }
    r.nodes[j] = y;
  }
  for (int j = 0; j <= n; ++j) {
    double p = legendre(n, r.nodes[j]);
    r.weights[j] = 2.0 / (n * (n + 1.0) * p * p);
  }
  return r;
}

struct Grid::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  fftw_plan fwd_pad = nullptr;
  fftw_plan bwd_pad = nullptr;
  ~Plans() {
    for (auto p : {fwd, bwd, fwd_pad, bwd_pad})
      if (p) fftw_destroy_plan(p);
  }
};

namespace {

fftw_plan plan_r2c(int len) {
  std::vector<double> in(len);
  std::vector<std::complex<double>> out(len / 2 + 1);
  return fftw_plan_dft_r2c_1d(len, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
}

fftw_plan plan_c2r(int len) {
  std::vector<std::complex<double>> in(len / 2 + 1);
  std::vector<double> out(len);
  return fftw_plan_dft_c2r_1d(len, reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
}

}  // namespace

Grid::Grid(int m, int n, double lx) : m_(m), n_(n), lx_(lx) {
  if (m < 4) throw std::invalid_argument("grid: Fourier cutoff m must be >= 4, got " + std::to_string(m));
  if (n < 4) throw std::invalid_argument("grid: Legendre degree n must be >= 4, got " + std::to_string(n));
  if (!(lx > 0.0)) throw std::invalid_argument("grid: L_x must be positive");

  const int nx = 2 * m + 1;
  const int ny = n + 1;
  npad_ = 3 * m + 1;
  if (npad_ % 2 == 0) ++npad_;

  x_.resize(nx);
  for (int i = 0; i < nx; ++i) x_[i] = i * lx / nx;

  rule_ = lobatto_rule(n);
  const auto& y = rule_.nodes;
  const auto& w = rule_.weights;

  weights_.resize(ny, nx);
  for (int j = 0; j < ny; ++j) weights_.row(j).setConstant(w[j] * dx());

  std::vector<double> ln(ny);
  for (int j = 0; j < ny; ++j) ln[j] = legendre(n, y[j]);
  dy_.setZero(ny, ny);
  for (int j = 0; j < ny; ++j)
    for (int l = 0; l < ny; ++l)
      if (j != l) dy_(j, l) = ln[j] / (ln[l] * (y[j] - y[l]));
  dy_(0, 0) = -n * (n + 1.0) / 4.0;
  dy_(n, n) = n * (n + 1.0) / 4.0;

  dyt_.resize(ny, ny);
  for (int j = 0; j < ny; ++j)
    for (int l = 0; l < ny; ++l) dyt_(j, l) = dy_(l, j) * w[l] / w[j];

  vandermonde_.resize(ny, ny);
  analysis_.resize(ny, ny);
  for (int j = 0; j < ny; ++j)
    for (int k = 0; k < ny; ++k) vandermonde_(j, k) = legendre(k, y[j]);
  for (int k = 0; k < ny; ++k) {
    double gamma = (k == n) ? 2.0 / n : 2.0 / (2.0 * k + 1.0);
    for (int j = 0; j < ny; ++j) analysis_(k, j) = w[j] * vandermonde_(j, k) / gamma;
  }

  plans_ = std::make_unique<Plans>();
  plans_->fwd = plan_r2c(nx);
  plans_->bwd = plan_c2r(nx);
  plans_->fwd_pad = plan_r2c(npad_);
  plans_->bwd_pad = plan_c2r(npad_);
  if (!plans_->fwd || !plans_->bwd || !plans_->fwd_pad || !plans_->bwd_pad)
    throw std::runtime_error("grid: FFT planning failed");
}

Grid::~Grid() = default;

double Grid::wavenumber(int k) const { return 2.0 * std::numbers::pi * k / lx_; }

void Grid::forward_row(const double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(plans_->fwd, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void Grid::backward_row(const std::complex<double>* in, double* out) const {
  // c2r destroys its input
  std::vector<std::complex<double>> tmp(in, in + m_ + 1);
  fftw_execute_dft_c2r(plans_->bwd, reinterpret_cast<fftw_complex*>(tmp.data()), out);
  const double s = 1.0 / nx();
  for (int i = 0; i < nx(); ++i) out[i] *= s;
}

void Grid::forward_row_padded(const double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(plans_->fwd_pad, const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void Grid::backward_row_padded(const std::complex<double>* in, double* out) const {
  std::vector<std::complex<double>> tmp(in, in + npad_ / 2 + 1);
  fftw_execute_dft_c2r(plans_->bwd_pad, reinterpret_cast<fftw_complex*>(tmp.data()), out);
}

FourierRows Grid::forward_x(const Nodal& f) const {
  if (f.rows() != ny() || f.cols() != nx())
    throw std::invalid_argument("forward_x: field shape does not match grid");
  FourierRows c(ny(), m_ + 1);
  for (int j = 0; j < ny(); ++j) forward_row(&f(j, 0), &c(j, 0));
  return c;
}

Nodal Grid::backward_x(const FourierRows& c) const {
  if (c.rows() != ny() || c.cols() != m_ + 1)
    throw std::invalid_argument("backward_x: coefficient shape does not match grid");
  Nodal f(ny(), nx());
  for (int j = 0; j < ny(); ++j) backward_row(&c(j, 0), &f(j, 0));
  return f;
}

GridPtr make_grid(int m, int n, double lx) { return std::make_shared<const Grid>(m, n, lx); }

}  // namespace pfmcl
