#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace pfmcl {

/// Nodal storage for a scalar over the tensor grid: row j is the line y = y_j,
/// column i the line x = x_i (x is the fastest index).
using Nodal = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Fourier coefficients of each y-row: row j, column k holds mode k = 0..m.
using FourierRows =
    Eigen::Array<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Legendre polynomial L_k(y) by the three-term recurrence.
double legendre(int k, double y);

/// L_k(y) and L'_k(y) together.
std::pair<double, double> legendre_with_derivative(int k, double y);

/// Legendre-Gauss-Lobatto nodes (ascending, including -1 and +1) and weights
/// for polynomial degree n, i.e. n + 1 points.
struct LobattoRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
LobattoRule lobatto_rule(int n);

/// Fourier(x) x Legendre(y) discretization of [0, L_x] x [-1, 1].
///
/// x is periodic with n_x = 2m + 1 uniform nodes (modes |k| <= m); y carries
/// n_y = n + 1 Gauss-Lobatto nodes. The grid owns the FFT plans and all 1D
/// matrices used by the spectral operators, and is immutable once built.
class Grid {
 public:
  Grid(int m, int n, double lx);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int m() const { return m_; }
  int n() const { return n_; }
  int nx() const { return 2 * m_ + 1; }
  int ny() const { return n_ + 1; }
  int size() const { return nx() * ny(); }
  double lx() const { return lx_; }
  double dx() const { return lx_ / nx(); }

  /// |Omega| = 2 L_x and |Gamma| = 2 L_x (two walls of length L_x).
  double domain_measure() const { return 2.0 * lx_; }
  double boundary_measure() const { return 2.0 * lx_; }

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return rule_.nodes; }
  const std::vector<double>& wy() const { return rule_.weights; }
  /// Lobatto weight at either wall.
  double wall_weight() const { return rule_.weights.front(); }

  /// Wavenumber 2 pi k / L_x.
  double wavenumber(int k) const;

  /// Quadrature weights W_ij = dx * w_j as a nodal array.
  const Nodal& weights() const { return weights_; }

  /// Lobatto differentiation matrix (exact for degree <= n).
  const Eigen::MatrixXd& dy_matrix() const { return dy_; }
  /// W_y^{-1} D_y^T W_y: the nodal representative of v -> (g, dv/dy).
  const Eigen::MatrixXd& dy_weak_matrix() const { return dyt_; }
  /// Legendre Vandermonde V(j, k) = L_k(y_j) and its inverse.
  const Eigen::MatrixXd& legendre_vandermonde() const { return vandermonde_; }
  const Eigen::MatrixXd& legendre_analysis() const { return analysis_; }

  /// Row-wise real FFT (mode k = 0..m, unnormalized) and its inverse
  /// (normalized, so backward(forward(f)) == f).
  FourierRows forward_x(const Nodal& f) const;
  Nodal backward_x(const FourierRows& c) const;

  void forward_row(const double* in, std::complex<double>* out) const;
  void backward_row(const std::complex<double>* in, double* out) const;

  /// Zero-padded grid size used by the 3/2-rule product.
  int padded_nx() const { return npad_; }
  void forward_row_padded(const double* in, std::complex<double>* out) const;
  void backward_row_padded(const std::complex<double>* in, double* out) const;

 private:
  int m_;
  int n_;
  double lx_;
  int npad_;
  std::vector<double> x_;
  LobattoRule rule_;
  Nodal weights_;
  Eigen::MatrixXd dy_;
  Eigen::MatrixXd dyt_;
  Eigen::MatrixXd vandermonde_;
  Eigen::MatrixXd analysis_;

  struct Plans;
  std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Builds a shared grid. Throws std::invalid_argument for m < 4, n < 4 or
/// non-positive L_x.
GridPtr make_grid(int m, int n, double lx);

}  // namespace pfmcl
