#pragma once

#include <string>

#include "pfmcl/grid.hpp"

namespace pfmcl {

/// Which y-basis the modal side of a field uses.
///   Full      - {1, y, L_k - L_{k-2} (k >= 2)}, spans P_n
///   Dirichlet - {L_k - L_{k-2}, k >= 2}, zero at y = +-1
///   Pressure  - {L_0, ..., L_{n-2}}
enum class YSpace { Full, Dirichlet, Pressure };

std::string to_string(YSpace s);

enum class Wall { Bottom, Top };

/// Values on both walls: row 0 is y = -1, row 1 is y = +1.
using Trace = Eigen::Array<double, 2, Eigen::Dynamic, Eigen::RowMajor>;

/// Scalar field over the tensor grid, held nodally; the modal side is
/// produced on demand by transform_forward.
class Field {
 public:
  Field() = default;
  explicit Field(GridPtr grid, YSpace space = YSpace::Full);
  Field(GridPtr grid, Nodal values, YSpace space = YSpace::Full);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  YSpace space() const { return space_; }
  void set_space(YSpace s) { space_ = s; }

  Nodal& nodal() { return v_; }
  const Nodal& nodal() const { return v_; }
  double operator()(int j, int i) const { return v_(j, i); }
  double& operator()(int j, int i) { return v_(j, i); }

 private:
  GridPtr grid_;
  Nodal v_;
  YSpace space_ = YSpace::Full;
};

struct VectorField {
  Field x;
  Field y;
};

/// Single-wall periodic function of x.
struct BoundaryField {
  Wall wall = Wall::Bottom;
  Eigen::ArrayXd values;
};

/// Modal coefficients: coeffs(b, k) multiplies basis_b(y) e^{i k_w x} for
/// Fourier modes k = 0..m (negative modes are the conjugates). The
/// normalization is that of the unnormalized forward FFT divided by n_x, so
/// f(x, y) = sum_b sum_{|k|<=m} coeffs(b, k) basis_b(y) e^{i k_w x}.
struct ModalField {
  YSpace space = YSpace::Full;
  FourierRows coeffs;
};

/// Basis function phi_k(y) of the full space: 1, y, L_k - L_{k-2}.
double shen_basis_eval(int k, double y);

ModalField transform_forward(const Field& f);
Field transform_backward(const GridPtr& grid, const ModalField& c);

/// Legendre coefficients (column k holds Fourier mode k) of nodal rows, and back.
FourierRows legendre_forward(const Grid& g, const Nodal& f);
Nodal legendre_backward(const Grid& g, const FourierRows& a);

/// Shen coefficients from Legendre ones and the inverse map, per column.
FourierRows legendre_to_shen(const FourierRows& a);
FourierRows shen_to_legendre(const FourierRows& b);

/// Spectral interpolation onto another grid of the same length: the Fourier x
/// Legendre expansion is zero-padded or truncated and evaluated on the target
/// nodes. Exact when the target resolves the source expansion.
Field interpolate(const Field& f, const GridPtr& target);

}  // namespace pfmcl
