#include "pfmcl/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pfmcl {

std::string to_string(YSpace s) {
  switch (s) {
    case YSpace::Full: return "full";
    case YSpace::Dirichlet: return "dirichlet";
    case YSpace::Pressure: return "pressure";
  }
  return "?";
}

Field::Field(GridPtr grid, YSpace space) : grid_(std::move(grid)), space_(space) {
  v_.setZero(grid_->ny(), grid_->nx());
}

Field::Field(GridPtr grid, Nodal values, YSpace space)
    : grid_(std::move(grid)), v_(std::move(values)), space_(space) {
  if (v_.rows() != grid_->ny() || v_.cols() != grid_->nx())
    throw std::invalid_argument("Field: nodal values do not match the grid shape");
}

double shen_basis_eval(int k, double y) {
  if (k < 0) throw std::out_of_range("shen_basis_eval: negative index");
  if (k < 2) return k == 0 ? 1.0 : y;
  return legendre(k, y) - legendre(k - 2, y);
}

FourierRows legendre_forward(const Grid& g, const Nodal& f) {
  FourierRows c = g.forward_x(f) / static_cast<double>(g.nx());
  // analysis in y, column by column
  FourierRows a(g.ny(), g.m() + 1);
  a.matrix() = g.legendre_analysis().cast<std::complex<double>>() * c.matrix();
  return a;
}

Nodal legendre_backward(const Grid& g, const FourierRows& a) {
  FourierRows c(g.ny(), g.m() + 1);
  c.matrix() = g.legendre_vandermonde().cast<std::complex<double>>() * a.matrix();
  return g.backward_x(c * static_cast<double>(g.nx()));
}

FourierRows legendre_to_shen(const FourierRows& a) {
  const int nb = static_cast<int>(a.rows());
  FourierRows b = a;
  for (int j = nb - 3; j >= 0; --j) b.row(j) += b.row(j + 2);
  return b;
}

FourierRows shen_to_legendre(const FourierRows& b) {
  const int nb = static_cast<int>(b.rows());
  FourierRows a = b;
  for (int j = 0; j + 2 < nb; ++j) a.row(j) -= b.row(j + 2);
  return a;
}

ModalField transform_forward(const Field& f) {
  const Grid& g = f.grid();
  FourierRows a = legendre_forward(g, f.nodal());
  ModalField out;
  out.space = f.space();
  switch (f.space()) {
    case YSpace::Full:
      out.coeffs = legendre_to_shen(a);
      break;
    case YSpace::Dirichlet:
      out.coeffs = legendre_to_shen(a);
      out.coeffs.row(0).setZero();
      out.coeffs.row(1).setZero();
      break;
    case YSpace::Pressure:
      out.coeffs = a.topRows(g.n() - 1);
      break;
  }
  return out;
}

Field transform_backward(const GridPtr& grid, const ModalField& c) {
  const Grid& g = *grid;
  FourierRows a(g.ny(), g.m() + 1);
  a.setZero();
  if (c.coeffs.cols() != g.m() + 1)
    throw std::invalid_argument("transform_backward: Fourier mode count does not match grid");
  switch (c.space) {
    case YSpace::Full:
    case YSpace::Dirichlet:
      if (c.coeffs.rows() != g.ny())
        throw std::invalid_argument("transform_backward: y-basis size does not match grid");
      a = shen_to_legendre(c.coeffs);
      break;
    case YSpace::Pressure:
      if (c.coeffs.rows() != g.n() - 1)
        throw std::invalid_argument("transform_backward: pressure basis size does not match grid");
      a.topRows(g.n() - 1) = c.coeffs;
      break;
  }
  return Field(grid, legendre_backward(g, a), c.space);
}

Field interpolate(const Field& f, const GridPtr& target) {
  const Grid& g = f.grid();
  if (std::abs(g.lx() - target->lx()) > 1e-12 * g.lx())
    throw std::invalid_argument("interpolate: grids have different lengths");
  FourierRows a = legendre_forward(g, f.nodal());
  FourierRows b = FourierRows::Zero(target->ny(), target->m() + 1);
  const int rows = std::min<int>(a.rows(), b.rows());
  const int cols = std::min<int>(a.cols(), b.cols());
  b.topLeftCorner(rows, cols) = a.topLeftCorner(rows, cols);
  return Field(target, legendre_backward(*target, b), f.space());
}

}  // namespace pfmcl
