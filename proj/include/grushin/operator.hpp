#pragma once

#include <cmath>
#include <cstddef>
#include <iomanip>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "grushin/field.hpp"
#include "grushin/geometry.hpp"

namespace grushin {

/// Weight |x|^{2 lambda} multiplying the y-derivatives.
inline double grushin_weight(double x, double lambda) { return std::pow(std::abs(x), 2.0 * lambda); }

/// Negative Grushin operator -(d_xx + |x|^{2 lambda} d_yy) on the interior
/// nodes of a grid, homogeneous Dirichlet data, compressed-row storage.
///
/// Each row is the plain 5-point stencil (no hx*hy scaling). Columns within
/// a row are sorted; couplings whose weight vanishes (the y-couplings at
/// x = 0 when lambda > 0) are not stored.
class SparseOperator {
public:
  SparseOperator(const Grid& grid, double lambda) : grid_(grid), lambda_(lambda) {}

  const Grid& grid() const { return grid_; }
  double lambda() const { return lambda_; }
  std::size_t dimension() const { return grid_.interior_count(); }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::size_t> columns() const { return columns_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> diagonal() const { return diagonal_; }

  /// Stored value at (row, col), 0 when absent.
  double entry(std::size_t row, std::size_t col) const {
    for (std::size_t p = row_offsets_[row]; p < row_offsets_[row + 1]; ++p) {
      if (columns_[p] == col) return values_[p];
    }
    return 0.0;
  }

  /// y = A x on dense interior vectors.
  void multiply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = dimension();
    for (std::size_t r = 0; r < n; ++r) {
      double acc = 0.0;
      for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
        acc += values_[p] * x[columns_[p]];
      }
      y[r] = acc;
    }
  }

private:
  friend SparseOperator assemble_grushin(const Grid&, double);

  Grid grid_;
  double lambda_;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> columns_;
  std::vector<double> values_;
  std::vector<double> diagonal_;
};

inline SparseOperator assemble_grushin(const Grid& grid, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("assemble_grushin: lambda must be >= 0");

  SparseOperator op(grid, lambda);
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  const std::size_t stride = nx - 2;
  const double cx = 1.0 / (grid.hx() * grid.hx());
  const double cy = 1.0 / (grid.hy() * grid.hy());

  op.row_offsets_.reserve(grid.interior_count() + 1);
  op.columns_.reserve(5 * grid.interior_count());
  op.values_.reserve(5 * grid.interior_count());
  op.diagonal_.reserve(grid.interior_count());
  op.row_offsets_.push_back(0);

  auto push = [&](std::size_t col, double v) {
    op.columns_.push_back(col);
    op.values_.push_back(v);
  };

  for (std::size_t j = 1; j + 1 < ny; ++j) {
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const std::size_t k = grid.interior_index(i, j);
      const double w = grushin_weight(grid.x(i), lambda);
      const double diag = 2.0 * cx + 2.0 * w * cy;
      const bool y_coupled = w != 0.0;

      if (y_coupled && j > 1) push(k - stride, -w * cy);
      if (i > 1) push(k - 1, -cx);
      push(k, diag);
      if (i + 2 < nx) push(k + 1, -cx);
      if (y_coupled && j + 2 < ny) push(k + stride, -w * cy);

      op.diagonal_.push_back(diag);
      op.row_offsets_.push_back(op.columns_.size());
    }
  }
  return op;
}

/// Stencil applied to a Dirichlet field; the result vanishes on the boundary.
inline Field apply(const SparseOperator& op, const Field& u) {
  if (!(u.grid() == op.grid())) throw std::invalid_argument("apply: field grid differs from operator grid");
  if (!u.is_dirichlet()) throw std::invalid_argument("apply: field must vanish on the boundary");
  const std::vector<double> x = u.interior();
  std::vector<double> y(x.size());
  op.multiply(x, y);
  return Field::from_interior(op.grid(), y);
}

/// Coordinate dump, one "row col value" triplet per line, 17 significant digits.
inline void write_triplets(std::ostream& os, const SparseOperator& op) {
  const auto offsets = op.row_offsets();
  const auto cols = op.columns();
  const auto vals = op.values();
  const auto old_precision = os.precision(17);
  for (std::size_t r = 0; r < op.dimension(); ++r) {
    for (std::size_t p = offsets[r]; p < offsets[r + 1]; ++p) {
      os << r << ' ' << cols[p] << ' ' << vals[p] << '\n';
    }
  }
  os.precision(old_precision);
}

}  // namespace grushin
