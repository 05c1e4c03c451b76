#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "grushin/geometry.hpp"

namespace grushin {

/// Scalar function sampled at every node of a grid (boundary included).
class Field {
public:
  explicit Field(const Grid& grid, double value = 0.0)
      : grid_(grid), values_(grid.node_count(), value) {}

  Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.node_count()) {
      throw std::invalid_argument("Field: value count does not match grid");
    }
  }

  /// Samples fn(x, y) at every node.
  template <class Fn>
  static Field sample(const Grid& grid, Fn&& fn) {
    Field out(grid);
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        out(i, j) = fn(grid.x(i), grid.y(j));
      }
    }
    return out;
  }

  /// Samples fn at interior nodes and leaves the boundary at zero.
  template <class Fn>
  static Field sample_dirichlet(const Grid& grid, Fn&& fn) {
    Field out(grid);
    for (std::size_t j = 1; j + 1 < grid.ny(); ++j) {
      for (std::size_t i = 1; i + 1 < grid.nx(); ++i) {
        out(i, j) = fn(grid.x(i), grid.y(j));
      }
    }
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return values_[grid_.node(i, j)]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[grid_.node(i, j)]; }
  double& operator[](std::size_t node) { return values_[node]; }
  double operator[](std::size_t node) const { return values_[node]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  /// True when every boundary node holds exactly 0.
  bool is_dirichlet() const {
    for (std::size_t i = 0; i < grid_.nx(); ++i) {
      if ((*this)(i, 0) != 0.0 || (*this)(i, grid_.ny() - 1) != 0.0) return false;
    }
    for (std::size_t j = 0; j < grid_.ny(); ++j) {
      if ((*this)(0, j) != 0.0 || (*this)(grid_.nx() - 1, j) != 0.0) return false;
    }
    return true;
  }

  void zero_boundary() {
    for (std::size_t i = 0; i < grid_.nx(); ++i) {
      (*this)(i, 0) = 0.0;
      (*this)(i, grid_.ny() - 1) = 0.0;
    }
    for (std::size_t j = 0; j < grid_.ny(); ++j) {
      (*this)(0, j) = 0.0;
      (*this)(grid_.nx() - 1, j) = 0.0;
    }
  }

  /// Interior values in dense interior order.
  std::vector<double> interior() const {
    std::vector<double> out(grid_.interior_count());
    for (std::size_t k = 0; k < out.size(); ++k) {
      const auto [i, j] = grid_.interior_node(k);
      out[k] = (*this)(i, j);
    }
    return out;
  }

  /// Dirichlet field whose interior is taken from a dense interior vector.
  static Field from_interior(const Grid& grid, std::span<const double> interior) {
    if (interior.size() != grid.interior_count()) {
      throw std::invalid_argument("Field::from_interior: size mismatch");
    }
    Field out(grid);
    for (std::size_t k = 0; k < interior.size(); ++k) {
      const auto [i, j] = grid.interior_node(k);
      out(i, j) = interior[k];
    }
    return out;
  }

  double max() const { return *std::max_element(values_.begin(), values_.end()); }
  double min() const { return *std::min_element(values_.begin(), values_.end()); }

  template <class Op>
  Field map(Op&& op) const {
    Field out(*this);
    for (auto& v : out.values_) v = op(v);
    return out;
  }

private:
  Grid grid_;
  std::vector<double> values_;
};

inline void require_same_grid(const Field& a, const Field& b, const char* where) {
  if (!(a.grid() == b.grid())) {
    throw std::invalid_argument(std::string(where) + ": fields live on different grids");
  }
}

/// sup over nodes of |a - b|.
inline double sup_distance(const Field& a, const Field& b) {
  require_same_grid(a, b, "sup_distance");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

/// min over nodes of (a - b).
inline double min_difference(const Field& a, const Field& b) {
  require_same_grid(a, b, "min_difference");
  double d = a[0] - b[0];
  for (std::size_t k = 1; k < a.size(); ++k) d = std::min(d, a[k] - b[k]);
  return d;
}

/// min over interior nodes of (a - b); boundary values of Dirichlet fields agree trivially.
inline double interior_min_difference(const Field& a, const Field& b) {
  require_same_grid(a, b, "interior_min_difference");
  const Grid& g = a.grid();
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j + 1 < g.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < g.nx(); ++i) d = std::min(d, a(i, j) - b(i, j));
  }
  return d;
}

}  // namespace grushin
