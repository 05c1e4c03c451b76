#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grushin {

/// Axis-aligned rectangle (ax,bx) x (ay,by) in the (x,y) plane.
///
/// The coefficient |x|^{2 lambda} of the Grushin operator vanishes on the
/// line x = 0, so a rectangle is called degenerate when its closure meets
/// that line. Non-degenerate rectangles give a uniformly elliptic problem.
class Domain {
public:
  Domain(double ax, double bx, double ay, double by)
      : ax_(ax), bx_(bx), ay_(ay), by_(by) {
    if (!(ax < bx) || !(ay < by)) {
      throw std::invalid_argument("Domain: expected ax < bx and ay < by");
    }
    degenerate_ = (ax <= 0.0 && 0.0 <= bx);
  }

  double ax() const { return ax_; }
  double bx() const { return bx_; }
  double ay() const { return ay_; }
  double by() const { return by_; }
  double width() const { return bx_ - ax_; }
  double height() const { return by_ - ay_; }
  double area() const { return width() * height(); }
  bool degenerate() const { return degenerate_; }

  bool contains(double x, double y) const {
    return ax_ <= x && x <= bx_ && ay_ <= y && y <= by_;
  }

  friend bool operator==(const Domain&, const Domain&) = default;

private:
  double ax_, bx_, ay_, by_;
  bool degenerate_ = false;
};

inline bool contains_degeneracy(const Domain& domain) { return domain.degenerate(); }

struct NodeIndex {
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

/// Uniform tensor-product node lattice, boundary nodes included.
///
/// Nodes are numbered row-major, node(i,j) = j*nx + i. Interior nodes
/// (1 <= i <= nx-2, 1 <= j <= ny-2) carry a second, dense numbering
/// k = (j-1)*(nx-2) + (i-1) used by the sparse operator and the solvers.
class Grid {
public:
  Grid(const Domain& domain, std::size_t nx, std::size_t ny)
      : domain_(domain), nx_(nx), ny_(ny) {
    if (nx < 3 || ny < 3) {
      throw std::invalid_argument("Grid: need nx >= 3 and ny >= 3 (got " + std::to_string(nx) +
                                  "x" + std::to_string(ny) + ")");
    }
    hx_ = domain.width() / static_cast<double>(nx - 1);
    hy_ = domain.height() / static_cast<double>(ny - 1);
  }

  const Domain& domain() const { return domain_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }

  double x(std::size_t i) const { return domain_.ax() + static_cast<double>(i) * hx_; }
  double y(std::size_t j) const { return domain_.ay() + static_cast<double>(j) * hy_; }

  std::size_t node_count() const { return nx_ * ny_; }
  std::size_t node(std::size_t i, std::size_t j) const { return j * nx_ + i; }
  NodeIndex node_index(std::size_t node) const { return {node % nx_, node / nx_}; }

  bool is_boundary(std::size_t i, std::size_t j) const {
    return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1;
  }

  std::size_t interior_count() const { return (nx_ - 2) * (ny_ - 2); }

  /// Interior (i,j) -> dense index k. Precondition: !is_boundary(i,j).
  std::size_t interior_index(std::size_t i, std::size_t j) const {
    return (j - 1) * (nx_ - 2) + (i - 1);
  }

  NodeIndex interior_node(std::size_t k) const {
    return {k % (nx_ - 2) + 1, k / (nx_ - 2) + 1};
  }

  /// Composite trapezoid weight of node (i,j); the weights sum to the area.
  double trapezoid_weight(std::size_t i, std::size_t j) const {
    double w = hx_ * hy_;
    if (i == 0 || i == nx_ - 1) w *= 0.5;
    if (j == 0 || j == ny_ - 1) w *= 0.5;
    return w;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  Domain domain_;
  std::size_t nx_, ny_;
  double hx_ = 0.0, hy_ = 0.0;
};

inline Grid build_grid(const Domain& domain, std::size_t nx, std::size_t ny) {
  return Grid(domain, nx, ny);
}

}  // namespace grushin
