#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <variant>

#include "grushin/field.hpp"
#include "grushin/geometry.hpp"

namespace grushin {

/// A scalar datum of a problem: a constant, a closed-form rule of (x, y),
/// or values already sampled on a specific grid.
class Coefficient {
public:
  using Rule = std::function<double(double, double)>;

  Coefficient(double constant) : data_(constant) {}  // NOLINT(google-explicit-constructor)
  Coefficient(Rule rule) : data_(std::move(rule)) {}  // NOLINT(google-explicit-constructor)
  Coefficient(Field values) : data_(std::move(values)) {}  // NOLINT(google-explicit-constructor)

  std::optional<double> constant() const {
    if (const double* c = std::get_if<double>(&data_)) return *c;
    return std::nullopt;
  }

  /// Values at every node of grid. A stored field must live on grid.
  Field on(const Grid& grid) const {
    if (const double* c = std::get_if<double>(&data_)) return Field(grid, *c);
    if (const Rule* r = std::get_if<Rule>(&data_)) return Field::sample(grid, *r);
    const Field& f = std::get<Field>(data_);
    if (!(f.grid() == grid)) throw std::invalid_argument("Coefficient: stored field lives on another grid");
    return f;
  }

  /// Same datum multiplied by t.
  Coefficient scaled(double t) const {
    if (const double* c = std::get_if<double>(&data_)) return Coefficient(t * *c);
    if (const Rule* r = std::get_if<Rule>(&data_)) {
      return Coefficient(Rule([rule = *r, t](double x, double y) { return t * rule(x, y); }));
    }
    return Coefficient(std::get<Field>(data_).map([t](double v) { return t * v; }));
  }

private:
  std::variant<double, Rule, Field> data_;
};

}  // namespace grushin
