#pragma once

#include <cstddef>
#include <vector>

namespace fixcert {

/// Polynomial on [0,1], coefficients in ascending powers. Coefficient
/// arithmetic is exact where the inputs are; evaluation is Horner.
struct PolyFunc {
  std::vector<double> coeffs;

  PolyFunc() = default;
  explicit PolyFunc(std::vector<double> c) : coeffs(std::move(c)) {}

  static PolyFunc constant(double c) { return PolyFunc({c}); }
  static PolyFunc monomial(std::size_t k, double c = 1.0);

  double eval(double t) const;

  /// Degree after trimming trailing zeros; the zero polynomial reports 0.
  std::size_t degree() const;
  bool is_zero() const;

  /// Coefficients with trailing zeros removed. Equality compares these, so
  /// representations padded with zeros name the same point.
  std::vector<double> trimmed() const;

  PolyFunc derivative() const;

  friend PolyFunc operator+(const PolyFunc& a, const PolyFunc& b);
  friend PolyFunc operator-(const PolyFunc& a, const PolyFunc& b);
  friend PolyFunc operator*(double s, const PolyFunc& a);
  bool operator==(const PolyFunc& other) const { return trimmed() == other.trimmed(); }
};

/// Values on a uniform grid over [0,1], endpoints included, at least 2 nodes.
struct GridFunc {
  std::vector<double> values;

  GridFunc() = default;
  explicit GridFunc(std::vector<double> v) : values(std::move(v)) {}

  std::size_t nodes() const { return values.size(); }
  bool operator==(const GridFunc& other) const = default;
};

}  // namespace fixcert
