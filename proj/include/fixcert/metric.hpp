#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fixcert/errors.hpp"
#include "fixcert/functions.hpp"

namespace fixcert {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2& other) const = default;
};

/// A point is an index into a finite carrier, a real scalar, a plane vector,
/// or a function representation. Equality is exact on the representation and
/// coincides with zero distance in every space shipped here.
using Point = std::variant<std::size_t, double, Vec2, PolyFunc, GridFunc>;

bool same_point(const Point& a, const Point& b);
std::string describe(const Point& p);
nlohmann::json point_to_json(const Point& p);

enum class MetricKind { ordinary, rectangular };

const char* metric_kind_name(MetricKind kind);

/// A metric (or rectangular-metric) space. Continuous spaces carry an
/// optional membership predicate instead of a finite carrier; distance
/// evaluation rejects points outside either.
class MetricSpace {
 public:
  using DistanceFn = std::function<double(const Point&, const Point&)>;
  using MemberFn = std::function<bool(const Point&)>;

  MetricSpace(std::string name, MetricKind kind, DistanceFn distance)
      : name_(std::move(name)), kind_(kind), distance_(std::move(distance)) {}

  MetricSpace& with_carrier(std::vector<Point> points) {
    carrier_ = std::move(points);
    return *this;
  }

  MetricSpace& with_membership(MemberFn member) {
    member_ = std::move(member);
    return *this;
  }

  double distance(const Point& p, const Point& q) const;
  bool contains(const Point& p) const;

  const std::string& name() const { return name_; }
  MetricKind kind() const { return kind_; }
  bool finite() const { return !carrier_.empty(); }
  const std::vector<Point>& carrier() const { return carrier_; }

 private:
  std::string name_;
  MetricKind kind_;
  DistanceFn distance_;
  MemberFn member_;
  std::vector<Point> carrier_;
};

MetricSpace real_line();
MetricSpace real_interval(double lo, double hi);
MetricSpace euclidean_plane();
/// C[0,1] with the sup metric over polynomial or grid representations.
/// Mixed representations are rejected; grids must share their node count.
MetricSpace sup_norm_space();
/// n points with the 0/1 discrete metric; carrier is the index set.
MetricSpace discrete_space(std::size_t n);

/// Square symmetric distance matrix with a declared kind.
struct FiniteMetric {
  MetricKind kind = MetricKind::ordinary;
  std::vector<std::vector<double>> dist;

  std::size_t size() const { return dist.size(); }
  double at(std::size_t i, std::size_t j) const { return dist[i][j]; }

  /// Carrier points are indices; out-of-range indices are domain errors.
  MetricSpace as_space(std::string name = "finite") const;

  static FiniteMetric from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

enum class Axiom {
  nonnegativity,
  zero_diagonal,
  identity_of_indiscernibles,
  symmetry,
  triangle,
  quadrilateral,
};

const char* axiom_name(Axiom axiom);

struct AxiomViolation {
  Axiom axiom;
  std::vector<std::size_t> witness;  ///< the indices that break the axiom
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ValidationReport {
  std::vector<AxiomViolation> violations;
  bool valid() const { return violations.empty(); }
  nlohmann::json to_json() const;
};

/// Exhaustive scan of the ordinary metric axioms (O(n^3) triangle scan).
/// Shape errors (non-square, non-numeric, negative entries) throw; axiom
/// violations are reported, one entry per witness.
ValidationReport validate_metric(const FiniteMetric& m);

/// Exhaustive scan of the rectangular axioms: the triangle inequality is
/// replaced by the quadrilateral inequality over all admissible quadruples
/// x != z, y != w, {y,w} disjoint from {x,z} (O(n^4)).
ValidationReport validate_rectangular(const FiniteMetric& m);

/// Sup distance on [0,1]. Polynomials: exact coefficient difference, then a
/// dense grid (1025 nodes, doubling until 1e-12 relative stability) with a
/// golden-section polish around each near-maximal node; every sample is a
/// function evaluation, so the result never exceeds the true sup. Grids:
/// max over shared nodes; mismatched node counts are domain errors.
double sup_distance(const PolyFunc& a, const PolyFunc& b);
double sup_distance(const GridFunc& a, const GridFunc& b);
double sup_norm(const PolyFunc& f);

}  // namespace fixcert
