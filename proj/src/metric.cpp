#include "fixcert/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixcert/numeric.hpp"

namespace fixcert {

bool same_point(const Point& a, const Point& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& lhs) {
        using T = std::decay_t<decltype(lhs)>;
        return lhs == std::get<T>(b);
      },
      a);
}

std::string describe(const Point& p) {
  std::ostringstream out;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::size_t>) {
          out << "#" << v;
        } else if constexpr (std::is_same_v<T, double>) {
          out << format_full(v);
        } else if constexpr (std::is_same_v<T, Vec2>) {
          out << "(" << format_full(v.x) << ", " << format_full(v.y) << ")";
        } else if constexpr (std::is_same_v<T, PolyFunc>) {
          out << "poly(deg " << v.degree() << ")";
        } else {
          out << "grid(" << v.nodes() << " nodes)";
        }
      },
      p);
  return out.str();
}

nlohmann::json point_to_json(const Point& p) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::size_t>) {
          return nlohmann::json{{"index", v}};
        } else if constexpr (std::is_same_v<T, double>) {
          return nlohmann::json{{"scalar", v}};
        } else if constexpr (std::is_same_v<T, Vec2>) {
          return nlohmann::json{{"vec", {v.x, v.y}}};
        } else if constexpr (std::is_same_v<T, PolyFunc>) {
          return nlohmann::json{{"poly", v.coeffs}};
        } else {
          return nlohmann::json{{"grid", v.values}};
        }
      },
      p);
}

const char* metric_kind_name(MetricKind kind) {
  return kind == MetricKind::ordinary ? "ordinary" : "rectangular";
}

double MetricSpace::distance(const Point& p, const Point& q) const {
  if (!contains(p)) raise(ErrorCode::domain, name_ + ": point outside carrier: " + describe(p));
  if (!contains(q)) raise(ErrorCode::domain, name_ + ": point outside carrier: " + describe(q));
  return distance_(p, q);
}

bool MetricSpace::contains(const Point& p) const {
  if (member_) return member_(p);
  if (!carrier_.empty()) {
    return std::any_of(carrier_.begin(), carrier_.end(),
                       [&](const Point& c) { return same_point(c, p); });
  }
  return true;
}

namespace {

double scalar_of(const Point& p, const char* space) {
  if (const double* v = std::get_if<double>(&p)) return *v;
  raise(ErrorCode::domain, std::string(space) + ": expected a scalar point, got " + describe(p));
}

}  // namespace

MetricSpace real_line() {
  return MetricSpace("real-line", MetricKind::ordinary, [](const Point& p, const Point& q) {
    return std::fabs(scalar_of(p, "real-line") - scalar_of(q, "real-line"));
  });
}

MetricSpace real_interval(double lo, double hi) {
  MetricSpace space("interval", MetricKind::ordinary, [](const Point& p, const Point& q) {
    return std::fabs(scalar_of(p, "interval") - scalar_of(q, "interval"));
  });
  space.with_membership([lo, hi](const Point& p) {
    const double* v = std::get_if<double>(&p);
    return v != nullptr && *v >= lo && *v <= hi;
  });
  return space;
}

MetricSpace euclidean_plane() {
  return MetricSpace("plane", MetricKind::ordinary, [](const Point& p, const Point& q) {
    const Vec2* a = std::get_if<Vec2>(&p);
    const Vec2* b = std::get_if<Vec2>(&q);
    if (a == nullptr || b == nullptr) {
      raise(ErrorCode::domain, "plane: expected plane points");
    }
    return std::hypot(a->x - b->x, a->y - b->y);
  });
}

MetricSpace sup_norm_space() {
  return MetricSpace("sup-norm", MetricKind::ordinary, [](const Point& p, const Point& q) {
    if (const PolyFunc* a = std::get_if<PolyFunc>(&p)) {
      if (const PolyFunc* b = std::get_if<PolyFunc>(&q)) return sup_distance(*a, *b);
    }
    if (const GridFunc* a = std::get_if<GridFunc>(&p)) {
      if (const GridFunc* b = std::get_if<GridFunc>(&q)) return sup_distance(*a, *b);
    }
    raise(ErrorCode::domain, "sup-norm: mismatched function representations");
  });
}

MetricSpace discrete_space(std::size_t n) {
  std::vector<Point> carrier;
  carrier.reserve(n);
  for (std::size_t i = 0; i < n; ++i) carrier.emplace_back(i);
  MetricSpace space("discrete", MetricKind::ordinary, [n](const Point& p, const Point& q) {
    const std::size_t* i = std::get_if<std::size_t>(&p);
    const std::size_t* j = std::get_if<std::size_t>(&q);
    if (i == nullptr || j == nullptr || *i >= n || *j >= n) {
      raise(ErrorCode::domain, "discrete: index outside carrier");
    }
    return *i == *j ? 0.0 : 1.0;
  });
  space.with_carrier(std::move(carrier));
  return space;
}

MetricSpace FiniteMetric::as_space(std::string name) const {
  const std::size_t n = size();
  std::vector<Point> carrier;
  carrier.reserve(n);
  for (std::size_t i = 0; i < n; ++i) carrier.emplace_back(i);
  auto matrix = dist;
  MetricSpace space(std::move(name), kind, [matrix, n](const Point& p, const Point& q) {
    const std::size_t* i = std::get_if<std::size_t>(&p);
    const std::size_t* j = std::get_if<std::size_t>(&q);
    if (i == nullptr || j == nullptr || *i >= n || *j >= n) {
      raise(ErrorCode::domain, "finite metric: index outside carrier");
    }
    return matrix[*i][*j];
  });
  space.with_carrier(std::move(carrier));
  return space;
}

FiniteMetric FiniteMetric::from_json(const nlohmann::json& j) {
  FiniteMetric m;
  if (!j.is_object() || !j.contains("dist")) {
    raise(ErrorCode::format, "finite metric: expected an object with a \"dist\" matrix");
  }
  if (j.contains("kind")) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ordinary") {
      m.kind = MetricKind::ordinary;
    } else if (kind == "rectangular") {
      m.kind = MetricKind::rectangular;
    } else {
      raise(ErrorCode::format, "finite metric: unknown kind \"" + kind + "\"");
    }
  }
  const nlohmann::json& rows = j.at("dist");
  if (!rows.is_array()) raise(ErrorCode::format, "finite metric: \"dist\" must be an array");
  for (const auto& row : rows) {
    if (!row.is_array()) raise(ErrorCode::format, "finite metric: rows must be arrays");
    std::vector<double> r;
    for (const auto& cell : row) {
      if (!cell.is_number()) raise(ErrorCode::format, "finite metric: entries must be numbers");
      r.push_back(cell.get<double>());
    }
    m.dist.push_back(std::move(r));
  }
  return m;
}

nlohmann::json FiniteMetric::to_json() const {
  return nlohmann::json{{"kind", metric_kind_name(kind)}, {"dist", dist}};
}

const char* axiom_name(Axiom axiom) {
  switch (axiom) {
    case Axiom::nonnegativity: return "nonnegativity";
    case Axiom::zero_diagonal: return "zero-diagonal";
    case Axiom::identity_of_indiscernibles: return "identity-of-indiscernibles";
    case Axiom::symmetry: return "symmetry";
    case Axiom::triangle: return "triangle";
    case Axiom::quadrilateral: return "quadrilateral";
  }
  return "unknown";
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const AxiomViolation& v : violations) {
    out.push_back({{"axiom", axiom_name(v.axiom)},
                   {"witness", v.witness},
                   {"lhs", v.lhs},
                   {"rhs", v.rhs}});
  }
  return nlohmann::json{{"violations", out}, {"valid", valid()}};
}

namespace {

void check_shape(const FiniteMetric& m) {
  const std::size_t n = m.size();
  for (const auto& row : m.dist) {
    if (row.size() != n) raise(ErrorCode::format, "finite metric: matrix is not square");
    for (double d : row) {
      if (!std::isfinite(d)) raise(ErrorCode::format, "finite metric: non-finite entry");
      if (d < 0.0) raise(ErrorCode::format, "finite metric: negative entry");
    }
  }
}

/// Axioms shared by ordinary and rectangular spaces: zero diagonal, positive
/// and symmetric off-diagonal entries.
void scan_basic_axioms(const FiniteMetric& m, ValidationReport& report) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m.at(i, i) != 0.0) {
      report.violations.push_back({Axiom::zero_diagonal, {i}, m.at(i, i), 0.0});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m.at(i, j) != m.at(j, i)) {
        report.violations.push_back({Axiom::symmetry, {i, j}, m.at(i, j), m.at(j, i)});
      }
      if (m.at(i, j) == 0.0) {
        report.violations.push_back({Axiom::identity_of_indiscernibles, {i, j}, 0.0, 0.0});
      }
    }
  }
}

}  // namespace

ValidationReport validate_metric(const FiniteMetric& m) {
  check_shape(m);
  ValidationReport report;
  scan_basic_axioms(m, report);
  const std::size_t n = m.size();
  // d(i,k) <= d(i,j) + d(j,k); each unordered pair {i,k} scanned once.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double lhs = m.at(i, k);
        const double rhs = m.at(i, j) + m.at(j, k);
        if (lhs > rhs) {
          report.violations.push_back({Axiom::triangle, {i, j, k}, lhs, rhs});
        }
      }
    }
  }
  return report;
}

ValidationReport validate_rectangular(const FiniteMetric& m) {
  check_shape(m);
  ValidationReport report;
  scan_basic_axioms(m, report);
  const std::size_t n = m.size();
  // d(x,z) <= d(x,y) + d(y,w) + d(w,z) over x != z, y != w, {y,w} disjoint
  // from {x,z}. Unordered {x,z}; ordered (y,w) since the path sums differ.
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t z = x + 1; z < n; ++z) {
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x || y == z) continue;
        for (std::size_t w = 0; w < n; ++w) {
          if (w == x || w == z || w == y) continue;
          const double lhs = m.at(x, z);
          const double rhs = m.at(x, y) + m.at(y, w) + m.at(w, z);
          if (lhs > rhs) {
            report.violations.push_back({Axiom::quadrilateral, {x, y, w, z}, lhs, rhs});
          }
        }
      }
    }
  }
  return report;
}

namespace {

struct GridBest {
  double value = 0.0;
  double arg = 0.0;
};

GridBest grid_abs_max(const PolyFunc& f, std::size_t nodes) {
  GridBest best;
  const double h = 1.0 / static_cast<double>(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double t = (i == nodes - 1) ? 1.0 : static_cast<double>(i) * h;
    const double v = std::fabs(f.eval(t));
    if (v > best.value) {
      best.value = v;
      best.arg = t;
    }
  }
  return best;
}

/// Golden-section maximisation of |f| on [lo,hi]; |f| is smooth near a
/// maximum away from its zeros, so the bracket collapses cleanly.
double golden_abs_max(const PolyFunc& f, double lo, double hi) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double fc = std::fabs(f.eval(c));
  double fd = std::fabs(f.eval(d));
  for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_phi;
      fc = std::fabs(f.eval(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_phi;
      fd = std::fabs(f.eval(d));
    }
  }
  return std::max(fc, fd);
}

double poly_abs_sup(const PolyFunc& f) {
  if (f.is_zero()) return 0.0;
  constexpr std::size_t kStartNodes = 1025;
  constexpr std::size_t kMaxNodes = (1u << 17) + 1;

  std::size_t nodes = kStartNodes;
  GridBest best = grid_abs_max(f, nodes);
  while (nodes < kMaxNodes) {
    const std::size_t next = 2 * nodes - 1;
    const GridBest refined = grid_abs_max(f, next);
    const bool stable = std::fabs(refined.value - best.value) <=
                        kSupRefineRel * std::max(refined.value, best.value);
    best = refined;
    nodes = next;
    if (stable) break;
  }

  // Polish every near-best local maximum of the final grid; interior maxima
  // sit between nodes, endpoints are already exact.
  const double h = 1.0 / static_cast<double>(nodes - 1);
  double result = best.value;
  std::vector<double> values(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double t = (i == nodes - 1) ? 1.0 : static_cast<double>(i) * h;
    values[i] = std::fabs(f.eval(t));
  }
  const double band = best.value * (1.0 - 1e-6);
  for (std::size_t i = 0; i < nodes; ++i) {
    const bool local_max = (i == 0 || values[i] >= values[i - 1]) &&
                           (i == nodes - 1 || values[i] >= values[i + 1]);
    if (!local_max || values[i] < band) continue;
    const double lo = (i == 0) ? 0.0 : static_cast<double>(i - 1) * h;
    const double hi = (i == nodes - 1) ? 1.0 : static_cast<double>(i + 1) * h;
    result = std::max(result, golden_abs_max(f, lo, hi));
  }
  return result;
}

}  // namespace

double sup_distance(const PolyFunc& a, const PolyFunc& b) {
  if (a == b) return 0.0;
  return poly_abs_sup(a - b);
}

double sup_distance(const GridFunc& a, const GridFunc& b) {
  if (a.nodes() < 2 || b.nodes() < 2) {
    raise(ErrorCode::domain, "sup-norm: grids need at least 2 nodes");
  }
  if (a.nodes() != b.nodes()) {
    raise(ErrorCode::domain, "sup-norm: mismatched grids");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < a.nodes(); ++i) {
    best = std::max(best, std::fabs(a.values[i] - b.values[i]));
  }
  return best;
}

double sup_norm(const PolyFunc& f) { return poly_abs_sup(f); }

}  // namespace fixcert
