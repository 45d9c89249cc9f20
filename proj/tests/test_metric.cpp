#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "fixcert/metric.hpp"
#include "fixcert/numeric.hpp"

using namespace fixcert;

#define CHECK_RAISES(code_, expr)                        \
  do {                                                   \
    bool caught_ = false;                                \
    try {                                                \
      (void)(expr);                                      \
    } catch (const Error& e_) {                          \
      caught_ = true;                                    \
      CHECK(e_.code() == ErrorCode::code_);              \
    }                                                    \
    CHECK_MESSAGE(caught_, "expected error " #code_);    \
  } while (0)

TEST_CASE("elementary spaces evaluate textbook distances") {
  const MetricSpace plane = euclidean_plane();
  CHECK(approx_rel(plane.distance(Vec2{0, 0}, Vec2{1, 1}), std::sqrt(2.0), 1e-15));
  CHECK(plane.distance(Vec2{2, 3}, Vec2{2, 3}) == 0.0);

  const MetricSpace line = real_line();
  CHECK(line.distance(-1.5, 2.5) == 4.0);

  const MetricSpace interval = real_interval(0.0, 1.0);
  CHECK(interval.distance(0.25, 0.75) == 0.5);
  CHECK_RAISES(domain, interval.distance(0.25, 1.5));
  CHECK_RAISES(domain, line.distance(Vec2{0, 0}, Vec2{1, 1}));  // wrong representation
}

TEST_CASE("discrete space is the 0/1 metric on indices") {
  const MetricSpace d2 = discrete_space(2);
  CHECK(d2.distance(std::size_t{0}, std::size_t{1}) == 1.0);
  CHECK(d2.distance(std::size_t{1}, std::size_t{1}) == 0.0);
  CHECK_RAISES(domain, d2.distance(std::size_t{0}, std::size_t{2}));
}

TEST_CASE("sup distance on polynomials hits endpoint and interior maxima") {
  const PolyFunc t = PolyFunc::monomial(1);
  const PolyFunc t2_half{{0.0, 0.0, 0.5}};
  const PolyFunc t3_sixth{{0.0, 0.0, 0.0, 1.0 / 6.0}};

  // |t - t^2/2| increases on [0,1]: sup = 1/2 at t = 1.
  CHECK(approx_rel(sup_distance(t, t2_half), 0.5, 1e-12));
  // |t^2/2 - t^3/6| increases: sup = 1/3 at t = 1.
  CHECK(approx_rel(sup_distance(t2_half, t3_sixth), 1.0 / 3.0, 1e-12));
  // Interior maximum: |t - t^2| peaks at t = 1/2 with value 1/4.
  CHECK(approx_rel(sup_distance(t, PolyFunc{{0.0, 0.0, 1.0}}), 0.25, 1e-12));
  CHECK(sup_distance(t, t) == 0.0);
  CHECK(sup_norm(PolyFunc::constant(1.0)) == 1.0);
}

TEST_CASE("sup distance never exceeds an interval bound certified by hand") {
  // f = t^3 - t has |f| <= 2/(3 sqrt 3) on [0,1]; every reported sup is an
  // evaluation, so it cannot overshoot the true maximum.
  const PolyFunc f{{0.0, -1.0, 0.0, 1.0}};
  const double sup = sup_norm(f);
  const double true_max = 2.0 / (3.0 * std::sqrt(3.0));
  CHECK(sup <= true_max + 1e-15);
  CHECK(approx_rel(sup, true_max, 1e-10));
}

TEST_CASE("grid representation: shared nodes required") {
  const GridFunc a{{0.0, 0.5, 1.0}};
  const GridFunc b{{0.0, 0.25, 0.5}};
  CHECK(sup_distance(a, b) == 0.5);
  CHECK_RAISES(domain, sup_distance(a, GridFunc{{0.0, 1.0}}));

  const MetricSpace sup_space = sup_norm_space();
  CHECK_RAISES(domain, sup_space.distance(PolyFunc::constant(1.0), a));  // mixed reps
}

TEST_CASE("validator accepts a path metric and pins the worked violation") {
  FiniteMetric path{MetricKind::ordinary, {{0, 1, 1}, {1, 0, 2}, {1, 2, 0}}};
  CHECK(validate_metric(path).valid());

  FiniteMetric bad{MetricKind::ordinary, {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}};
  const ValidationReport report = validate_metric(bad);
  REQUIRE(report.violations.size() == 1);
  const AxiomViolation& v = report.violations[0];
  CHECK(v.axiom == Axiom::triangle);
  CHECK((v.witness == std::vector<std::size_t>{0, 1, 2}));
  CHECK(v.lhs == 5.0);
  CHECK(v.rhs == 2.0);
}

TEST_CASE("shape problems throw, axiom failures are reported") {
  CHECK_RAISES(format, validate_metric(FiniteMetric{MetricKind::ordinary, {{0, 1}, {1, 0}, {1, 1}}}));
  CHECK_RAISES(format, validate_metric(FiniteMetric{MetricKind::ordinary, {{0, -1}, {-1, 0}}}));

  FiniteMetric asym{MetricKind::ordinary, {{0, 1}, {2, 0}}};
  const ValidationReport r = validate_metric(asym);
  CHECK(!r.valid());
  CHECK(r.violations[0].axiom == Axiom::symmetry);

  FiniteMetric dup{MetricKind::ordinary, {{0, 0}, {0, 0}}};
  CHECK(!validate_metric(dup).valid());  // identity of indiscernibles

  FiniteMetric diag{MetricKind::ordinary, {{1, 1}, {1, 0}}};
  const ValidationReport rd = validate_metric(diag);
  CHECK(rd.violations[0].axiom == Axiom::zero_diagonal);
}

TEST_CASE("rectangular validator: quadruple violation found, chain fixture passes") {
  // Chain 0-1-2-3 with unit links, shortcut pairs 2, endpoints 4: the
  // quadrilateral path 0-1-2-3 sums to 3 < 4.
  FiniteMetric quad{MetricKind::rectangular,
                    {{0, 1, 2, 4}, {1, 0, 1, 2}, {2, 1, 0, 1}, {4, 2, 1, 0}}};
  const ValidationReport r = validate_rectangular(quad);
  CHECK(!r.valid());
  bool found = false;
  for (const AxiomViolation& v : r.violations) {
    if (v.axiom == Axiom::quadrilateral && v.witness == std::vector<std::size_t>{0, 1, 2, 3})
      found = true;
  }
  CHECK(found);

  // d(0,1) = 3, every other pair 1: quadrilateral holds with equality, the
  // triangle fails. The canonical rectangular-but-not-ordinary example.
  FiniteMetric rect{MetricKind::rectangular,
                    {{0, 3, 1, 1}, {3, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}}};
  CHECK(validate_rectangular(rect).valid());
  CHECK(!validate_metric(rect).valid());
}

namespace {

FiniteMetric random_euclidean_metric(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.uniform(), rng.uniform()});
  FiniteMetric m;
  m.kind = MetricKind::ordinary;
  m.dist.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m.dist[i][j] = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
  return m;
}

FiniteMetric random_symmetric_matrix(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  FiniteMetric m;
  m.kind = MetricKind::ordinary;
  m.dist.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.dist[i][j] = m.dist[j][i] = rng.uniform(0.5, 1.5);
  return m;
}

// Independent triangle scan, deliberately written with reversed loops.
std::multiset<std::vector<std::size_t>> oracle_triangle_witnesses(const FiniteMetric& m) {
  std::multiset<std::vector<std::size_t>> out;
  const std::size_t n = m.size();
  for (std::size_t j = n; j-- > 0;) {
    for (std::size_t k = n; k-- > 0;) {
      for (std::size_t i = 0; i < k; ++i) {
        if (j == i || j == k) continue;
        if (m.at(i, k) > m.at(i, j) + m.at(j, k)) out.insert({i, j, k});
      }
    }
  }
  return out;
}

std::multiset<std::vector<std::size_t>> oracle_quadrilateral_witnesses(const FiniteMetric& m) {
  std::multiset<std::vector<std::size_t>> out;
  const std::size_t n = m.size();
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t y = 0; y < n; ++y) {
      if (y == w) continue;
      for (std::size_t x = 0; x < n; ++x) {
        if (x == y || x == w) continue;
        for (std::size_t z = x + 1; z < n; ++z) {
          if (z == y || z == w) continue;
          if (m.at(x, z) > m.at(x, y) + m.at(y, w) + m.at(w, z)) out.insert({x, y, w, z});
        }
      }
    }
  }
  return out;
}

std::multiset<std::vector<std::size_t>> witnesses(const ValidationReport& r, Axiom axiom) {
  std::multiset<std::vector<std::size_t>> out;
  for (const AxiomViolation& v : r.violations)
    if (v.axiom == axiom) out.insert(v.witness);
  return out;
}

}  // namespace

TEST_CASE("triangle validity implies quadrilateral validity (random Euclidean)") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    FiniteMetric m = random_euclidean_metric(seed, 6);
    CHECK(validate_metric(m).valid());
    m.kind = MetricKind::rectangular;
    CHECK(validate_rectangular(m).valid());
  }
}

TEST_CASE("validators agree with independently written exhaustive oracles") {
  for (std::uint64_t seed = 100; seed < 150; ++seed) {
    const FiniteMetric m = random_symmetric_matrix(seed, 6);
    CHECK(witnesses(validate_metric(m), Axiom::triangle) == oracle_triangle_witnesses(m));
    CHECK(witnesses(validate_rectangular(m), Axiom::quadrilateral) ==
          oracle_quadrilateral_witnesses(m));
  }
}

TEST_CASE("finite metric JSON round trip and carrier space") {
  FiniteMetric m{MetricKind::rectangular, {{0, 3, 1, 1}, {3, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}}};
  const FiniteMetric back = FiniteMetric::from_json(m.to_json());
  CHECK(back.kind == m.kind);
  CHECK(back.dist == m.dist);

  const MetricSpace space = m.as_space("demo");
  CHECK(space.kind() == MetricKind::rectangular);
  CHECK(space.distance(std::size_t{0}, std::size_t{1}) == 3.0);
  CHECK_RAISES(domain, space.distance(std::size_t{0}, std::size_t{4}));

  CHECK_RAISES(format, FiniteMetric::from_json(nlohmann::json{{"kind", "bogus"}, {"dist", {{0.0}}}}));
}

TEST_CASE("points compare exactly and describe themselves") {
  CHECK(same_point(Point{std::size_t{3}}, Point{std::size_t{3}}));
  CHECK(!same_point(Point{std::size_t{3}}, Point{3.0}));
  CHECK(same_point(Point{PolyFunc::monomial(1)}, Point{PolyFunc{{0.0, 1.0}}}));
  CHECK(describe(Point{Vec2{1, 2}}).find('1') != std::string::npos);
}
