#include "fixcert/gallery.hpp"

#include <cmath>

#include "fixcert/numeric.hpp"

namespace fixcert {

double exact_factorial(std::size_t n) {
  if (n > 18) {
    raise(ErrorCode::domain, "factorial: " + std::to_string(n) +
                                 "! is not exact in double precision (limit 18)");
  }
  double acc = 1.0;
  for (std::size_t k = 2; k <= n; ++k) acc *= static_cast<double>(k);
  return acc;
}

PolyFunc volterra_apply(const PolyFunc& p) {
  std::vector<double> out(p.coeffs.size() + 1, 0.0);
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
    out[k + 1] = p.coeffs[k] / static_cast<double>(k + 1);
  }
  return PolyFunc(std::move(out));
}

GridFunc volterra_apply(const GridFunc& g) {
  if (g.nodes() < 2) raise(ErrorCode::domain, "volterra: grid needs at least 2 nodes");
  const double h = 1.0 / static_cast<double>(g.nodes() - 1);
  std::vector<double> out(g.nodes(), 0.0);
  for (std::size_t i = 1; i < g.nodes(); ++i) {
    out[i] = out[i - 1] + 0.5 * h * (g.values[i - 1] + g.values[i]);
  }
  return GridFunc(std::move(out));
}

VolterraNormCheck volterra_norm_check(std::span<const PolyFunc> samples) {
  VolterraNormCheck out;
  auto ratio_of = [](const PolyFunc& p) {
    const double denom = sup_norm(p);
    if (denom == 0.0) return -1.0;
    return sup_norm(volterra_apply(volterra_apply(p))) / denom;
  };
  for (const PolyFunc& p : samples) {
    const double r = ratio_of(p);
    if (r < 0.0) {
      ++out.skipped_zero;
      continue;
    }
    ++out.checked;
    out.max_ratio = std::max(out.max_ratio, r);
    if (r > 0.5 + kInequalitySlack) out.within_half = false;
  }
  out.witness_ratio = ratio_of(PolyFunc::constant(1.0));
  out.max_ratio = std::max(out.max_ratio, out.witness_ratio);
  ++out.checked;
  if (out.witness_ratio > 0.5 + kInequalitySlack) out.within_half = false;
  return out;
}

double VolterraOracle::step_dist(std::size_t n) {
  if (n < 1) raise(ErrorCode::domain, "oracle: step index starts at 1");
  // sup |t^n/n! - t^{n+1}/(n+1)!| is attained at t = 1.
  return static_cast<double>(n) / exact_factorial(n + 1);
}

double VolterraOracle::ratio(std::size_t n) {
  if (n < 2) raise(ErrorCode::domain, "oracle: ratios start at 2");
  const double nn = static_cast<double>(n);
  return nn / (nn * nn - 1.0);
}

double VolterraOracle::true_dist(std::size_t n) { return 1.0 / exact_factorial(n + 1); }

double AffineOracle::step_dist(std::size_t n) {
  if (n < 1) raise(ErrorCode::domain, "oracle: step index starts at 1");
  return std::pow(0.75, static_cast<double>(n - 1)) * std::sqrt(2.0);
}

double AffineOracle::true_dist(std::size_t n) {
  return std::pow(0.75, static_cast<double>(n)) * 4.0 * std::sqrt(2.0);
}

SelfMap volterra_map() {
  return SelfMap("volterra", sup_norm_space(), [](const Point& p) -> Point {
    if (const PolyFunc* f = std::get_if<PolyFunc>(&p)) return volterra_apply(*f);
    if (const GridFunc* g = std::get_if<GridFunc>(&p)) return volterra_apply(*g);
    raise(ErrorCode::domain, "volterra: expected a function point");
  });
}

SelfMap volterra_squared_map() {
  return SelfMap("volterra-squared", sup_norm_space(), [](const Point& p) -> Point {
    if (const PolyFunc* f = std::get_if<PolyFunc>(&p)) {
      return volterra_apply(volterra_apply(*f));
    }
    if (const GridFunc* g = std::get_if<GridFunc>(&p)) {
      return volterra_apply(volterra_apply(*g));
    }
    raise(ErrorCode::domain, "volterra: expected a function point");
  });
}

std::vector<ScalarExample> scalar_examples() {
  std::vector<ScalarExample> out;

  {
    // f(y) = y^2/(1+y) on [0, 1/8]; |f'| <= 0.21, max at the right endpoint.
    MetricSpace domain = real_interval(0.0, 0.125);
    SelfMap map("scalar-quadratic", domain, [](const Point& p) -> Point {
      const double y = std::get<double>(p);
      return y * y / (1.0 + y);
    });
    out.push_back({"scalar-quadratic", std::move(map),
                   [](double y) { return (2.0 * y + y * y) / ((1.0 + y) * (1.0 + y)); }, 0.21,
                   0.0, Point(0.125)});
  }
  {
    // f(t) = t/(2(1+t)) on [0, inf); |f'| <= 1/2.
    MetricSpace domain = real_interval(0.0, 1e9);
    SelfMap map("scalar-halfrate", domain, [](const Point& p) -> Point {
      const double t = std::get<double>(p);
      return t / (2.0 * (1.0 + t));
    });
    out.push_back({"scalar-halfrate", std::move(map),
                   [](double t) { return 0.5 / ((1.0 + t) * (1.0 + t)); }, 0.5, 0.0, Point(1.0)});
  }
  {
    // f(x) = x/8 on [0,1); Lipschitz constant exactly 1/8.
    MetricSpace domain = real_interval(0.0, 1.0);
    SelfMap map("aux-scale8", domain,
                [](const Point& p) -> Point { return std::get<double>(p) / 8.0; });
    out.push_back({"aux-scale8", std::move(map), [](double) { return 0.125; }, 0.125, 0.0,
                   Point(0.5)});
  }
  return out;
}

namespace {

std::vector<GalleryInstance> build_gallery() {
  std::vector<GalleryInstance> out;

  {
    MetricSpace space = sup_norm_space();
    AuxiliaryMap T("volterra", space,
                   [](const Point& p) -> Point {
                     if (const PolyFunc* f = std::get_if<PolyFunc>(&p)) return volterra_apply(*f);
                     if (const GridFunc* g = std::get_if<GridFunc>(&p)) return volterra_apply(*g);
                     raise(ErrorCode::domain, "volterra: expected a function point");
                   },
                   AuxiliaryProperties{.continuous = true,
                                       .injective = true,
                                       .subsequentially_convergent = true,
                                       .sequentially_convergent = true});
    GalleryInstance inst{
        "volterra",
        "indefinite integration on C[0,1], iterated from the constant 1",
        std::move(T),
        volterra_map(),
        Point(PolyFunc::constant(1.0)),
        Point(PolyFunc::constant(0.0)),
        [](std::size_t n) { return VolterraOracle::step_dist(n); },
        [](std::size_t n) { return VolterraOracle::true_dist(n); },
        0.5,  // operator norm of the one-step square on the image
        10};
    out.push_back(std::move(inst));
  }
  {
    MetricSpace space = euclidean_plane();
    AuxiliaryMap T("diag(1,1/2)", space,
                   [](const Point& p) -> Point {
                     const Vec2 v = std::get<Vec2>(p);
                     return Vec2{v.x, 0.5 * v.y};
                   },
                   AuxiliaryProperties{.continuous = true,
                                       .injective = true,
                                       .subsequentially_convergent = true,
                                       .sequentially_convergent = true});
    SelfMap S("affine-r2", space, [](const Point& p) -> Point {
      const Vec2 v = std::get<Vec2>(p);
      return Vec2{0.75 * v.x + 1.0, 0.75 * v.y + 2.0};
    });
    GalleryInstance inst{
        "affine-r2",
        "plane contraction with diagonal auxiliary map; ratios exactly 3/4",
        std::move(T),
        std::move(S),
        Point(Vec2{0.0, 0.0}),
        Point(AffineOracle::z_star()),
        [](std::size_t n) { return AffineOracle::step_dist(n); },
        [](std::size_t n) { return AffineOracle::true_dist(n); },
        0.75,
        12};
    out.push_back(std::move(inst));
  }
  std::vector<ScalarExample> scalars = scalar_examples();
  for (ScalarExample& ex : scalars) {
    GalleryInstance inst{ex.name,
                         "scalar map with Lipschitz bound " + format_full(ex.lipschitz_bound),
                         identity_map(ex.map.domain()),
                         ex.map,
                         ex.start,
                         Point(ex.fixed_point),
                         nullptr,
                         nullptr,
                         ex.lipschitz_bound,
                         12};
    out.push_back(std::move(inst));
  }
  {
    // Two points, both fixed under S = id, indistinguishable through the
    // constant auxiliary map: every class inequality holds with control 0,
    // yet the fixed point is not unique. Injectivity is what fails.
    MetricSpace space = discrete_space(2);
    AuxiliaryMap T("constant-0", space, [](const Point&) -> Point { return std::size_t{0}; },
                   AuxiliaryProperties{.continuous = true,
                                       .injective = false,
                                       .subsequentially_convergent = true,
                                       .sequentially_convergent = true});
    SelfMap S("identity", space, [](const Point& p) { return p; });
    GalleryInstance inst{"discrete-counterexample",
                         "non-injective auxiliary map with two fixed points",
                         std::move(T),
                         std::move(S),
                         Point(std::size_t{0}),
                         std::nullopt,
                         nullptr,
                         nullptr,
                         std::nullopt,
                         3};
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace

const std::vector<GalleryInstance>& gallery_instances() {
  static const std::vector<GalleryInstance> instances = build_gallery();
  return instances;
}

const GalleryInstance* find_instance(std::string_view name) {
  for (const GalleryInstance& inst : gallery_instances()) {
    if (inst.name == name) return &inst;
  }
  return nullptr;
}

std::vector<std::string> gallery_names() {
  std::vector<std::string> out;
  for (const GalleryInstance& inst : gallery_instances()) out.push_back(inst.name);
  return out;
}

}  // namespace fixcert
