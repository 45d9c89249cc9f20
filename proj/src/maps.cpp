#include "fixcert/maps.hpp"

#include <cmath>

#include "fixcert/numeric.hpp"

namespace fixcert {

Point SelfMap::apply(const Point& p) const {
  if (!domain_.contains(p)) {
    raise(ErrorCode::domain, name_ + ": argument outside carrier: " + describe(p));
  }
  Point out = fn_(p);
  if (!domain_.contains(out)) {
    raise(ErrorCode::invariant, name_ + ": image escapes carrier: " + describe(out));
  }
  return out;
}

nlohmann::json AuxiliaryProperties::to_json() const {
  return nlohmann::json{{"continuous", continuous},
                        {"injective", injective},
                        {"subsequentially_convergent", subsequentially_convergent},
                        {"sequentially_convergent", sequentially_convergent}};
}

Point AuxiliaryMap::apply(const Point& p) const {
  if (!domain_.contains(p)) {
    raise(ErrorCode::domain, name_ + ": argument outside carrier: " + describe(p));
  }
  return fn_(p);
}

AuxiliaryMap identity_map(MetricSpace domain) {
  return AuxiliaryMap("identity", std::move(domain), [](const Point& p) { return p; },
                      AuxiliaryProperties{.continuous = true,
                                          .injective = true,
                                          .subsequentially_convergent = true,
                                          .sequentially_convergent = true});
}

TrackedPair make_tracked(const AuxiliaryMap& T, const Point& x) {
  return TrackedPair{x, T.apply(x)};
}

bool tracked_consistent(const AuxiliaryMap& T, const TrackedPair& tp) {
  return same_point(tp.z, T.apply(tp.x));
}

TrackedPair induced_apply(const AuxiliaryMap& T, const SelfMap& S, const TrackedPair& tp) {
  if (!tracked_consistent(T, tp)) {
    raise(ErrorCode::invariant, "induced_apply: tracked pair is stale (z != T(x))");
  }
  Point x_next = S.apply(tp.x);
  Point z_next = T.apply(x_next);
  return TrackedPair{std::move(x_next), std::move(z_next)};
}

ControlAlpha ControlAlpha::constant(double k) {
  return ControlAlpha("constant " + format_full(k),
                      [k](const Point&, const Point&) { return k; });
}

double ControlAlpha::eval(const Point& u, const Point& v) const {
  const double value = fn_(u, v);
  if (!(value >= 0.0) || value >= 1.0) {
    raise(ErrorCode::control, "control \"" + tag_ + "\" left [0,1) at pair (" + describe(u) +
                                  ", " + describe(v) + "): " + format_full(value));
  }
  return value;
}

ControlBeta ControlBeta::constant(double k) {
  return ControlBeta("constant " + format_full(k), [k](double) { return k; },
                     /*gamma_class_declared=*/true);
}

double ControlBeta::eval(double t) const {
  const double value = fn_(t);
  if (!(value >= 0.0) || value >= 1.0) {
    raise(ErrorCode::control, "control \"" + tag_ + "\" left [0,1) at t = " + format_full(t) +
                                  ": " + format_full(value));
  }
  return value;
}

nlohmann::json WitnessReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const Witness& w : violations) {
    list.push_back({{"pair", {{"x", point_to_json(w.x)}, {"y", point_to_json(w.y)}}},
                    {"lhs", w.lhs},
                    {"rhs", w.rhs},
                    {"slack", kInequalitySlack}});
  }
  return nlohmann::json{{"class", contraction_class},
                        {"checked", checked},
                        {"violations", list},
                        {"holds", holds()}};
}

namespace {

/// Shared evaluation data for one sample pair.
struct PairEval {
  double lhs;       ///< d(TSx, TSy)
  double d_images;  ///< d(Tx, Ty)
  double orbital;   ///< d(Tx, TSx) + d(Ty, TSy)
  Point tx, ty;
};

PairEval eval_pair(const AuxiliaryMap& T, const SelfMap& S, const SamplePair& pair) {
  const MetricSpace& space = S.domain();
  Point tx = T.apply(pair.first);
  Point ty = T.apply(pair.second);
  Point tsx = T.apply(S.apply(pair.first));
  Point tsy = T.apply(S.apply(pair.second));
  PairEval out;
  out.lhs = space.distance(tsx, tsy);
  out.d_images = space.distance(tx, ty);
  out.orbital = space.distance(tx, tsx) + space.distance(ty, tsy);
  out.tx = std::move(tx);
  out.ty = std::move(ty);
  return out;
}

template <typename RhsFn>
WitnessReport run_check(const char* cls, const AuxiliaryMap& T, const SelfMap& S,
                        std::span<const SamplePair> pairs, RhsFn rhs_of) {
  WitnessReport report;
  report.contraction_class = cls;
  for (const SamplePair& pair : pairs) {
    const PairEval e = eval_pair(T, S, pair);
    const double rhs = rhs_of(e);
    ++report.checked;
    if (e.lhs > rhs + kInequalitySlack) {
      report.violations.push_back({pair.first, pair.second, e.lhs, rhs});
    }
  }
  return report;
}

}  // namespace

WitnessReport check_weakly_contractive(const AuxiliaryMap& T, const SelfMap& S,
                                       const ControlAlpha& alpha,
                                       std::span<const SamplePair> pairs) {
  return run_check("weakly-contractive", T, S, pairs, [&](const PairEval& e) {
    return alpha.eval(e.tx, e.ty) * e.d_images;
  });
}

WitnessReport check_weakly_kannan(const AuxiliaryMap& T, const SelfMap& S,
                                  const ControlAlpha& alpha,
                                  std::span<const SamplePair> pairs) {
  return run_check("weakly-kannan", T, S, pairs, [&](const PairEval& e) {
    return 0.5 * alpha.eval(e.tx, e.ty) * e.orbital;
  });
}

WitnessReport check_geraghty(const AuxiliaryMap& T, const SelfMap& S, const ControlBeta& beta,
                             std::span<const SamplePair> pairs) {
  return run_check("geraghty", T, S, pairs, [&](const PairEval& e) {
    return beta.eval(e.d_images) * e.d_images;
  });
}

WitnessReport check_kannan_geraghty(const AuxiliaryMap& T, const SelfMap& S,
                                    const ControlBeta& beta,
                                    std::span<const SamplePair> pairs) {
  return run_check("kannan-geraghty", T, S, pairs, [&](const PairEval& e) {
    return 0.5 * beta.eval(e.d_images) * e.orbital;
  });
}

AnnulusSup annulus_sup(const MetricSpace& space, const ControlAlpha& alpha,
                       std::span<const SamplePair> image_pairs, double a, double b) {
  if (!(a > 0.0)) raise(ErrorCode::domain, "annulus_sup: requires a > 0");
  if (b < a) raise(ErrorCode::domain, "annulus_sup: requires a <= b");
  AnnulusSup out;
  for (const SamplePair& pair : image_pairs) {
    const double d = space.distance(pair.first, pair.second);
    if (d < a || d > b) continue;
    const double v = alpha.eval(pair.first, pair.second);
    out.has_samples = true;
    ++out.qualifying;
    out.value = std::max(out.value, v);
  }
  return out;
}

std::vector<SamplePair> check_injectivity(const AuxiliaryMap& T, std::span<const Point> points) {
  std::vector<Point> images;
  images.reserve(points.size());
  for (const Point& p : points) images.push_back(T.apply(p));
  std::vector<SamplePair> collisions;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (same_point(points[i], points[j])) continue;
      if (same_point(images[i], images[j])) {
        collisions.emplace_back(points[i], points[j]);
      }
    }
  }
  return collisions;
}

std::vector<SamplePair> random_polynomial_pairs(std::uint64_t seed, std::size_t count,
                                                std::size_t max_degree) {
  Rng rng(seed);
  std::vector<SamplePair> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto draw = [&]() {
      const std::size_t deg = rng.index(max_degree + 1);
      std::vector<double> coeffs(deg + 1);
      for (double& c : coeffs) c = rng.uniform(-1.0, 1.0);
      return Point(PolyFunc(std::move(coeffs)));
    };
    out.emplace_back(draw(), draw());
  }
  return out;
}

std::vector<SamplePair> random_plane_pairs(std::uint64_t seed, std::size_t count, double lo,
                                           double hi) {
  Rng rng(seed);
  std::vector<SamplePair> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.emplace_back(Point(Vec2{rng.uniform(lo, hi), rng.uniform(lo, hi)}),
                     Point(Vec2{rng.uniform(lo, hi), rng.uniform(lo, hi)}));
  }
  return out;
}

std::vector<SamplePair> random_scalar_pairs(std::uint64_t seed, std::size_t count, double lo,
                                            double hi) {
  Rng rng(seed);
  std::vector<SamplePair> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.emplace_back(Point(rng.uniform(lo, hi)), Point(rng.uniform(lo, hi)));
  }
  return out;
}

}  // namespace fixcert
