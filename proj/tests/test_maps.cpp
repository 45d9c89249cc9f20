#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixcert/gallery.hpp"
#include "fixcert/maps.hpp"
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

namespace {

Vec2 as_vec(const Point& p) { return std::get<Vec2>(p); }
PolyFunc as_poly(const Point& p) { return std::get<PolyFunc>(p); }

SelfMap plane_affine() {
  return SelfMap("affine", euclidean_plane(), [](const Point& p) {
    const Vec2 v = std::get<Vec2>(p);
    return Point{Vec2{0.75 * v.x + 1.0, 0.75 * v.y + 2.0}};
  });
}

AuxiliaryMap plane_halve_y() {
  AuxiliaryProperties props;
  props.continuous = props.injective = props.sequentially_convergent = true;
  return AuxiliaryMap("halve-y", euclidean_plane(),
                      [](const Point& p) {
                        const Vec2 v = std::get<Vec2>(p);
                        return Point{Vec2{v.x, 0.5 * v.y}};
                      },
                      props);
}

AuxiliaryMap poly_integrate() {
  AuxiliaryProperties props;
  props.continuous = props.injective = true;
  return AuxiliaryMap("integrate", sup_norm_space(),
                      [](const Point& p) { return Point{volterra_apply(std::get<PolyFunc>(p))}; },
                      props);
}

}  // namespace

TEST_CASE("apply guards the carrier on both sides") {
  const MetricSpace unit = real_interval(0.0, 1.0);
  const SelfMap escape("escape", unit, [](const Point& p) {
    return Point{std::get<double>(p) + 2.0};
  });
  CHECK_RAISES(domain, escape.apply(5.0));      // argument outside
  CHECK_RAISES(invariant, escape.apply(0.5));   // image outside

  const AuxiliaryMap aux("ident", unit, [](const Point& p) { return p; }, {});
  CHECK_RAISES(domain, aux.apply(-1.0));
  CHECK(std::get<double>(aux.apply(0.5)) == 0.5);
}

TEST_CASE("tracked pairs carry the image point, never invert the auxiliary map") {
  const AuxiliaryMap id = identity_map(euclidean_plane());
  const SelfMap half("half", euclidean_plane(), [](const Point& p) {
    const Vec2 v = std::get<Vec2>(p);
    return Point{Vec2{0.5 * v.x, 0.5 * v.y}};
  });

  TrackedPair tp = make_tracked(id, Vec2{1, 1});
  CHECK(tracked_consistent(id, tp));
  tp = induced_apply(id, half, tp);
  CHECK((as_vec(tp.x) == Vec2{0.5, 0.5}));
  CHECK((as_vec(tp.z) == Vec2{0.5, 0.5}));

  TrackedPair stale{Point{Vec2{1, 1}}, Point{Vec2{9, 9}}};
  CHECK(!tracked_consistent(id, stale));
  CHECK_RAISES(invariant, induced_apply(id, half, stale));
}

TEST_CASE("induced step through a non-trivial auxiliary map") {
  const AuxiliaryMap T = plane_halve_y();
  const SelfMap S = plane_affine();
  TrackedPair tp = make_tracked(T, Vec2{0, 0});
  CHECK((as_vec(tp.z) == Vec2{0, 0}));
  tp = induced_apply(T, S, tp);
  CHECK((as_vec(tp.x) == Vec2{1, 2}));  // S(0,0)
  CHECK((as_vec(tp.z) == Vec2{1, 1}));  // T S(0,0)
}

TEST_CASE("induced step for the integration pair: 1 -> t -> t^2/2 on the image") {
  const AuxiliaryMap T = poly_integrate();
  const SelfMap S("integrate", sup_norm_space(), [](const Point& p) {
    return Point{volterra_apply(std::get<PolyFunc>(p))};
  });
  TrackedPair tp = make_tracked(T, PolyFunc::constant(1.0));
  CHECK(as_poly(tp.z) == PolyFunc::monomial(1));
  tp = induced_apply(T, S, tp);
  CHECK(as_poly(tp.x) == PolyFunc::monomial(1));
  CHECK((as_poly(tp.z) == PolyFunc{{0.0, 0.0, 0.5}}));
}

TEST_CASE("controls reject values outside [0,1) and name the offender") {
  const ControlAlpha bad("bad", [](const Point&, const Point&) { return 1.0; });
  try {
    bad.eval(Point{0.0}, Point{1.0});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::control);
    CHECK(std::string(e.what()).find("bad") != std::string::npos);
  }
  CHECK(ControlAlpha::constant(0.75).eval(Point{0.0}, Point{1.0}) == 0.75);

  const ControlBeta drifting("drift", [](double t) { return t; }, true);
  CHECK(drifting.eval(0.5) == 0.5);
  CHECK_RAISES(control, drifting.eval(1.5));
  CHECK(ControlBeta::constant(0.5).gamma_class_declared());
}

TEST_CASE("orbital-sum checker arithmetic pinned on a hand example") {
  // S(t) = t/4, T = id, pair (1, 0): lhs = 1/4, orbital sum = 3/4.
  // alpha = 0.8 gives rhs 0.3 (holds); alpha = 0.5 gives rhs 0.1875 (fails).
  const MetricSpace line = real_line();
  const AuxiliaryMap T = identity_map(line);
  const SelfMap S("quarter", line, [](const Point& p) { return Point{std::get<double>(p) / 4.0}; });
  const std::vector<SamplePair> pairs{{Point{1.0}, Point{0.0}}};

  WitnessReport ok = check_weakly_kannan(T, S, ControlAlpha::constant(0.8), pairs);
  CHECK(ok.holds());
  CHECK(ok.checked == 1);

  WitnessReport bad = check_weakly_kannan(T, S, ControlAlpha::constant(0.5), pairs);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].lhs == 0.25);
  CHECK(bad.violations[0].rhs == 0.1875);

  // Same arithmetic through the distance-driven control.
  CHECK(check_kannan_geraghty(T, S, ControlBeta::constant(0.8), pairs).holds());
  CHECK(!check_kannan_geraghty(T, S, ControlBeta::constant(0.5), pairs).holds());
}

TEST_CASE("the identity map is not contractive and the checker says so") {
  const MetricSpace line = real_line();
  const AuxiliaryMap T = identity_map(line);
  const SelfMap S("id", line, [](const Point& p) { return p; });
  const std::vector<SamplePair> pairs{{Point{0.0}, Point{1.0}}};
  const WitnessReport r = check_weakly_contractive(T, S, ControlAlpha::constant(0.9), pairs);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].lhs == 1.0);
  CHECK(r.violations[0].rhs == 0.9);
}

TEST_CASE("plane affine instance: ratio is exactly 3/4 on every sampled pair") {
  const AuxiliaryMap T = plane_halve_y();
  const SelfMap S = plane_affine();
  const std::vector<SamplePair> pairs = random_plane_pairs(11, 60, -5.0, 5.0);

  CHECK(check_weakly_contractive(T, S, ControlAlpha::constant(0.75), pairs).holds());
  // Any constant below 3/4 is violated: the ratio sits at equality.
  CHECK(!check_weakly_contractive(T, S, ControlAlpha::constant(0.7499), pairs).holds());
  CHECK(check_geraghty(T, S, ControlBeta::constant(0.75), pairs).holds());
}

TEST_CASE("smoothing square is weakly contractive with constant 1/2 on samples") {
  const AuxiliaryMap T = identity_map(sup_norm_space());
  const SelfMap S = volterra_squared_map();
  const std::vector<SamplePair> pairs = random_polynomial_pairs(3, 50, 6);
  const WitnessReport r = check_weakly_contractive(T, S, ControlAlpha::constant(0.5), pairs);
  CHECK(r.holds());
  CHECK(r.checked == 50);
}

TEST_CASE("annulus sup of a distance-driven control") {
  const MetricSpace line = real_line();
  const ControlAlpha alpha("d-over-1+d", [&](const Point& u, const Point& v) {
    const double d = line.distance(u, v);
    return d / (1.0 + d);
  });
  const std::vector<SamplePair> image_pairs{{Point{0.0}, Point{2.0}}, {Point{0.0}, Point{0.5}}};

  const AnnulusSup in = annulus_sup(line, alpha, image_pairs, 1.0, 3.0);
  CHECK(in.has_samples);
  CHECK(in.qualifying == 1);
  CHECK(approx_rel(in.value, 2.0 / 3.0, 1e-15));

  const AnnulusSup out = annulus_sup(line, alpha, image_pairs, 5.0, 6.0);
  CHECK(!out.has_samples);

  CHECK_RAISES(domain, annulus_sup(line, alpha, image_pairs, 0.0, 1.0));
  CHECK_RAISES(domain, annulus_sup(line, alpha, image_pairs, 2.0, 1.0));
}

TEST_CASE("injectivity scan reports collisions, none for the identity") {
  const MetricSpace d3 = discrete_space(3);
  const AuxiliaryMap collapse("collapse", d3, [](const Point&) { return Point{std::size_t{0}}; },
                              {});
  const std::vector<Point> pts{std::size_t{0}, std::size_t{1}, std::size_t{2}};
  CHECK(check_injectivity(collapse, pts).size() == 3);  // all unordered pairs collide
  CHECK(check_injectivity(identity_map(d3), pts).empty());
}

TEST_CASE("witness report serializes its verdict") {
  const MetricSpace line = real_line();
  const AuxiliaryMap T = identity_map(line);
  const SelfMap S("id", line, [](const Point& p) { return p; });
  const std::vector<SamplePair> pairs{{Point{0.0}, Point{1.0}}};
  const WitnessReport r = check_weakly_contractive(T, S, ControlAlpha::constant(0.5), pairs);
  const nlohmann::json j = r.to_json();
  CHECK(j.at("holds").get<bool>() == false);
  CHECK(j.at("checked").get<std::size_t>() == 1);
  CHECK(j.at("violations").size() == 1);
}
