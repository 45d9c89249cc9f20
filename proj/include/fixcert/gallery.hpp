#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fixcert/picard.hpp"

namespace fixcert {

/// Exact factorial as a double; exact through 18!, refuses beyond (19! no
/// longer fits a 53-bit mantissa).
double exact_factorial(std::size_t n);

/// Indefinite integral from 0: c_k t^k -> c_k/(k+1) t^{k+1}. Exact
/// coefficient arithmetic.
PolyFunc volterra_apply(const PolyFunc& p);

/// Cumulative trapezoid integral on the grid, O(h^2).
GridFunc volterra_apply(const GridFunc& g);

struct VolterraNormCheck {
  double max_ratio = 0.0;       ///< max ||J^2 p|| / ||p|| over the samples
  std::size_t checked = 0;
  std::size_t skipped_zero = 0;
  double witness_ratio = 0.0;   ///< ratio at p == 1, equals 1/2
  bool within_half = true;      ///< every ratio <= 1/2 + slack
};

/// Checks ||J^2 p|| <= 1/2 ||p|| over the samples; p == 1 is appended as the
/// witness attaining equality.
VolterraNormCheck volterra_norm_check(std::span<const PolyFunc> samples);

/// Closed forms for the Volterra orbit from x0 == 1 (z_n = t^{n+1}/(n+1)!):
/// step n/(n+1)!, ratio n/(n^2-1), limit distance 1/(n+1)!.
struct VolterraOracle {
  static double step_dist(std::size_t n);
  static double ratio(std::size_t n);
  static double true_dist(std::size_t n);
};

/// Plane instance: T = diag(1, 1/2), S x = 3/4 x + (1,2). Fixed point (4,8),
/// image limit (4,4); ratios are exactly 3/4 and the tail bound is tight.
struct AffineOracle {
  static Vec2 fixed_point() { return {4.0, 8.0}; }
  static Vec2 z_star() { return {4.0, 4.0}; }
  static double step_dist(std::size_t n);
  static double true_dist(std::size_t n);
};

/// Scalar maps with elementary contraction certificates.
struct ScalarExample {
  std::string name;
  SelfMap map;
  std::function<double(double)> derivative;
  double lipschitz_bound;  ///< sup |f'| on the domain, rounded up
  double fixed_point;
  Point start;
};

std::vector<ScalarExample> scalar_examples();

/// A named, ready-to-iterate instance.
struct GalleryInstance {
  std::string name;
  std::string summary;
  AuxiliaryMap T;
  SelfMap S;
  Point x0;
  std::optional<Point> z_star;  ///< known limit on the image
  std::function<double(std::size_t)> oracle_step;  ///< null when no closed form
  std::function<double(std::size_t)> oracle_true;
  std::optional<double> known_uniform_q;  ///< verified uniform ratio bound
  std::size_t default_iters = 10;
};

const std::vector<GalleryInstance>& gallery_instances();
const GalleryInstance* find_instance(std::string_view name);
std::vector<std::string> gallery_names();

/// The smoothing square J^2 as a self-map of the sup-norm space; with the
/// identity auxiliary map it is weakly contractive with constant 1/2 (the
/// operator-norm fact behind the Volterra instance).
SelfMap volterra_squared_map();
SelfMap volterra_map();

}  // namespace fixcert
