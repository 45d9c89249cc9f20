#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fixcert/metric.hpp"

namespace fixcert {

/// Self-map of a metric space. `apply` rejects arguments outside the carrier
/// and results that escape it, so domain escapes surface at the point of use.
class SelfMap {
 public:
  using Fn = std::function<Point(const Point&)>;

  SelfMap(std::string name, MetricSpace domain, Fn fn)
      : name_(std::move(name)), domain_(std::move(domain)), fn_(std::move(fn)) {}

  Point apply(const Point& p) const;

  const MetricSpace& domain() const { return domain_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  MetricSpace domain_;
  Fn fn_;
};

/// Hypothesis flags for the auxiliary map. They are declared by the caller,
/// never verified here; certificates carry them verbatim so a reader can see
/// what the conclusion is conditioned on. Injectivity is the one flag with a
/// finite test (see check_injectivity); it is what separates "the induced map
/// has one fixed point" from "the original map has one fixed point".
struct AuxiliaryProperties {
  bool continuous = false;
  bool injective = false;
  bool subsequentially_convergent = false;
  bool sequentially_convergent = false;

  bool operator==(const AuxiliaryProperties&) const = default;
  nlohmann::json to_json() const;
};

class AuxiliaryMap {
 public:
  using Fn = std::function<Point(const Point&)>;

  AuxiliaryMap(std::string name, MetricSpace domain, Fn fn, AuxiliaryProperties declared)
      : name_(std::move(name)),
        domain_(std::move(domain)),
        fn_(std::move(fn)),
        declared_(declared) {}

  Point apply(const Point& p) const;

  const MetricSpace& domain() const { return domain_; }
  const std::string& name() const { return name_; }
  const AuxiliaryProperties& declared() const { return declared_; }

 private:
  std::string name_;
  MetricSpace domain_;
  Fn fn_;
  AuxiliaryProperties declared_;
};

/// Identity auxiliary map; trivially continuous, injective and convergent.
AuxiliaryMap identity_map(MetricSpace domain);

/// A point x together with its image z under the auxiliary map. z is carried
/// along so the auxiliary map is never inverted.
struct TrackedPair {
  Point x;
  Point z;
};

TrackedPair make_tracked(const AuxiliaryMap& T, const Point& x);

/// Exact representation equality z == T(x); a stale pair is an invariant error
/// in induced_apply.
bool tracked_consistent(const AuxiliaryMap& T, const TrackedPair& tp);

/// One step of the induced map on the image: (x, Tx) -> (Sx, TSx).
TrackedPair induced_apply(const AuxiliaryMap& T, const SelfMap& S, const TrackedPair& tp);

/// Control with values in [0,1) evaluated on image pairs. Range violations
/// throw a control error naming the offending pair.
class ControlAlpha {
 public:
  using Fn = std::function<double(const Point&, const Point&)>;

  ControlAlpha(std::string tag, Fn fn) : tag_(std::move(tag)), fn_(std::move(fn)) {}
  static ControlAlpha constant(double k);

  double eval(const Point& u, const Point& v) const;
  const std::string& tag() const { return tag_; }

 private:
  std::string tag_;
  Fn fn_;
};

/// Control with values in [0,1) evaluated on distances. The Gamma-class
/// property (values tending to 1 force arguments to 0) is declared, not
/// verified; table-backed controls built from finitely many values below 1
/// satisfy it by construction.
class ControlBeta {
 public:
  using Fn = std::function<double(double)>;

  ControlBeta(std::string tag, Fn fn, bool gamma_class_declared)
      : tag_(std::move(tag)), fn_(std::move(fn)), gamma_(gamma_class_declared) {}
  static ControlBeta constant(double k);

  double eval(double t) const;
  const std::string& tag() const { return tag_; }
  bool gamma_class_declared() const { return gamma_; }

 private:
  std::string tag_;
  Fn fn_;
  bool gamma_;
};

using SamplePair = std::pair<Point, Point>;

struct Witness {
  Point x;
  Point y;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Result of a class check over a finite sample set. The verdict is always
/// relative to the sampled pairs; an empty violation list on samples is
/// evidence, not proof, except when the samples exhaust a finite carrier.
struct WitnessReport {
  std::string contraction_class;
  std::size_t checked = 0;
  std::vector<Witness> violations;

  bool holds() const { return violations.empty(); }
  nlohmann::json to_json() const;
};

/// d(TSx,TSy) <= alpha(Tx,Ty) d(Tx,Ty), absolute slack 1e-12.
WitnessReport check_weakly_contractive(const AuxiliaryMap& T, const SelfMap& S,
                                       const ControlAlpha& alpha,
                                       std::span<const SamplePair> pairs);

/// d(TSx,TSy) <= alpha(Tx,Ty)/2 [d(Tx,TSx) + d(Ty,TSy)].
WitnessReport check_weakly_kannan(const AuxiliaryMap& T, const SelfMap& S,
                                  const ControlAlpha& alpha,
                                  std::span<const SamplePair> pairs);

/// d(TSx,TSy) <= beta(d(Tx,Ty)) d(Tx,Ty).
WitnessReport check_geraghty(const AuxiliaryMap& T, const SelfMap& S, const ControlBeta& beta,
                             std::span<const SamplePair> pairs);

/// d(TSx,TSy) <= beta(d(Tx,Ty))/2 [d(Tx,TSx) + d(Ty,TSy)].
WitnessReport check_kannan_geraghty(const AuxiliaryMap& T, const SelfMap& S,
                                    const ControlBeta& beta,
                                    std::span<const SamplePair> pairs);

struct AnnulusSup {
  bool has_samples = false;  ///< false when no sampled distance lies in [a,b]
  double value = 0.0;
  std::size_t qualifying = 0;
};

/// Max of the control over sampled image pairs whose distance lies in [a,b].
/// Requires 0 < a <= b.
AnnulusSup annulus_sup(const MetricSpace& space, const ControlAlpha& alpha,
                       std::span<const SamplePair> image_pairs, double a, double b);

/// Collisions T(p) = T(q) with p != q among the sampled points. For a map
/// declared injective any entry is a reportable failure of the declaration.
std::vector<SamplePair> check_injectivity(const AuxiliaryMap& T, std::span<const Point> points);

/// Deterministic sample-pair generators used by the checkers' callers.
std::vector<SamplePair> random_polynomial_pairs(std::uint64_t seed, std::size_t count,
                                                std::size_t max_degree);
std::vector<SamplePair> random_plane_pairs(std::uint64_t seed, std::size_t count, double lo,
                                           double hi);
std::vector<SamplePair> random_scalar_pairs(std::uint64_t seed, std::size_t count, double lo,
                                            double hi);

}  // namespace fixcert
