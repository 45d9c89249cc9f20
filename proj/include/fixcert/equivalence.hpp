#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixcert/maps.hpp"

namespace fixcert {

/// Realized image distances of a finite instance: one entry per unordered
/// pair of distinct carrier points, sorted ascending. Zero entries appear
/// exactly when the auxiliary map collides.
struct DistanceProfile {
  std::vector<double> entries;

  bool empty() const { return entries.empty(); }
  double min() const;
  double max() const;
};

/// Control transfer alpha -> beta: beta(t) = max alpha over image pairs at
/// distance exactly t, realized as a step table on the profile. Off-profile
/// arguments evaluate at the largest profile entry <= t (right-open steps);
/// below the smallest entry the smallest entry's value is used.
struct BetaFromAlpha {
  ControlBeta beta;
  DistanceProfile profile;
  std::vector<std::pair<double, double>> table;  ///< (distance, value)
  bool vacuous = false;  ///< singleton carrier: no pairs, beta rejects evaluation
};

BetaFromAlpha beta_from_alpha(const MetricSpace& space, std::span<const Point> carrier,
                              const AuxiliaryMap& T, const ControlAlpha& alpha);

/// Control transfer beta -> alpha: alpha(u,v) = beta(d(u,v)).
ControlAlpha alpha_from_beta(const ControlBeta& beta, const MetricSpace& space);

/// Tail-sup control from sampled one-step ratios: beta(t) = max ratio over
/// sampled pairs with image distance >= t, non-increasing by construction,
/// beta(0) = overall max. Pairs with ratio >= 1 are returned as evidence and
/// leave no control.
struct MonotoneBetaResult {
  std::optional<ControlBeta> beta;
  std::vector<std::pair<double, double>> table;      ///< (distance, tail max)
  std::vector<Witness> noncontractive_evidence;      ///< sampled ratios >= 1
};

MonotoneBetaResult monotone_beta_from_map(const AuxiliaryMap& T, const SelfMap& f,
                                          std::span<const SamplePair> pairs);

/// Paired-sequence diagnostic: d_n = d(Tx_n, Ty_n) and the one-step quotient
/// Delta_n = d(Tf x_n, Tf y_n) / d_n. Indices with coincident images are
/// skipped and reported. With y_k = x_{k-1} along a Picard orbit, Delta_k is
/// the observed ratio r_{k+1}, bit for bit.
struct DeltaSeries {
  std::vector<std::size_t> indices;
  std::vector<double> d;
  std::vector<double> delta;
  std::vector<std::size_t> skipped;

  /// sup{d_n : Delta_n >= threshold}; empty when no index qualifies.
  std::optional<double> sup_d_with_delta_at_least(double threshold) const;
};

DeltaSeries delta_series(const AuxiliaryMap& T, const SelfMap& f, std::span<const Point> xs,
                         std::span<const Point> ys);

/// (epsilon, sup{d_n : Delta_n >= 1 - epsilon}) for each grid point; absent
/// when no index qualifies. A small sup at small epsilon is the finite-sample
/// shadow of "ratios near one only at small distances".
std::vector<std::pair<double, std::optional<double>>> delta_diagnostic(
    const DeltaSeries& series, std::span<const double> epsilons);

/// Finite instance: index carrier with a distance matrix, table-backed maps,
/// and constant controls for the plain and orbital-sum classes.
struct FiniteInstance {
  std::string name;
  FiniteMetric metric;
  std::optional<std::vector<Vec2>> coordinates;  ///< when sampled from the plane
  std::vector<std::size_t> t_table;
  std::vector<std::size_t> s_table;
  double alpha_value = 0.0;         ///< control for d(TSx,TSy) <= a d(Tx,Ty)
  double alpha_kannan_value = 0.0;  ///< control for the orbital-sum class
  std::size_t x0 = 0;

  MetricSpace space() const;
  AuxiliaryMap aux_map(bool declare_injective) const;
  SelfMap self_map() const;
  std::vector<Point> carrier_points() const;
  std::vector<SamplePair> all_pairs() const;  ///< exhaustive ordered pairs, x != y

  static FiniteInstance from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Unit-square instance with geometrically layered points, a permutation
/// auxiliary map and a layer-shift self-map; image ratios stay below 1/4, so
/// the plain class holds with the supplied constant and the orbital-sum class
/// with 2k/(1-k). Deterministic in the seed.
FiniteInstance random_contractive_instance(std::uint64_t seed, std::size_t n_points = 5);

struct TransferDirection {
  std::string name;
  bool premise_held = false;
  bool transfer_held = false;
  WitnessReport premise;
  WitnessReport transfer;

  /// A direction only falsifies the construction when a held premise fails
  /// to transfer; a failed premise makes it vacuous ("not-in-class").
  bool ok() const { return !premise_held || transfer_held; }
  const char* verdict() const {
    if (!premise_held) return "not-in-class";
    return transfer_held ? "transferred" : "falsified";
  }
};

struct EquivalenceReport {
  std::string instance;
  bool injective = false;
  std::array<TransferDirection, 4> directions;

  bool all_ok() const;
  nlohmann::json to_json() const;
};

/// Brute-force check of the four pairwise transfer directions on a finite
/// instance (exhaustive pairs). Premises are expected to hold for generated
/// instances; a failed transfer falsifies the implementation. Non-injective
/// auxiliary maps are refused with a pointer to the counterexample.
EquivalenceReport verify_pairwise_equivalence(const FiniteInstance& instance);

struct SuiteFailure {
  std::uint64_t seed;
  std::string instance;
  std::string direction;
};

struct SuiteReport {
  std::uint64_t master_seed = 0;
  std::size_t instances = 0;
  std::size_t passes = 0;
  std::vector<SuiteFailure> failures;
  std::vector<std::uint64_t> seeds;

  bool all_passed() const { return failures.empty(); }
  nlohmann::json to_json() const;
};

SuiteReport run_equivalence_suite(std::uint64_t master_seed, std::size_t count);

/// Two-point discrete space, constant auxiliary map, identity self-map:
/// all four class inequalities hold with control 0, yet both points are
/// fixed. Uniqueness genuinely needs injectivity.
struct InjectivityCounterexample {
  FiniteInstance instance;
  std::array<WitnessReport, 4> checks_with_zero_control;
  std::vector<std::size_t> fixed_points;

  bool demonstrates_failure() const;
  nlohmann::json to_json() const;
};

InjectivityCounterexample injectivity_counterexample();

}  // namespace fixcert
