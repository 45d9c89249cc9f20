#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixcert/maps.hpp"

namespace fixcert {

enum class StopReason { step_below_tol, max_iters, degenerate_zero_step };

const char* stop_reason_name(StopReason reason);

/// Picard orbit transported through the auxiliary map. pairs[n] holds
/// (x_n, z_n = T x_n); step_dist(n) = d(z_n, z_{n-1}) for 1 <= n <= steps().
/// All diagnostics below read distances from here, never recompute them, so
/// identities between series hold bit for bit.
class Orbit {
 public:
  Orbit(MetricSpace metric, std::vector<TrackedPair> pairs, std::vector<double> steps,
        StopReason reason)
      : metric_(std::move(metric)),
        pairs_(std::move(pairs)),
        steps_(std::move(steps)),
        reason_(reason) {}

  std::size_t steps() const { return steps_.size(); }
  std::size_t length() const { return pairs_.size(); }
  const TrackedPair& pair(std::size_t n) const;
  const Point& z(std::size_t n) const { return pair(n).z; }
  double step_dist(std::size_t n) const;
  StopReason stop_reason() const { return reason_; }
  const MetricSpace& metric() const { return metric_; }

  /// One row per step: n, step_dist, ratio, window max, certified bound,
  /// true distance (when a limit oracle is given). Undefined cells are empty.
  std::string to_csv(std::size_t window_m,
                     const std::vector<double>& true_dists = {}) const;

 private:
  MetricSpace metric_;
  std::vector<TrackedPair> pairs_;
  std::vector<double> steps_;
  StopReason reason_;
};

/// Iterate x_{n+1} = S x_n from x0, tracking z_n = T x_n. Stops at max_iters
/// steps, when a step distance drops below step_tol, or at an exactly-zero
/// step (fixed point of the induced map reached on the image).
Orbit iterate(const SelfMap& S, const AuxiliaryMap& T, const Point& x0, std::size_t max_iters,
              double step_tol = 0.0);

/// One diagnostic row per step; absent fields are undefined at that index
/// (ratio needs a positive previous step, the window needs m ratios, the
/// bound needs a certified monitor, which rectangular metrics never have).
struct OrbitRow {
  std::size_t n = 0;
  double step_dist = 0.0;
  std::optional<double> ratio;
  std::optional<double> window_max;
  std::optional<double> bound;
  std::optional<double> true_dist;
};

std::vector<OrbitRow> orbit_rows(const Orbit& orbit, std::size_t window_m,
                                 const std::vector<double>& true_dists = {});

/// r_n = step_dist(n) / step_dist(n-1), defined for 2 <= n <= steps() with a
/// positive denominator.
double observed_ratio(const Orbit& orbit, std::size_t n);

/// Max of r_j over the window j in [n-m+1, n]; needs n >= m+1 so every ratio
/// in the window exists.
double window_max(const Orbit& orbit, std::size_t n, std::size_t m);

struct TailBoundEntry {
  std::size_t n;
  double step_dist;
  double bound;  ///< Q/(1-Q) * step_dist
};

/// A priori tail bound from a uniform ratio bound Q at anchor N: the bound
/// holds for n >= N+1 provided r_{k+1} <= Q for all k >= N. The hypothesis is
/// verified against every recorded ratio; when it fails, the report carries
/// the first violation and the smallest anchor the record does verify.
struct TailBoundReport {
  std::size_t anchor = 0;
  double q = 0.0;
  std::string source;  ///< "supplied-constant" or "geraghty-monotone"
  bool hypothesis_verified = false;
  std::optional<std::size_t> first_violation;
  std::optional<std::size_t> verified_anchor;
  std::vector<TailBoundEntry> entries;

  nlohmann::json to_json() const;
};

TailBoundReport apriori_tail_bound(const Orbit& orbit, std::size_t anchor, double q);

/// Q = beta(d(z_N, z_{N-1})) for a control declared non-decreasing on
/// [0, d(z_N, z_{N-1})]; the declaration is spot-checked on 1000 sample
/// points and a sampled decrease is a hypothesis error.
double geraghty_tail_Q(const ControlBeta& beta, const Orbit& orbit, std::size_t anchor);

/// Tail bound with Q derived from a monotone Geraghty control at the anchor.
TailBoundReport geraghty_tail_bound(const ControlBeta& beta, const Orbit& orbit,
                                    std::size_t anchor);

/// Distances d(z_n, z_star) for n = 0..steps(); z_star is the known limit.
std::vector<double> true_distance_to_limit(const Orbit& orbit, const Point& z_star);

enum class MonitorPhase { estimating, certified, exact_fixed_point };

const char* monitor_phase_name(MonitorPhase phase);

struct ViolationEvent {
  std::size_t step = 0;
  double q_hat_before = 0.0;
  double q_hat_after = 0.0;
  bool operator==(const ViolationEvent&) const = default;
};

/// Online monitor state. ESTIMATING until the first index n >= m+1 fills the
/// ratio window; then CERTIFIED with q_hat = window max. While certified the
/// anchor slides with each accepted ratio and q_hat is re-estimated from the
/// current window (it can only move past the old value by the slack). A ratio
/// above q_hat + slack is recorded as a violation and the state re-anchors
/// with the fresh window maximum. An exactly-zero step is terminal: the
/// induced map's fixed point was reached on the image.
struct MonitorState {
  MonitorPhase phase = MonitorPhase::estimating;
  std::size_t window = 1;        ///< m
  std::size_t anchor = 0;        ///< n of the current estimate
  double q_hat = 0.0;
  std::size_t last_checked = 0;  ///< last step index processed while certified
  std::vector<ViolationEvent> violations;

  bool operator==(const MonitorState&) const = default;
};

MonitorState make_monitor(std::size_t window_m);

/// Process step index n (1-based) of the orbit. Pure: returns the next state.
MonitorState monitor_step(MonitorState state, const Orbit& orbit, std::size_t n);

/// Snapshots after each step index 1..steps(); the replayed trajectory is a
/// deterministic function of the orbit.
std::vector<MonitorState> run_monitor(const Orbit& orbit, std::size_t window_m);

enum class CertificateStatus { valid_so_far, violated_at, final_ };

const char* certificate_status_name(CertificateStatus status);

/// d(z_anchor, z*) <= q_hat/(1-q_hat) * d(z_anchor, z_{anchor-1}), valid as
/// long as every later ratio stays within q_hat. "valid-so-far" states that
/// the monitoring condition held through `through_step`; "violated-at" marks
/// a certificate re-anchored on its final observation with nothing confirmed
/// after it; "final" additionally rests on a verified uniform tail bound.
struct Certificate {
  std::size_t anchor = 0;
  std::size_t window = 0;
  double q_hat = 0.0;
  double bound = 0.0;
  CertificateStatus status = CertificateStatus::valid_so_far;
  std::size_t through_step = 0;
  std::string theorem_basis;
  AuxiliaryProperties hypotheses;

  nlohmann::json to_json() const;
};

/// Build the certificate for the monitor's current anchor. Refuses on
/// rectangular metrics: one-step ratios transfer there, the tail summation
/// does not. A terminal exact-fixed-point state yields the trivial final
/// certificate with bound 0.
Certificate certificate(const MonitorState& state, const Orbit& orbit,
                        const AuxiliaryProperties& hypotheses);

/// Upgrade to "final" given a verified uniform tail report with Q >= q_hat.
Certificate finalize_certificate(Certificate cert, const TailBoundReport& tail);

}  // namespace fixcert
