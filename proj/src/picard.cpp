#include "fixcert/picard.hpp"

#include <cmath>
#include <sstream>

#include "fixcert/numeric.hpp"

namespace fixcert {

const char* stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::step_below_tol: return "step-below-tol";
    case StopReason::max_iters: return "max-iters";
    case StopReason::degenerate_zero_step: return "degenerate-zero-step";
  }
  return "unknown";
}

const TrackedPair& Orbit::pair(std::size_t n) const {
  if (n >= pairs_.size()) raise(ErrorCode::domain, "orbit: index out of range");
  return pairs_[n];
}

double Orbit::step_dist(std::size_t n) const {
  if (n < 1 || n > steps_.size()) raise(ErrorCode::domain, "orbit: step index out of range");
  return steps_[n - 1];
}

Orbit iterate(const SelfMap& S, const AuxiliaryMap& T, const Point& x0, std::size_t max_iters,
              double step_tol) {
  if (max_iters < 1) raise(ErrorCode::domain, "iterate: max_iters must be at least 1");
  std::vector<TrackedPair> pairs;
  std::vector<double> steps;
  pairs.reserve(max_iters + 1);
  steps.reserve(max_iters);
  pairs.push_back(make_tracked(T, x0));
  StopReason reason = StopReason::max_iters;
  for (std::size_t k = 0; k < max_iters; ++k) {
    TrackedPair next;
    try {
      next = induced_apply(T, S, pairs.back());
    } catch (const Error& e) {
      raise(e.code(),
            "iterate: map application failed at step " + std::to_string(k + 1) + ": " + e.what());
    }
    const double d = S.domain().distance(next.z, pairs.back().z);
    pairs.push_back(std::move(next));
    steps.push_back(d);
    if (d == 0.0) {
      reason = StopReason::degenerate_zero_step;
      break;
    }
    if (d < step_tol) {
      reason = StopReason::step_below_tol;
      break;
    }
  }
  return Orbit(S.domain(), std::move(pairs), std::move(steps), reason);
}

double observed_ratio(const Orbit& orbit, std::size_t n) {
  if (n < 2 || n > orbit.steps()) {
    raise(ErrorCode::domain, "observed_ratio: defined for 2 <= n <= steps()");
  }
  const double denom = orbit.step_dist(n - 1);
  if (denom == 0.0) {
    raise(ErrorCode::degenerate_step,
          "observed_ratio: zero step at n = " + std::to_string(n - 1));
  }
  return orbit.step_dist(n) / denom;
}

double window_max(const Orbit& orbit, std::size_t n, std::size_t m) {
  if (m < 1) raise(ErrorCode::domain, "window_max: window must be at least 1");
  if (n < m + 1 || n > orbit.steps()) {
    raise(ErrorCode::window, "window_max: window [" + std::to_string(n - m + 1) + ", " +
                                 std::to_string(n) + "] not fully defined");
  }
  double best = 0.0;
  for (std::size_t j = n - m + 1; j <= n; ++j) {
    best = std::max(best, observed_ratio(orbit, j));
  }
  return best;
}

nlohmann::json TailBoundReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const TailBoundEntry& e : entries) {
    rows.push_back({{"n", e.n}, {"step_dist", e.step_dist}, {"bound", e.bound}});
  }
  nlohmann::json out{{"anchor", anchor},
                     {"q", q},
                     {"source", source},
                     {"hypothesis_verified", hypothesis_verified},
                     {"entries", rows}};
  if (first_violation) out["first_violation"] = *first_violation;
  if (verified_anchor) out["verified_anchor"] = *verified_anchor;
  return out;
}

TailBoundReport apriori_tail_bound(const Orbit& orbit, std::size_t anchor, double q) {
  if (orbit.metric().kind() == MetricKind::rectangular) {
    raise(ErrorCode::rectangular_unsupported,
          "rectangular-tail-unsupported: tail bounds need the triangle inequality");
  }
  if (!(q >= 0.0) || q >= 1.0) raise(ErrorCode::domain, "apriori_tail_bound: Q must lie in [0,1)");
  if (anchor < 1 || anchor > orbit.steps()) {
    raise(ErrorCode::domain, "apriori_tail_bound: anchor outside recorded steps");
  }

  TailBoundReport report;
  report.anchor = anchor;
  report.q = q;
  report.source = "supplied-constant";

  // Hypothesis: r_{k+1} <= Q for all k >= anchor. Scan the record; when it
  // fails, also report the smallest anchor the record does verify.
  report.hypothesis_verified = true;
  for (std::size_t j = anchor + 1; j <= orbit.steps(); ++j) {
    if (orbit.step_dist(j - 1) == 0.0) break;  // orbit terminated exactly
    if (observed_ratio(orbit, j) > q + kInequalitySlack) {
      if (report.hypothesis_verified) {
        report.hypothesis_verified = false;
        report.first_violation = j;
      }
      report.verified_anchor = j;  // candidate: constraints start after the last violation
    }
  }
  const double factor = q / (1.0 - q);
  for (std::size_t n = anchor + 1; n <= orbit.steps(); ++n) {
    report.entries.push_back({n, orbit.step_dist(n), factor * orbit.step_dist(n)});
  }
  return report;
}

double geraghty_tail_Q(const ControlBeta& beta, const Orbit& orbit, std::size_t anchor) {
  if (anchor < 1 || anchor > orbit.steps()) {
    raise(ErrorCode::domain, "geraghty_tail_Q: anchor outside recorded steps");
  }
  const double d0 = orbit.step_dist(anchor);
  // Spot-check the declared monotonicity on [0, d0].
  constexpr int kSamples = 1000;
  double prev = beta.eval(0.0);
  for (int i = 1; i < kSamples; ++i) {
    const double t = d0 * static_cast<double>(i) / static_cast<double>(kSamples - 1);
    const double cur = beta.eval(t);
    if (cur + kInequalitySlack < prev) {
      raise(ErrorCode::hypothesis,
            "geraghty_tail_Q: control not non-decreasing between t = " +
                format_full(d0 * static_cast<double>(i - 1) / static_cast<double>(kSamples - 1)) +
                " and t = " + format_full(t));
    }
    prev = cur;
  }
  return beta.eval(d0);
}

TailBoundReport geraghty_tail_bound(const ControlBeta& beta, const Orbit& orbit,
                                    std::size_t anchor) {
  const double q = geraghty_tail_Q(beta, orbit, anchor);
  TailBoundReport report = apriori_tail_bound(orbit, anchor, q);
  report.source = "geraghty-monotone";
  return report;
}

std::vector<double> true_distance_to_limit(const Orbit& orbit, const Point& z_star) {
  std::vector<double> out;
  out.reserve(orbit.length());
  for (std::size_t n = 0; n < orbit.length(); ++n) {
    out.push_back(orbit.metric().distance(orbit.z(n), z_star));
  }
  return out;
}

const char* monitor_phase_name(MonitorPhase phase) {
  switch (phase) {
    case MonitorPhase::estimating: return "ESTIMATING";
    case MonitorPhase::certified: return "CERTIFIED";
    case MonitorPhase::exact_fixed_point: return "EXACT-FIXED-POINT";
  }
  return "unknown";
}

MonitorState make_monitor(std::size_t window_m) {
  if (window_m < 1) raise(ErrorCode::domain, "monitor: window must be at least 1");
  MonitorState state;
  state.window = window_m;
  return state;
}

MonitorState monitor_step(MonitorState state, const Orbit& orbit, std::size_t n) {
  if (state.phase == MonitorPhase::exact_fixed_point) return state;  // terminal
  if (n < 1 || n > orbit.steps()) raise(ErrorCode::domain, "monitor_step: step out of range");

  if (orbit.step_dist(n) == 0.0) {
    state.phase = MonitorPhase::exact_fixed_point;
    state.anchor = n;
    state.q_hat = 0.0;
    state.last_checked = n;
    return state;
  }
  if (n < 2) return state;  // first step carries no ratio

  const double r = observed_ratio(orbit, n);
  switch (state.phase) {
    case MonitorPhase::estimating:
      if (n >= state.window + 1) {
        state.q_hat = window_max(orbit, n, state.window);
        state.anchor = n;
        state.last_checked = n;
        state.phase = MonitorPhase::certified;
      }
      break;
    case MonitorPhase::certified: {
      const double fresh = window_max(orbit, n, state.window);
      if (r > state.q_hat + kInequalitySlack) {
        state.violations.push_back({n, state.q_hat, fresh});
      }
      state.q_hat = fresh;
      state.anchor = n;
      state.last_checked = n;
      break;
    }
    case MonitorPhase::exact_fixed_point:
      break;
  }
  return state;
}

std::vector<MonitorState> run_monitor(const Orbit& orbit, std::size_t window_m) {
  std::vector<MonitorState> trajectory;
  trajectory.reserve(orbit.steps());
  MonitorState state = make_monitor(window_m);
  for (std::size_t n = 1; n <= orbit.steps(); ++n) {
    state = monitor_step(std::move(state), orbit, n);
    trajectory.push_back(state);
  }
  return trajectory;
}

const char* certificate_status_name(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::valid_so_far: return "valid-so-far";
    case CertificateStatus::violated_at: return "violated-at";
    case CertificateStatus::final_: return "final";
  }
  return "unknown";
}

nlohmann::json Certificate::to_json() const {
  return nlohmann::json{{"anchor", anchor},
                        {"m", window},
                        {"q_hat", q_hat},
                        {"bound", bound},
                        {"status", certificate_status_name(status)},
                        {"through_step", through_step},
                        {"theorem_basis", theorem_basis},
                        {"hypothesis_flags", hypotheses.to_json()}};
}

Certificate certificate(const MonitorState& state, const Orbit& orbit,
                        const AuxiliaryProperties& hypotheses) {
  if (orbit.metric().kind() == MetricKind::rectangular) {
    raise(ErrorCode::rectangular_unsupported,
          "rectangular-tail-unsupported: certificates need the triangle inequality");
  }
  Certificate cert;
  cert.window = state.window;
  cert.hypotheses = hypotheses;
  if (state.phase == MonitorPhase::exact_fixed_point) {
    cert.anchor = state.anchor;
    cert.q_hat = 0.0;
    cert.bound = 0.0;
    cert.status = CertificateStatus::final_;
    cert.through_step = state.last_checked;
    cert.theorem_basis = "exact-fixed-point";
    return cert;
  }
  if (state.phase != MonitorPhase::certified) {
    raise(ErrorCode::state, "certificate: monitor has not certified (still estimating)");
  }
  cert.anchor = state.anchor;
  cert.q_hat = state.q_hat;
  cert.bound = state.q_hat / (1.0 - state.q_hat) * orbit.step_dist(state.anchor);
  cert.through_step = state.last_checked;
  cert.theorem_basis = "monitored-a-posteriori";
  const bool violated_at_exit =
      !state.violations.empty() && state.violations.back().step == state.last_checked;
  cert.status =
      violated_at_exit ? CertificateStatus::violated_at : CertificateStatus::valid_so_far;
  return cert;
}

Certificate finalize_certificate(Certificate cert, const TailBoundReport& tail) {
  if (!tail.hypothesis_verified) {
    raise(ErrorCode::hypothesis, "finalize: tail hypothesis not verified on the record");
  }
  if (tail.q + kInequalitySlack < cert.q_hat) {
    raise(ErrorCode::hypothesis, "finalize: uniform Q below the monitored estimate");
  }
  if (cert.status == CertificateStatus::violated_at) {
    raise(ErrorCode::state, "finalize: certificate was violated at its last observation");
  }
  cert.status = CertificateStatus::final_;
  cert.theorem_basis = "uniform-tail(" + tail.source + ")";
  return cert;
}

std::vector<OrbitRow> orbit_rows(const Orbit& orbit, std::size_t window_m,
                                 const std::vector<double>& true_dists) {
  std::vector<MonitorState> trajectory;
  if (orbit.metric().kind() == MetricKind::ordinary) trajectory = run_monitor(orbit, window_m);
  std::vector<OrbitRow> rows;
  rows.reserve(orbit.steps());
  for (std::size_t n = 1; n <= orbit.steps(); ++n) {
    OrbitRow row;
    row.n = n;
    row.step_dist = orbit.step_dist(n);
    if (n >= 2 && orbit.step_dist(n - 1) > 0.0) row.ratio = observed_ratio(orbit, n);
    if (n >= window_m + 1) {
      bool defined = true;
      for (std::size_t j = n - window_m + 1; j <= n; ++j) {
        if (orbit.step_dist(j - 1) == 0.0) defined = false;
      }
      if (defined) row.window_max = window_max(orbit, n, window_m);
    }
    if (!trajectory.empty()) {
      const MonitorState& state = trajectory[n - 1];
      if (state.phase == MonitorPhase::certified) {
        row.bound = state.q_hat / (1.0 - state.q_hat) * orbit.step_dist(state.anchor);
      } else if (state.phase == MonitorPhase::exact_fixed_point) {
        row.bound = 0.0;
      }
    }
    if (n < true_dists.size()) row.true_dist = true_dists[n];
    rows.push_back(row);
  }
  return rows;
}

std::string Orbit::to_csv(std::size_t window_m, const std::vector<double>& true_dists) const {
  std::ostringstream out;
  out << "n,step_dist,ratio,window_max,bound,true_dist\n";
  for (const OrbitRow& row : orbit_rows(*this, window_m, true_dists)) {
    out << row.n << "," << format_full(row.step_dist) << ",";
    if (row.ratio) out << format_full(*row.ratio);
    out << ",";
    if (row.window_max) out << format_full(*row.window_max);
    out << ",";
    if (row.bound) out << format_full(*row.bound);
    out << ",";
    if (row.true_dist) out << format_full(*row.true_dist);
    out << "\n";
  }
  return out.str();
}

}  // namespace fixcert
