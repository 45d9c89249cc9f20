#include "fixcert/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>
#include <utility>

#include "fixcert/errors.hpp"
#include "fixcert/numeric.hpp"

namespace fixcert {

double DistanceProfile::min() const {
  if (entries.empty()) raise(ErrorCode::domain, "distance profile is empty");
  return entries.front();
}

double DistanceProfile::max() const {
  if (entries.empty()) raise(ErrorCode::domain, "distance profile is empty");
  return entries.back();
}

namespace {

// Step-table eval, right-open: value at the largest abscissa <= t, and the
// first value below the smallest abscissa. Keys are exact doubles.
double step_table_floor(const std::vector<std::pair<double, double>>& table, double t) {
  auto it = std::upper_bound(table.begin(), table.end(), t,
                             [](double v, const std::pair<double, double>& e) { return v < e.first; });
  if (it == table.begin()) return table.front().second;
  return std::prev(it)->second;
}

// Tail-table eval: value at the smallest abscissa >= t, continued past the
// largest abscissa with the last value. beta(0) is the overall sup.
double step_table_ceil(const std::vector<std::pair<double, double>>& table, double t) {
  auto it = std::lower_bound(table.begin(), table.end(), t,
                             [](const std::pair<double, double>& e, double v) { return e.first < v; });
  if (it == table.end()) return table.back().second;
  return it->second;
}

}  // namespace

BetaFromAlpha beta_from_alpha(const MetricSpace& space, std::span<const Point> carrier,
                              const AuxiliaryMap& T, const ControlAlpha& alpha) {
  std::vector<Point> images;
  images.reserve(carrier.size());
  for (const Point& p : carrier) images.push_back(T.apply(p));

  BetaFromAlpha out{ControlBeta::constant(0.0), {}, {}, false};
  std::map<double, double> sup_at;  // exact-distance grouping
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      const double t = space.distance(images[i], images[j]);
      out.profile.entries.push_back(t);
      if (t == 0.0) continue;  // collided images carry no control value
      const double a = alpha.eval(images[i], images[j]);
      auto [it, inserted] = sup_at.emplace(t, a);
      if (!inserted && a > it->second) it->second = a;
    }
  }
  std::sort(out.profile.entries.begin(), out.profile.entries.end());
  out.table.assign(sup_at.begin(), sup_at.end());
  out.vacuous = out.table.empty();

  const std::string tag = alpha.tag() + ":equal-distance-sup";
  if (out.vacuous) {
    out.beta = ControlBeta(
        tag,
        [](double) -> double {
          raise(ErrorCode::domain, "control table is empty; no realized image distances");
        },
        true);
    return out;
  }
  std::vector<std::pair<double, double>> table = out.table;
  out.beta = ControlBeta(
      tag, [table](double t) { return step_table_floor(table, t); }, true);
  return out;
}

ControlAlpha alpha_from_beta(const ControlBeta& beta, const MetricSpace& space) {
  return ControlAlpha(beta.tag() + ":of-distance", [beta, space](const Point& u, const Point& v) {
    return beta.eval(space.distance(u, v));
  });
}

MonotoneBetaResult monotone_beta_from_map(const AuxiliaryMap& T, const SelfMap& f,
                                          std::span<const SamplePair> pairs) {
  const MetricSpace& space = T.domain();
  MonotoneBetaResult out;

  std::vector<std::pair<double, double>> samples;  // (image distance, one-step ratio)
  samples.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    const double before = space.distance(T.apply(x), T.apply(y));
    if (before == 0.0) continue;
    const double after = space.distance(T.apply(f.apply(x)), T.apply(f.apply(y)));
    const double ratio = after / before;
    if (ratio >= 1.0) out.noncontractive_evidence.push_back({x, y, after, before});
    samples.push_back({before, ratio});
  }
  if (samples.empty()) return out;

  std::sort(samples.begin(), samples.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Suffix maxima give the tail sup at each realized distance; the table is
  // non-increasing by construction.
  double tail = 0.0;
  std::vector<std::pair<double, double>> rev;
  for (std::size_t i = samples.size(); i-- > 0;) {
    tail = std::max(tail, samples[i].second);
    if (i == 0 || samples[i - 1].first != samples[i].first) rev.push_back({samples[i].first, tail});
  }
  out.table.assign(rev.rbegin(), rev.rend());

  if (!out.noncontractive_evidence.empty()) return out;
  std::vector<std::pair<double, double>> table = out.table;
  out.beta = ControlBeta(
      "tail-sup:" + f.name(), [table](double t) { return step_table_ceil(table, t); }, true);
  return out;
}

std::optional<double> DeltaSeries::sup_d_with_delta_at_least(double threshold) const {
  std::optional<double> best;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (delta[i] >= threshold && (!best || d[i] > *best)) best = d[i];
  }
  return best;
}

DeltaSeries delta_series(const AuxiliaryMap& T, const SelfMap& f, std::span<const Point> xs,
                         std::span<const Point> ys) {
  if (xs.size() != ys.size())
    raise(ErrorCode::domain, "paired sequences differ in length");
  const MetricSpace& space = T.domain();
  DeltaSeries out;
  for (std::size_t n = 0; n < xs.size(); ++n) {
    const double dn = space.distance(T.apply(xs[n]), T.apply(ys[n]));
    if (dn == 0.0) {
      out.skipped.push_back(n);
      continue;
    }
    const double after = space.distance(T.apply(f.apply(xs[n])), T.apply(f.apply(ys[n])));
    out.indices.push_back(n);
    out.d.push_back(dn);
    out.delta.push_back(after / dn);
  }
  return out;
}

std::vector<std::pair<double, std::optional<double>>> delta_diagnostic(
    const DeltaSeries& series, std::span<const double> epsilons) {
  std::vector<std::pair<double, std::optional<double>>> out;
  out.reserve(epsilons.size());
  for (double eps : epsilons)
    out.push_back({eps, series.sup_d_with_delta_at_least(1.0 - eps)});
  return out;
}

MetricSpace FiniteInstance::space() const { return metric.as_space(name); }

AuxiliaryMap FiniteInstance::aux_map(bool declare_injective) const {
  AuxiliaryProperties props;
  props.continuous = true;  // every map on a finite carrier
  props.injective = declare_injective;
  props.subsequentially_convergent = true;
  std::vector<std::size_t> table = t_table;
  return AuxiliaryMap(name + ".T", space(),
                      [table](const Point& p) -> Point { return table.at(std::get<std::size_t>(p)); },
                      props);
}

SelfMap FiniteInstance::self_map() const {
  std::vector<std::size_t> table = s_table;
  return SelfMap(name + ".S", space(),
                 [table](const Point& p) -> Point { return table.at(std::get<std::size_t>(p)); });
}

std::vector<Point> FiniteInstance::carrier_points() const {
  std::vector<Point> pts;
  pts.reserve(metric.size());
  for (std::size_t i = 0; i < metric.size(); ++i) pts.push_back(i);
  return pts;
}

std::vector<SamplePair> FiniteInstance::all_pairs() const {
  std::vector<SamplePair> pairs;
  const std::size_t n = metric.size();
  pairs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) pairs.push_back({Point{i}, Point{j}});
  return pairs;
}

namespace {

std::vector<std::size_t> index_table_from_json(const nlohmann::json& j, const char* key,
                                               std::size_t n) {
  if (!j.contains(key) || !j[key].is_array())
    raise(ErrorCode::format, std::string("instance is missing array field '") + key + "'");
  std::vector<std::size_t> table;
  for (const auto& e : j[key]) {
    if (!e.is_number_integer() || e.get<long long>() < 0)
      raise(ErrorCode::format, std::string("table '") + key + "' has a non-index entry");
    const std::size_t v = e.get<std::size_t>();
    if (v >= n)
      raise(ErrorCode::format, std::string("table '") + key + "' points outside the carrier");
    table.push_back(v);
  }
  if (table.size() != n)
    raise(ErrorCode::format, std::string("table '") + key + "' must have one entry per point");
  return table;
}

double control_value_from_json(const nlohmann::json& controls, const char* key) {
  if (!controls.contains(key)) return 0.0;
  const double v = controls[key].get<double>();
  if (!(v >= 0.0 && v < 1.0))
    raise(ErrorCode::format, std::string("control '") + key + "' must lie in [0,1)");
  return v;
}

}  // namespace

FiniteInstance FiniteInstance::from_json(const nlohmann::json& j) {
  FiniteInstance inst;
  inst.name = j.value("name", std::string("instance"));
  if (!j.contains("points")) raise(ErrorCode::format, "instance is missing 'points'");
  const std::size_t n = j["points"].get<std::size_t>();
  if (n == 0) raise(ErrorCode::format, "instance needs at least one point");

  nlohmann::json metric_json;
  metric_json["kind"] = j.value("kind", std::string("ordinary"));
  if (j.contains("coordinates")) {
    const auto& coords = j["coordinates"];
    if (!coords.is_array() || coords.size() != n)
      raise(ErrorCode::format, "'coordinates' must list one [x,y] pair per point");
    std::vector<Vec2> pts;
    for (const auto& c : coords) {
      if (!c.is_array() || c.size() != 2)
        raise(ErrorCode::format, "'coordinates' entries must be [x,y] pairs");
      pts.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    inst.coordinates = std::move(pts);
  }
  if (j.contains("dist")) {
    // An explicit matrix is authoritative; coordinates ride along as the
    // embedding they were sampled from.
    metric_json["dist"] = j["dist"];
  } else if (inst.coordinates) {
    const std::vector<Vec2>& pts = *inst.coordinates;
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        dist[a][b] = std::hypot(pts[a].x - pts[b].x, pts[a].y - pts[b].y);
    metric_json["dist"] = dist;
  } else {
    raise(ErrorCode::format, "instance needs either 'dist' or 'coordinates'");
  }
  inst.metric = FiniteMetric::from_json(metric_json);
  if (inst.metric.size() != n)
    raise(ErrorCode::format, "'dist' size does not match 'points'");

  inst.t_table = index_table_from_json(j, "T", n);
  inst.s_table = index_table_from_json(j, "S", n);
  inst.x0 = j.value("x0", std::size_t{0});
  if (inst.x0 >= n) raise(ErrorCode::format, "'x0' points outside the carrier");
  const nlohmann::json controls = j.value("controls", nlohmann::json::object());
  inst.alpha_value = control_value_from_json(controls, "alpha");
  inst.alpha_kannan_value = control_value_from_json(controls, "alpha_kannan");
  return inst;
}

nlohmann::json FiniteInstance::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["points"] = metric.size();
  j["kind"] = metric_kind_name(metric.kind);
  j["dist"] = metric.dist;
  if (coordinates) {
    nlohmann::json coords = nlohmann::json::array();
    for (const Vec2& p : *coordinates) coords.push_back({p.x, p.y});
    j["coordinates"] = coords;
  }
  j["T"] = t_table;
  j["S"] = s_table;
  j["x0"] = x0;
  j["controls"] = {{"alpha", alpha_value}, {"alpha_kannan", alpha_kannan_value}};
  return j;
}

FiniteInstance random_contractive_instance(std::uint64_t seed, std::size_t n_points) {
  if (n_points < 2) raise(ErrorCode::domain, "a contractive instance needs at least two points");
  Rng rng(seed);

  // Points sit on shrinking layers around the center. Consecutive radii differ
  // by a factor of at least 6, so any pair's distance is within [5/6, 7/6] of
  // the larger radius and the inward layer shift contracts by at most 7/30.
  const std::size_t n = n_points;
  std::vector<Vec2> pts(n);
  std::vector<double> radius(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double scale = rng.uniform(0.75, 1.0);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    radius[m] = 0.45 * std::pow(0.125, static_cast<double>(m)) * scale;
    pts[m] = {0.5 + radius[m] * std::cos(angle), 0.5 + radius[m] * std::sin(angle)};
  }

  std::vector<std::size_t> tau(n);
  for (std::size_t i = 0; i < n; ++i) tau[i] = i;
  for (std::size_t i = n - 1; i > 0; --i) std::swap(tau[i], tau[rng.index(i + 1)]);
  std::vector<std::size_t> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[tau[i]] = i;

  FiniteInstance inst;
  inst.name = "random-" + std::to_string(seed);
  inst.metric.kind = MetricKind::ordinary;
  inst.metric.dist.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      inst.metric.dist[a][b] = std::hypot(pts[a].x - pts[b].x, pts[a].y - pts[b].y);
  inst.coordinates = pts;

  // The self-map conjugates the layer shift through the permutation, so the
  // image dynamics z -> layer(z) are what the controls certify.
  auto layer = [n](std::size_t m) { return std::min(m + 1, n - 1); };
  inst.t_table = tau;
  inst.s_table.resize(n);
  for (std::size_t x = 0; x < n; ++x) inst.s_table[x] = inv[layer(tau[x])];
  inst.x0 = inv[0];

  double k_hat = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      k_hat = std::max(k_hat, inst.metric.dist[layer(u)][layer(v)] / inst.metric.dist[u][v]);
    }
  }
  if (k_hat >= 0.25)
    raise(ErrorCode::invariant, "layer construction lost its contraction margin");
  inst.alpha_value = 0.25;
  // Triangle chaining turns the plain ratio bound into an orbital-sum bound
  // with constant 2k/(1-k); k <= 7/30 keeps it below one.
  inst.alpha_kannan_value = 2.0 * k_hat / (1.0 - k_hat);
  return inst;
}

bool EquivalenceReport::all_ok() const {
  return std::all_of(directions.begin(), directions.end(),
                     [](const TransferDirection& d) { return d.ok(); });
}

nlohmann::json EquivalenceReport::to_json() const {
  nlohmann::json dirs = nlohmann::json::array();
  for (const TransferDirection& d : directions) {
    dirs.push_back({{"name", d.name},
                    {"premise_held", d.premise_held},
                    {"transfer_held", d.transfer_held},
                    {"verdict", d.verdict()},
                    {"premise", d.premise.to_json()},
                    {"transfer", d.transfer.to_json()}});
  }
  return {{"instance", instance}, {"injective", injective}, {"directions", dirs}};
}

EquivalenceReport verify_pairwise_equivalence(const FiniteInstance& instance) {
  const std::size_t n = instance.metric.size();
  {
    std::unordered_map<std::size_t, std::size_t> seen;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, inserted] = seen.emplace(instance.t_table[i], i);
      if (!inserted)
        raise(ErrorCode::hypothesis,
              "auxiliary table sends indices " + std::to_string(it->second) + " and " +
                  std::to_string(i) + " to the same image; transfers need injectivity "
                  "(injectivity_counterexample shows why)");
    }
  }

  const MetricSpace space = instance.space();
  const AuxiliaryMap T = instance.aux_map(true);
  const SelfMap S = instance.self_map();
  const std::vector<Point> points = instance.carrier_points();
  const std::vector<SamplePair> pairs = instance.all_pairs();

  EquivalenceReport report;
  report.instance = instance.name;
  report.injective = true;

  // Plain class with the stored constant, pushed to a distance-indexed
  // control via the equal-distance sup. The sup dominates the constant at
  // every realized distance, so the transfer must hold when the premise does.
  {
    TransferDirection& dir = report.directions[0];
    dir.name = "plain-to-geraghty";
    const ControlAlpha alpha = ControlAlpha::constant(instance.alpha_value);
    dir.premise = check_weakly_contractive(T, S, alpha, pairs);
    const BetaFromAlpha bfa = beta_from_alpha(space, points, T, alpha);
    dir.transfer = check_geraghty(T, S, bfa.beta, pairs);
    dir.premise_held = dir.premise.holds();
    dir.transfer_held = dir.transfer.holds();
  }

  // A genuinely non-constant control: the tail sup of observed one-step
  // ratios. Composing it with the distance reproduces the Geraghty right
  // side verbatim, so this direction checks the composition plumbing.
  {
    TransferDirection& dir = report.directions[1];
    dir.name = "geraghty-to-plain";
    const MonotoneBetaResult mb = monotone_beta_from_map(T, S, pairs);
    if (!mb.beta) {
      dir.premise.contraction_class = "geraghty";
      dir.premise.violations = mb.noncontractive_evidence;
      dir.premise_held = false;
    } else {
      dir.premise = check_geraghty(T, S, *mb.beta, pairs);
      dir.transfer = check_weakly_contractive(T, S, alpha_from_beta(*mb.beta, space), pairs);
      dir.premise_held = dir.premise.holds();
      dir.transfer_held = dir.transfer.holds();
    }
  }

  {
    TransferDirection& dir = report.directions[2];
    dir.name = "orbital-to-geraghty-orbital";
    const ControlAlpha alpha = ControlAlpha::constant(instance.alpha_kannan_value);
    dir.premise = check_weakly_kannan(T, S, alpha, pairs);
    const BetaFromAlpha bfa = beta_from_alpha(space, points, T, alpha);
    dir.transfer = check_kannan_geraghty(T, S, bfa.beta, pairs);
    dir.premise_held = dir.premise.holds();
    dir.transfer_held = dir.transfer.holds();
  }

  {
    TransferDirection& dir = report.directions[3];
    dir.name = "geraghty-orbital-to-orbital";
    const ControlBeta beta = ControlBeta::constant(instance.alpha_kannan_value);
    dir.premise = check_kannan_geraghty(T, S, beta, pairs);
    dir.transfer = check_weakly_kannan(T, S, alpha_from_beta(beta, space), pairs);
    dir.premise_held = dir.premise.holds();
    dir.transfer_held = dir.transfer.holds();
  }

  return report;
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json fails = nlohmann::json::array();
  for (const SuiteFailure& f : failures)
    fails.push_back({{"seed", f.seed}, {"instance", f.instance}, {"direction", f.direction}});
  return {{"master_seed", master_seed},
          {"instances", instances},
          {"passes", passes},
          {"failures", fails},
          {"seeds", seeds}};
}

SuiteReport run_equivalence_suite(std::uint64_t master_seed, std::size_t count) {
  SuiteReport report;
  report.master_seed = master_seed;
  report.instances = count;
  std::uint64_t state = master_seed;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = splitmix64(state);
    report.seeds.push_back(seed);
    const FiniteInstance inst = random_contractive_instance(seed);
    const EquivalenceReport rep = verify_pairwise_equivalence(inst);
    if (rep.all_ok()) {
      ++report.passes;
    } else {
      for (const TransferDirection& d : rep.directions)
        if (!d.ok()) report.failures.push_back({seed, inst.name, d.name});
    }
  }
  return report;
}

bool InjectivityCounterexample::demonstrates_failure() const {
  return fixed_points.size() >= 2 &&
         std::all_of(checks_with_zero_control.begin(), checks_with_zero_control.end(),
                     [](const WitnessReport& r) { return r.holds(); });
}

nlohmann::json InjectivityCounterexample::to_json() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const WitnessReport& r : checks_with_zero_control) checks.push_back(r.to_json());
  return {{"instance", instance.to_json()},
          {"checks_with_zero_control", checks},
          {"fixed_points", fixed_points},
          {"demonstrates_failure", demonstrates_failure()}};
}

InjectivityCounterexample injectivity_counterexample() {
  // Two points, identity self-map, constant auxiliary map. Every class
  // inequality holds with control zero because both sides collapse to the
  // single image point, yet the self-map fixes the whole carrier.
  InjectivityCounterexample out;
  out.instance.name = "two-point-collapse";
  out.instance.metric.kind = MetricKind::ordinary;
  out.instance.metric.dist = {{0.0, 1.0}, {1.0, 0.0}};
  out.instance.t_table = {0, 0};
  out.instance.s_table = {0, 1};
  out.instance.x0 = 0;

  const AuxiliaryMap T = out.instance.aux_map(false);
  const SelfMap S = out.instance.self_map();
  const std::vector<SamplePair> pairs = out.instance.all_pairs();
  const ControlAlpha zero_alpha = ControlAlpha::constant(0.0);
  const ControlBeta zero_beta = ControlBeta::constant(0.0);
  out.checks_with_zero_control = {
      check_weakly_contractive(T, S, zero_alpha, pairs),
      check_weakly_kannan(T, S, zero_alpha, pairs),
      check_geraghty(T, S, zero_beta, pairs),
      check_kannan_geraghty(T, S, zero_beta, pairs),
  };
  for (std::size_t i = 0; i < out.instance.s_table.size(); ++i)
    if (out.instance.s_table[i] == i) out.fixed_points.push_back(i);
  return out;
}

}  // namespace fixcert
