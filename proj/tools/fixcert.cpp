// Command-line front end: reproduce diagnostic tables, run instances to
// certificates, drive the finite-instance equivalence suite, and validate
// distance matrices. Exit codes are part of the contract:
//   0 success / certified, 1 validation or suite failure, 2 certificate
//   violated at exit or never certified, 3 hypothesis failure (including
//   rectangular refusal), 4 I/O or malformed input, 64 usage.

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fixcert/equivalence.hpp"
#include "fixcert/gallery.hpp"
#include "fixcert/numeric.hpp"
#include "fixcert/picard.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitViolated = 2;
constexpr int kExitHypothesis = 3;
constexpr int kExitIo = 4;
constexpr int kExitUsage = 64;

int exit_code_for(const fixcert::Error& err) {
  switch (err.code()) {
    case fixcert::ErrorCode::io:
    case fixcert::ErrorCode::format:
      return kExitIo;
    case fixcert::ErrorCode::hypothesis:
    case fixcert::ErrorCode::control:
    case fixcert::ErrorCode::rectangular_unsupported:
      return kExitHypothesis;
    default:
      return kExitInvalid;
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out.good()) fixcert::raise(fixcert::ErrorCode::io, "cannot write '" + path + "'");
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) fixcert::raise(fixcert::ErrorCode::io, "cannot read '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fixcert::raise(fixcert::ErrorCode::format, "malformed JSON in '" + path + "': " + e.what());
  }
}

std::string cell(const std::optional<double>& v, int sig) {
  return v ? fixcert::format_sig(*v, sig) : "---";
}

// Everything needed to run one instance, whether from the gallery or a file.
struct Resolved {
  std::string name;
  fixcert::AuxiliaryMap T;
  fixcert::SelfMap S;
  fixcert::Point x0;
  std::optional<double> uniform_q;
  std::function<double(std::size_t)> oracle_true;
  std::optional<fixcert::Point> z_star;
};

Resolved resolve_gallery(const fixcert::GalleryInstance& g) {
  return {g.name, g.T, g.S, g.x0, g.known_uniform_q, g.oracle_true, g.z_star};
}

Resolved resolve_file(const std::string& path) {
  const fixcert::FiniteInstance inst = fixcert::FiniteInstance::from_json(load_json(path));
  bool injective = true;
  {
    std::vector<bool> hit(inst.t_table.size(), false);
    for (std::size_t v : inst.t_table) {
      if (hit[v]) injective = false;
      hit[v] = true;
    }
  }
  std::optional<double> q;
  if (inst.alpha_value > 0.0) q = inst.alpha_value;
  return {inst.name, inst.aux_map(injective), inst.self_map(), fixcert::Point{inst.x0},
          q,         nullptr,                 std::nullopt};
}

std::optional<Resolved> resolve(const std::string& target) {
  if (const fixcert::GalleryInstance* g = fixcert::find_instance(target))
    return resolve_gallery(*g);
  if (std::filesystem::exists(target)) return resolve_file(target);
  return std::nullopt;
}

std::string known_names() {
  std::string out;
  for (const std::string& n : fixcert::gallery_names()) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

// True distances per index when a closed form or a known limit exists.
// Closed-form oracles may refuse large indices; the column just ends there.
std::vector<double> true_distances(const Resolved& r, const fixcert::Orbit& orbit) {
  std::vector<double> td;
  if (r.oracle_true) {
    for (std::size_t n = 0; n <= orbit.steps(); ++n) {
      try {
        td.push_back(r.oracle_true(n));
      } catch (const fixcert::Error&) {
        break;
      }
    }
  } else if (r.z_star) {
    td = fixcert::true_distance_to_limit(orbit, *r.z_star);
  }
  return td;
}

int cmd_table(const std::string& example, std::size_t n_max, std::size_t m,
              const std::string& out_path) {
  const fixcert::GalleryInstance* g = fixcert::find_instance(example);
  if (!g) {
    std::cerr << "unknown example '" << example << "'; known: " << known_names() << "\n";
    return kExitUsage;
  }
  const Resolved r = resolve_gallery(*g);
  const fixcert::Orbit orbit = fixcert::iterate(r.S, r.T, r.x0, n_max);
  const std::vector<fixcert::OrbitRow> rows =
      fixcert::orbit_rows(orbit, m, true_distances(r, orbit));

  auto format_row = [](const std::string& c0, const std::array<std::string, 5>& cols) {
    std::ostringstream line;
    line.width(4);
    line << c0;
    for (const std::string& c : cols) {
      line << " ";
      line.width(10);
      line << c;
    }
    return line.str();
  };

  std::ostringstream table;
  table << "instance: " << r.name << "  window m: " << m << "\n";
  table << format_row("n", {"step_dist", "r_n", "q_hat", "bound", "true_dist"}) << "\n";
  for (const fixcert::OrbitRow& row : rows) {
    table << format_row(std::to_string(row.n),
                        {fixcert::format_sig(row.step_dist, 4), cell(row.ratio, 4),
                         cell(row.window_max, 4), cell(row.bound, 4), cell(row.true_dist, 4)})
          << "\n";
  }
  std::cout << table.str();
  if (!out_path.empty()) write_file(out_path, table.str());
  return kExitOk;
}

nlohmann::json rows_to_json(const std::vector<fixcert::OrbitRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const fixcert::OrbitRow& row : rows) {
    nlohmann::json j{{"n", row.n}, {"step_dist", row.step_dist}};
    j["ratio"] = row.ratio ? nlohmann::json(*row.ratio) : nlohmann::json();
    j["window_max"] = row.window_max ? nlohmann::json(*row.window_max) : nlohmann::json();
    j["bound"] = row.bound ? nlohmann::json(*row.bound) : nlohmann::json();
    j["true_dist"] = row.true_dist ? nlohmann::json(*row.true_dist) : nlohmann::json();
    arr.push_back(j);
  }
  return arr;
}

int cmd_run(const std::string& target, std::size_t max_iters, double tol, std::size_t m,
            bool certify, const std::string& format, std::string out_prefix) {
  const std::optional<Resolved> resolved = resolve(target);
  if (!resolved) {
    std::cerr << "'" << target << "' is neither a gallery example (" << known_names()
              << ") nor an instance file\n";
    return kExitUsage;
  }
  const Resolved& r = *resolved;
  const fixcert::Orbit orbit = fixcert::iterate(r.S, r.T, r.x0, max_iters, tol);
  const std::vector<double> td = true_distances(r, orbit);
  if (out_prefix.empty()) out_prefix = r.name;

  std::cout << "instance: " << r.name << "\n";
  std::cout << "steps: " << orbit.steps() << " ("
            << fixcert::stop_reason_name(orbit.stop_reason()) << ")\n";

  const std::string orbit_path =
      out_prefix + (format == "json" ? "-orbit.json" : "-orbit.csv");
  if (format == "json") {
    write_file(orbit_path, rows_to_json(fixcert::orbit_rows(orbit, m, td)).dump(2) + "\n");
  } else {
    write_file(orbit_path, orbit.to_csv(m, td));
  }
  std::cout << "wrote: " << orbit_path << "\n";

  if (orbit.metric().kind() == fixcert::MetricKind::rectangular && !certify) {
    std::cout << "certificate unavailable: rectangular-tail-unsupported "
                 "(one-step ratios in the orbit file remain valid)\n";
    return kExitOk;
  }

  const std::vector<fixcert::MonitorState> states = fixcert::run_monitor(orbit, m);
  const fixcert::MonitorState& fin = states.back();
  std::cout << "monitor: " << fixcert::monitor_phase_name(fin.phase) << " anchor " << fin.anchor
            << " q_hat " << fixcert::format_full(fin.q_hat) << " violations "
            << fin.violations.size() << "\n";
  if (fin.phase == fixcert::MonitorPhase::estimating) {
    std::cout << "certificate: never certified (window needs " << m + 1 << " steps, orbit has "
              << orbit.steps() << ")\n";
    return kExitViolated;
  }

  // This throws the dedicated refusal for rectangular metrics under --certify.
  fixcert::Certificate cert = fixcert::certificate(fin, orbit, r.T.declared());
  nlohmann::json cert_json = cert.to_json();

  if (certify && cert.status == fixcert::CertificateStatus::valid_so_far) {
    if (!r.uniform_q)
      fixcert::raise(fixcert::ErrorCode::hypothesis,
                     "no uniform ratio constant is known for this instance");
    fixcert::TailBoundReport tail = fixcert::apriori_tail_bound(orbit, 1, *r.uniform_q);
    if (!tail.hypothesis_verified && tail.verified_anchor &&
        *tail.verified_anchor < orbit.steps()) {
      tail = fixcert::apriori_tail_bound(orbit, *tail.verified_anchor, *r.uniform_q);
    }
    cert = fixcert::finalize_certificate(cert, tail);
    cert_json = cert.to_json();
    cert_json["uniform_tail"] = tail.to_json();
  }

  const std::string cert_path = out_prefix + "-certificate.json";
  write_file(cert_path, cert_json.dump(2) + "\n");
  std::cout << "certificate: " << fixcert::certificate_status_name(cert.status) << " anchor "
            << cert.anchor << " bound " << fixcert::format_full(cert.bound) << " ("
            << cert.theorem_basis << ")\n";
  std::cout << "wrote: " << cert_path << "\n";
  return cert.status == fixcert::CertificateStatus::violated_at ? kExitViolated : kExitOk;
}

int cmd_verify(std::uint64_t seed, std::size_t count, const std::string& out_path) {
  const fixcert::SuiteReport suite = fixcert::run_equivalence_suite(seed, count);
  const fixcert::InjectivityCounterexample ce = fixcert::injectivity_counterexample();

  std::cout << "suite: " << suite.instances << " instances from master seed " << suite.master_seed
            << "\n";
  std::cout << "passes: " << suite.passes << "/" << suite.instances << "\n";
  for (const fixcert::SuiteFailure& f : suite.failures)
    std::cout << "failure: seed " << f.seed << " " << f.instance << " direction " << f.direction
              << "\n";
  std::cout << "counterexample " << ce.instance.name << ": " << ce.fixed_points.size()
            << " fixed points, all four inequalities hold with control 0"
            << (ce.demonstrates_failure() ? " [as constructed]" : " [BROKEN]") << "\n";

  if (!out_path.empty()) {
    nlohmann::json j{{"suite", suite.to_json()}, {"counterexample", ce.to_json()}};
    write_file(out_path, j.dump(2) + "\n");
    std::cout << "wrote: " << out_path << "\n";
  }
  const bool ok = suite.all_passed() && ce.demonstrates_failure();
  std::cout << (ok ? "verdict: PASS\n" : "verdict: FAIL\n");
  return ok ? kExitOk : kExitInvalid;
}

int cmd_check_metric(const std::string& path) {
  const nlohmann::json j = load_json(path);
  fixcert::FiniteMetric metric;
  if (j.contains("points") || j.contains("T")) {
    metric = fixcert::FiniteInstance::from_json(j).metric;
  } else {
    metric = fixcert::FiniteMetric::from_json(j);
  }
  const fixcert::ValidationReport report = metric.kind == fixcert::MetricKind::ordinary
                                               ? fixcert::validate_metric(metric)
                                               : fixcert::validate_rectangular(metric);
  std::cout << "kind: " << fixcert::metric_kind_name(metric.kind) << "  points: " << metric.size()
            << "\n";
  for (const fixcert::AxiomViolation& v : report.violations) {
    std::cout << "violation: " << fixcert::axiom_name(v.axiom) << " witness (";
    for (std::size_t i = 0; i < v.witness.size(); ++i)
      std::cout << (i ? "," : "") << v.witness[i];
    std::cout << ") lhs " << fixcert::format_full(v.lhs) << " rhs " << fixcert::format_full(v.rhs)
              << "\n";
  }
  if (report.valid()) {
    std::cout << "valid\n";
    return kExitOk;
  }
  std::cout << "invalid: " << report.violations.size() << " violation(s)\n";
  return kExitInvalid;
}

std::uint64_t seed_fallback() {
  if (const char* env = std::getenv("FIXCERT_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      fixcert::raise(fixcert::ErrorCode::format, "FIXCERT_SEED is not an unsigned integer");
    return v;
  }
  return 7;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixed-point iteration certificates through an auxiliary map"};
  app.require_subcommand(1);

  std::string example;
  std::size_t n_max = 10;
  std::size_t m = 3;
  std::string out_path;
  CLI::App* table = app.add_subcommand("table", "print the diagnostic table for an example");
  table->add_option("example", example, "gallery example name")->required();
  table->add_option("--n", n_max, "number of steps")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  table->add_option("--m", m, "ratio window width")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  table->add_option("--out", out_path, "also write the table to this file");

  std::string run_target;
  std::size_t max_iters = 25;
  double tol = 0.0;
  bool certify = false;
  std::string run_format = "csv";
  std::string run_out;
  CLI::App* run = app.add_subcommand("run", "iterate an example or instance file to a certificate");
  run->add_option("target", run_target, "gallery example name or instance JSON path")->required();
  run->add_option("--max-iters", max_iters, "step limit")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  run->add_option("--tol", tol, "stop when a step falls below this")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--m", m, "ratio window width")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  run->add_flag("--certify", certify, "finalize against a known uniform ratio constant");
  run->add_option("--format", run_format, "orbit file format")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--out", run_out, "output path prefix (default: instance name)");

  std::uint64_t seed = 0;
  std::size_t count = 100;
  CLI::App* verify = app.add_subcommand("verify", "run the finite-instance equivalence suite");
  CLI::Option* seed_opt = verify->add_option("--seed", seed, "master seed (default: FIXCERT_SEED or 7)");
  verify->add_option("--count", count, "number of random instances")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  verify->add_option("--out", out_path, "write the JSON report to this file");

  std::string metric_path;
  CLI::App* check = app.add_subcommand("check-metric", "validate a distance matrix file");
  check->add_option("file", metric_path, "JSON file with a distance matrix or instance")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*table) return cmd_table(example, n_max, m, out_path);
    if (*run) return cmd_run(run_target, max_iters, tol, m, certify, run_format, run_out);
    if (*verify) return cmd_verify(seed_opt->count() > 0 ? seed : seed_fallback(), count, out_path);
    if (*check) return cmd_check_metric(metric_path);
  } catch (const fixcert::Error& err) {
    std::cerr << "error (" << fixcert::error_code_name(err.code()) << "): " << err.what() << "\n";
    return exit_code_for(err);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInvalid;
  }
  return kExitUsage;
}
