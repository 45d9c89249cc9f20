#include "fixcert/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "fixcert/errors.hpp"

namespace fixcert {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::format: return "format";
    case ErrorCode::invariant: return "invariant";
    case ErrorCode::control: return "control";
    case ErrorCode::hypothesis: return "hypothesis";
    case ErrorCode::state: return "state";
    case ErrorCode::window: return "window";
    case ErrorCode::degenerate_step: return "degenerate-step";
    case ErrorCode::rectangular_unsupported: return "rectangular-tail-unsupported";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

bool approx_rel(double a, double b, double rel) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= rel * scale;
}

bool approx_abs(double a, double b, double abs) {
  return std::fabs(a - b) <= abs;
}

double round_sig(double x, int sig) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  const double mag = std::floor(std::log10(std::fabs(x)));
  const double scale = std::pow(10.0, static_cast<double>(sig - 1) - mag);
  return std::round(x * scale) / scale;
}

bool matches_printed(double x, double printed, int sig) {
  if (printed == 0.0) return std::fabs(x) < 0.5 * std::pow(10.0, -(sig - 1));
  const double mag = std::floor(std::log10(std::fabs(printed)));
  // Half a unit in the last printed digit, padded for the rounding of the
  // reference value itself.
  const double tol = 0.5000001 * std::pow(10.0, mag - static_cast<double>(sig - 1));
  return std::fabs(x - printed) <= tol;
}

std::string format_sig(double x, int sig) {
  char buf[64];
  if (!std::isfinite(x)) return "nan";
  const double ax = std::fabs(x);
  if (ax != 0.0 && (ax < 1e-4 || ax >= 1e4)) {
    std::snprintf(buf, sizeof(buf), "%.*e", sig - 1, x);
    return buf;
  }
  int decimals = sig - 1;
  if (ax != 0.0) {
    decimals = sig - 1 - static_cast<int>(std::floor(std::log10(ax)));
    if (decimals < 0) decimals = 0;
  }
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
  return buf;
}

std::string format_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace fixcert
