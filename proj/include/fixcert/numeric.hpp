#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace fixcert {

/// Absolute slack applied to every inequality comparison. Large enough to
/// absorb rounding when a class holds with exact equality, far below any
/// quantity the inequalities distinguish.
inline constexpr double kInequalitySlack = 1e-12;

/// Relative stability target for the adaptive sup-norm grid.
inline constexpr double kSupRefineRel = 1e-12;

bool approx_rel(double a, double b, double rel);
bool approx_abs(double a, double b, double abs);

/// Round x to `sig` significant decimal digits.
double round_sig(double x, int sig);

/// True when x, rounded to the precision of a printed reference value,
/// reproduces that value. `sig` is the number of significant digits printed.
bool matches_printed(double x, double printed, int sig);

/// Fixed number of significant digits, trailing zeros kept. Falls back to
/// scientific notation outside [1e-4, 1e4).
std::string format_sig(double x, int sig);

/// Shortest representation that round-trips a double exactly.
std::string format_full(double x);

std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic uniform sampling on top of mt19937_64. Distributions are
/// hand-rolled so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0,1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform index in [0,n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace fixcert
