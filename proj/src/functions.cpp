#include "fixcert/functions.hpp"

#include <algorithm>

namespace fixcert {

PolyFunc PolyFunc::monomial(std::size_t k, double c) {
  std::vector<double> coeffs(k + 1, 0.0);
  coeffs[k] = c;
  return PolyFunc(std::move(coeffs));
}

double PolyFunc::eval(double t) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::size_t PolyFunc::degree() const {
  for (std::size_t i = coeffs.size(); i > 0; --i) {
    if (coeffs[i - 1] != 0.0) return i - 1;
  }
  return 0;
}

bool PolyFunc::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; });
}

std::vector<double> PolyFunc::trimmed() const {
  std::vector<double> out = coeffs;
  while (!out.empty() && out.back() == 0.0) out.pop_back();
  return out;
}

PolyFunc PolyFunc::derivative() const {
  if (coeffs.size() <= 1) return PolyFunc::constant(0.0);
  std::vector<double> out(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    out[k - 1] = coeffs[k] * static_cast<double>(k);
  }
  return PolyFunc(std::move(out));
}

PolyFunc operator+(const PolyFunc& a, const PolyFunc& b) {
  std::vector<double> out(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) out[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) out[i] += b.coeffs[i];
  return PolyFunc(std::move(out));
}

PolyFunc operator-(const PolyFunc& a, const PolyFunc& b) {
  std::vector<double> out(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) out[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) out[i] -= b.coeffs[i];
  return PolyFunc(std::move(out));
}

PolyFunc operator*(double s, const PolyFunc& a) {
  std::vector<double> out = a.coeffs;
  for (double& c : out) c *= s;
  return PolyFunc(std::move(out));
}

}  // namespace fixcert
