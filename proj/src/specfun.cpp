#include "rotwave/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rotwave/constants.hpp"

namespace rotwave::specfun {

namespace {

void check_degree(int degree, const char* who) {
  if (degree < 0) throw std::domain_error(std::string(who) + ": negative degree");
}

void check_closed(double x, const char* who) {
  if (!(std::abs(x) <= 1.0)) throw std::domain_error(std::string(who) + ": |x| > 1");
}

void check_open(double x, const char* who) {
  if (!(std::abs(x) < 1.0))
    throw std::domain_error(std::string(who) + ": logarithmic singularity at x = +-1");
}

void check_open_angle(const AngleSample& angle, const char* who) {
  if (!(angle.theta > 0.0 && angle.theta < kPi))
    throw std::domain_error(std::string(who) + ": theta must lie strictly inside (0, pi)");
}

}  // namespace

AngleSample AngleSample::from_radians(double theta) {
  if (!(theta >= 0.0 && theta <= kPi)) throw std::domain_error("AngleSample: theta outside [0, pi]");
  AngleSample a;
  a.theta = theta;
  // cos(pi) is not exactly -1 in floating point; pin the endpoints.
  if (theta == 0.0) a.x = 1.0;
  else if (theta == kPi) a.x = -1.0;
  else a.x = std::cos(theta);
  return a;
}

AngleSample AngleSample::from_degrees(double degrees) { return from_radians(deg_to_rad(degrees)); }

std::vector<double> legendre_p_all(int max_degree, double x) {
  check_degree(max_degree, "legendre_p");
  check_closed(x, "legendre_p");
  std::vector<double> p(static_cast<std::size_t>(max_degree) + 1);
  if (x == 1.0 || x == -1.0) {
    for (int n = 0; n <= max_degree; ++n) p[n] = (x < 0.0 && (n & 1)) ? -1.0 : 1.0;
    return p;
  }
  p[0] = 1.0;
  if (max_degree >= 1) p[1] = x;
  for (int n = 1; n < max_degree; ++n)
    p[n + 1] = ((2.0 * n + 1.0) * x * p[n] - n * p[n - 1]) / (n + 1.0);
  return p;
}

double legendre_p(int degree, double x) { return legendre_p_all(degree, x).back(); }

std::vector<double> legendre_q_all(int max_degree, double x) {
  check_degree(max_degree, "legendre_q");
  check_open(x, "legendre_q");
  std::vector<double> q(static_cast<std::size_t>(max_degree) + 1);
  q[0] = 0.5 * std::log((1.0 + x) / (1.0 - x));
  if (max_degree >= 1) q[1] = x * q[0] - 1.0;
  for (int n = 1; n < max_degree; ++n)
    q[n + 1] = ((2.0 * n + 1.0) * x * q[n] - n * q[n - 1]) / (n + 1.0);
  return q;
}

double legendre_q(int degree, double x) { return legendre_q_all(degree, x).back(); }

LegendreLadder legendre_p_with_derivative(int max_degree, double x) {
  LegendreLadder out;
  out.value = legendre_p_all(max_degree, x);
  out.derivative.assign(out.value.size(), 0.0);
  if (max_degree >= 1) out.derivative[1] = 1.0;
  for (int n = 1; n < max_degree; ++n)
    out.derivative[n + 1] = out.derivative[n - 1] + (2.0 * n + 1.0) * out.value[n];
  return out;
}

std::vector<cplx> traveling_q_all(int max_degree, const AngleSample& angle, Branch branch) {
  check_degree(max_degree, "traveling_q");
  check_open_angle(angle, "traveling_q");
  const auto p = legendre_p_all(max_degree, angle.x);
  const auto q = legendre_q_all(max_degree, angle.x);
  const double s = branch_sign(branch);
  std::vector<cplx> out(p.size());
  for (std::size_t n = 0; n < p.size(); ++n)
    out[n] = cplx(0.5 * p[n], -s * q[n] / kPi);
  return out;
}

cplx traveling_q(int degree, const AngleSample& angle, Branch branch) {
  return traveling_q_all(degree, angle, branch).back();
}

cplx traveling_q_asymptotic(int degree, const AngleSample& angle, Branch branch) {
  if (degree < 1) throw std::domain_error("traveling_q_asymptotic: degree must be >= 1");
  check_open_angle(angle, "traveling_q_asymptotic");
  const double amp = std::sqrt(1.0 / (2.0 * kPi * degree * std::sin(angle.theta)));
  const double phase = branch_sign(branch) * ((degree + 0.5) * angle.theta - 0.25 * kPi);
  return std::polar(amp, phase);
}

}  // namespace rotwave::specfun
