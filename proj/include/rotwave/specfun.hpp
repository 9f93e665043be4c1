#pragma once

// Legendre functions of integer degree on the cut -1 < x < 1 and the
// traveling (near-side / far-side) combinations built from them.

#include <complex>
#include <vector>

namespace rotwave::specfun {

using cplx = std::complex<double>;

/// Scattering angle with its cosine cached.
struct AngleSample {
  double theta = 0.0;  // radians, [0, pi]
  double x = 1.0;      // cos(theta)

  static AngleSample from_radians(double theta);
  static AngleSample from_degrees(double degrees);
};

/// Traveling-wave branch. Plus carries exp(+i(J+1/2)theta) asymptotically.
enum class Branch { plus, minus };

inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

double legendre_p(int degree, double x);
double legendre_q(int degree, double x);

/// P_0..P_{max_degree} at x in one recurrence pass.
std::vector<double> legendre_p_all(int max_degree, double x);
/// Q_0..Q_{max_degree}; |x| < 1 strictly.
std::vector<double> legendre_q_all(int max_degree, double x);

/// P_n and dP_n/dx for n = 0..max_degree. The derivative ladder uses
/// P'_{n+1} = P'_{n-1} + (2n+1) P_n.
struct LegendreLadder {
  std::vector<double> value;
  std::vector<double> derivative;
};
LegendreLadder legendre_p_with_derivative(int max_degree, double x);

/// Q_J^(+-)(theta) = 1/2 [P_J(cos theta) -+ (2i/pi) Q_J(cos theta)].
cplx traveling_q(int degree, const AngleSample& angle, Branch branch);
std::vector<cplx> traveling_q_all(int max_degree, const AngleSample& angle, Branch branch);

/// Semiclassical form [1/(2 pi J sin theta)]^{1/2} exp{+-i[(J+1/2)theta - pi/4]}.
/// Undefined for J = 0.
cplx traveling_q_asymptotic(int degree, const AngleSample& angle, Branch branch);

}  // namespace rotwave::specfun
