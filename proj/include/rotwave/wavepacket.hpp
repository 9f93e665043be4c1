#pragma once

// Angular power spectrum of the coherently rotating complex: the full
// double sum over spins, its diagonal baseline, and the near-side/far-side
// split built from traveling Legendre functions.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rotwave/specfun.hpp"
#include "rotwave/spectra.hpp"

namespace rotwave::wavepacket {

using cplx = std::complex<double>;
using specfun::AngleSample;
using specfun::Branch;
using spectra::SpinPairFactor;

struct SpinRange {
  int lo = 0;
  int hi = 0;
  int size() const { return hi - lo + 1; }
};

struct ModelParams {
  double spin_mean = 18.0;        // I
  double spin_window = 2.0;       // d; 0 selects the single-J window J = I
  double deflection = 0.0;        // Phi, radians
  double hbar_omega = 0.045;      // eV
  double beta = 0.003;            // eV
  double lifetime_width = 0.0;    // Gamma, eV; 0 disables the envelope
  double window_cutoff = 1e-8;    // w_min

  /// Throws std::domain_error on any violated invariant.
  void validate() const;
  /// [max(0, ceil(I - d L)), floor(I + d L)], L = sqrt(ln(1/w_min)).
  SpinRange spin_range() const;
  spectra::KernelParams kernel(double spacing) const;
};

/// exp[-(J-I)^2/d^2]; 1 at J == I for the single-J window.
double gaussian_window(int spin, const ModelParams& mp);

/// H(t) exp(-t Gamma / hbar).
double lifetime_envelope(double t, const ModelParams& mp);

enum class TravelingMode { exact, asymptotic };

/// Values over a (time x angle) grid, one row per time.
struct AngularField {
  std::vector<double> times;   // fs
  std::vector<double> thetas;  // radians
  std::vector<double> values;  // row-major, times.size() x thetas.size()

  double at(std::size_t it, std::size_t ith) const { return values[it * thetas.size() + ith]; }
  std::span<const double> row(std::size_t it) const {
    return {values.data() + it * thetas.size(), thetas.size()};
  }
};

/// Spin-pair weights for one time: M_{JJ'} = a_J a_J' exp[i Phi (J-J')] C(t,J,J'),
/// a_J = (2J+1) W(J)^{1/2}. Every observable is a bilinear form f^T M g^*.
class SpinPairMatrix {
 public:
  SpinPairMatrix(const ModelParams& mp, const SpinPairFactor& factor, double t);

  const SpinRange& range() const { return range_; }
  double time() const { return t_; }

  /// sum_{JJ'} f_J M_{JJ'} conj(g_J'); f, g indexed by J - range().lo.
  cplx bilinear(std::span<const cplx> f, std::span<const cplx> g) const;
  /// Same with real ladders f = g.
  cplx quadratic(std::span<const double> f) const;

 private:
  SpinRange range_;
  double t_;
  std::vector<cplx> m_;
};

/// Amplitude ladders a_J (2J+1) W^{1/2} for the spin range.
std::vector<double> spin_amplitudes(const ModelParams& mp);

/// Legendre ladder restricted to the spin range, P_J(cos theta).
std::vector<double> legendre_ladder(const ModelParams& mp, const AngleSample& angle);
/// Q_J^(b) ladder, exact or semiclassical.
std::vector<cplx> traveling_ladder(const ModelParams& mp, const AngleSample& angle, Branch branch,
                                   TravelingMode mode);

double power_spectrum(const ModelParams& mp, const SpinPairFactor& factor, double t, double theta);
double diag_power(const ModelParams& mp, double theta);

double nearfar_power(const ModelParams& mp, const SpinPairFactor& factor, double t, double theta,
                     Branch branch, TravelingMode mode = TravelingMode::exact);
double nearfar_diag_power(const ModelParams& mp, double theta, Branch branch,
                          TravelingMode mode = TravelingMode::exact);

/// sum_{JJ'} M_{JJ'} Q_J^+ conj(Q_J'^-). P = P+ + P- + 2 Re(cross).
cplx cross_term(const ModelParams& mp, const SpinPairFactor& factor, double t, double theta,
                TravelingMode mode = TravelingMode::exact);

/// R(t, theta) = P / P_diag on the grid. Throws GridError where P_diag
/// underflows. threads <= 1 evaluates serially; results never depend on it.
AngularField scaled_distribution(const ModelParams& mp, const SpinPairFactor& factor,
                                 std::span<const double> times, std::span<const double> thetas,
                                 int threads = 1);

struct NearFarFields {
  AngularField plus;       // P+ / P+_diag
  AngularField minus;      // P- / P-_diag
  AngularField classical;  // (P+ + P-) / (P+_diag + P-_diag)
};

NearFarFields nearfar_distribution(const ModelParams& mp, const SpinPairFactor& factor,
                                   std::span<const double> times, std::span<const double> thetas,
                                   TravelingMode mode = TravelingMode::exact, int threads = 1);

struct McEstimate {
  double mean = 0.0;            // <|P(t,theta)|^2>
  double standard_error = 0.0;
  double diag = 0.0;            // diag_power at theta
  int realizations = 0;

  double ratio() const { return mean / diag; }
  double ratio_error() const { return standard_error / diag; }
};

/// Ensemble of |P(t,theta)|^2 with i.i.d. standard normal coefficients per
/// resonance. The lifetime envelope is not applied.
McEstimate monte_carlo_power(const ModelParams& mp, const spectra::SpectrumSet& spectra,
                             std::uint64_t seed, int realizations, double t, double theta);

/// One realization's amplitude, exposed for structure checks.
cplx monte_carlo_amplitude(const ModelParams& mp, const spectra::SpectrumSet& spectra,
                           std::uint64_t seed, int realization, double t, double theta);

/// 721-point default grid over (0, 180) degrees offset by half a step, radians.
std::vector<double> default_theta_grid(int points = 721);

}  // namespace rotwave::wavepacket
