#pragma once

// Resonance spectra per total spin, the Lorentzian correlation kernel of the
// partial-width products, and the spin-pair factors C(t, J, J') that multiply
// the off-diagonal terms of the angular power spectrum.

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace rotwave::spectra {

using cplx = std::complex<double>;

enum class SpectrumKind { equidistant, goe, poisson };

std::string to_string(SpectrumKind kind);
SpectrumKind spectrum_kind_from_string(const std::string& name);

/// Ascending resonance energies (eV) for each spin J, all with N levels and
/// nominal mean spacing D.
struct SpectrumSet {
  std::map<int, std::vector<double>> energies_by_spin;
  double mean_spacing = 0.0;
  int level_count = 0;
  SpectrumKind kind = SpectrumKind::equidistant;
  std::uint64_t seed = 0;

  bool has_spin(int spin) const { return energies_by_spin.count(spin) != 0; }
  /// Throws MissingSpinError.
  const std::vector<double>& levels(int spin) const;
  /// Length of the energy window, N * D.
  double window() const { return level_count * mean_spacing; }
};

std::vector<double> gen_equidistant(int level_count, double spacing, double center = 0.0);

/// Central N eigenvalues of a 3N x 3N GOE matrix (diagonal variance 1,
/// off-diagonal variance 1/2), linearly unfolded to mean spacing D.
std::vector<double> gen_goe(int level_count, double spacing, std::uint64_t seed, double center = 0.0);

/// Cumulative i.i.d. exponential spacings with mean D, centred.
std::vector<double> gen_poisson(int level_count, double spacing, std::uint64_t seed,
                                double center = 0.0);

/// TEST DOUBLE ONLY: a chain of independent Wigner-surmise spacings. It has
/// GOE-like nearest-neighbour repulsion but none of the long-range rigidity
/// of a diagonalised ensemble. Not used by any production path.
std::vector<double> gen_wigner_surmise_chain(int level_count, double spacing, std::uint64_t seed,
                                             double center = 0.0);

/// Seed for the spectrum of spin J derived from a run seed; order independent.
std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t stream);

/// One spectrum per spin in [spin_lo, spin_hi], spins statistically independent.
SpectrumSet make_spectrum_set(SpectrumKind kind, int spin_lo, int spin_hi, int level_count,
                              double spacing, std::uint64_t seed);

/// <min(s_i, s_{i+1}) / max(s_i, s_{i+1})> over consecutive spacings.
double spacing_ratio_mean(std::span<const double> levels);

/// Plain-text table: header "# D=.. N=.. seed=.. kind=..", then "J E_eV" lines.
void write_spectrum_table(std::ostream& os, const SpectrumSet& set);
SpectrumSet read_spectrum_table(std::istream& is);

struct KernelParams {
  double spacing = 1e-4;      // D, eV
  double beta = 0.003;        // phase relaxation width, eV
  double hbar_omega = 0.045;  // rotational quantum, eV

  /// Throws std::domain_error for non-positive D or beta, negative hbar_omega.
  void validate() const;
  /// Non-fatal diagnostics (beta/D < 5).
  std::vector<std::string> warnings() const;
};

/// Non-fatal diagnostic when N*D < 40 max(beta, hbar_omega * max_delta_j).
std::vector<std::string> window_warnings(const SpectrumSet& set, const KernelParams& kp,
                                         int max_delta_j);

/// (1/pi) D beta |dJ| / [(dE - hbar_omega dJ)^2 + beta^2 dJ^2]; dJ != 0.
double correlation_kernel(double delta_e, int delta_j, const KernelParams& kp);

/// exp[-i omega t (J-J')] exp[-beta t |J-J'| / hbar]; t >= 0.
cplx spin_pair_factor_continuum(double t, int spin, int spin_p, const KernelParams& kp);

/// Poisson-resummed equidistant-spectrum sum, M in [-m_max, m_max].
cplx spin_pair_factor_poisson(double t, int spin, int spin_p, const KernelParams& kp, int m_max);

/// (1/N) sum_{mu nu} kernel(E_mu^J - E_nu^J') exp[i(E_nu^J' - E_mu^J) t / hbar]
/// over the levels of the two spins. Each spectrum is treated as one period
/// (length N*D) of a periodic level sequence; the image sum is carried out
/// exactly in reciprocal space. Returns exactly 1 for J == J'.
cplx spin_pair_sum_numeric(double t, int spin, int spin_p, const SpectrumSet& spectra,
                           const KernelParams& kp);

enum class Provider { continuum, poisson_sum, numeric, universal };

std::string to_string(Provider provider);
Provider provider_from_string(const std::string& name);

/// C(t, J, J') behind a uniform interface. Immutable and safe to share
/// across threads.
class SpinPairFactor {
 public:
  using Fn = std::function<cplx(double, int, int)>;

  SpinPairFactor(Provider tag, Fn fn) : tag_(tag), fn_(std::move(fn)) {}

  static SpinPairFactor continuum(const KernelParams& kp);
  static SpinPairFactor poisson_sum(const KernelParams& kp, int m_max);
  static SpinPairFactor numeric(std::shared_ptr<const SpectrumSet> spectra, const KernelParams& kp);
  /// Kronecker delta in J: the universal (diagonal) limit.
  static SpinPairFactor universal();

  Provider provider() const { return tag_; }
  cplx operator()(double t, int spin, int spin_p) const {
    if (spin == spin_p) return {1.0, 0.0};
    return fn_(t, spin, spin_p);
  }

 private:
  Provider tag_;
  Fn fn_;
};

}  // namespace rotwave::spectra
