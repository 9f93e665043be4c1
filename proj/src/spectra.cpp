#include "rotwave/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rotwave/constants.hpp"
#include "rotwave/errors.hpp"
#include "rotwave/symmetric_eigen.hpp"

namespace rotwave::spectra {

namespace {

void check_levels(int level_count, int minimum, double spacing, const char* who) {
  if (level_count < minimum)
    throw std::domain_error(std::string(who) + ": need at least " + std::to_string(minimum) +
                            " levels");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw std::domain_error(std::string(who) + ": spacing must be positive");
}

// Shift so the first and last level sit symmetrically about center.
void recenter(std::vector<double>& levels, double center) {
  const double mid = 0.5 * (levels.front() + levels.back());
  for (double& e : levels) e += center - mid;
}

std::vector<double> cumulate(const std::vector<double>& spacings, double center) {
  std::vector<double> levels(spacings.size() + 1, 0.0);
  for (std::size_t i = 0; i < spacings.size(); ++i) levels[i + 1] = levels[i] + spacings[i];
  recenter(levels, center);
  return levels;
}

// Sum over the levels of exp(i k_m E) for m = m_lo .. m_lo + count - 1,
// k_m = m * dk, using one polar() per level and a rotation per step.
std::vector<cplx> structure_factor(const std::vector<double>& levels, long m_lo, std::size_t count,
                                   double dk) {
  std::vector<cplx> s(count, cplx(0.0, 0.0));
  for (double e : levels) {
    cplx z = std::polar(1.0, static_cast<double>(m_lo) * dk * e);
    const cplx step = std::polar(1.0, dk * e);
    for (std::size_t m = 0; m < count; ++m) {
      s[m] += z;
      z *= step;
      if ((m & 63U) == 63U) z /= std::abs(z);
    }
  }
  return s;
}

}  // namespace

std::string to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::equidistant: return "equidistant";
    case SpectrumKind::goe: return "goe";
    case SpectrumKind::poisson: return "poisson";
  }
  return "unknown";
}

SpectrumKind spectrum_kind_from_string(const std::string& name) {
  if (name == "equidistant") return SpectrumKind::equidistant;
  if (name == "goe") return SpectrumKind::goe;
  if (name == "poisson") return SpectrumKind::poisson;
  throw std::invalid_argument("unknown spectrum kind '" + name + "'");
}

const std::vector<double>& SpectrumSet::levels(int spin) const {
  auto it = energies_by_spin.find(spin);
  if (it == energies_by_spin.end())
    throw MissingSpinError("spectrum set has no levels for J = " + std::to_string(spin));
  return it->second;
}

std::vector<double> gen_equidistant(int level_count, double spacing, double center) {
  check_levels(level_count, 2, spacing, "gen_equidistant");
  std::vector<double> levels(static_cast<std::size_t>(level_count));
  const double half = 0.5 * (level_count - 1);
  for (int k = 0; k < level_count; ++k) levels[k] = center + (k - half) * spacing;
  return levels;
}

std::vector<double> gen_goe(int level_count, double spacing, std::uint64_t seed, double center) {
  check_levels(level_count, 10, spacing, "gen_goe");
  const std::size_t dim = 3 * static_cast<std::size_t>(level_count);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> diag(0.0, 1.0);
  std::normal_distribution<double> offdiag(0.0, std::sqrt(0.5));
  linalg::SymmetricMatrix h(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < i; ++j) h(i, j) = offdiag(rng);
    h(i, i) = diag(rng);
  }
  const auto all = linalg::symmetric_eigenvalues(std::move(h));
  const auto first = all.begin() + level_count;
  std::vector<double> levels(first, first + level_count);

  const double empirical = (levels.back() - levels.front()) / (level_count - 1);
  if (!(empirical > 0.0)) throw NumericalError("gen_goe: degenerate central band");
  const double mid = 0.5 * (levels.front() + levels.back());
  for (double& e : levels) e = center + (e - mid) * (spacing / empirical);
  return levels;
}

std::vector<double> gen_poisson(int level_count, double spacing, std::uint64_t seed, double center) {
  check_levels(level_count, 2, spacing, "gen_poisson");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap(1.0 / spacing);
  std::vector<double> spacings(static_cast<std::size_t>(level_count - 1));
  for (double& s : spacings) s = gap(rng);
  return cumulate(spacings, center);
}

std::vector<double> gen_wigner_surmise_chain(int level_count, double spacing, std::uint64_t seed,
                                             double center) {
  check_levels(level_count, 2, spacing, "gen_wigner_surmise_chain");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> spacings(static_cast<std::size_t>(level_count - 1));
  // Inverse CDF of P(s) = (pi/2) s exp(-pi s^2 / 4).
  for (double& s : spacings) s = spacing * std::sqrt(-4.0 * std::log1p(-uniform(rng)) / kPi);
  return cumulate(spacings, center);
}

std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t stream) {
  // splitmix64 finaliser over a stream-salted seed
  std::uint64_t z = run_seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SpectrumSet make_spectrum_set(SpectrumKind kind, int spin_lo, int spin_hi, int level_count,
                              double spacing, std::uint64_t seed) {
  if (spin_lo < 0 || spin_hi < spin_lo) throw std::domain_error("make_spectrum_set: bad spin range");
  SpectrumSet set;
  set.mean_spacing = spacing;
  set.level_count = level_count;
  set.kind = kind;
  set.seed = seed;
  for (int j = spin_lo; j <= spin_hi; ++j) {
    const auto sub = derive_seed(seed, static_cast<std::uint64_t>(j));
    switch (kind) {
      case SpectrumKind::equidistant:
        set.energies_by_spin[j] = gen_equidistant(level_count, spacing);
        break;
      case SpectrumKind::goe:
        set.energies_by_spin[j] = gen_goe(level_count, spacing, sub);
        break;
      case SpectrumKind::poisson:
        set.energies_by_spin[j] = gen_poisson(level_count, spacing, sub);
        break;
    }
  }
  return set;
}

double spacing_ratio_mean(std::span<const double> levels) {
  if (levels.size() < 3) throw std::domain_error("spacing_ratio_mean: need at least 3 levels");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + 2 < levels.size(); ++i) {
    const double s1 = levels[i + 1] - levels[i];
    const double s2 = levels[i + 2] - levels[i + 1];
    const double hi = std::max(s1, s2);
    if (hi <= 0.0) continue;
    sum += std::min(s1, s2) / hi;
    ++count;
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

void write_spectrum_table(std::ostream& os, const SpectrumSet& set) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "# D=%.17g N=%d seed=%llu kind=", set.mean_spacing,
                set.level_count, static_cast<unsigned long long>(set.seed));
  os << buf << to_string(set.kind) << '\n';
  for (const auto& [spin, levels] : set.energies_by_spin) {
    for (double e : levels) {
      std::snprintf(buf, sizeof buf, "%d %.17g\n", spin, e);
      os << buf;
    }
  }
}

SpectrumSet read_spectrum_table(std::istream& is) {
  SpectrumSet set;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string token;
      while (hs >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const auto key = token.substr(0, eq);
        const auto value = token.substr(eq + 1);
        if (key == "D") set.mean_spacing = std::stod(value);
        else if (key == "N") set.level_count = std::stoi(value);
        else if (key == "seed") set.seed = std::stoull(value);
        else if (key == "kind") set.kind = spectrum_kind_from_string(value);
      }
      header = true;
      continue;
    }
    std::istringstream ls(line);
    int spin = 0;
    double e = 0.0;
    if (!(ls >> spin >> e)) throw std::invalid_argument("spectrum table: bad line '" + line + "'");
    set.energies_by_spin[spin].push_back(e);
  }
  if (!header) throw std::invalid_argument("spectrum table: missing header");
  for (const auto& [spin, levels] : set.energies_by_spin) {
    if (static_cast<int>(levels.size()) != set.level_count)
      throw std::invalid_argument("spectrum table: J = " + std::to_string(spin) +
                                  " level count differs from header N");
    if (!std::is_sorted(levels.begin(), levels.end()))
      throw std::invalid_argument("spectrum table: levels not ascending");
  }
  return set;
}

void KernelParams::validate() const {
  if (!(spacing > 0.0)) throw std::domain_error("kernel: D must be positive");
  if (!(beta > 0.0)) throw std::domain_error("kernel: beta must be positive");
  if (!(hbar_omega >= 0.0)) throw std::domain_error("kernel: hbar_omega must be non-negative");
}

std::vector<std::string> KernelParams::warnings() const {
  std::vector<std::string> out;
  if (beta / spacing < 5.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "beta/D = %.3g < 5: overlapping-resonance regime not reached",
                  beta / spacing);
    out.emplace_back(buf);
  }
  return out;
}

std::vector<std::string> window_warnings(const SpectrumSet& set, const KernelParams& kp,
                                         int max_delta_j) {
  std::vector<std::string> out;
  const double need = 40.0 * std::max(kp.beta, kp.hbar_omega * std::abs(max_delta_j));
  if (set.window() < need) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "energy window N*D = %.4g eV below 40*max(beta, hbar_omega*dJ) = %.4g eV",
                  set.window(), need);
    out.emplace_back(buf);
  }
  return out;
}

double correlation_kernel(double delta_e, int delta_j, const KernelParams& kp) {
  if (delta_j == 0) throw std::domain_error("correlation_kernel: dJ = 0 uses the diagonal rule");
  const double adj = std::abs(static_cast<double>(delta_j));
  const double detuning = delta_e - kp.hbar_omega * delta_j;
  const double width = kp.beta * adj;
  return kp.spacing * width / (kPi * (detuning * detuning + width * width));
}

cplx spin_pair_factor_continuum(double t, int spin, int spin_p, const KernelParams& kp) {
  if (t < 0.0) throw std::domain_error("spin_pair_factor_continuum: t < 0");
  const int dj = spin - spin_p;
  if (dj == 0) return {1.0, 0.0};
  const double decay = std::exp(-kp.beta * t * std::abs(dj) / kHbar);
  return std::polar(decay, -kp.hbar_omega * t * dj / kHbar);
}

cplx spin_pair_factor_poisson(double t, int spin, int spin_p, const KernelParams& kp, int m_max) {
  if (m_max < 0) throw std::domain_error("spin_pair_factor_poisson: m_max < 0");
  const int dj = spin - spin_p;
  if (dj == 0) return {1.0, 0.0};
  const double shift = kp.spacing * t / (2.0 * kPi * kHbar);
  const double adj = std::abs(static_cast<double>(dj));
  cplx sum(0.0, 0.0);
  for (int m = -m_max; m <= m_max; ++m) {
    const double x = m - shift;
    const double decay = std::exp(-2.0 * kPi * (kp.beta / kp.spacing) * adj * std::abs(x));
    sum += std::polar(decay, 2.0 * kPi * (kp.hbar_omega / kp.spacing) * dj * x);
  }
  return sum;
}

cplx spin_pair_sum_numeric(double t, int spin, int spin_p, const SpectrumSet& spectra,
                           const KernelParams& kp) {
  const auto& levels = spectra.levels(spin);
  const auto& levels_p = spectra.levels(spin_p);
  const int dj = spin - spin_p;
  if (dj == 0) return {1.0, 0.0};

  // Image sum over period L of D*Lorentzian(x) exp(-i x s), x = E_mu - E_nu,
  // resummed: (1/N) sum_m exp[-i(k_m+s)a - gamma|k_m+s|] exp(i k_m x),
  // k_m = 2 pi m / L. Terms with gamma|k_m+s| > cutoff are below 1e-20.
  constexpr double kCutoff = 46.0;
  const double s = t / kHbar;
  const double gamma = kp.beta * std::abs(static_cast<double>(dj));
  const double shift = kp.hbar_omega * dj;
  const double n = static_cast<double>(spectra.level_count);
  const double dk = 2.0 * kPi / spectra.window();
  const double reach = kCutoff / gamma;
  const long m_lo = static_cast<long>(std::ceil((-s - reach) / dk));
  const long m_hi = static_cast<long>(std::floor((-s + reach) / dk));
  if (m_hi < m_lo) return {0.0, 0.0};
  const auto count = static_cast<std::size_t>(m_hi - m_lo + 1);

  const auto sf = structure_factor(levels, m_lo, count, dk);
  const auto sf_p = structure_factor(levels_p, m_lo, count, dk);
  cplx sum(0.0, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const double k = static_cast<double>(m_lo + static_cast<long>(i)) * dk + s;
    sum += std::polar(std::exp(-gamma * std::abs(k)), -k * shift) * sf[i] * std::conj(sf_p[i]);
  }
  return sum / (n * n);
}

std::string to_string(Provider provider) {
  switch (provider) {
    case Provider::continuum: return "continuum";
    case Provider::poisson_sum: return "poisson_sum";
    case Provider::numeric: return "numeric";
    case Provider::universal: return "universal";
  }
  return "unknown";
}

Provider provider_from_string(const std::string& name) {
  if (name == "continuum") return Provider::continuum;
  if (name == "poisson_sum") return Provider::poisson_sum;
  if (name == "numeric") return Provider::numeric;
  if (name == "universal") return Provider::universal;
  throw std::invalid_argument("unknown provider '" + name + "'");
}

SpinPairFactor SpinPairFactor::continuum(const KernelParams& kp) {
  kp.validate();
  return {Provider::continuum,
          [kp](double t, int j, int jp) { return spin_pair_factor_continuum(t, j, jp, kp); }};
}

SpinPairFactor SpinPairFactor::poisson_sum(const KernelParams& kp, int m_max) {
  kp.validate();
  if (m_max < 0) throw std::domain_error("poisson_sum: m_max < 0");
  return {Provider::poisson_sum, [kp, m_max](double t, int j, int jp) {
            return spin_pair_factor_poisson(t, j, jp, kp, m_max);
          }};
}

SpinPairFactor SpinPairFactor::numeric(std::shared_ptr<const SpectrumSet> spectra,
                                       const KernelParams& kp) {
  kp.validate();
  if (!spectra) throw std::invalid_argument("numeric provider: null spectrum set");
  return {Provider::numeric, [spectra = std::move(spectra), kp](double t, int j, int jp) {
            return spin_pair_sum_numeric(t, j, jp, *spectra, kp);
          }};
}

SpinPairFactor SpinPairFactor::universal() {
  return {Provider::universal, [](double, int, int) { return cplx(0.0, 0.0); }};
}

}  // namespace rotwave::spectra
