#include "rotwave/wavepacket.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "rotwave/constants.hpp"
#include "rotwave/errors.hpp"
#include "rotwave/parallel.hpp"

namespace rotwave::wavepacket {

namespace {

constexpr double kDiagFloor = 1e-300;

bool single_spin(const ModelParams& mp) { return mp.spin_window == 0.0; }

}  // namespace

void ModelParams::validate() const {
  if (!(spin_mean >= 0.0) || !std::isfinite(spin_mean))
    throw std::domain_error("model: spin mean I must be finite and non-negative");
  if (!(spin_window >= 0.0) || !std::isfinite(spin_window))
    throw std::domain_error("model: spin window d must be non-negative");
  if (spin_window == 0.0 && spin_mean != std::floor(spin_mean))
    throw std::domain_error("model: single-J window (d = 0) needs an integer I");
  if (!std::isfinite(deflection)) throw std::domain_error("model: deflection angle not finite");
  if (!(hbar_omega >= 0.0)) throw std::domain_error("model: hbar_omega must be non-negative");
  if (!(beta > 0.0)) throw std::domain_error("model: beta must be positive");
  if (!(lifetime_width >= 0.0)) throw std::domain_error("model: Gamma must be non-negative");
  if (!(window_cutoff > 0.0 && window_cutoff < 1.0))
    throw std::domain_error("model: window cutoff must lie in (0, 1)");
  const auto r = spin_range();
  if (r.hi < r.lo) throw std::domain_error("model: empty spin range");
}

SpinRange ModelParams::spin_range() const {
  if (single_spin(*this)) {
    const int j = static_cast<int>(spin_mean);
    return {j, j};
  }
  const double reach = spin_window * std::sqrt(std::log(1.0 / window_cutoff));
  SpinRange r;
  r.lo = std::max(0, static_cast<int>(std::ceil(spin_mean - reach)));
  r.hi = static_cast<int>(std::floor(spin_mean + reach));
  return r;
}

spectra::KernelParams ModelParams::kernel(double spacing) const {
  spectra::KernelParams kp;
  kp.spacing = spacing;
  kp.beta = beta;
  kp.hbar_omega = hbar_omega;
  return kp;
}

double gaussian_window(int spin, const ModelParams& mp) {
  if (spin < 0) throw std::domain_error("gaussian_window: J < 0");
  if (single_spin(mp)) return spin == static_cast<int>(mp.spin_mean) ? 1.0 : 0.0;
  const double u = (spin - mp.spin_mean) / mp.spin_window;
  return std::exp(-u * u);
}

double lifetime_envelope(double t, const ModelParams& mp) {
  if (t < 0.0) return 0.0;
  if (mp.lifetime_width == 0.0) return 1.0;
  return std::exp(-t * mp.lifetime_width / kHbar);
}

std::vector<double> spin_amplitudes(const ModelParams& mp) {
  const auto r = mp.spin_range();
  std::vector<double> a(static_cast<std::size_t>(r.size()));
  for (int j = r.lo; j <= r.hi; ++j) a[j - r.lo] = (2.0 * j + 1.0) * std::sqrt(gaussian_window(j, mp));
  return a;
}

SpinPairMatrix::SpinPairMatrix(const ModelParams& mp, const SpinPairFactor& factor, double t)
    : range_(mp.spin_range()), t_(t) {
  if (t < 0.0) throw std::domain_error("power spectrum: t < 0");
  const auto a = spin_amplitudes(mp);
  const auto n = static_cast<std::size_t>(range_.size());
  m_.assign(n * n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    m_[i * n + i] = a[i] * a[i];
    for (std::size_t k = 0; k < i; ++k) {
      const int j = range_.lo + static_cast<int>(i);
      const int jp = range_.lo + static_cast<int>(k);
      const cplx c = factor(t, j, jp) * std::polar(1.0, mp.deflection * (j - jp));
      m_[i * n + k] = a[i] * a[k] * c;
      m_[k * n + i] = std::conj(m_[i * n + k]);
    }
  }
}

cplx SpinPairMatrix::bilinear(std::span<const cplx> f, std::span<const cplx> g) const {
  const auto n = static_cast<std::size_t>(range_.size());
  if (f.size() != n || g.size() != n) throw std::invalid_argument("SpinPairMatrix: ladder size");
  cplx sum(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    cplx row(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) row += m_[i * n + k] * std::conj(g[k]);
    sum += f[i] * row;
  }
  return sum;
}

cplx SpinPairMatrix::quadratic(std::span<const double> f) const {
  const auto n = static_cast<std::size_t>(range_.size());
  if (f.size() != n) throw std::invalid_argument("SpinPairMatrix: ladder size");
  cplx sum(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    cplx row(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) row += m_[i * n + k] * f[k];
    sum += f[i] * row;
  }
  return sum;
}

std::vector<double> legendre_ladder(const ModelParams& mp, const AngleSample& angle) {
  const auto r = mp.spin_range();
  const auto all = specfun::legendre_p_all(r.hi, angle.x);
  return {all.begin() + r.lo, all.end()};
}

std::vector<cplx> traveling_ladder(const ModelParams& mp, const AngleSample& angle, Branch branch,
                                   TravelingMode mode) {
  const auto r = mp.spin_range();
  if (mode == TravelingMode::exact) {
    const auto all = specfun::traveling_q_all(r.hi, angle, branch);
    return {all.begin() + r.lo, all.end()};
  }
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(r.size()));
  for (int j = r.lo; j <= r.hi; ++j) out.push_back(specfun::traveling_q_asymptotic(j, angle, branch));
  return out;
}

namespace {

// Hermitian forms are real up to rounding; keep the real part.
double real_part(cplx z) { return z.real(); }

double diag_from_ladder(const std::vector<double>& a, std::span<const cplx> f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * a[i] * std::norm(f[i]);
  return sum;
}

double diag_from_ladder(const std::vector<double>& a, std::span<const double> f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * a[i] * f[i] * f[i];
  return sum;
}

}  // namespace

double power_spectrum(const ModelParams& mp, const SpinPairFactor& factor, double t, double theta) {
  mp.validate();
  const SpinPairMatrix m(mp, factor, t);
  return real_part(m.quadratic(legendre_ladder(mp, AngleSample::from_radians(theta))));
}

double diag_power(const ModelParams& mp, double theta) {
  mp.validate();
  return diag_from_ladder(spin_amplitudes(mp), legendre_ladder(mp, AngleSample::from_radians(theta)));
}

double nearfar_power(const ModelParams& mp, const SpinPairFactor& factor, double t, double theta,
                     Branch branch, TravelingMode mode) {
  mp.validate();
  const SpinPairMatrix m(mp, factor, t);
  const auto q = traveling_ladder(mp, AngleSample::from_radians(theta), branch, mode);
  return real_part(m.bilinear(q, q));
}

double nearfar_diag_power(const ModelParams& mp, double theta, Branch branch, TravelingMode mode) {
  mp.validate();
  const auto q = traveling_ladder(mp, AngleSample::from_radians(theta), branch, mode);
  return diag_from_ladder(spin_amplitudes(mp), q);
}

cplx cross_term(const ModelParams& mp, const SpinPairFactor& factor, double t, double theta,
                TravelingMode mode) {
  mp.validate();
  const SpinPairMatrix m(mp, factor, t);
  const auto angle = AngleSample::from_radians(theta);
  const auto qp = traveling_ladder(mp, angle, Branch::plus, mode);
  const auto qm = traveling_ladder(mp, angle, Branch::minus, mode);
  return m.bilinear(qp, qm);
}

AngularField scaled_distribution(const ModelParams& mp, const SpinPairFactor& factor,
                                 std::span<const double> times, std::span<const double> thetas,
                                 int threads) {
  mp.validate();
  const auto a = spin_amplitudes(mp);
  std::vector<std::vector<double>> ladders;
  std::vector<double> diag;
  ladders.reserve(thetas.size());
  for (double th : thetas) {
    ladders.push_back(legendre_ladder(mp, AngleSample::from_radians(th)));
    const double d = diag_from_ladder(a, ladders.back());
    if (!(d > kDiagFloor))
      throw GridError("diag_power underflows at theta = " + std::to_string(rad_to_deg(th)) + " deg");
    diag.push_back(d);
  }
  AngularField field{{times.begin(), times.end()}, {thetas.begin(), thetas.end()}, {}};
  field.values.assign(times.size() * thetas.size(), 0.0);
  parallel_for(times.size(), threads, [&](std::size_t it) {
    const SpinPairMatrix m(mp, factor, times[it]);
    for (std::size_t ith = 0; ith < thetas.size(); ++ith)
      field.values[it * thetas.size() + ith] = real_part(m.quadratic(ladders[ith])) / diag[ith];
  });
  return field;
}

NearFarFields nearfar_distribution(const ModelParams& mp, const SpinPairFactor& factor,
                                   std::span<const double> times, std::span<const double> thetas,
                                   TravelingMode mode, int threads) {
  mp.validate();
  const auto a = spin_amplitudes(mp);
  struct AngleLadders {
    std::vector<cplx> plus, minus;
    double diag_plus, diag_minus;
  };
  std::vector<AngleLadders> ladders;
  ladders.reserve(thetas.size());
  for (double th : thetas) {
    const auto angle = AngleSample::from_radians(th);
    AngleLadders l;
    l.plus = traveling_ladder(mp, angle, Branch::plus, mode);
    l.minus = traveling_ladder(mp, angle, Branch::minus, mode);
    l.diag_plus = diag_from_ladder(a, l.plus);
    l.diag_minus = diag_from_ladder(a, l.minus);
    if (!(l.diag_plus > kDiagFloor && l.diag_minus > kDiagFloor))
      throw GridError("near/far diagonal underflows at theta = " + std::to_string(rad_to_deg(th)) +
                      " deg");
    ladders.push_back(std::move(l));
  }
  const std::vector<double> tv(times.begin(), times.end());
  const std::vector<double> thv(thetas.begin(), thetas.end());
  const std::vector<double> zeros(times.size() * thetas.size(), 0.0);
  NearFarFields out{{tv, thv, zeros}, {tv, thv, zeros}, {tv, thv, zeros}};
  parallel_for(times.size(), threads, [&](std::size_t it) {
    const SpinPairMatrix m(mp, factor, times[it]);
    for (std::size_t ith = 0; ith < thetas.size(); ++ith) {
      const auto& l = ladders[ith];
      const double pp = real_part(m.bilinear(l.plus, l.plus));
      const double pm = real_part(m.bilinear(l.minus, l.minus));
      const std::size_t k = it * thetas.size() + ith;
      out.plus.values[k] = pp / l.diag_plus;
      out.minus.values[k] = pm / l.diag_minus;
      out.classical.values[k] = (pp + pm) / (l.diag_plus + l.diag_minus);
    }
  });
  return out;
}

cplx monte_carlo_amplitude(const ModelParams& mp, const spectra::SpectrumSet& spectra,
                           std::uint64_t seed, int realization, double t, double theta) {
  const auto r = mp.spin_range();
  const auto a = spin_amplitudes(mp);
  const auto p = legendre_ladder(mp, AngleSample::from_radians(theta));
  std::mt19937_64 rng(spectra::derive_seed(seed, static_cast<std::uint64_t>(realization)));
  std::normal_distribution<double> normal(0.0, 1.0);
  cplx amp(0.0, 0.0);
  for (int j = r.lo; j <= r.hi; ++j) {
    const auto& levels = spectra.levels(j);
    cplx inner(0.0, 0.0);
    for (double e : levels) inner += normal(rng) * std::polar(1.0, -e * t / kHbar);
    const std::size_t i = static_cast<std::size_t>(j - r.lo);
    amp += a[i] * p[i] * std::polar(1.0, mp.deflection * j) * inner;
  }
  return amp / std::sqrt(static_cast<double>(spectra.level_count));
}

McEstimate monte_carlo_power(const ModelParams& mp, const spectra::SpectrumSet& spectra,
                             std::uint64_t seed, int realizations, double t, double theta) {
  mp.validate();
  if (realizations < 1) throw std::domain_error("monte_carlo_power: need at least one realization");
  if (t < 0.0) throw std::domain_error("monte_carlo_power: t < 0");
  // Welford accumulation
  double mean = 0.0, m2 = 0.0;
  for (int k = 0; k < realizations; ++k) {
    const double x = std::norm(monte_carlo_amplitude(mp, spectra, seed, k, t, theta));
    const double delta = x - mean;
    mean += delta / (k + 1);
    m2 += delta * (x - mean);
  }
  McEstimate est;
  est.mean = mean;
  est.realizations = realizations;
  est.standard_error = realizations > 1 ? std::sqrt(m2 / (realizations - 1) / realizations) : 0.0;
  est.diag = diag_power(mp, theta);
  return est;
}

std::vector<double> default_theta_grid(int points) {
  if (points < 2) throw std::domain_error("theta grid: need at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double step = 180.0 / points;
  for (int i = 0; i < points; ++i) grid[i] = deg_to_rad((i + 0.5) * step);
  return grid;
}

}  // namespace rotwave::wavepacket
