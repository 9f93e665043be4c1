#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "rotwave/analysis.hpp"
#include "rotwave/constants.hpp"
#include "rotwave/wavepacket.hpp"

using namespace rotwave;
using namespace rotwave::wavepacket;
using spectra::KernelParams;

namespace {

ModelParams reference_model(double d = 2.0) {
  ModelParams mp;
  mp.spin_window = d;
  mp.deflection = deg_to_rad(135.0);
  return mp;
}

// Direct double sum with its own Legendre values and continuum factor.
double power_oracle(const ModelParams& mp, double t, double theta) {
  const auto r = mp.spin_range();
  const long double x = std::cos(static_cast<long double>(theta));
  long double sum = 0.0L;
  for (int j = r.lo; j <= r.hi; ++j) {
    for (int k = r.lo; k <= r.hi; ++k) {
      const double wj = std::exp(-std::pow((j - mp.spin_mean) / mp.spin_window, 2));
      const double wk = std::exp(-std::pow((k - mp.spin_mean) / mp.spin_window, 2));
      const int dj = j - k;
      const double phase = mp.deflection * dj - mp.hbar_omega * t * dj / kHbar;
      const double decay = std::exp(-mp.beta * t * std::abs(dj) / kHbar);
      sum += (2.0L * j + 1) * (2.0L * k + 1) * std::sqrt(wj * wk) * oracle::legendre_p_fourier(j, x) *
             oracle::legendre_p_fourier(k, x) * std::cos(phase) * decay;
    }
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("Gaussian window and spin range") {
  ModelParams mp;
  CHECK(gaussian_window(18, mp) == 1.0);
  CHECK(gaussian_window(20, mp) == doctest::Approx(std::exp(-1.0)));
  CHECK(gaussian_window(13, mp) == doctest::Approx(std::exp(-6.25)));
  CHECK_THROWS_AS(gaussian_window(-1, mp), std::domain_error);

  const auto r = mp.spin_range();
  CHECK(r.lo == 10);
  CHECK(r.hi == 26);
  CHECK(gaussian_window(r.lo, mp) >= mp.window_cutoff);
  CHECK(gaussian_window(r.hi, mp) >= mp.window_cutoff);
  CHECK(gaussian_window(r.lo - 1, mp) < mp.window_cutoff);
  CHECK(gaussian_window(r.hi + 1, mp) < mp.window_cutoff);

  ModelParams wide = mp;
  wide.spin_window = 10.0;
  CHECK(wide.spin_range().lo == 0);

  ModelParams single = mp;
  single.spin_window = 0.0;
  CHECK(single.spin_range().lo == 18);
  CHECK(single.spin_range().hi == 18);
  CHECK(gaussian_window(17, single) == 0.0);
  single.spin_mean = 18.5;
  CHECK_THROWS_AS(single.validate(), std::domain_error);
}

TEST_CASE("model validation") {
  auto bad = [](auto mutate) {
    ModelParams mp;
    mutate(mp);
    return mp;
  };
  CHECK_THROWS_AS(bad([](ModelParams& m) { m.spin_mean = -1.0; }).validate(), std::domain_error);
  CHECK_THROWS_AS(bad([](ModelParams& m) { m.spin_window = -1.0; }).validate(), std::domain_error);
  CHECK_THROWS_AS(bad([](ModelParams& m) { m.beta = 0.0; }).validate(), std::domain_error);
  CHECK_THROWS_AS(bad([](ModelParams& m) { m.hbar_omega = -0.01; }).validate(), std::domain_error);
  CHECK_THROWS_AS(bad([](ModelParams& m) { m.lifetime_width = -1.0; }).validate(), std::domain_error);
  CHECK_THROWS_AS(bad([](ModelParams& m) { m.window_cutoff = 1.0; }).validate(), std::domain_error);
  CHECK_THROWS_AS(bad([](ModelParams& m) { m.deflection = NAN; }).validate(), std::domain_error);
  CHECK_NOTHROW(ModelParams{}.validate());
}

TEST_CASE("lifetime envelope") {
  ModelParams mp;
  CHECK(lifetime_envelope(-1.0, mp) == 0.0);
  CHECK(lifetime_envelope(100.0, mp) == 1.0);
  mp.lifetime_width = 0.01;
  CHECK(lifetime_envelope(0.0, mp) == 1.0);
  CHECK(lifetime_envelope(kHbar / 0.01, mp) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("power spectrum against a direct double sum") {
  const auto mp = reference_model();
  const auto f = spectra::SpinPairFactor::continuum(mp.kernel(1e-4));
  for (double t : {0.0, 11.0, 34.5, 150.0}) {
    for (double deg : {3.0, 47.0, 90.0, 133.0, 178.0}) {
      const double th = deg_to_rad(deg);
      const double ref = power_oracle(mp, t, th);
      const double scale = diag_power(mp, th);
      CHECK(std::abs(power_spectrum(mp, f, t, th) - ref) < 1e-10 * scale);
    }
  }
  CHECK_THROWS_AS(power_spectrum(mp, f, -1.0, 1.0), std::domain_error);
}

TEST_CASE("single-J window and zero-time factorisation") {
  ModelParams single;
  single.spin_window = 0.0;
  single.deflection = 0.7;
  const auto f = spectra::SpinPairFactor::continuum(single.kernel(1e-4));
  for (double deg : {20.0, 75.0, 140.0}) {
    const double th = deg_to_rad(deg);
    const double p = static_cast<double>(oracle::legendre_p_fourier(18, std::cos(th)));
    const double expect = 37.0 * 37.0 * p * p;
    for (double t : {0.0, 5.0, 500.0})
      CHECK(power_spectrum(single, f, t, th) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(diag_power(single, th) == doctest::Approx(expect).epsilon(1e-12));
  }

  ModelParams mp;  // Phi = 0
  const auto g = spectra::SpinPairFactor::continuum(mp.kernel(1e-4));
  const auto a = spin_amplitudes(mp);
  const auto r = mp.spin_range();
  for (double deg : {10.0, 60.0, 120.0}) {
    const double th = deg_to_rad(deg);
    double s = 0.0;
    for (int j = r.lo; j <= r.hi; ++j)
      s += a[j - r.lo] * static_cast<double>(oracle::legendre_p_fourier(j, std::cos(th)));
    CHECK(power_spectrum(mp, g, 0.0, th) == doctest::Approx(s * s).epsilon(1e-10));
  }
}

TEST_CASE("property: universal limit gives R = 1") {
  const auto mp = reference_model();
  const auto thetas = default_theta_grid();
  const std::vector<double> times{0.0, 10.0, 45.0};
  const auto field = scaled_distribution(mp, spectra::SpinPairFactor::universal(), times, thetas);
  for (double v : field.values) CHECK(std::abs(v - 1.0) < 1e-12);
}

TEST_CASE("property: power spectrum is real and non-negative") {
  const auto mp = reference_model();
  const auto kp = mp.kernel(1.5e-4);
  const auto r = mp.spin_range();
  const auto equi = std::make_shared<const spectra::SpectrumSet>(
      spectra::make_spectrum_set(spectra::SpectrumKind::equidistant, r.lo, r.hi, 300, kp.spacing, 3));
  const auto goe = std::make_shared<const spectra::SpectrumSet>(
      spectra::make_spectrum_set(spectra::SpectrumKind::goe, r.lo, r.hi, 150, kp.spacing, 3));
  struct Case {
    spectra::SpinPairFactor factor;
    double floor;
  };
  // A single random spectrum does not give a positive-definite kernel; its
  // negative excursions stay at the 1e-5 level of the diagonal.
  const std::vector<Case> cases{{spectra::SpinPairFactor::continuum(kp), 1e-12},
                                {spectra::SpinPairFactor::poisson_sum(kp, 20), 1e-12},
                                {spectra::SpinPairFactor::numeric(equi, kp), 1e-12},
                                {spectra::SpinPairFactor::numeric(goe, kp), 1e-4}};
  for (const auto& c : cases) {
    for (double t : {0.0, 12.0, 40.0}) {
      const SpinPairMatrix m(mp, c.factor, t);
      for (double deg = 1.0; deg < 180.0; deg += 11.0) {
        const auto l = legendre_ladder(mp, specfun::AngleSample::from_degrees(deg));
        const cplx q = m.quadratic(l);
        const double diag = diag_power(mp, deg_to_rad(deg));
        CHECK(std::abs(q.imag()) < 1e-10 * diag);
        CHECK(q.real() >= -c.floor * diag);
      }
    }
  }
}

TEST_CASE("property: near/far sum rule") {
  const auto mp = reference_model();
  const auto kp = mp.kernel(1e-4);
  for (const auto& f : {spectra::SpinPairFactor::continuum(kp), spectra::SpinPairFactor::poisson_sum(kp, 20)}) {
    for (double t : {0.0, 11.49, 22.98, 34.46}) {
      for (double deg = 0.5; deg < 180.0; deg += 9.75) {
        const double th = deg_to_rad(deg);
        const double p = power_spectrum(mp, f, t, th);
        const double pp = nearfar_power(mp, f, t, th, Branch::plus);
        const double pm = nearfar_power(mp, f, t, th, Branch::minus);
        const cplx x = cross_term(mp, f, t, th);
        const double scale = std::max(std::abs(p), diag_power(mp, th));
        CHECK(std::abs(pp + pm + 2.0 * x.real() - p) <= 1e-9 * scale);
      }
    }
  }
}

TEST_CASE("property: swapping branches conjugates the cross term") {
  const auto mp = reference_model();
  const auto f = spectra::SpinPairFactor::continuum(mp.kernel(1e-4));
  const SpinPairMatrix m(mp, f, 17.0);
  const auto a = specfun::AngleSample::from_degrees(70.0);
  const auto qp = traveling_ladder(mp, a, Branch::plus, TravelingMode::exact);
  const auto qm = traveling_ladder(mp, a, Branch::minus, TravelingMode::exact);
  CHECK(std::abs(m.bilinear(qm, qp) - std::conj(m.bilinear(qp, qm))) < 1e-9);
  const cplx x90 = cross_term(mp, f, 0.0, deg_to_rad(90.0));
  CHECK(std::isfinite(x90.real()));
  CHECK(std::isfinite(x90.imag()));
}

TEST_CASE("semiclassical single-J branch intensity") {
  ModelParams single;
  single.spin_window = 0.0;
  const auto f = spectra::SpinPairFactor::continuum(single.kernel(1e-4));
  for (double deg : {30.0, 90.0, 150.0}) {
    const double th = deg_to_rad(deg);
    const double expect = 37.0 * 37.0 / (2.0 * kPi * 18.0 * std::sin(th));
    CHECK(nearfar_power(single, f, 3.0, th, Branch::minus, TravelingMode::asymptotic) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("property: fringes depend on Phi - omega t only") {
  auto mp = reference_model();
  const double t1 = 10.0, t2 = 30.0;
  auto mp2 = mp;
  mp2.deflection = mp.deflection + mp.hbar_omega * (t2 - t1) / kHbar;
  mp2.beta = mp.beta * t1 / t2;
  const auto f1 = spectra::SpinPairFactor::continuum(mp.kernel(1e-4));
  const auto f2 = spectra::SpinPairFactor::continuum(mp2.kernel(1e-4));
  for (double deg = 2.0; deg < 180.0; deg += 13.0) {
    const double th = deg_to_rad(deg);
    const double a = power_spectrum(mp, f1, t1, th);
    const double b = power_spectrum(mp2, f2, t2, th);
    CHECK(std::abs(a - b) < 1e-9 * diag_power(mp, th));
  }
}

TEST_CASE("property: angle enters through cos theta only") {
  const auto mp = reference_model();
  const auto f = spectra::SpinPairFactor::continuum(mp.kernel(1e-4));
  const SpinPairMatrix m(mp, f, 20.0);
  for (double deg : {15.0, 80.0, 165.0}) {
    const double th = deg_to_rad(deg);
    specfun::AngleSample mirrored{-th, std::cos(-th)};
    const double a = m.quadratic(legendre_ladder(mp, mirrored)).real();
    CHECK(a == doctest::Approx(power_spectrum(mp, f, 20.0, th)).epsilon(1e-13));
  }
}

TEST_CASE("packet maximum follows Phi - omega t at short times") {
  const auto mp = reference_model();
  const auto f = spectra::SpinPairFactor::continuum(mp.kernel(1e-4));
  const auto thetas = default_theta_grid();
  const std::vector<double> times{5.0, 10.0};
  const auto field = scaled_distribution(mp, f, times, thetas);
  const double step = thetas[1] - thetas[0];
  for (std::size_t it = 0; it < times.size(); ++it) {
    const auto row = field.row(it);
    const auto k = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    const double expect = mp.deflection - mp.hbar_omega * times[it] / kHbar;
    CHECK(std::abs(thetas[k] - expect) <= step);
  }
}

TEST_CASE("property: long-time branch rows approach the reference profile") {
  const auto mp = reference_model();
  const auto f = spectra::SpinPairFactor::continuum(mp.kernel(1e-4));
  const double t = 3.0 * kHbar / mp.beta;
  std::vector<double> thetas;
  for (double deg = 30.0; deg <= 150.0; deg += 1.0) thetas.push_back(deg_to_rad(deg));
  const std::vector<double> times{t};
  const auto nf = nearfar_distribution(mp, f, times, thetas, TravelingMode::asymptotic);
  for (Branch b : {Branch::plus, Branch::minus}) {
    const auto& field = b == Branch::plus ? nf.plus : nf.minus;
    std::vector<double> prof;
    for (double th : thetas) prof.push_back(analysis::long_time_profile(t, th, b, mp));
    const double mf = std::accumulate(field.values.begin(), field.values.end(), 0.0) / thetas.size();
    const double mpf = std::accumulate(prof.begin(), prof.end(), 0.0) / thetas.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < thetas.size(); ++i)
      worst = std::max(worst, std::abs(field.values[i] / mf - prof[i] / mpf) / (prof[i] / mpf));
    CHECK(worst < 0.10);
  }
}

TEST_CASE("scaled distribution is independent of the thread count") {
  const auto mp = reference_model();
  const auto f = spectra::SpinPairFactor::continuum(mp.kernel(1e-4));
  const auto thetas = default_theta_grid(181);
  const std::vector<double> times{1.0, 2.0, 3.0, 4.0, 5.0};
  const auto a = scaled_distribution(mp, f, times, thetas, 1);
  const auto b = scaled_distribution(mp, f, times, thetas, 3);
  CHECK(a.values == b.values);
}

TEST_CASE("default grid avoids the poles") {
  const auto g = default_theta_grid();
  REQUIRE(g.size() == 721);
  CHECK(g.front() > 0.0);
  CHECK(g.back() < kPi);
  CHECK(rad_to_deg(g[1] - g[0]) == doctest::Approx(180.0 / 721));
  CHECK_THROWS_AS(default_theta_grid(1), std::domain_error);
}

TEST_CASE("Monte Carlo ensemble") {
  auto mp = reference_model();
  const auto r = mp.spin_range();
  const auto set = spectra::make_spectrum_set(spectra::SpectrumKind::goe, r.lo, r.hi, 40, 1e-4, 8);

  // determinism and the t = 0 structure of one realization
  const cplx a1 = monte_carlo_amplitude(mp, set, 5, 3, 0.0, 1.0);
  CHECK(a1 == monte_carlo_amplitude(mp, set, 5, 3, 0.0, 1.0));
  std::mt19937_64 rng(spectra::derive_seed(5, 3));
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto amps = spin_amplitudes(mp);
  cplx direct(0.0, 0.0);
  for (int j = r.lo; j <= r.hi; ++j) {
    double csum = 0.0;
    for (int k = 0; k < set.level_count; ++k) csum += normal(rng);
    direct += amps[j - r.lo] * static_cast<double>(oracle::legendre_p_fourier(j, std::cos(1.0))) *
              std::polar(1.0, mp.deflection * j) * csum;
  }
  direct /= std::sqrt(static_cast<double>(set.level_count));
  CHECK(std::abs(a1 - direct) < 1e-9 * std::abs(direct));

  const auto est = monte_carlo_power(mp, set, 11, 400, 20.0, deg_to_rad(60.0));
  CHECK(est.realizations == 400);
  CHECK(est.standard_error > 0.0);
  const auto one = monte_carlo_power(mp, set, 11, 1, 20.0, deg_to_rad(60.0));
  CHECK(one.standard_error == 0.0);
  CHECK_THROWS_AS(monte_carlo_power(mp, set, 11, 0, 20.0, 1.0), std::domain_error);
}
