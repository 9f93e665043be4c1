#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rotwave/analysis.hpp"
#include "rotwave/constants.hpp"

using namespace rotwave;
using namespace rotwave::analysis;
using wavepacket::ModelParams;

namespace {

std::vector<double> grid_deg(double lo, double hi, double step) {
  std::vector<double> g;
  for (double d = lo; d <= hi + 1e-9; d += step) g.push_back(deg_to_rad(d));
  return g;
}

ModelParams reference_model(double d = 2.0) {
  ModelParams mp;
  mp.spin_window = d;
  mp.deflection = deg_to_rad(135.0);
  return mp;
}

double visibility_at(const ModelParams& mp, double t) {
  const auto f = spectra::SpinPairFactor::continuum(mp.kernel(1e-4));
  const auto thetas = wavepacket::default_theta_grid();
  const std::vector<double> times{t};
  const auto field = wavepacket::scaled_distribution(mp, f, times, thetas);
  return fringe_visibility(thetas, field.row(0), {deg_to_rad(2.0), deg_to_rad(60.0)}).visibility;
}

}  // namespace

TEST_CASE("time scales") {
  CHECK(qct_time(0.003, 2.0) == doctest::Approx(219.40).epsilon(1e-4));
  CHECK(qct_time(0.003, 5.0) == doctest::Approx(87.76).epsilon(1e-4));
  CHECK(qct_time(0.003, 10.0) == doctest::Approx(43.88).epsilon(1e-4));
  CHECK(qct_time(0.003, 2.0, 1.0) == doctest::Approx(109.70).epsilon(1e-4));
  CHECK_THROWS_AS(qct_time(0.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(qct_time(0.003, 0.0), std::domain_error);

  CHECK(rotation_period(kHbar) == doctest::Approx(2.0 * kPi));
  CHECK(rotation_period(0.09) == doctest::Approx(0.5 * rotation_period(0.045)));
  CHECK(rotation_period(0.045) == doctest::Approx(2.0 * kPi * kHbar / 0.045).epsilon(1e-14));
  CHECK_THROWS_AS(rotation_period(0.0), std::domain_error);
}

TEST_CASE("fringe spacing estimate") {
  CHECK(fringe_spacing_estimate(18.0) == doctest::Approx(kPi / 18.5).epsilon(1e-14));
  CHECK(rad_to_deg(fringe_spacing_estimate(18.0)) == doctest::Approx(9.73).epsilon(1e-3));
  CHECK(fringe_spacing_estimate(18.0) / fringe_spacing_estimate(37.0) ==
        doctest::Approx(37.5 / 18.5));
  CHECK_THROWS_AS(fringe_spacing_estimate(35.5), std::domain_error);
  CHECK_THROWS_AS(fringe_spacing_estimate(0.0), std::domain_error);
}

TEST_CASE("fringe spacing matches simulated maxima") {
  const auto mp = reference_model();
  const auto f = spectra::SpinPairFactor::continuum(mp.kernel(1e-4));
  const auto thetas = wavepacket::default_theta_grid();
  const std::vector<double> times{0.375 * rotation_period(mp.hbar_omega)};
  const auto field = wavepacket::scaled_distribution(mp, f, times, thetas);
  const auto rep = fringe_visibility(thetas, field.row(0), {deg_to_rad(5.0), deg_to_rad(45.0)});
  std::vector<double> maxima;
  const auto row = field.row(0);
  for (double pos : rep.extrema_positions) {
    const auto i = static_cast<std::size_t>(std::lround(rad_to_deg(pos) * 721 / 180.0 - 0.5));
    if (row[i] > rep.mean_level) maxima.push_back(pos);
  }
  REQUIRE(maxima.size() >= 3);
  const double spacing = (maxima.back() - maxima.front()) / (maxima.size() - 1);
  CHECK(spacing == doctest::Approx(fringe_spacing_estimate(18.0)).epsilon(0.10));
}

TEST_CASE("visibility of synthetic rows") {
  const auto th = grid_deg(0.25, 179.75, 0.25);
  std::vector<double> flat(th.size(), 2.0);
  const auto w = AngleWindow{deg_to_rad(2.0), deg_to_rad(60.0)};
  const auto r0 = fringe_visibility(th, flat, w);
  CHECK(r0.visibility == 0.0);
  CHECK(r0.n_extrema == 0);
  CHECK_FALSE(r0.meaningful);

  std::vector<double> fr(th.size());
  for (std::size_t i = 0; i < th.size(); ++i) fr[i] = 1.0 + 0.5 * std::cos(40.0 * th[i]);
  const auto r1 = fringe_visibility(th, fr, w);
  CHECK(r1.visibility == doctest::Approx(0.5).epsilon(0.02));
  CHECK(r1.meaningful);
  CHECK(r1.global_contrast == doctest::Approx(0.5).epsilon(0.02));
  CHECK(r1.mean_level == doctest::Approx(1.0).epsilon(0.02));

  CHECK_THROWS_AS(fringe_visibility(th, fr, {deg_to_rad(181.0), deg_to_rad(190.0)}), std::domain_error);
}

TEST_CASE("packet fit of a synthetic Gaussian") {
  const auto th = grid_deg(0.25, 179.75, 0.25);
  std::vector<double> row(th.size());
  for (std::size_t i = 0; i < th.size(); ++i) row[i] = std::exp(-0.5 * std::pow((th[i] - 1.0) / 0.25, 2));
  const auto fit = packet_fit(th, row);
  CHECK(std::abs(fit.center - 1.0) < deg_to_rad(0.25));
  CHECK(fit.width_sigma == doctest::Approx(0.25).epsilon(0.05));
  CHECK(fit.goodness == doctest::Approx(1.0).epsilon(0.05));
  std::vector<double> flat(th.size(), 1.0);
  CHECK_THROWS_AS(packet_fit(th, flat), std::domain_error);
}

TEST_CASE("near-side packet width and drift") {
  const auto mp = reference_model();
  const auto f = spectra::SpinPairFactor::continuum(mp.kernel(1e-4));
  const auto thetas = wavepacket::default_theta_grid();
  const double t = 0.125 * rotation_period(mp.hbar_omega);
  const auto fit = branch_packet(mp, f, t, thetas);
  CHECK(fit.width_sigma == doctest::Approx(0.5).epsilon(0.25));
  const double expect = mp.deflection - mp.hbar_omega * t / kHbar;
  CHECK(std::abs(fit.center - expect) < deg_to_rad(1.0));
  const auto fit0 = branch_packet(mp, f, 0.0, thetas);
  CHECK(std::abs(fit0.center - mp.deflection) < deg_to_rad(1.0));
}

TEST_CASE("property: packet width stays constant up to a quarter of the qct time") {
  const auto mp = reference_model();
  const auto f = spectra::SpinPairFactor::continuum(mp.kernel(1e-4));
  const auto thetas = wavepacket::default_theta_grid();
  const double w0 = branch_packet(mp, f, 0.0, thetas).width_sigma;
  const double t_end = 0.1 * qct_time(mp.beta, mp.spin_window);
  for (int k = 1; k <= 4; ++k) {
    const double w = branch_packet(mp, f, t_end * k / 4.0, thetas).width_sigma;
    CHECK(std::abs(w - w0) / w0 < 0.15);
  }
}

TEST_CASE("property: fringe visibility falls with d and with beta") {
  const double t = 0.375 * rotation_period(0.045);
  const double v2 = visibility_at(reference_model(2.0), t);
  const double v5 = visibility_at(reference_model(5.0), t);
  const double v10 = visibility_at(reference_model(10.0), t);
  CHECK(v2 > v5);
  CHECK(v5 > v10);
  CHECK(v10 <= 0.4 * v2);
  double previous = 2.0;
  for (double beta : {0.001, 0.003, 0.006, 0.012}) {
    auto mp = reference_model();
    mp.beta = beta;
    const double v = visibility_at(mp, t);
    CHECK(v < previous);
    previous = v;
  }
}

TEST_CASE("property: the incoherent branch sum carries no fringes") {
  const auto mp = reference_model();
  const auto f = spectra::SpinPairFactor::continuum(mp.kernel(1e-4));
  const auto thetas = wavepacket::default_theta_grid();
  const double T = rotation_period(mp.hbar_omega);
  const std::vector<double> times{0.125 * T, 0.25 * T, 0.375 * T};
  const auto nf = wavepacket::nearfar_distribution(mp, f, times, thetas);
  for (std::size_t it = 0; it < times.size(); ++it) {
    const auto rep = fringe_visibility(thetas, nf.classical.row(it), {deg_to_rad(2.0), deg_to_rad(60.0)});
    CHECK(rep.visibility < 0.1);
  }
}

TEST_CASE("long-time profile") {
  const auto mp = reference_model();
  CHECK(long_time_profile(1e6, 1.0, specfun::Branch::minus, mp) == doctest::Approx(1.0));
  const double t = 20.0;
  const double th = mp.deflection - mp.hbar_omega * t / kHbar;
  const double peak = long_time_profile(t, th, specfun::Branch::minus, mp);
  CHECK(peak == doctest::Approx(std::exp(2.0 * std::exp(-mp.beta * t / kHbar))));
  CHECK(long_time_profile(t, th + 0.3, specfun::Branch::minus, mp) < peak);
  CHECK_THROWS_AS(long_time_profile(-1.0, 1.0, specfun::Branch::plus, mp), std::domain_error);
}
