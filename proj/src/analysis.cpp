#include "rotwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rotwave/constants.hpp"

namespace rotwave::analysis {

double qct_time(double beta, double spin_window, double prefactor) {
  if (!(beta > 0.0)) throw std::domain_error("qct_time: beta must be positive");
  if (!(spin_window > 0.0)) throw std::domain_error("qct_time: d must be positive");
  if (!(prefactor > 0.0)) throw std::domain_error("qct_time: prefactor must be positive");
  return prefactor * kHbar / (beta * spin_window);
}

double rotation_period(double hbar_omega) {
  if (!(hbar_omega > 0.0)) throw std::domain_error("rotation_period: hbar_omega must be positive");
  return 2.0 * kPi * kHbar / hbar_omega;
}

double fringe_spacing_estimate(double spin_mean) {
  if (spin_mean < 1.0 || spin_mean != std::floor(spin_mean))
    throw std::domain_error("fringe_spacing_estimate: I must be an integer >= 1");
  return kPi / (spin_mean + 0.5);
}

double long_time_profile(double t, double theta, specfun::Branch branch,
                         const wavepacket::ModelParams& mp) {
  if (t < 0.0) throw std::domain_error("long_time_profile: t < 0");
  const double phase = mp.deflection + specfun::branch_sign(branch) * theta - mp.hbar_omega * t / kHbar;
  return std::exp(2.0 * std::cos(phase) * std::exp(-mp.beta * t / kHbar));
}

FringeReport fringe_visibility(std::span<const double> thetas, std::span<const double> row,
                               AngleWindow window) {
  if (thetas.size() != row.size()) throw std::invalid_argument("fringe_visibility: size mismatch");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < thetas.size(); ++i)
    if (thetas[i] >= window.lo && thetas[i] <= window.hi) idx.push_back(i);
  if (idx.empty()) throw std::domain_error("fringe_visibility: window outside grid");

  FringeReport rep;
  rep.window = window;
  double lo = row[idx.front()], hi = lo, sum = 0.0;
  for (auto i : idx) {
    lo = std::min(lo, row[i]);
    hi = std::max(hi, row[i]);
    sum += row[i];
  }
  rep.mean_level = sum / static_cast<double>(idx.size());
  rep.global_contrast = (hi + lo) != 0.0 ? (hi - lo) / (hi + lo) : 0.0;

  // Window indices are contiguous on a sorted grid.
  const std::size_t first = idx.front(), last = idx.back();
  auto smooth = [&](std::size_t i) {
    if (i == 0 || i + 1 >= row.size()) return row[i];
    return (row[i - 1] + row[i] + row[i + 1]) / 3.0;
  };

  struct Extremum {
    std::size_t index;
    bool is_max;
  };
  std::vector<Extremum> ext;
  for (std::size_t i = std::max<std::size_t>(first, 2); i <= last && i + 2 < row.size(); ++i) {
    const double c = smooth(i), l = smooth(i - 1), r = smooth(i + 1);
    if (c > l && c > r) ext.push_back({i, true});
    else if (c < l && c < r) ext.push_back({i, false});
  }
  rep.n_extrema = static_cast<int>(ext.size());
  for (const auto& e : ext) rep.extrema_positions.push_back(thetas[e.index]);
  rep.meaningful = ext.size() >= 3;

  double vis_sum = 0.0;
  int pairs = 0;
  for (std::size_t k = 0; k + 1 < ext.size(); ++k) {
    if (ext[k].is_max == ext[k + 1].is_max) continue;
    const double mx = row[ext[k].is_max ? ext[k].index : ext[k + 1].index];
    const double mn = row[ext[k].is_max ? ext[k + 1].index : ext[k].index];
    if (mx + mn <= 0.0) continue;
    vis_sum += (mx - mn) / (mx + mn);
    ++pairs;
  }
  rep.visibility = pairs ? std::clamp(vis_sum / pairs, 0.0, 1.0) : 0.0;
  return rep;
}

PacketFit packet_fit(std::span<const double> thetas, std::span<const double> row) {
  if (thetas.size() != row.size() || row.size() < 3)
    throw std::invalid_argument("packet_fit: need matching rows of at least 3 samples");
  const auto peak_it = std::max_element(row.begin(), row.end());
  const double peak = *peak_it;
  const double floor_v = *std::min_element(row.begin(), row.end());
  if (!(peak > 0.0) || peak == floor_v) throw std::domain_error("packet_fit: empty or flat row");

  const std::size_t peak_i = static_cast<std::size_t>(peak_it - row.begin());
  const double half = 0.5 * peak;
  std::size_t a = peak_i, b = peak_i;
  while (a > 0 && row[a - 1] >= half) --a;
  while (b + 1 < row.size() && row[b + 1] >= half) ++b;

  double w = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = a; i <= b; ++i) {
    w += row[i];
    sx += row[i] * std::cos(thetas[i]);
    sy += row[i] * std::sin(thetas[i]);
  }
  PacketFit fit;
  fit.center = std::atan2(sy, sx);
  if (fit.center < 0.0) fit.center += 2.0 * kPi;

  double m2 = 0.0;
  for (std::size_t i = a; i <= b; ++i) {
    const double dtheta = std::remainder(thetas[i] - fit.center, 2.0 * kPi);
    m2 += row[i] * dtheta * dtheta;
  }
  m2 /= w;
  // Second moment of a Gaussian truncated at half maximum, in units of sigma^2.
  const double cut = std::sqrt(2.0 * std::log(2.0));
  const double inside = std::erf(cut / std::sqrt(2.0));
  const double truncated = 1.0 - 2.0 * cut * std::exp(-0.5 * cut * cut) / std::sqrt(2.0 * kPi) / inside;
  fit.width_sigma = std::sqrt(m2 / truncated);
  if (!(fit.width_sigma > 0.0)) throw std::domain_error("packet_fit: single-sample lobe");

  const double total = std::accumulate(row.begin(), row.end(), 0.0);
  fit.goodness = total > 0.0 ? (w / total) / inside : 0.0;
  return fit;
}

PacketFit branch_packet(const wavepacket::ModelParams& mp, const spectra::SpinPairFactor& factor,
                        double t, std::span<const double> thetas, specfun::Branch branch,
                        wavepacket::TravelingMode mode) {
  const std::vector<double> times{t};
  const auto fields = wavepacket::nearfar_distribution(mp, factor, times, thetas, mode);
  const auto& field = branch == specfun::Branch::plus ? fields.plus : fields.minus;
  return packet_fit(thetas, field.values);
}

}  // namespace rotwave::analysis
