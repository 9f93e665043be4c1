#pragma once

// Diagnostics on computed angular fields: timescales, fringe contrast and
// rotational packet position/width.

#include <span>
#include <vector>

#include "rotwave/specfun.hpp"
#include "rotwave/wavepacket.hpp"

namespace rotwave::analysis {

/// prefactor * hbar / (beta d), fs.
double qct_time(double beta, double spin_window, double prefactor = 2.0);

/// 2 pi hbar / (hbar omega), fs.
double rotation_period(double hbar_omega);

/// pi / (I + 1/2): angular distance between adjacent fringes of two counter-
/// rotating packets. I must be a positive integer.
double fringe_spacing_estimate(double spin_mean);

/// Reference profile of a branch at long times, exp[2 cos(Phi +- theta - omega t) e^{-beta t/hbar}].
double long_time_profile(double t, double theta, specfun::Branch branch,
                         const wavepacket::ModelParams& mp);

struct AngleWindow {
  double lo = 0.0;  // radians
  double hi = 0.0;
};

struct FringeReport {
  AngleWindow window;
  double visibility = 0.0;        // mean pairwise (max-min)/(max+min) of adjacent extrema
  int n_extrema = 0;
  std::vector<double> extrema_positions;
  double mean_level = 0.0;
  double global_contrast = 0.0;   // (max-min)/(max+min) over the window
  bool meaningful = false;        // at least 3 extrema
};

/// Extrema are strict 3-point extrema of the 3-point moving average; values
/// are read from the raw row. Throws std::domain_error when the window does
/// not intersect the grid.
FringeReport fringe_visibility(std::span<const double> thetas, std::span<const double> row,
                               AngleWindow window);

struct PacketFit {
  double center = 0.0;       // radians
  double width_sigma = 0.0;  // radians
  double goodness = 0.0;     // 1 for an exact Gaussian lobe
};

/// Circular centre and Gaussian-equivalent width of the main lobe (samples
/// at or above half of the maximum, contiguous around the peak).
PacketFit packet_fit(std::span<const double> thetas, std::span<const double> row);

/// Packet fit on the scaled intensity P^(b)/P^(b)_diag of one branch. Minus
/// is the branch whose packet starts at theta = Phi and rotates towards 0.
PacketFit branch_packet(const wavepacket::ModelParams& mp, const spectra::SpinPairFactor& factor,
                        double t, std::span<const double> thetas,
                        specfun::Branch branch = specfun::Branch::minus,
                        wavepacket::TravelingMode mode = wavepacket::TravelingMode::asymptotic);

}  // namespace rotwave::analysis
