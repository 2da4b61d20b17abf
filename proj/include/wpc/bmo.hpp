#pragma once

#include <string_view>
#include <vector>

#include "wpc/fourier.hpp"

namespace wpc {

/// Mean oscillation (1/|I|)∫_I |u - u_I| at dyadic scales, coarse to fine.
struct OscillationProfile {
  std::vector<Real> scales;
  /// Max over a sliding family of intervals of each length.
  std::vector<Real> worst_oscillation;
  /// The statistic on the interval that starts at θ = 0 (or at the first
  /// cell centre for cell-centred grids).
  std::vector<Real> at_zero;

  /// Max of worst_oscillation over all scales.
  Real norm() const;
  std::size_t size() const { return scales.size(); }
};

/// Scales π, π/2, ... down to min_scale; positions advance by
/// min(N/64, L/2) samples for an interval of L samples.
/// Requires min_scale >= 4·(2π/N).
OscillationProfile bmo_norm_estimate(const GridFunction& u, Real min_scale);

/// Mean oscillation of u on the samples [start, start + length), indices mod N.
Real mean_oscillation(const GridFunction& u, long start, long length);

enum class VmoVerdict { kVanishing, kPersistent, kInconclusive };

std::string_view to_string(VmoVerdict v);

/// Vanishing when the finest worst oscillation is below tol and the last three
/// scales are non-increasing; persistent when the last three are all >= 2·tol.
/// Requires at least four scales.
VmoVerdict vmo_verdict(const OscillationProfile& p, Real tol);

struct TailReport {
  std::vector<Real> lambdas;
  /// |{t ∈ I : |u - u_I| >= λ}| / |I| for each λ.
  std::vector<Real> distribution;
  /// Least-squares fit distribution ≈ c1·exp(-rate·λ) over the nonzero tail.
  Real c1 = 0;
  Real rate = 0;
  /// Estimated BMO norm on the interval and c2 = rate·norm.
  Real bmo = 0;
  Real c2 = 0;

  struct Moment {
    Real p = 1;
    /// (1/|I|)∫_I (e^{|u - u_I|} - 1)^p on the grid.
    Real value = 0;
    /// p·c1·bmo / (c2 - p·bmo), or +inf when p·bmo >= c2.
    Real bound = 0;
  };
  std::vector<Moment> moments;
};

/// Tail of |u - u_I| on I = [start, start + length) (radians, within
/// [0, 2π]). λ runs over `levels` evenly spaced values up to the largest
/// deviation.
TailReport john_nirenberg_probe(const GridFunction& u, Real start, Real length,
                                const std::vector<Real>& ps = {1.0}, int levels = 40);

struct ExpNorm {
  Real value = 0;
  /// value on the N/8, N/4, N/2, N subgrids.
  DyadicProfile profile;
};

/// ((1/2π)∫ e^{p·u})^{1/p} by the grid mean. Requires real u and p >= 1.
ExpNorm exp_lp_norm(const GridFunction& u, Real p);

}  // namespace wpc
