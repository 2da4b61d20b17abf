#pragma once

#include <string>
#include <vector>

#include "wpc/circle_map.hpp"
#include "wpc/profile.hpp"

namespace wpc {

/// Largest symmetrized ratio max(r, 1/r), r = |h(I1)| / |h(I2)|, over all
/// pairs of adjacent arcs of ℓ grid cells each, for ℓ = N/4, N/8, ..., 1.
/// Levels hold ℓ in cells.
DyadicProfile quasisymmetry_profile(const CircleMap& h);
/// Per scale, the largest |ratio - 1| over both orientations; this is the
/// quasisymmetry profile minus one.
DyadicProfile symmetric_profile(const CircleMap& h);
/// Max of the quasisymmetry profile over arcs of at least `min_cells` cells.
Real quasisymmetry_constant(const DyadicProfile& qs, long min_cells = 4);
/// (φ(2t) - φ(t)) / (φ(t) - φ(0)) for t = 2π/2^m, m = first..last, using the
/// closed form when present. Levels hold m.
DyadicProfile ratio_at_zero(const CircleMap& h, int first = 2, int last = 20);

/// Verdicts read the three finest scales of at least `min_cells` cells; finer
/// arcs only see a few grid positions. Quasisymmetric: yes when the ratio is
/// not growing there, no when it grows by more than half.
Trend quasisymmetric_verdict(const DyadicProfile& qs, long min_cells = 4);
/// Symmetric: yes when the deviation ends below tol with a non-increasing
/// tail; no when it stays above tol and shrinks by less than 10%.
Trend symmetric_verdict(const DyadicProfile& symmetric, Real tol = 0.05, long min_cells = 4);

struct MembershipReport {
  DyadicProfile qs_profile;
  DyadicProfile symmetric_profile;
  /// Dyadic partial sums of ||log φ'||^2_{H^{1/2}}.
  DyadicProfile h_half_profile;
  Real qs_constant = 1;
  Trend quasisymmetric = Trend::kInconclusive;
  Trend symmetric = Trend::kInconclusive;
  Trend wp_class = Trend::kInconclusive;
  bool degenerate = false;
  std::vector<std::string> reasons;
};

MembershipReport wp_membership(const CircleMap& h, const TrendThresholds& thresholds = {}, Real symmetric_tol = 0.05);

/// H^{3/2} of the boundary map against H^{1/2} of φ'; divergence of the
/// second should come with divergence of the first.
struct SmoothnessProbe {
  DyadicProfile h32_profile;          // partial sums of ||e^{iφ}||^2_{H^{3/2}}
  DyadicProfile phi_prime_profile;    // partial sums of ||φ'||^2_{H^{1/2}}
  DyadicProfile lipschitz_profile;    // sup φ' on grids of N/8, N/4, N/2, N cells
  Trend h32 = Trend::kInconclusive;
  Trend phi_prime = Trend::kInconclusive;
};
SmoothnessProbe smoothness_probe(const CircleMap& h, const TrendThresholds& thresholds = {});

struct MetricValue {
  Real value = 0;
  /// Squared-seminorm partial sums; value^2 is the last entry.
  DyadicProfile profile;
  Trend trend = Trend::kInconclusive;
};

/// ||log|h2'| - log|h1'|||_{H^{1/2}} on the finer grid of the two maps.
MetricValue metric_d(const CircleMap& h1, const CircleMap& h2, const TrendThresholds& thresholds = {});
/// ||log h2' - log h1'||_{H^{1/2}} with log h' = log φ' + i(φ(θ) - θ). The
/// branch of arg h' only moves the constant mode, which the seminorm ignores.
MetricValue metric_d_prime(const CircleMap& h1, const CircleMap& h2, const TrendThresholds& thresholds = {});

/// Convergence of log|h'| in H^{1/2} against log h' in H^{1/2}, with the
/// imaginary part φ - θ also tracked in H^1.
struct LogDerivativeCrosscheck {
  DyadicProfile log_abs;    // ||log|h'|||^2_{H^{1/2}} partial sums
  DyadicProfile log_full;   // ||log h'||^2_{H^{1/2}} partial sums
  DyadicProfile arg_h1;     // ||φ - θ||^2_{H^1} partial sums
  Trend log_abs_trend = Trend::kInconclusive;
  Trend log_full_trend = Trend::kInconclusive;
  Trend arg_trend = Trend::kInconclusive;
  bool agree = false;
};
LogDerivativeCrosscheck log_derivative_crosscheck(const CircleMap& h, const TrendThresholds& thresholds = {});

struct ContinuityReport {
  /// d'(g_n ∘ h_n, g ∘ h) and d'(h_n^{-1}, h^{-1}) along the sequence.
  std::vector<Real> composition, inversion;
  bool composition_monotone = false, inversion_monotone = false;
  bool composition_converged = false, inversion_converged = false;
  bool passed() const {
    return composition_monotone && inversion_monotone && composition_converged && inversion_converged;
  }
};
/// Constant sequences count as monotone; convergence means the final value is below tol.
ContinuityReport group_continuity_probe(const std::vector<CircleMap>& g_n, const std::vector<CircleMap>& h_n,
                                        const CircleMap& g, const CircleMap& h, Real tol = 1e-3);

}  // namespace wpc
