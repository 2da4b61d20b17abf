#pragma once

#include "wpc/circle_map.hpp"
#include "wpc/holo.hpp"

namespace wpc {

/// φ'(θ) = c_α((log α - log sin(θ/2))^2 + (π - θ)^2/4), α > 1, with c_α
/// fixed by φ(2π) - φ(0) = 2π. The derivative blows up like log^2 at θ = 0,
/// so derivative data lives on cell centres.
class CounterexampleForm final : public ClosedForm {
 public:
  explicit CounterexampleForm(Real alpha, long table_cells = 2048);
  Real lift(Real theta) const override;
  Real lift_derivative(Real theta) const override;
  std::string family() const override { return "wp_counterexample"; }
  std::vector<std::pair<std::string, Real>> params() const override { return {{"alpha", alpha_}}; }
  Sampling derivative_sampling() const override { return Sampling::kCellCenters; }
  RealVector lift_on_nodes(long n) const override;

  Real alpha() const { return alpha_; }
  Real c_alpha() const { return c_; }
  /// The bracket (log α - log sin(θ/2))^2 + (π - θ)^2/4 for θ in (0, 2π).
  Real density(Real theta) const;

 private:
  // ∫_0^θ density for θ in [0, π].
  Real primitive(Real theta) const;

  Real alpha_;
  Real c_ = 1;
  Real cell_;
  RealVector table_;  // primitive at k·cell_, k = 0..cells
};

/// c_α from a single tanh–sinh quadrature of the density over (0, π).
Real counterexample_constant(Real alpha);

struct Counterexample {
  CircleMap map;
  DerivativeData derivative;
  Real c_alpha = 0;
};
Counterexample build_counterexample(Real alpha, long n);

/// ∬_{|z-1|<1} |g'|^2 for g(z) = log log(2α/(1-z)), with the bound 2π/log(2α).
struct GIntegral {
  Real value = 0;
  Real bound = 0;
};
GIntegral counterexample_g_integral(Real alpha, int nodes = 48);

/// φ(θ) = θ - sin θ.
CircleMap build_sine_flat(long n);

/// F_α = (∂_α h_α) ∘ h_α^{-1} on the nodes ψ_j = 2πj/N for the counterexample
/// family, by central differences in α.
struct FlowField {
  GridFunction field{ComplexVector::Zero(8)};
  /// F / (i z): the tangential speed, real.
  GridFunction speed{ComplexVector::Zero(8)};
  Real step = 0;
  /// |F_d - F_{d/2}| * 4/3, the Richardson estimate of the remaining error.
  Real richardson_error = 0;
  /// |F_d - F_{d/2}| / |F_{d/2} - F_{d/4}|; near 4 for a converged central difference.
  Real richardson_ratio = 0;
  /// max over |F| > 0 of | |Re(conj(iz) F)| / |F| - 1 |.
  Real tangential_defect = 0;
  DyadicProfile field_h32;  // partial sums of ||speed||^2_{H^{3/2}}
  DyadicProfile map_h32;    // partial sums of ||e^{iφ_α}||^2_{H^{3/2}}
};
/// d_alpha <= 0 selects 1e-3 (α - 1). Throws PreconditionError when the
/// Richardson ratio shows the difference quotient has not converged.
FlowField flow_field(Real alpha, Real d_alpha, long n);

/// Normalized decomposition h = f^{-1} ∘ g for a disk automorphism h.
struct WeldingTriple {
  CircleMap h = CircleMap::identity(8);
  PowerSeries log_fp{ComplexVector::Zero(1)};
  PowerSeries log_gp{ComplexVector::Zero(1), PowerSeries::Domain::kExterior};
  /// Pole of f, p = h(∞) = -e^{iβ}/ā; infinite for a = 0.
  Complex pole;
  Complex a;
  Real beta = 0;
};
/// f(z) = z/(1 - z/p) and g = f ∘ h, which is affine with g' = e^{iβ}/(1 - |a|^2).
/// For a = 0: f = z and g is the rotation.
WeldingTriple mobius_welding_triple(Complex a, Real beta, long n, long truncation = 64);

}  // namespace wpc
