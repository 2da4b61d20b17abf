#pragma once

#include <vector>

#include "wpc/circle_map.hpp"
#include "wpc/holo.hpp"

namespace wpc {

/// Basis tag for matrices in the normalized Dirichlet basis ê_k = z^k / sqrt(k), k >= 1.
inline constexpr const char* kDirichletBasis = "AD0: z^k/sqrt(k), k >= 1";

/// Fourier coefficients of u ∘ h on the grid of h (max_mode N/2 - 1).
/// Throws AliasingError when more than 10% of the energy sits above N/4.
FourierSeries pullback_apply(const CircleMap& h, const FourierSeries& u);

/// Analytic and anti-analytic parts of the pull-back as K x K matrices in the
/// normalized Dirichlet basis. Column k - 1 is built from the spectrum c_n of
/// e^{ikφ}: P+ holds sqrt(m/k) c_m, P- holds sqrt(m/k) c_{-m}, m = 1..K.
struct PmMatrices {
  OperatorMatrix plus, minus;
  /// Per column: ||P+ ê_k||^2 and ||P- ê_k||^2 over the full grid spectrum.
  std::vector<Real> plus_energy, minus_energy;
  /// Per column: relative Dirichlet energy of e^{ikφ} above mode N/4.
  std::vector<Real> tail;
  /// Columns whose tail is below the aliasing threshold.
  std::vector<bool> scored;
};

/// Columns with a tail at or above this are flagged and not scored.
inline constexpr Real kAliasingThreshold = 1e-8;

PmMatrices pm_matrices(const CircleMap& h, long k);

/// max over scored columns k <= K/2 of | ||P+ ê_k||^2 - 1 - ||P- ê_k||^2 |.
Real energy_identity_residual(const CircleMap& h, long k);
Real energy_identity_residual(const PmMatrices& pm);

/// sup over the grid of |(H P_h + P_h H)φ + i(2 P+_h φ - (P+_h φ)(0) - φ(0))|.
Real commutator_identity_residual(const CircleMap& h, const PowerSeries& phi);

/// Max-column norm of P+_h G_f - J P-_h J with J the entrywise conjugation.
/// Requires (f, h) compatible: f ∘ h on the circle may carry no modes above 1.
Real grunsky_relation_residual(const CircleMap& h, const PowerSeries& log_fp, long k);

/// sup over the grid of |log h' - (log g' - (log f') ∘ h)| after removing a
/// 2πi multiple fixed at θ = 0. Throws BranchError on a 2π jump between samples.
Real welding_identity_residual(const CircleMap& h, const PowerSeries& log_fp, const PowerSeries& log_gp);

/// Least-squares solution u (real, |n| <= K, mean zero) of
/// (H P_h + P_h H) u = v in the H^{1/2} seminorm.
struct CommutatorSolve {
  FourierSeries u{0};
  Real u_norm = 0;    // ||u||_{H^{1/2}}
  Real v_norm = 0;    // ||v||_{H^{1/2}}
  Real residual = 0;  // ||(H P_h + P_h H) u - v||_{H^{1/2}} / ||v||
};
CommutatorSolve commutator_inverse_probe(const CircleMap& h, const FourierSeries& v, long k);

}  // namespace wpc
