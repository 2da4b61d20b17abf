#pragma once

#include <limits>
#include <string>
#include <vector>

#include "wpc/profile.hpp"
#include "wpc/types.hpp"

namespace wpc {

/// Truncated power series c_0 + c_1 w + ... + c_K w^K.
///
/// On the disk w = z; on the exterior w = 1/z, so a function holomorphic
/// near ∞ is stored through its expansion in 1/z.
class PowerSeries {
 public:
  enum class Domain { kDisk, kExterior };

  explicit PowerSeries(ComplexVector coefficients, Domain domain = Domain::kDisk);
  /// Zero series with K + 1 coefficients.
  static PowerSeries zero(long max_degree, Domain domain = Domain::kDisk);

  long truncation() const { return coeffs_.size() - 1; }
  Domain domain() const { return domain_; }
  const ComplexVector& coefficients() const { return coeffs_; }
  Complex operator[](long n) const { return n <= truncation() ? coeffs_[n] : Complex(0); }
  Complex& operator[](long n) { return coeffs_[n]; }

  Complex evaluate(Complex z) const;
  /// d/dw; the truncation order drops to K - 1.
  PowerSeries derivative() const;
  /// Antiderivative with zero constant term.
  PowerSeries integral() const;
  PowerSeries truncated(long max_degree) const;

  /// Estimate of Σ_{n>K} |c_n| r^n by geometric extrapolation of the last
  /// coefficients; +inf when they do not decay.
  Real tail_bound(Real r) const;

 private:
  ComplexVector coeffs_;
  Domain domain_;
};

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator-(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator*(Complex s, const PowerSeries& a);
/// Cauchy product truncated at the smaller order.
PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);

/// exp of a series, truncated at its order.
PowerSeries series_exp(const PowerSeries& a);
/// log of a series with a_0 != 0 (principal branch at the origin).
PowerSeries series_log(const PowerSeries& a);

/// N_f = (log f')'.
PowerSeries pre_schwarzian(const PowerSeries& log_fp);
/// S_f = N_f' - N_f^2 / 2.
PowerSeries schwarzian(const PowerSeries& log_fp);
/// Λ(φ) = φ'' - (φ')^2 / 2.
PowerSeries lambda_map(const PowerSeries& phi);

/// Coefficients of f with f(0) = 0 and f' = exp(log f'); requires log f'(0) = 0.
PowerSeries from_log_derivative(const PowerSeries& log_fp);

/// sup (1 - |z|^2)^2 |φ(z)|.
Real norm_b2(const PowerSeries& phi);
/// sup (1 - |z|^2) |φ'(z)|.
Real norm_bloch(const PowerSeries& phi);
/// ((1/π) ∬ |φ|^2 (1 - |z|^2)^2)^{1/2} = (Σ |c_n|^2 · 2/((n+1)(n+2)(n+3)))^{1/2}.
Real norm_script_b(const PowerSeries& phi);
/// ((1/π) ∬ |φ'|^2)^{1/2} = (Σ n |c_n|^2)^{1/2}.
Real norm_ad(const PowerSeries& phi);

/// Location and value of sup_Δ (1 - |z|^2)^k |φ(z)|.
struct WeightedSup {
  Real value = 0;
  Complex at = 0;
};
WeightedSup weighted_sup(const PowerSeries& phi, int weight_power);

/// Truncated operator in an orthonormal monomial basis.
struct OperatorMatrix {
  ComplexMatrix matrix;
  /// Human-readable basis tag, e.g. "A2: sqrt(n+1) z^n, n >= 0".
  std::string basis;
  /// P_plus, P_minus, grunsky, grunsky_conjugated or custom.
  std::string label = "custom";
  std::vector<std::string> warnings;

  Real operator_norm() const;
};

/// Largest singular value.
Real operator_norm(const ComplexMatrix& m);

/// U(f, ζ, z) = f'(ζ) f'(z) / (f(ζ) - f(z))^2 - 1/(ζ - z)^2, with a local
/// expansion in ζ - z near the diagonal. U(f, z, z) = S_f(z) / 6.
Complex grunsky_kernel(const PowerSeries& log_fp, Complex zeta, Complex z);
/// Same kernel from the coefficients of f itself (f(0) = 0, f'(0) = 1).
Complex grunsky_kernel_of_map(const PowerSeries& f, Complex zeta, Complex z);

struct GrunskyOptions {
  Real inner_radius = 0.90;
  Real outer_radius = 0.95;
  /// Samples per circle; 0 picks max(256, 4K) rounded up to a power of two.
  long samples = 0;
};

/// K x K matrix of the Grunsky operator in the basis e_n = sqrt(n+1) z^n,
/// G[k][m] = u_{km} / sqrt((k+1)(m+1)) with U = Σ u_{km} ζ^k z^m. The
/// coefficients come from a two-dimensional DFT of U sampled with ζ and z on
/// circles of the two radii.
OperatorMatrix grunsky_matrix(const PowerSeries& log_fp, long k, const GrunskyOptions& options = {});

/// Polar grid on {r_min < |z| < r_max} in the exterior of the disk. Radial
/// nodes are Gauss–Legendre in t = 1/|z|, angular nodes are uniform.
struct PolarGrid {
  int radial = 96;
  int angular = 256;
  Real r_min = 1;
  Real r_max = std::numeric_limits<Real>::infinity();
};

struct BeltramiSample {
  RealVector radii;
  RealVector angles;
  /// Quadrature weights in t = 1/ρ for ∫ dt.
  RealVector radial_weights;
  /// values(i, j) = μ(radii[i] e^{i·angles[j]}).
  ComplexMatrix values;

  Real sup() const { return values.cwiseAbs().maxCoeff(); }
};

template <typename F>
BeltramiSample sample_beltrami(const PolarGrid& grid, F&& mu);

/// μ(z) = -½ (|z|^2 - 1)^2 S_f(1/z̄) z̄^{-4} on the grid. Throws
/// PreconditionError when norm_b2(S_f) >= threshold (|μ| would reach 1).
BeltramiSample ahlfors_weil_mu(const PowerSeries& schwarzian, const PolarGrid& grid = {},
                               Real threshold = 2.0);

struct WpNorm {
  Real sup = 0;
  /// (1/π) ∬ |μ|^2 / (|z|^2 - 1)^2.
  Real integral = 0;
  Real value = 0;  // sup + sqrt(integral)
  /// integral with every 8th, 4th, 2nd and every angle.
  DyadicProfile profile;
};

WpNorm wp_norm(const BeltramiSample& mu);

// ---------------------------------------------------------------------------

struct GaussNodes {
  RealVector t, w;
};
GaussNodes radial_nodes(const PolarGrid& grid);

template <typename F>
BeltramiSample sample_beltrami(const PolarGrid& grid, F&& mu) {
  const GaussNodes g = radial_nodes(grid);
  BeltramiSample s;
  s.radii = g.t.cwiseInverse();
  s.radial_weights = g.w;
  s.angles.resize(grid.angular);
  for (int j = 0; j < grid.angular; ++j) s.angles[j] = kTwoPi * j / grid.angular;
  s.values.resize(s.radii.size(), grid.angular);
  for (Eigen::Index i = 0; i < s.radii.size(); ++i)
    for (int j = 0; j < grid.angular; ++j) s.values(i, j) = mu(std::polar(s.radii[i], s.angles[j]));
  if (!(s.sup() < 1)) throw PreconditionError("Beltrami coefficient reaches |μ| >= 1");
  return s;
}

}  // namespace wpc
