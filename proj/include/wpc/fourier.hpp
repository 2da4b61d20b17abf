#pragma once

#include <concepts>
#include <functional>

#include "wpc/profile.hpp"
#include "wpc/types.hpp"

namespace wpc {

/// Where the samples of a grid function sit on the circle.
///
/// kNodes places sample j at 2πj/N. kCellCenters places it at 2π(j + 1/2)/N,
/// which keeps functions with a singularity at θ = 0 finite on the grid.
enum class Sampling { kNodes, kCellCenters };

/// Periodic samples u(θ_j) on a uniform grid of N = 2^m >= 8 points.
class GridFunction {
 public:
  GridFunction(ComplexVector values, Sampling sampling = Sampling::kNodes);

  template <typename F>
    requires std::invocable<F, Real>
  static GridFunction sample(long n, F&& f, Sampling sampling = Sampling::kNodes) {
    check_size(n);
    ComplexVector v(n);
    for (long j = 0; j < n; ++j) v[j] = Complex(f(node(n, j, sampling)));
    return GridFunction(std::move(v), sampling);
  }

  static GridFunction from_real(const RealVector& values, Sampling sampling = Sampling::kNodes);

  long size() const { return values_.size(); }
  Sampling sampling() const { return sampling_; }
  Real spacing() const { return kTwoPi / static_cast<Real>(size()); }
  Real theta(long j) const { return node(size(), j, sampling_); }
  const ComplexVector& values() const { return values_; }
  Complex operator[](long j) const { return values_[j]; }

  RealVector real() const { return values_.real(); }
  RealVector imag() const { return values_.imag(); }
  bool is_real(Real tol = 0) const;

  /// Samples moved k places: result[j] = u[j + k] (indices mod N).
  GridFunction shifted(long k) const;

  /// Every 2^levels-th sample. On a cell-centred grid the kept samples sit
  /// half a fine cell (not half a coarse cell) past the coarse nodes, so use
  /// this only for position-free statistics such as means and difference sums.
  GridFunction subsampled(int levels) const;

  static Real node(long n, long j, Sampling s) {
    const Real offset = s == Sampling::kCellCenters ? 0.5 : 0.0;
    return kTwoPi * (static_cast<Real>(j) + offset) / static_cast<Real>(n);
  }
  static void check_size(long n);

 private:
  ComplexVector values_;
  Sampling sampling_;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);

/// Fourier coefficients a_n, |n| <= K, stored at index n + K.
class FourierSeries {
 public:
  explicit FourierSeries(long max_mode);
  explicit FourierSeries(ComplexVector coefficients);

  long max_mode() const { return (coeffs_.size() - 1) / 2; }
  Complex operator[](long n) const { return coeffs_[n + max_mode()]; }
  Complex& operator[](long n) { return coeffs_[n + max_mode()]; }
  const ComplexVector& data() const { return coeffs_; }

  Complex evaluate(Real theta) const;
  /// Samples of the trigonometric polynomial on an n-point grid (requires K < n/2).
  GridFunction synthesize(long n, Sampling sampling = Sampling::kNodes) const;
  FourierSeries truncated(long max_mode) const;

 private:
  ComplexVector coeffs_;
};

FourierSeries operator-(const FourierSeries& a, const FourierSeries& b);

/// a_n = (1/N) Σ_j u_j e^{-inθ_j}; exact for trigonometric polynomials of degree < N/2.
/// Throws InvalidArgument when max_mode > N/2 - 1.
FourierSeries fourier_coefficients(const GridFunction& u, long max_mode);

/// Like fourier_coefficients but for a function that is smooth on the open
/// interval (0, 2π) and continuous across θ = 0 with jumps in its derivatives
/// there. The jumps are estimated from one-sided stencils and the
/// Euler–Maclaurin seam terms through h^4 are removed, leaving an O(h^6)
/// seam error instead of O(h^2).
FourierSeries fourier_coefficients_seam_corrected(const GridFunction& u, long max_mode);

/// Full resolvable spectrum, max_mode = N/2 - 1.
FourierSeries spectrum(const GridFunction& u);

/// (Σ_{0<|n|<=K} |n|^{2s} |a_n|^2)^{1/2}.
Real sobolev_seminorm(const FourierSeries& a, Real s);

/// Squared-seminorm partial sums at K = first, 2·first, ... up to max_mode
/// (the last level is always max_mode).
DyadicProfile sobolev_profile(const FourierSeries& a, Real s, long first = 4);

struct DoubleIntegral {
  /// ∬ |u(s) - u(t)|^2 / sin^2((s - t)/2) ds dt by tensor midpoint quadrature
  /// with the diagonal band excluded.
  Real value = 0;
  /// value / 16π^2; comparable with sobolev_seminorm(u, 1/2)^2.
  Real normalized = 0;
  /// normalized at N/8, N/4, N/2, N samples.
  DyadicProfile profile;
};

DoubleIntegral h_half_double_integral(const GridFunction& u);

/// Multiplier (Hu)_n = -i sgn(n) a_n, (Hu)_0 = 0.
FourierSeries harmonic_conjugate(const FourierSeries& a);

/// Spectral derivative of the periodic samples (Nyquist mode dropped).
GridFunction spectral_derivative(const GridFunction& u);

/// Trigonometric interpolant of u re-evaluated on the other sampling kind.
GridFunction resample(const GridFunction& u, Sampling target);

}  // namespace wpc
