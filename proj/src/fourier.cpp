#include "wpc/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/FFT>

namespace wpc {

namespace {

// (1/N) Σ_j u_j e^{-2πi jk/N}, k = 0..N-1.
ComplexVector raw_dft(const ComplexVector& u) {
  Eigen::FFT<Real> fft;
  ComplexVector out(u.size());
  fft.fwd(out, u);
  return out / static_cast<Real>(u.size());
}

ComplexVector raw_idft(const ComplexVector& spectrum) {
  Eigen::FFT<Real> fft;
  ComplexVector out(spectrum.size());
  fft.inv(out, spectrum);
  return out * static_cast<Real>(spectrum.size());
}

long wrap(long n, long size) { return ((n % size) + size) % size; }

Complex stagger_phase(long n, long size, Sampling s) {
  if (s == Sampling::kNodes) return 1.0;
  return std::polar(1.0, -kPi * static_cast<Real>(n) / static_cast<Real>(size));
}

// Fornberg's recursion: weights w(k, i) of the k-th derivative at x0 from
// values at nodes[i].
Eigen::MatrixXd fd_weights(Real x0, const std::vector<Real>& nodes, int max_order) {
  const int n = static_cast<int>(nodes.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(max_order + 1, n);
  Real c1 = 1.0;
  Real c4 = nodes[0] - x0;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    Real c2 = 1.0;
    const Real c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const Real c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
        c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
      }
      for (int k = mn; k >= 1; --k) c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
      c(0, j) = c4 * c(0, j) / c3;
    }
    c1 = c2;
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// GridFunction

void GridFunction::check_size(long n) {
  if (!is_power_of_two(n) || n < 8)
    throw InvalidArgument("grid size must be a power of two >= 8, got " + std::to_string(n));
}

GridFunction::GridFunction(ComplexVector values, Sampling sampling)
    : values_(std::move(values)), sampling_(sampling) {
  check_size(values_.size());
  if (!values_.allFinite()) throw InvalidArgument("grid function has non-finite samples");
}

GridFunction GridFunction::from_real(const RealVector& values, Sampling sampling) {
  return GridFunction(values.cast<Complex>(), sampling);
}

bool GridFunction::is_real(Real tol) const {
  return values_.imag().cwiseAbs().maxCoeff() <= tol;
}

GridFunction GridFunction::shifted(long k) const {
  const long n = size();
  ComplexVector v(n);
  for (long j = 0; j < n; ++j) v[j] = values_[wrap(j + k, n)];
  return GridFunction(std::move(v), sampling_);
}

GridFunction GridFunction::subsampled(int levels) const {
  const long stride = 1L << levels;
  const long n = size() / stride;
  ComplexVector v(n);
  for (long j = 0; j < n; ++j) v[j] = values_[j * stride];
  return GridFunction(std::move(v), sampling_);
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size() || a.sampling() != b.sampling())
    throw InvalidArgument("grid functions live on different grids");
  return GridFunction(a.values() + b.values(), a.sampling());
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size() || a.sampling() != b.sampling())
    throw InvalidArgument("grid functions live on different grids");
  return GridFunction(a.values() - b.values(), a.sampling());
}

// ---------------------------------------------------------------------------
// FourierSeries

FourierSeries::FourierSeries(long max_mode) : coeffs_(ComplexVector::Zero(2 * max_mode + 1)) {
  if (max_mode < 0) throw InvalidArgument("negative max_mode");
}

FourierSeries::FourierSeries(ComplexVector coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.size() % 2 == 0) throw InvalidArgument("Fourier coefficient vector must have odd length");
}

Complex FourierSeries::evaluate(Real theta) const {
  const long k = max_mode();
  Complex sum = 0;
  for (long n = -k; n <= k; ++n) sum += (*this)[n] * std::polar(1.0, static_cast<Real>(n) * theta);
  return sum;
}

GridFunction FourierSeries::synthesize(long n, Sampling sampling) const {
  GridFunction::check_size(n);
  const long k = max_mode();
  if (k > n / 2 - 1) throw InvalidArgument("series bandwidth exceeds grid Nyquist limit");
  ComplexVector spec = ComplexVector::Zero(n);
  for (long m = -k; m <= k; ++m) spec[wrap(m, n)] = (*this)[m] / stagger_phase(m, n, sampling);
  return GridFunction(raw_idft(spec), sampling);
}

FourierSeries FourierSeries::truncated(long max_mode) const {
  FourierSeries out(max_mode);
  const long k = std::min(max_mode, this->max_mode());
  for (long n = -k; n <= k; ++n) out[n] = (*this)[n];
  return out;
}

FourierSeries operator-(const FourierSeries& a, const FourierSeries& b) {
  const long k = std::max(a.max_mode(), b.max_mode());
  FourierSeries out = a.truncated(k);
  for (long n = -b.max_mode(); n <= b.max_mode(); ++n) out[n] -= b[n];
  return out;
}

// ---------------------------------------------------------------------------
// Transforms and seminorms

FourierSeries fourier_coefficients(const GridFunction& u, long max_mode) {
  const long n = u.size();
  if (max_mode > n / 2 - 1 || max_mode < 0)
    throw InvalidArgument("max_mode " + std::to_string(max_mode) + " too large for a grid of " +
                          std::to_string(n) + " samples");
  const ComplexVector raw = raw_dft(u.values());
  FourierSeries a(max_mode);
  for (long m = -max_mode; m <= max_mode; ++m) a[m] = raw[wrap(m, n)] * stagger_phase(m, n, u.sampling());
  return a;
}

FourierSeries spectrum(const GridFunction& u) { return fourier_coefficients(u, u.size() / 2 - 1); }

FourierSeries fourier_coefficients_seam_corrected(const GridFunction& u, long max_mode) {
  FourierSeries a = fourier_coefficients(u, max_mode);
  const long n = u.size();
  const Real h = u.spacing();
  constexpr int kPoints = 7;
  constexpr int kOrder = 3;

  // One-sided derivative estimates at θ = 0+ and θ = 2π-, in units of h.
  std::vector<Real> right_nodes, left_nodes;
  std::vector<Complex> right_vals, left_vals;
  const Real off = u.sampling() == Sampling::kCellCenters ? 0.5 : 0.0;
  for (int i = 0; i < kPoints; ++i) {
    right_nodes.push_back(i + off);
    right_vals.push_back(u[i]);
    // Samples to the left of 2π, counted backwards from the seam.
    const long j = u.sampling() == Sampling::kCellCenters ? n - 1 - i : wrap(-i, n);
    left_nodes.push_back(-(i + off));
    left_vals.push_back(u[j]);
  }
  const Eigen::MatrixXd wr = fd_weights(0.0, right_nodes, kOrder);
  const Eigen::MatrixXd wl = fd_weights(0.0, left_nodes, kOrder);
  Complex jump[kOrder + 1];
  for (int k = 0; k <= kOrder; ++k) {
    Complex dr = 0, dl = 0;
    for (int i = 0; i < kPoints; ++i) {
      dr += wr(k, i) * right_vals[i];
      dl += wl(k, i) * left_vals[i];
    }
    jump[k] = (dl - dr) / std::pow(h, k);
  }

  // Euler–Maclaurin seam terms of ∫ u e^{-inθ}, trapezoid or midpoint form.
  const bool midpoint = u.sampling() == Sampling::kCellCenters;
  const Real c1 = midpoint ? -1.0 / 24.0 : 1.0 / 12.0;
  const Real c3 = midpoint ? 7.0 / 5760.0 : -1.0 / 720.0;
  for (long m = -max_mode; m <= max_mode; ++m) {
    const Complex w = -kI * static_cast<Real>(m);
    const Complex df1 = jump[1];
    const Complex df3 = jump[3] + 3.0 * w * jump[2] + 3.0 * w * w * jump[1];
    a[m] -= (c1 * h * h * df1 + c3 * std::pow(h, 4) * df3) / kTwoPi;
  }
  return a;
}

Real sobolev_seminorm(const FourierSeries& a, Real s) {
  Real sum = 0;
  for (long n = 1; n <= a.max_mode(); ++n)
    sum += std::pow(static_cast<Real>(n), 2 * s) * (std::norm(a[n]) + std::norm(a[-n]));
  return std::sqrt(sum);
}

DyadicProfile sobolev_profile(const FourierSeries& a, Real s, long first) {
  DyadicProfile p;
  Real sum = 0;
  long next = std::max<long>(1, first);
  for (long n = 1; n <= a.max_mode(); ++n) {
    sum += std::pow(static_cast<Real>(n), 2 * s) * (std::norm(a[n]) + std::norm(a[-n]));
    if (n == next || n == a.max_mode()) {
      p.push(n, sum);
      if (n == next) next *= 2;
    }
  }
  if (p.empty()) p.push(0, 0.0);
  return p;
}

namespace {

Real double_integral_raw(const ComplexVector& u) {
  const long n = u.size();
  const Real h = kTwoPi / static_cast<Real>(n);
  Real total = 0;
  for (long s = 1; s <= n / 2; ++s) {
    Real row = 0;
    for (long j = 0; j < n; ++j) row += std::norm(u[j] - u[(j + s) % n]);
    const Real sn = std::sin(kPi * static_cast<Real>(s) / static_cast<Real>(n));
    const Real mult = (s == n / 2) ? 1.0 : 2.0;
    total += mult * row / (sn * sn);
  }
  return total * h * h;
}

}  // namespace

DoubleIntegral h_half_double_integral(const GridFunction& u) {
  DoubleIntegral out;
  const Real scale = 16 * kPi * kPi;
  for (int level = 3; level >= 0; --level) {
    if (u.size() >> level < 8) continue;
    const GridFunction g = level == 0 ? u : u.subsampled(level);
    const Real v = double_integral_raw(g.values());
    out.profile.push(g.size(), v / scale);
    if (level == 0) out.value = v;
  }
  out.normalized = out.value / scale;
  return out;
}

FourierSeries harmonic_conjugate(const FourierSeries& a) {
  FourierSeries out(a.max_mode());
  for (long n = 1; n <= a.max_mode(); ++n) {
    out[n] = -kI * a[n];
    out[-n] = kI * a[-n];
  }
  return out;
}

GridFunction spectral_derivative(const GridFunction& u) {
  const long n = u.size();
  ComplexVector spec = raw_dft(u.values());
  for (long k = 0; k < n; ++k) {
    const long m = k <= n / 2 ? k : k - n;
    spec[k] *= (k == n / 2) ? Complex(0) : kI * static_cast<Real>(m);
  }
  return GridFunction(raw_idft(spec), u.sampling());
}

GridFunction resample(const GridFunction& u, Sampling target) {
  if (u.sampling() == target) return u;
  const long n = u.size();
  ComplexVector spec = raw_dft(u.values());
  for (long k = 0; k < n; ++k) {
    const long m = k <= n / 2 ? k : k - n;
    if (k == n / 2) {
      spec[k] = 0;
      continue;
    }
    spec[k] *= stagger_phase(m, n, u.sampling()) / stagger_phase(m, n, target);
  }
  return GridFunction(raw_idft(spec), target);
}

}  // namespace wpc
