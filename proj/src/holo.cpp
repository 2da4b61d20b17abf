#include "wpc/holo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>
#include <unsupported/Eigen/FFT>

#include "wpc/quadrature.hpp"

namespace wpc {

namespace {

long next_power_of_two(long n) {
  long p = 1;
  while (p < n) p *= 2;
  return p;
}

// Values Σ c_n r^n e^{inθ_j} on θ_j = 2πj/M, folding modes >= M onto their aliases.
ComplexVector circle_values(const ComplexVector& c, Real r, long m) {
  ComplexVector bins = ComplexVector::Zero(m);
  Real rn = 1;
  for (Eigen::Index n = 0; n < c.size(); ++n) {
    bins[n % m] += c[n] * rn;
    rn *= r;
  }
  Eigen::FFT<Real> fft;
  ComplexVector out(m);
  fft.inv(out, bins);
  return out * static_cast<Real>(m);
}

void require_disk(const PowerSeries& a, const char* what) {
  if (a.domain() != PowerSeries::Domain::kDisk)
    throw PreconditionError(std::string(what) + " needs a series on the disk");
}

}  // namespace

// ---------------------------------------------------------------------------
// PowerSeries

PowerSeries::PowerSeries(ComplexVector coefficients, Domain domain)
    : coeffs_(std::move(coefficients)), domain_(domain) {
  if (coeffs_.size() == 0) throw InvalidArgument("power series needs at least one coefficient");
  if (!coeffs_.allFinite()) throw InvalidArgument("power series coefficients must be finite");
}

PowerSeries PowerSeries::zero(long max_degree, Domain domain) {
  return PowerSeries(ComplexVector::Zero(max_degree + 1), domain);
}

Complex PowerSeries::evaluate(Complex z) const {
  const Complex w = domain_ == Domain::kDisk ? z : 1.0 / z;
  Complex acc = 0;
  for (long n = truncation(); n >= 0; --n) acc = acc * w + coeffs_[n];
  return acc;
}

PowerSeries PowerSeries::derivative() const {
  const long k = truncation();
  if (k == 0) return zero(0, domain_);
  ComplexVector d(k);
  for (long n = 1; n <= k; ++n) d[n - 1] = static_cast<Real>(n) * coeffs_[n];
  return PowerSeries(std::move(d), domain_);
}

PowerSeries PowerSeries::integral() const {
  const long k = truncation();
  ComplexVector v(k + 2);
  v[0] = 0;
  for (long n = 0; n <= k; ++n) v[n + 1] = coeffs_[n] / static_cast<Real>(n + 1);
  return PowerSeries(std::move(v), domain_);
}

PowerSeries PowerSeries::truncated(long max_degree) const {
  ComplexVector v = ComplexVector::Zero(max_degree + 1);
  const long k = std::min(max_degree, truncation());
  v.head(k + 1) = coeffs_.head(k + 1);
  return PowerSeries(std::move(v), domain_);
}

Real PowerSeries::tail_bound(Real r) const {
  const long k = truncation();
  if (k < 4) return std::abs(coeffs_[k]) * std::pow(r, k);
  // Geometric ratio from the root test on the last quarter of the coefficients.
  Real q = 0;
  for (long n = std::max<long>(1, 3 * k / 4); n <= k; ++n) {
    const Real a = std::abs(coeffs_[n]);
    if (a > 0) q = std::max(q, std::pow(a, 1.0 / static_cast<Real>(n)));
  }
  q *= r;
  if (q == 0) return 0;
  if (q >= 1) return std::numeric_limits<Real>::infinity();
  return std::abs(coeffs_[k]) * std::pow(r, k) * q / (1 - q);
}

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
  const long k = std::max(a.truncation(), b.truncation());
  return PowerSeries(a.truncated(k).coefficients() + b.truncated(k).coefficients(), a.domain());
}

PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) { return a + Complex(-1) * b; }

PowerSeries operator*(Complex s, const PowerSeries& a) { return PowerSeries(s * a.coefficients(), a.domain()); }

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  const long k = std::min(a.truncation(), b.truncation());
  ComplexVector v = ComplexVector::Zero(k + 1);
  for (long n = 0; n <= k; ++n)
    for (long j = 0; j <= n; ++j) v[n] += a[j] * b[n - j];
  return PowerSeries(std::move(v), a.domain());
}

PowerSeries series_exp(const PowerSeries& a) {
  const long k = a.truncation();
  ComplexVector b(k + 1);
  b[0] = std::exp(a[0]);
  for (long n = 1; n <= k; ++n) {
    Complex s = 0;
    for (long j = 1; j <= n; ++j) s += static_cast<Real>(j) * a[j] * b[n - j];
    b[n] = s / static_cast<Real>(n);
  }
  return PowerSeries(std::move(b), a.domain());
}

PowerSeries series_log(const PowerSeries& a) {
  if (a[0] == Complex(0)) throw PreconditionError("log of a series vanishing at the origin");
  const long k = a.truncation();
  ComplexVector l(k + 1);
  l[0] = std::log(a[0]);
  for (long n = 1; n <= k; ++n) {
    Complex s = static_cast<Real>(n) * a[n];
    for (long j = 1; j < n; ++j) s -= static_cast<Real>(j) * l[j] * a[n - j];
    l[n] = s / (static_cast<Real>(n) * a[0]);
  }
  return PowerSeries(std::move(l), a.domain());
}

PowerSeries pre_schwarzian(const PowerSeries& log_fp) {
  require_disk(log_fp, "pre-Schwarzian");
  return log_fp.derivative();
}

PowerSeries lambda_map(const PowerSeries& phi) {
  require_disk(phi, "Λ");
  const PowerSeries d1 = phi.derivative();
  const PowerSeries d2 = d1.derivative();
  return d2 - Complex(0.5) * (d1 * d1).truncated(d2.truncation());
}

PowerSeries schwarzian(const PowerSeries& log_fp) {
  require_disk(log_fp, "Schwarzian");
  const PowerSeries n = pre_schwarzian(log_fp);
  const PowerSeries dn = n.derivative();
  return dn - Complex(0.5) * (n * n).truncated(dn.truncation());
}

PowerSeries from_log_derivative(const PowerSeries& log_fp) {
  require_disk(log_fp, "reconstructing f");
  if (std::abs(log_fp[0]) > 1e-12) throw PreconditionError("log f'(0) must vanish (f'(0) = 1)");
  return series_exp(log_fp).integral();
}

// ---------------------------------------------------------------------------
// Norms

WeightedSup weighted_sup(const PowerSeries& phi, int weight_power) {
  require_disk(phi, "weighted sup");
  const long k = phi.truncation();
  const long m = next_power_of_two(std::max<long>(64, 4 * (k + 1)));
  auto g = [&](Real r, Real t) {
    return std::pow(1 - r * r, weight_power) * std::abs(phi.evaluate(std::polar(r, t)));
  };

  std::vector<Real> radii;
  for (int i = 0; i < 64; ++i) radii.push_back(i / 64.0);
  const int graded = static_cast<int>(4 * std::log2(8.0 * static_cast<Real>(k + 1)));
  for (int j = 25; j <= graded; ++j) radii.push_back(1 - std::pow(2.0, -j / 4.0));

  WeightedSup best;
  Real best_r = 0, best_t = 0;
  for (Real r : radii) {
    const ComplexVector v = circle_values(phi.coefficients(), r, m);
    const Real w = std::pow(1 - r * r, weight_power);
    for (long j = 0; j < m; ++j) {
      const Real val = w * std::abs(v[j]);
      if (val > best.value) {
        best.value = val;
        best_r = r;
        best_t = kTwoPi * static_cast<Real>(j) / static_cast<Real>(m);
      }
    }
  }
  if (best.value == 0) return best;

  // Compass search from the best grid point.
  Real dr = 1.0 / 64, dt = kTwoPi / static_cast<Real>(m);
  while (dr > 1e-13 || dt > 1e-13) {
    bool moved = false;
    for (auto [sr, st] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const Real r = std::clamp(best_r + sr * dr, 0.0, 1.0 - 1e-15);
      const Real t = best_t + st * dt;
      const Real val = g(r, t);
      if (val > best.value) {
        best.value = val;
        best_r = r;
        best_t = t;
        moved = true;
      }
    }
    if (!moved) {
      dr *= 0.5;
      dt *= 0.5;
    }
  }
  best.at = std::polar(best_r, best_t);
  return best;
}

Real norm_b2(const PowerSeries& phi) { return weighted_sup(phi, 2).value; }

Real norm_bloch(const PowerSeries& phi) {
  require_disk(phi, "Bloch norm");
  return weighted_sup(phi.derivative(), 1).value;
}

Real norm_script_b(const PowerSeries& phi) {
  require_disk(phi, "weighted area norm");
  Real s = 0;
  for (long n = 0; n <= phi.truncation(); ++n) {
    const Real a = static_cast<Real>(n);
    s += std::norm(phi[n]) * 2 / ((a + 1) * (a + 2) * (a + 3));
  }
  return std::sqrt(s);
}

Real norm_ad(const PowerSeries& phi) {
  require_disk(phi, "Dirichlet norm");
  Real s = 0;
  for (long n = 1; n <= phi.truncation(); ++n) s += static_cast<Real>(n) * std::norm(phi[n]);
  return std::sqrt(s);
}

Real operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

Real OperatorMatrix::operator_norm() const { return wpc::operator_norm(matrix); }

// ---------------------------------------------------------------------------
// Grunsky kernel and matrix

Complex grunsky_kernel_of_map(const PowerSeries& f, Complex zeta, Complex z) {
  const Complex d = zeta - z;
  constexpr Real kNear = 1e-2;
  if (std::abs(d) >= kNear) {
    const Complex fp_zeta = f.derivative().evaluate(zeta), fp_z = f.derivative().evaluate(z);
    const Complex q = f.evaluate(zeta) - f.evaluate(z);
    return fp_zeta * fp_z / (q * q) - 1.0 / (d * d);
  }
  // f(z + t) - f(z) = t·A(t); expand U in t = ζ - z.
  constexpr int kOrder = 12;
  ComplexVector shifted = f.coefficients();
  const long k = f.truncation();
  std::vector<Complex> taylor(kOrder + 2, 0.0);  // f^{(m)}(z)/m!
  for (int m = 0; m < kOrder + 2 && m <= k; ++m) {
    // One synthetic-division pass peels off the next Taylor coefficient at z.
    Complex acc = 0;
    for (long n = k; n >= m; --n) {
      acc = acc * z + shifted[n];
      shifted[n] = acc;
    }
    taylor[m] = shifted[m];
  }
  std::vector<Complex> a(kOrder + 1);  // A(t) = Σ a_m t^m, a_m = taylor[m + 1]
  for (int m = 0; m <= kOrder; ++m) a[m] = taylor[m + 1];
  std::vector<Complex> a2(kOrder + 1, 0.0), num(kOrder + 1);
  for (int i = 0; i <= kOrder; ++i)
    for (int j = 0; i + j <= kOrder; ++j) a2[i + j] += a[i] * a[j];
  // f'(ζ) = Σ (m+1) a_m t^m; numerator f'(z) f'(ζ) - A², which is O(t²).
  for (int m = 0; m <= kOrder; ++m) num[m] = a[0] * static_cast<Real>(m + 1) * a[m] - a2[m];
  // U = (num / t²) / A²: long division of series.
  const int len = kOrder - 1;
  std::vector<Complex> quot(len, 0.0);
  for (int m = 0; m < len; ++m) {
    Complex s = num[m + 2];
    for (int j = 1; j <= m; ++j) s -= a2[j] * quot[m - j];
    quot[m] = s / a2[0];
  }
  Complex acc = 0;
  for (int m = len - 1; m >= 0; --m) acc = acc * d + quot[m];
  return acc;
}

Complex grunsky_kernel(const PowerSeries& log_fp, Complex zeta, Complex z) {
  if (!(std::abs(zeta) < 1 && std::abs(z) < 1)) throw PreconditionError("kernel arguments must lie in the disk");
  return grunsky_kernel_of_map(from_log_derivative(log_fp), zeta, z);
}

OperatorMatrix grunsky_matrix(const PowerSeries& log_fp, long k, const GrunskyOptions& options) {
  if (k < 1) throw InvalidArgument("Grunsky truncation must be positive");
  const Real r1 = options.inner_radius, r2 = options.outer_radius;
  if (!(0 < r1 && r1 < r2 && r2 < 1)) throw InvalidArgument("Grunsky radii must satisfy 0 < r1 < r2 < 1");
  const long m = options.samples > 0 ? options.samples : next_power_of_two(std::max<long>(256, 4 * k));
  if (!is_power_of_two(m) || m < 2 * k) throw InvalidArgument("Grunsky sample count must be a power of two >= 2K");

  OperatorMatrix g;
  g.basis = "A2: sqrt(n+1) z^n, n >= 0";
  g.label = "grunsky";
  if (log_fp.coefficients().isZero(0)) {
    g.matrix = ComplexMatrix::Zero(k, k);  // f = z
    return g;
  }

  const PowerSeries f = from_log_derivative(log_fp);
  const PowerSeries fp = f.derivative();
  const ComplexVector f1 = circle_values(f.coefficients(), r1, m), f2 = circle_values(f.coefficients(), r2, m);
  const ComplexVector d1 = circle_values(fp.coefficients(), r1, m), d2 = circle_values(fp.coefficients(), r2, m);

  ComplexMatrix u(m, m);
  for (long j = 0; j < m; ++j) {
    const Complex zeta = std::polar(r1, kTwoPi * j / m);
    for (long l = 0; l < m; ++l) {
      const Complex z = std::polar(r2, kTwoPi * l / m);
      const Complex q = f1[j] - f2[l], d = zeta - z;
      u(j, l) = d1[j] * d2[l] / (q * q) - 1.0 / (d * d);
    }
  }
  if (!u.allFinite()) throw PreconditionError("f is not injective on the sampling circles");

  // Two-dimensional DFT, rows then columns.
  Eigen::FFT<Real> fft;
  ComplexVector in(m), out(m);
  for (long j = 0; j < m; ++j) {
    in = u.row(j).transpose();
    fft.fwd(out, in);
    u.row(j) = out.transpose();
  }
  for (long l = 0; l < m; ++l) {
    in = u.col(l);
    fft.fwd(out, in);
    u.col(l) = out;
  }
  u /= static_cast<Real>(m) * static_cast<Real>(m);

  g.matrix.resize(k, k);
  for (long p = 0; p < k; ++p)
    for (long q = 0; q < k; ++q)
      g.matrix(p, q) = u(p, q) / (std::pow(r1, p) * std::pow(r2, q) *
                                  std::sqrt(static_cast<Real>((p + 1) * (q + 1))));

  // Holomorphy leaves negative frequencies empty; energy there is aliasing.
  Real scale = 0, stray = 0;
  for (long p = 0; p < m; ++p)
    for (long q = 0; q < m; ++q) {
      const Real a = std::abs(u(p, q));
      scale = std::max(scale, a);
      if (p >= m / 2 || q >= m / 2) stray = std::max(stray, a);
    }
  // Round-off in U (about 1e-16 for an O(1) kernel) is not aliasing.
  if (stray > std::max(1e-10 * scale, 1e-13))
    g.warnings.push_back("radii too close to 1 for the truncation: aliasing " + std::to_string(stray / scale));
  const Real tail = f.tail_bound(r2);
  if (tail > 1e-10) g.warnings.push_back("series tail at the outer radius is " + std::to_string(tail));
  return g;
}

// ---------------------------------------------------------------------------
// Beltrami coefficients

GaussNodes radial_nodes(const PolarGrid& grid) {
  if (!(grid.r_min >= 1 && grid.r_max > grid.r_min)) throw InvalidArgument("polar grid needs 1 <= r_min < r_max");
  if (grid.radial < 1 || grid.angular < 1) throw InvalidArgument("polar grid needs positive node counts");
  const Real lo = std::isinf(grid.r_max) ? 0.0 : 1 / grid.r_max;
  const Real hi = 1 / grid.r_min;
  const GaussLegendre gl(grid.radial);
  GaussNodes g;
  g.t = (0.5 * (hi + lo) + 0.5 * (hi - lo) * gl.nodes.array()).matrix();
  g.w = 0.5 * (hi - lo) * gl.weights;
  return g;
}

BeltramiSample ahlfors_weil_mu(const PowerSeries& s, const PolarGrid& grid, Real threshold) {
  require_disk(s, "Ahlfors–Weil section");
  const Real b2 = norm_b2(s);
  if (!(b2 < threshold))
    throw PreconditionError("norm_b2(S_f) = " + std::to_string(b2) + " is not below " + std::to_string(threshold));
  return sample_beltrami(grid, [&](Complex z) {
    const Complex zb = std::conj(z);
    const Real a = std::norm(z) - 1;
    return -0.5 * a * a * s.evaluate(1.0 / zb) / (zb * zb * zb * zb);
  });
}

WpNorm wp_norm(const BeltramiSample& mu) {
  WpNorm out;
  out.sup = mu.sup();
  const long na = mu.angles.size();
  for (long stride : {8L, 4L, 2L, 1L}) {
    if (na % stride != 0 || na / stride < 1) continue;
    Real s = 0;
    for (Eigen::Index i = 0; i < mu.radii.size(); ++i) {
      const Real t = 1 / mu.radii[i];
      const Real jac = t / ((1 - t * t) * (1 - t * t));
      Real row = 0;
      for (long j = 0; j < na; j += stride) row += std::norm(mu.values(i, j));
      s += mu.radial_weights[i] * jac * row * kTwoPi * static_cast<Real>(stride) / static_cast<Real>(na);
    }
    out.profile.push(na / stride, s / kPi);
  }
  out.integral = out.profile.last();
  out.value = out.sup + std::sqrt(out.integral);
  return out;
}

}  // namespace wpc
