#include "wpc/bmo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wpc {

namespace {

// Mean oscillation of x[start .. start+length) (mod N) with u_I from prefix sums.
template <typename Vec>
Real oscillation(const Vec& x, const Vec& prefix, long start, long length) {
  const long n = x.size();
  using T = typename Vec::Scalar;
  T sum;
  const long end = start + length;
  if (end <= n) {
    sum = prefix[end] - prefix[start];
  } else {
    sum = prefix[n] - prefix[start] + prefix[end - n];
  }
  const T mean = sum / static_cast<Real>(length);
  Real dev = 0;
  for (long i = start; i < end; ++i) dev += std::abs(x[i < n ? i : i - n] - mean);
  return dev / static_cast<Real>(length);
}

template <typename Vec>
Vec prefix_sums(const Vec& x) {
  Vec p(x.size() + 1);
  p[0] = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) p[i + 1] = p[i] + x[i];
  return p;
}

template <typename Vec>
OscillationProfile profile_of(const Vec& x, Real min_scale) {
  const long n = x.size();
  const Real h = kTwoPi / static_cast<Real>(n);
  const Vec prefix = prefix_sums(x);
  OscillationProfile out;
  for (long len = n / 2; len >= 4 && static_cast<Real>(len) * h >= min_scale * (1 - 1e-12); len /= 2) {
    const long stride = std::max<long>(1, std::min(n / 64, len / 2));
    Real worst = 0;
    for (long start = 0; start < n; start += stride) worst = std::max(worst, oscillation(x, prefix, start, len));
    out.scales.push_back(static_cast<Real>(len) * h);
    out.worst_oscillation.push_back(worst);
    out.at_zero.push_back(oscillation(x, prefix, 0, len));
  }
  return out;
}

}  // namespace

Real OscillationProfile::norm() const {
  Real m = 0;
  for (Real v : worst_oscillation) m = std::max(m, v);
  return m;
}

OscillationProfile bmo_norm_estimate(const GridFunction& u, Real min_scale) {
  const Real h = u.spacing();
  if (!(min_scale >= 4 * h * (1 - 1e-12)))
    throw PreconditionError("min_scale must be at least four grid spacings");
  if (u.is_real()) return profile_of(RealVector(u.real()), min_scale);
  return profile_of(u.values(), min_scale);
}

Real mean_oscillation(const GridFunction& u, long start, long length) {
  const long n = u.size();
  if (length < 1 || length > n) throw InvalidArgument("interval length out of range");
  start = ((start % n) + n) % n;
  if (u.is_real()) {
    const RealVector x = u.real();
    return oscillation(x, prefix_sums(x), start, length);
  }
  return oscillation(u.values(), prefix_sums(u.values()), start, length);
}

std::string_view to_string(VmoVerdict v) {
  switch (v) {
    case VmoVerdict::kVanishing:
      return "vanishing";
    case VmoVerdict::kPersistent:
      return "persistent";
    case VmoVerdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

VmoVerdict vmo_verdict(const OscillationProfile& p, Real tol) {
  if (p.size() < 4) throw PreconditionError("VMO verdict needs at least four scales");
  const auto& w = p.worst_oscillation;
  const std::size_t n = w.size();
  const Real a = w[n - 3], b = w[n - 2], c = w[n - 1];
  if (c < tol && b <= a && c <= b) return VmoVerdict::kVanishing;
  if (a >= 2 * tol && b >= 2 * tol && c >= 2 * tol) return VmoVerdict::kPersistent;
  return VmoVerdict::kInconclusive;
}

TailReport john_nirenberg_probe(const GridFunction& u, Real start, Real length, const std::vector<Real>& ps,
                                int levels) {
  if (!(length > 0) || start < 0 || start + length > kTwoPi * (1 + 1e-12))
    throw PreconditionError("interval must lie within [0, 2π]");
  if (levels < 2) throw InvalidArgument("need at least two λ levels");
  const long n = u.size();
  std::vector<Complex> vals;
  for (long j = 0; j < n; ++j) {
    const Real t = u.theta(j);
    if (t >= start && t < start + length) vals.push_back(u[j]);
  }
  const long m = static_cast<long>(vals.size());
  if (m < 4) throw PreconditionError("interval holds fewer than four samples");

  Complex mean = 0;
  for (const Complex& v : vals) mean += v;
  mean /= static_cast<Real>(m);
  std::vector<Real> dev(m);
  for (long i = 0; i < m; ++i) dev[i] = std::abs(vals[i] - mean);
  std::vector<Real> sorted = dev;
  std::sort(sorted.begin(), sorted.end());

  TailReport r;
  const Real top = sorted.back() > 0 ? sorted.back() : 1.0;
  for (int k = 0; k <= levels; ++k) {
    const Real lambda = top * k / levels;
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), lambda);
    r.lambdas.push_back(lambda);
    r.distribution.push_back(static_cast<Real>(sorted.end() - first) / static_cast<Real>(m));
  }

  // Fit over the part of the tail that is resolved by at least ten samples.
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t k = 1; k < r.lambdas.size(); ++k) {
    const Real d = r.distribution[k];
    if (d <= 0 || d > 0.5 || d * static_cast<Real>(m) < 10) continue;
    const Real x = r.lambdas[k], y = std::log(d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2) {
    const Real slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    r.rate = -slope;
    r.c1 = std::exp((sy - slope * sx) / count);
  }

  // Oscillation norm over dyadic sub-intervals of I.
  std::vector<Complex> prefix(m + 1, 0.0);
  for (long i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + vals[i];
  for (long len = m; len >= 4; len /= 2) {
    const long stride = std::max<long>(1, std::min(m / 64, len / 2));
    for (long s = 0; s + len <= m; s += stride) {
      const Complex mu = (prefix[s + len] - prefix[s]) / static_cast<Real>(len);
      Real acc = 0;
      for (long i = s; i < s + len; ++i) acc += std::abs(vals[i] - mu);
      r.bmo = std::max(r.bmo, acc / static_cast<Real>(len));
    }
  }
  r.c2 = r.rate * r.bmo;

  for (Real p : ps) {
    TailReport::Moment mo;
    mo.p = p;
    Real acc = 0;
    for (Real d : dev) acc += std::pow(std::expm1(d), p);
    mo.value = acc / static_cast<Real>(m);
    mo.bound = (r.c2 > p * r.bmo) ? p * r.c1 * r.bmo / (r.c2 - p * r.bmo) : std::numeric_limits<Real>::infinity();
    r.moments.push_back(mo);
  }
  return r;
}

ExpNorm exp_lp_norm(const GridFunction& u, Real p) {
  if (!(p >= 1)) throw InvalidArgument("exp_lp_norm needs p >= 1");
  if (!u.is_real(1e-12)) throw PreconditionError("exp_lp_norm needs a real-valued u");
  ExpNorm out;
  for (int level = 3; level >= 0; --level) {
    if (u.size() >> level < 8) continue;
    const RealVector x = (level == 0 ? u : u.subsampled(level)).real();
    const Real v = std::pow((p * x.array()).exp().mean(), 1 / p);
    out.profile.push(x.size(), v);
    if (level == 0) out.value = v;
  }
  return out;
}

}  // namespace wpc
