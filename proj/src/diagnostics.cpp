#include "wpc/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace wpc {

namespace {

// Lift at any integer index, extended periodically.
struct ExtendedLift {
  RealVector psi;
  Real operator()(long j) const {
    const long n = psi.size();
    const long q = j >= 0 ? j / n : -((-j + n - 1) / n);
    return psi[j - q * n] + kTwoPi * static_cast<Real>(q);
  }
};

// Derivative data of both maps on a common grid and sampling.
std::pair<DerivativeData, DerivativeData> common_derivatives(const CircleMap& h1, const CircleMap& h2) {
  const long n = std::max(h1.size(), h2.size());
  const CircleMap a = h1.size() == n ? h1 : h1.resampled(n);
  const CircleMap b = h2.size() == n ? h2 : h2.resampled(n);
  const bool cells = derivative(a).log_phi_prime.sampling() == Sampling::kCellCenters ||
                     derivative(b).log_phi_prime.sampling() == Sampling::kCellCenters;
  const Sampling s = cells ? Sampling::kCellCenters : Sampling::kNodes;
  DerivativeData da = derivative(a, s), db = derivative(b, s);
  if (da.degenerate || db.degenerate || !da.log_phi_prime.values().allFinite() || !db.log_phi_prime.values().allFinite())
    throw UndefinedMetric("metric needs log φ' finite on the grid for both maps");
  return {std::move(da), std::move(db)};
}

MetricValue seminorm_of(const GridFunction& u, const TrendThresholds& t) {
  MetricValue m;
  m.profile = sobolev_profile(spectrum(u), 0.5);
  m.value = std::sqrt(m.profile.last());
  m.trend = classify_partial_sums(m.profile, t);
  return m;
}

// The three finest values at arcs of at least min_cells cells, coarse first.
std::vector<Real> finest_three(const DyadicProfile& p, long min_cells) {
  std::vector<Real> v;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p.levels[k] >= min_cells) v.push_back(p.values[k]);
  if (v.size() < 3) return {};
  return {v.end() - 3, v.end()};
}

bool decreasing(const std::vector<Real>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1] || (v[i] <= 1e-13 && v[i - 1] <= 1e-13))) return false;
  return true;
}

}  // namespace

DyadicProfile quasisymmetry_profile(const CircleMap& h) {
  const ExtendedLift psi{h.lift_samples()};
  const long n = h.size();
  DyadicProfile p;
  for (long cells = n / 4; cells >= 1; cells /= 2) {
    Real worst = 1;
    for (long j = 0; j < n; ++j) {
      const Real a = psi(j + cells) - psi(j);
      const Real b = psi(j + 2 * cells) - psi(j + cells);
      worst = std::max(worst, std::max(a / b, b / a));
    }
    p.push(cells, worst);
  }
  return p;
}

DyadicProfile symmetric_profile(const CircleMap& h) {
  DyadicProfile p = quasisymmetry_profile(h);
  for (Real& v : p.values) v -= 1;
  return p;
}

Real quasisymmetry_constant(const DyadicProfile& qs, long min_cells) {
  Real m = 1;
  for (std::size_t k = 0; k < qs.size(); ++k)
    if (qs.levels[k] >= min_cells) m = std::max(m, qs.values[k]);
  return m;
}

DyadicProfile ratio_at_zero(const CircleMap& h, int first, int last) {
  DyadicProfile p;
  const Real base = h.lift(0);
  for (int m = first; m <= last; ++m) {
    const Real t = kTwoPi / std::ldexp(1.0, m);
    const Real a = h.lift(t);
    p.push(m, (h.lift(2 * t) - a) / (a - base));
  }
  return p;
}

Trend quasisymmetric_verdict(const DyadicProfile& qs, long min_cells) {
  const std::vector<Real> v = finest_three(qs, min_cells);
  if (v.empty()) return Trend::kInconclusive;
  const Real a = v[0], b = v[1], c = v[2];
  if (!std::isfinite(c)) return Trend::kNo;
  if (c > 1.5 * a && b > a && c > b) return Trend::kNo;
  if (c <= 1.1 * a) return Trend::kYes;
  return Trend::kInconclusive;
}

Trend symmetric_verdict(const DyadicProfile& s, Real tol, long min_cells) {
  const std::vector<Real> v = finest_three(s, min_cells);
  if (v.empty()) return Trend::kInconclusive;
  const Real a = v[0], b = v[1], c = v[2];
  if (c < tol && b <= a + 1e-12 && c <= b + 1e-12) return Trend::kYes;
  if (a >= tol && b >= tol && c >= tol && c >= 0.9 * a) return Trend::kNo;
  return Trend::kInconclusive;
}

MembershipReport wp_membership(const CircleMap& h, const TrendThresholds& thresholds, Real symmetric_tol) {
  MembershipReport r;
  r.qs_profile = quasisymmetry_profile(h);
  r.symmetric_profile = r.qs_profile;
  for (Real& v : r.symmetric_profile.values) v -= 1;
  r.qs_constant = quasisymmetry_constant(r.qs_profile);
  r.quasisymmetric = quasisymmetric_verdict(r.qs_profile);
  r.symmetric = symmetric_verdict(r.symmetric_profile, symmetric_tol);

  const DerivativeData d = derivative(h);
  r.h_half_profile = sobolev_profile(spectrum(d.log_phi_prime), 0.5);
  r.degenerate = d.degenerate;
  if (d.degenerate) {
    r.wp_class = Trend::kNo;
    r.reasons.push_back("degenerate derivative: φ' vanishes on the grid, so log φ' is unbounded below");
  } else {
    r.wp_class = classify_partial_sums(r.h_half_profile, thresholds);
    if (r.wp_class != Trend::kYes) r.reasons.push_back("H^{1/2} partial sums of log φ' are not Cauchy");
  }
  if (d.unbounded) r.reasons.push_back("φ' is unbounded at a node; derivative sampled at cell centres");
  if (d.provenance == Provenance::kSpectral) r.reasons.push_back("derivative from spectral differentiation");
  return r;
}

SmoothnessProbe smoothness_probe(const CircleMap& h, const TrendThresholds& thresholds) {
  SmoothnessProbe p;
  const RealVector psi = h.lift_samples();
  ComplexVector e(psi.size());
  for (Eigen::Index j = 0; j < psi.size(); ++j) e[j] = std::polar(1.0, psi[j]);
  p.h32_profile = sobolev_profile(spectrum(GridFunction(std::move(e))), 1.5);
  const DerivativeData d = derivative(h);
  p.phi_prime_profile = sobolev_profile(spectrum(d.phi_prime), 0.5);
  p.h32 = classify_partial_sums(p.h32_profile, thresholds);
  p.phi_prime = classify_partial_sums(p.phi_prime_profile, thresholds);
  for (long m = h.size() / 8; m <= h.size(); m *= 2) {
    if (m < 8) continue;
    const DerivativeData dm = m == h.size() ? d : derivative(h.resampled(m), d.phi_prime.sampling());
    p.lipschitz_profile.push(m, dm.phi_prime.real().maxCoeff());
  }
  return p;
}

MetricValue metric_d(const CircleMap& h1, const CircleMap& h2, const TrendThresholds& thresholds) {
  const auto [a, b] = common_derivatives(h1, h2);
  return seminorm_of(GridFunction::from_real(b.log_phi_prime.real() - a.log_phi_prime.real(), a.log_phi_prime.sampling()),
                     thresholds);
}

MetricValue metric_d_prime(const CircleMap& h1, const CircleMap& h2, const TrendThresholds& thresholds) {
  const auto [a, b] = common_derivatives(h1, h2);
  return seminorm_of(b.log_h_prime() - a.log_h_prime(), thresholds);
}

LogDerivativeCrosscheck log_derivative_crosscheck(const CircleMap& h, const TrendThresholds& thresholds) {
  LogDerivativeCrosscheck c;
  const DerivativeData d = derivative(h);
  c.log_abs = sobolev_profile(spectrum(d.log_phi_prime), 0.5);
  c.log_full = sobolev_profile(spectrum(d.log_h_prime()), 0.5);
  c.arg_h1 = sobolev_profile(spectrum(d.periodic), 1.0);
  c.log_abs_trend = classify_partial_sums(c.log_abs, thresholds);
  c.log_full_trend = classify_partial_sums(c.log_full, thresholds);
  c.arg_trend = classify_partial_sums(c.arg_h1, thresholds);
  c.agree = c.log_abs_trend == c.log_full_trend;
  return c;
}

ContinuityReport group_continuity_probe(const std::vector<CircleMap>& g_n, const std::vector<CircleMap>& h_n,
                                        const CircleMap& g, const CircleMap& h, Real tol) {
  if (g_n.size() != h_n.size() || g_n.empty()) throw InvalidArgument("sequences must be nonempty and of equal length");
  ContinuityReport r;
  const CircleMap gh = compose(g, h), h_inv = invert(h);
  for (std::size_t i = 0; i < g_n.size(); ++i) {
    r.composition.push_back(metric_d_prime(compose(g_n[i], h_n[i]), gh).value);
    r.inversion.push_back(metric_d_prime(invert(h_n[i]), h_inv).value);
  }
  r.composition_monotone = decreasing(r.composition);
  r.inversion_monotone = decreasing(r.inversion);
  r.composition_converged = r.composition.back() < tol;
  r.inversion_converged = r.inversion.back() < tol;
  return r;
}

}  // namespace wpc
