#include "wpc/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wpc {

namespace {

constexpr Real kTiny = 1e-300;
constexpr Real kHuge = 1e300;

// Splits θ into 2πk + r with r ∈ [0, 2π).
std::pair<Real, Real> reduce(Real theta) {
  const Real k = std::floor(theta / kTwoPi);
  Real r = theta - kTwoPi * k;
  if (r >= kTwoPi) r = 0;  // rounding at the top of the period
  return {k, r};
}

// Turns to remove so that φ(0) lands in [0, 2π); round-off just below 0 counts as 0.
Real winding(Real phi0) { return kTwoPi * std::floor(phi0 / kTwoPi + 1e-13); }

// Zero of g on [lo, hi] given g(lo) <= 0 <= g(hi): Illinois regula falsi,
// falling back to bisection when it stalls.
template <typename G>
Real bracketed_root(G&& g, Real lo, Real hi) {
  Real glo = g(lo), ghi = g(hi);
  if (glo == 0) return lo;
  if (ghi == 0) return hi;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    Real x = (lo * ghi - hi * glo) / (ghi - glo);
    if (!(x > lo && x < hi) || it % 8 == 7) x = 0.5 * (lo + hi);
    if (hi - lo <= 4 * std::numeric_limits<Real>::epsilon() * std::max<Real>(1, std::abs(x))) return x;
    const Real gx = g(x);
    if (gx == 0) return x;
    if (gx < 0) {
      lo = x;
      glo = gx;
      if (side == -1) ghi *= 0.5;
      side = -1;
    } else {
      hi = x;
      ghi = gx;
      if (side == 1) glo *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// ClosedForm defaults

RealVector ClosedForm::lift_on_nodes(long n) const {
  RealVector v(n);
  for (long j = 0; j < n; ++j) v[j] = lift(GridFunction::node(n, j, Sampling::kNodes));
  return v;
}

RealVector ClosedForm::derivative_on(long n, Sampling s) const {
  RealVector v(n);
  for (long j = 0; j < n; ++j) v[j] = lift_derivative(GridFunction::node(n, j, s));
  return v;
}

// ---------------------------------------------------------------------------
// CircleMap

CircleMap CircleMap::from_lift(RealVector lift) {
  const long n = lift.size();
  GridFunction::check_size(n);
  if (!lift.allFinite()) throw InvalidArgument("lift samples must be finite");
  for (long j = 0; j + 1 < n; ++j)
    if (!(lift[j + 1] > lift[j])) throw InvalidArgument("lift samples are not strictly increasing");
  if (!(lift[n - 1] < lift[0] + kTwoPi)) throw InvalidArgument("lift samples span more than one turn");
  CircleMap h;
  // Keep φ(0) in [0, 2π).
  const Real wind = winding(lift[0]);
  h.periodic_.resize(n);
  for (long j = 0; j < n; ++j) h.periodic_[j] = lift[j] - wind - h.theta(j);
  h.build_slopes();
  return h;
}

CircleMap CircleMap::from_closed_form(std::shared_ptr<const ClosedForm> form, long n) {
  GridFunction::check_size(n);
  if (!form) throw InvalidArgument("null closed form");
  CircleMap h;
  const RealVector lift = form->lift_on_nodes(n);
  if (!lift.allFinite()) throw InvalidArgument("closed form produced non-finite lift values");
  h.offset_ = -winding(lift[0]);
  h.periodic_.resize(n);
  for (long j = 0; j < n; ++j) h.periodic_[j] = lift[j] + h.offset_ - h.theta(j);
  for (long j = 0; j + 1 < n; ++j)
    if (!(lift[j + 1] > lift[j]))
      throw ConsistencyError("closed form " + form->family() + " is not strictly increasing on the grid");
  h.form_ = std::move(form);
  return h;
}

CircleMap CircleMap::identity(long n) { return from_closed_form(std::make_shared<IdentityForm>(), n); }

CircleMap CircleMap::rotation(Real beta, long n) {
  return from_closed_form(std::make_shared<RotationForm>(beta), n);
}

CircleMap CircleMap::mobius(Complex a, Real beta, long n) {
  return from_closed_form(std::make_shared<MobiusForm>(a, beta), n);
}

CircleMap CircleMap::sine(Real amplitude, long n) {
  return from_closed_form(std::make_shared<SineForm>(amplitude), n);
}

RealVector CircleMap::lift_samples() const {
  RealVector v(size());
  for (long j = 0; j < size(); ++j) v[j] = theta(j) + periodic_[j];
  return v;
}

std::string CircleMap::family() const { return form_ ? form_->family() : "samples"; }

void CircleMap::build_slopes() {
  const long n = size();
  const Real h = spacing();
  RealVector secant(n);
  for (long j = 0; j < n; ++j) {
    const Real next = j + 1 < n ? periodic_[j + 1] : periodic_[0];
    secant[j] = 1 + (next - periodic_[j]) / h;
  }
  // Harmonic-mean slopes keep the cubic pieces monotone; a vanishing secant
  // on either side gives slope 0 there.
  slopes_.resize(n);
  for (long j = 0; j < n; ++j) {
    const Real l = secant[(j + n - 1) % n], r = secant[j];
    slopes_[j] = (l > 0 && r > 0) ? 2 * l * r / (l + r) : 0;
  }
}

Real CircleMap::interpolate(Real theta) const {
  const long n = size();
  const Real h = spacing();
  const auto [k, r] = reduce(theta);
  long j = std::min(static_cast<long>(r / h), n - 1);
  const Real s = (r - static_cast<Real>(j) * h) / h;
  const Real y0 = this->theta(j) + periodic_[j];
  const Real y1 = (j + 1 < n ? this->theta(j + 1) + periodic_[j + 1] : kTwoPi + periodic_[0]);
  const Real d0 = slopes_[j], d1 = slopes_[(j + 1) % n];
  const Real s2 = s * s, s3 = s2 * s;
  Real y = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * d1;
  // Flat cells fall back to linear interpolation.
  if (d0 == 0 || d1 == 0) y = (1 - s) * y0 + s * y1;
  return y + kTwoPi * k;
}

Real CircleMap::lift(Real theta) const {
  if (!form_) return interpolate(theta);
  const auto [k, r] = reduce(theta);
  return form_->lift(r) + offset_ + kTwoPi * k;
}

Real CircleMap::lift_derivative(Real theta) const {
  if (!form_) throw PreconditionError("pointwise derivative needs a closed form");
  return form_->lift_derivative(reduce(theta).second);
}

CircleMap CircleMap::resampled(long n) const {
  if (n == size()) return *this;
  if (form_) {
    CircleMap out = from_closed_form(form_, n);
    out.offset_ = offset_;
    for (long j = 0; j < n; ++j) out.periodic_[j] = form_->lift(out.theta(j)) + offset_ - out.theta(j);
    return out;
  }
  GridFunction::check_size(n);
  RealVector lift(n);
  for (long j = 0; j < n; ++j) lift[j] = interpolate(GridFunction::node(n, j, Sampling::kNodes));
  return from_lift(std::move(lift));
}

CircleMap CircleMap::normalized() const {
  CircleMap out = *this;
  const Real phi0 = lift(0.0);
  out.periodic_.array() -= phi0;
  if (form_) out.offset_ -= phi0;
  else out.build_slopes();
  return out;
}

Real lift_distance(const CircleMap& a, const CircleMap& b) {
  const long n = std::max(a.size(), b.size());
  Real d = 0;
  for (long j = 0; j < n; ++j) {
    const Real t = GridFunction::node(n, j, Sampling::kNodes);
    d = std::max(d, std::abs(a.lift(t) - b.lift(t)));
  }
  return d;
}

Real solve_lift(const CircleMap& h, Real y) {
  const long n = h.size();
  const RealVector& p = h.periodic_part();
  const Real phi0 = h.theta(0) + p[0];
  const Real k = std::floor((y - phi0) / kTwoPi);
  const Real target = y - kTwoPi * k;  // in [φ(0), φ(0) + 2π)
  // Bracket from the node values, which are exact for closed forms.
  long lo = 0, hi = n;
  while (hi - lo > 1) {
    const long mid = (lo + hi) / 2;
    if (h.theta(mid) + p[mid] <= target) lo = mid;
    else hi = mid;
  }
  const Real a = h.theta(lo);
  const Real b = hi < n ? h.theta(hi) : kTwoPi;
  const Real x = bracketed_root([&](Real t) { return h.lift(t) - target; }, a, b);
  return x + kTwoPi * k;
}

CircleMap compose(const CircleMap& h, const CircleMap& k) {
  const long n = std::max(h.size(), k.size());
  if (h.has_closed_form() && k.has_closed_form())
    return CircleMap::from_closed_form(std::make_shared<CompositeForm>(h, k), n);
  RealVector lift(n);
  for (long j = 0; j < n; ++j) lift[j] = h.lift(k.lift(GridFunction::node(n, j, Sampling::kNodes)));
  try {
    return CircleMap::from_lift(std::move(lift));
  } catch (const InvalidArgument& e) {
    throw ConsistencyError(std::string("composition lost monotonicity, grid too coarse: ") + e.what());
  }
}

CircleMap invert(const CircleMap& h) {
  if (h.has_closed_form()) return CircleMap::from_closed_form(std::make_shared<InverseForm>(h), h.size());
  const long n = h.size();
  RealVector lift(n);
  for (long j = 0; j < n; ++j) lift[j] = solve_lift(h, h.theta(j));
  try {
    return CircleMap::from_lift(std::move(lift));
  } catch (const InvalidArgument& e) {
    throw ConsistencyError(std::string("inverse lost monotonicity: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Derivative data

GridFunction DerivativeData::log_h_prime() const {
  return GridFunction(log_phi_prime.real().cast<Complex>() + kI * periodic.real().cast<Complex>(),
                      log_phi_prime.sampling());
}

namespace {

DerivativeData assemble(RealVector phi_prime, RealVector periodic, Sampling s, Provenance prov) {
  bool degenerate = false, unbounded = false;
  const long n = phi_prime.size();
  RealVector logs(n);
  for (long j = 0; j < n; ++j) {
    Real v = phi_prime[j];
    if (!(v > 0)) {
      degenerate = true;
      v = kTiny;
    } else if (!std::isfinite(v)) {
      unbounded = true;
      v = kHuge;
    }
    phi_prime[j] = std::max<Real>(phi_prime[j], 0);
    if (!std::isfinite(phi_prime[j])) phi_prime[j] = kHuge;
    logs[j] = std::log(v);
  }
  return DerivativeData{GridFunction::from_real(phi_prime, s), GridFunction::from_real(logs, s),
                        GridFunction::from_real(periodic, s), prov, degenerate, unbounded};
}

}  // namespace

DerivativeData spectral_derivative_data(const CircleMap& h, Sampling sampling) {
  const GridFunction p = GridFunction::from_real(h.periodic_part());
  GridFunction dp = spectral_derivative(p);
  GridFunction per = p;
  if (sampling != Sampling::kNodes) {
    dp = resample(dp, sampling);
    per = resample(p, sampling);
  }
  RealVector phi_prime = dp.real().array() + 1.0;
  return assemble(std::move(phi_prime), per.real(), sampling, Provenance::kSpectral);
}

DerivativeData derivative(const CircleMap& h, std::optional<Sampling> sampling) {
  if (!h.has_closed_form()) return spectral_derivative_data(h, sampling.value_or(Sampling::kNodes));
  const ClosedForm& form = *h.closed_form();
  const long n = h.size();
  const RealVector at_nodes = form.derivative_on(n, Sampling::kNodes);
  bool node_zero = false, node_inf = false;
  for (long j = 0; j < n; ++j) {
    if (!(at_nodes[j] > 0)) node_zero = true;
    else if (!std::isfinite(at_nodes[j])) node_inf = true;
  }
  Sampling s = sampling.value_or(form.derivative_sampling());
  if (!sampling && (node_zero || node_inf)) s = Sampling::kCellCenters;

  RealVector phi_prime = s == Sampling::kNodes ? at_nodes : form.derivative_on(n, s);
  RealVector periodic(n);
  if (s == Sampling::kNodes) {
    periodic = h.periodic_part();
  } else {
    for (long j = 0; j < n; ++j) {
      const Real t = GridFunction::node(n, j, s);
      periodic[j] = h.lift(t) - t;
    }
  }
  DerivativeData d = assemble(std::move(phi_prime), std::move(periodic), s, Provenance::kAnalytic);
  d.degenerate = d.degenerate || node_zero;
  d.unbounded = d.unbounded || node_inf;
  return d;
}

// ---------------------------------------------------------------------------
// Closed forms

MobiusForm::MobiusForm(Complex a, Real beta) : a_(a), beta_(beta) {
  if (!(std::abs(a) < 1)) throw InvalidArgument("Möbius parameter must satisfy |a| < 1");
}

Real MobiusForm::lift(Real theta) const {
  return beta_ + theta - 2 * std::arg(1.0 - std::conj(a_) * std::polar(1.0, theta));
}

Real MobiusForm::lift_derivative(Real theta) const {
  return (1 - std::norm(a_)) / std::norm(1.0 - std::conj(a_) * std::polar(1.0, theta));
}

std::vector<std::pair<std::string, Real>> MobiusForm::params() const {
  return {{"a_re", a_.real()}, {"a_im", a_.imag()}, {"beta", beta_}};
}

SineForm::SineForm(Real amplitude) : amplitude_(amplitude) {
  if (!(std::abs(amplitude) <= 1)) throw InvalidArgument("sine amplitude must satisfy |eps| <= 1");
}

Real SineForm::lift(Real theta) const {
  if (amplitude_ == -1.0 && std::abs(theta) < 0.5) {
    // θ - sin θ by its Taylor series, free of cancellation near 0.
    Real term = theta * theta * theta / 6, sum = 0;
    for (int k = 1; std::abs(term) > 1e-18 * std::abs(sum) || k == 1; ++k) {
      sum += term;
      term *= -theta * theta / ((2 * k + 2) * (2 * k + 3));
    }
    return sum;
  }
  return theta + amplitude_ * std::sin(theta);
}

Real SineForm::lift_derivative(Real theta) const {
  // 1 - cos θ = 2 sin²(θ/2) without cancellation near 0.
  if (amplitude_ == -1.0) {
    const Real s = std::sin(0.5 * theta);
    return 2 * s * s;
  }
  return 1 + amplitude_ * std::cos(theta);
}

std::vector<std::pair<std::string, Real>> SineForm::params() const {
  if (amplitude_ == -1.0) return {};
  return {{"amplitude", amplitude_}};
}

DensityForm::DensityForm(GridFunction u, bool renormalize)
    : u_(std::move(u)), renormalize_(renormalize) {
  if (!u_.is_real(1e-12)) throw PreconditionError("boundary density log must be real-valued");
  const long n = u_.size();
  RealVector e = u_.real().array().exp();
  if (!e.allFinite()) throw InvalidArgument("e^u is not finite");
  const FourierSeries a = fourier_coefficients(GridFunction::from_real(e, u_.sampling()), n / 2 - 1);
  coeffs_ = a.data();
  Real alt = 0;
  for (long j = 0; j < n; ++j) alt += (j % 2 == 0 ? 1.0 : -1.0) * e[j];
  nyquist_ = alt / static_cast<Real>(n);
  const Real total = kTwoPi * a[0].real();
  if (!std::isfinite(total) || !(total > 0)) throw InvalidArgument("∫e^u is not finite and positive");
  if (renormalize_) {
    scale_ = kTwoPi / total;
  } else if (std::abs(total - kTwoPi) > 1e-8) {
    throw PreconditionError("∫e^u differs from 2π by " + std::to_string(total - kTwoPi) +
                            "; pass renormalize");
  }
}

Real DensityForm::lift(Real theta) const {
  const long n = u_.size();
  const long k = n / 2 - 1;
  const Real half = static_cast<Real>(n / 2);
  Real sum = coeffs_[k].real() * theta;
  Complex z = 1;
  const Complex step = std::polar(1.0, theta);
  for (long m = 1; m <= k; ++m) {
    z = (m % 32 == 0) ? std::polar(1.0, static_cast<Real>(m) * theta) : z * step;
    sum += 2 * (coeffs_[k + m] * (z - 1.0) / (kI * static_cast<Real>(m))).real();
  }
  if (u_.sampling() == Sampling::kNodes) sum += nyquist_ * std::sin(half * theta) / half;
  else sum += nyquist_ * (1 - std::cos(half * theta)) / half;
  return scale_ * sum;
}

Real DensityForm::lift_derivative(Real theta) const {
  const long n = u_.size();
  const long k = n / 2 - 1;
  const Real half = static_cast<Real>(n / 2);
  Real sum = coeffs_[k].real();
  Complex z = 1;
  const Complex step = std::polar(1.0, theta);
  for (long m = 1; m <= k; ++m) {
    z = (m % 32 == 0) ? std::polar(1.0, static_cast<Real>(m) * theta) : z * step;
    sum += 2 * (coeffs_[k + m] * z).real();
  }
  sum += nyquist_ * (u_.sampling() == Sampling::kNodes ? std::cos(half * theta) : std::sin(half * theta));
  return scale_ * sum;
}

RealVector DensityForm::lift_on_nodes(long n) const {
  if (n != u_.size()) return ClosedForm::lift_on_nodes(n);
  const long k = n / 2 - 1;
  FourierSeries c(k);
  Complex constant = 0;
  for (long m = 1; m <= k; ++m) {
    c[m] = coeffs_[k + m] / (kI * static_cast<Real>(m));
    c[-m] = std::conj(c[m]);
    constant -= c[m] + c[-m];
  }
  c[0] = constant;
  const RealVector periodic = c.synthesize(n, Sampling::kNodes).real();
  RealVector out(n);
  for (long j = 0; j < n; ++j) {
    const Real t = GridFunction::node(n, j, Sampling::kNodes);
    Real v = coeffs_[k].real() * t + periodic[j];
    if (u_.sampling() == Sampling::kCellCenters)
      v += nyquist_ * (j % 2 == 0 ? 0.0 : 2.0) / static_cast<Real>(n / 2);
    out[j] = scale_ * v;
  }
  return out;
}

RealVector DensityForm::derivative_on(long n, Sampling s) const {
  if (n != u_.size() || s != u_.sampling()) return ClosedForm::derivative_on(n, s);
  return scale_ * u_.real().array().exp();
}

Real CompositeForm::lift_derivative(Real theta) const {
  const Real inner = inner_.lift_derivative(theta);
  const Real outer = outer_.lift_derivative(inner_.lift(theta));
  if (inner == 0 || outer == 0) return 0;
  return outer * inner;
}

Sampling CompositeForm::derivative_sampling() const {
  const auto pick = [](const CircleMap& m) { return m.closed_form()->derivative_sampling(); };
  return (pick(outer_) == Sampling::kCellCenters || pick(inner_) == Sampling::kCellCenters)
             ? Sampling::kCellCenters
             : Sampling::kNodes;
}

Real InverseForm::lift(Real theta) const { return solve_lift(base_, theta); }

Real InverseForm::lift_derivative(Real theta) const {
  const Real d = base_.lift_derivative(solve_lift(base_, theta));
  if (d == 0) return std::numeric_limits<Real>::infinity();
  return 1 / d;
}

Sampling InverseForm::derivative_sampling() const { return base_.closed_form()->derivative_sampling(); }

CircleMap from_boundary_density(const GridFunction& u, bool renormalize) {
  return CircleMap::from_closed_form(std::make_shared<DensityForm>(u, renormalize), u.size());
}

}  // namespace wpc
