#include "wpc/pullback.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

namespace wpc {

namespace {

GridFunction on_lift(const CircleMap& h, const auto& f) {
  const RealVector psi = h.lift_samples();
  ComplexVector v(psi.size());
  for (Eigen::Index j = 0; j < psi.size(); ++j) v[j] = f(psi[j]);
  return GridFunction(std::move(v));
}

// Σ a_n e^{inθ} with the powers of e^{iθ} built by repeated multiplication,
// reseeded from std::polar every 64 steps.
Complex evaluate_series(const FourierSeries& a, Real theta) {
  const long k = a.max_mode();
  Complex sum = a[0];
  Complex w = 1;
  const Complex step = std::polar(1.0, theta);
  for (long n = 1; n <= k; ++n) {
    w = n % 64 == 0 ? std::polar(1.0, static_cast<Real>(n) * theta) : w * step;
    sum += a[n] * w + a[-n] * std::conj(w);
  }
  return sum;
}

// Σ_{|n| > cut} |n| |a_n|^2 / Σ |n| |a_n|^2.
Real dirichlet_tail(const FourierSeries& a, long cut) {
  Real total = 0, tail = 0;
  for (long n = 1; n <= a.max_mode(); ++n) {
    const Real e = static_cast<Real>(n) * (std::norm(a[n]) + std::norm(a[-n]));
    total += e;
    if (n > cut) tail += e;
  }
  return total > 0 ? tail / total : 0;
}

}  // namespace

FourierSeries pullback_apply(const CircleMap& h, const FourierSeries& u) {
  const FourierSeries out = spectrum(on_lift(h, [&](Real t) { return evaluate_series(u, t); }));
  const long quarter = h.size() / 4;
  Real total = 0, tail = 0;
  for (long n = -out.max_mode(); n <= out.max_mode(); ++n) {
    total += std::norm(out[n]);
    if (std::abs(n) > quarter) tail += std::norm(out[n]);
  }
  if (total > 0 && tail > 0.1 * total) throw AliasingError("pull-back spectrum is not resolved by the grid");
  return out;
}

PmMatrices pm_matrices(const CircleMap& h, long k) {
  const long n = h.size();
  if (k < 1 || k > n / 8) throw InvalidArgument("pull-back truncation must satisfy 1 <= K <= N/8");
  PmMatrices pm;
  pm.plus.matrix = ComplexMatrix::Zero(k, k);
  pm.minus.matrix = ComplexMatrix::Zero(k, k);
  pm.plus.basis = pm.minus.basis = kDirichletBasis;
  pm.plus.label = "P_plus";
  pm.minus.label = "P_minus";
  const RealVector psi = h.lift_samples();
  for (long col = 1; col <= k; ++col) {
    ComplexVector v(n);
    for (long j = 0; j < n; ++j) v[j] = std::polar(1.0, static_cast<Real>(col) * psi[j]);
    const FourierSeries c = spectrum(GridFunction(std::move(v)));
    for (long m = 1; m <= k; ++m) {
      const Real w = std::sqrt(static_cast<Real>(m) / static_cast<Real>(col));
      pm.plus.matrix(m - 1, col - 1) = w * c[m];
      pm.minus.matrix(m - 1, col - 1) = w * c[-m];
    }
    Real plus = 0, minus = 0;
    for (long m = 1; m <= c.max_mode(); ++m) {
      plus += static_cast<Real>(m) * std::norm(c[m]);
      minus += static_cast<Real>(m) * std::norm(c[-m]);
    }
    pm.plus_energy.push_back(plus / static_cast<Real>(col));
    pm.minus_energy.push_back(minus / static_cast<Real>(col));
    pm.tail.push_back(dirichlet_tail(c, n / 4));
    pm.scored.push_back(pm.tail.back() < kAliasingThreshold);
    if (!pm.scored.back())
      pm.plus.warnings.push_back("column " + std::to_string(col) + " flagged: aliasing tail " +
                                 std::to_string(pm.tail.back()));
  }
  return pm;
}

Real energy_identity_residual(const PmMatrices& pm) {
  Real r = 0;
  const std::size_t half = std::max<std::size_t>(1, pm.plus_energy.size() / 2);
  for (std::size_t c = 0; c < half; ++c)
    if (pm.scored[c]) r = std::max(r, std::abs(pm.plus_energy[c] - 1 - pm.minus_energy[c]));
  return r;
}

Real energy_identity_residual(const CircleMap& h, long k) { return energy_identity_residual(pm_matrices(h, k)); }

Real commutator_identity_residual(const CircleMap& h, const PowerSeries& phi) {
  if (phi.domain() != PowerSeries::Domain::kDisk) throw PreconditionError("φ must be a series on the disk");
  const long n = h.size();
  const long d = phi.truncation();
  if (d > n / 32) throw PreconditionError("φ has too high a degree for the grid");
  FourierSeries u(std::max<long>(d, 1));
  for (long m = 0; m <= d; ++m) u[m] = phi[m];

  const FourierSeries v = pullback_apply(h, u);
  const ComplexVector hv = harmonic_conjugate(v).synthesize(n).values();
  FourierSeries plus(v.max_mode());
  for (long m = 0; m <= v.max_mode(); ++m) plus[m] = v[m];
  const ComplexVector pv = plus.synthesize(n).values();
  const RealVector psi = h.lift_samples();
  const Complex phi0 = phi[0];
  Real r = 0;
  for (long j = 0; j < n; ++j) {
    const Complex hp = -kI * (phi.evaluate(std::polar(1.0, psi[j])) - phi0);
    const Complex lhs = hv[j] + hp;
    const Complex rhs = -kI * (2.0 * pv[j] - v[0] - phi0);
    r = std::max(r, std::abs(lhs - rhs));
  }
  return r;
}

Real grunsky_relation_residual(const CircleMap& h, const PowerSeries& log_fp, long k) {
  const PowerSeries f = from_log_derivative(log_fp);
  const FourierSeries g = spectrum(on_lift(h, [&](Real t) { return f.evaluate(std::polar(1.0, t)); }));
  Real total = 0, positive = 0;
  for (long m = -g.max_mode(); m <= g.max_mode(); ++m) {
    total += std::norm(g[m]);
    if (m >= 2) positive += std::norm(g[m]);
  }
  if (!(positive <= 1e-20 * total)) throw PreconditionError("f ∘ h does not extend to the exterior: (f, h) is not a welding pair");

  const PmMatrices pm = pm_matrices(h, k);
  const ComplexMatrix gf = grunsky_matrix(log_fp, k).matrix;
  const ComplexMatrix r = pm.plus.matrix * gf - pm.minus.matrix.conjugate();
  return r.colwise().norm().maxCoeff();
}

Real welding_identity_residual(const CircleMap& h, const PowerSeries& log_fp, const PowerSeries& log_gp) {
  if (log_fp.domain() != PowerSeries::Domain::kDisk) throw PreconditionError("log f' must be a disk series");
  if (log_gp.domain() != PowerSeries::Domain::kExterior) throw PreconditionError("log g' must be an exterior series");
  const long n = h.size();
  const GridFunction lhp = derivative(h, Sampling::kNodes).log_h_prime();
  const RealVector psi = h.lift_samples();
  ComplexVector r(n);
  for (long j = 0; j < n; ++j) {
    const Real t = h.theta(j);
    r[j] = lhp[j] - (log_gp.evaluate(std::polar(1.0, t)) - log_fp.evaluate(std::polar(1.0, psi[j])));
  }
  for (long j = 0; j + 1 < n; ++j)
    if (std::abs(r[j + 1].imag() - r[j].imag()) > kPi) throw BranchError("logarithm jumps by 2π between samples");
  const Complex shift(0, kTwoPi * std::round(r[0].imag() / kTwoPi));
  return (r.array() - shift).abs().maxCoeff();
}

CommutatorSolve commutator_inverse_probe(const CircleMap& h, const FourierSeries& v, long k) {
  const long n = h.size();
  if (k < 1 || k > n / 8) throw InvalidArgument("probe truncation must satisfy 1 <= K <= N/8");
  const long m = n / 2 - 1;
  const RealVector psi = h.lift_samples();

  // Real coordinates of the output: sqrt(2m)·(Re c_m, Im c_m), m >= 1, so
  // Euclidean norms are H^{1/2} seminorms of real functions.
  auto coords = [&](const FourierSeries& c) {
    RealVector x(2 * m);
    for (long j = 1; j <= m; ++j) {
      const Real w = std::sqrt(2.0 * static_cast<Real>(j));
      const Complex cj = j <= c.max_mode() ? c[j] : Complex(0);
      x[2 * (j - 1)] = w * cj.real();
      x[2 * (j - 1) + 1] = w * cj.imag();
    }
    return x;
  };

  Eigen::MatrixXd a(2 * m, 2 * k);
  for (long p = 1; p <= k; ++p) {
    const Real q = static_cast<Real>(p);
    const FourierSeries cp = spectrum(on_lift(h, [&](Real t) { return Complex(std::cos(q * t)); }));
    const FourierSeries sp = spectrum(on_lift(h, [&](Real t) { return Complex(std::sin(q * t)); }));
    // cos pθ -> H(cos pφ) + sin pφ, sin pθ -> H(sin pφ) - cos pφ.
    FourierSeries col_c = harmonic_conjugate(cp), col_s = harmonic_conjugate(sp);
    for (long j = -sp.max_mode(); j <= sp.max_mode(); ++j) {
      col_c[j] += sp[j];
      col_s[j] -= cp[j];
    }
    a.col(2 * (p - 1)) = coords(col_c);
    a.col(2 * (p - 1) + 1) = coords(col_s);
  }
  const RealVector b = coords(v);
  const RealVector x = a.colPivHouseholderQr().solve(b);

  CommutatorSolve out;
  out.u = FourierSeries(k);
  for (long p = 1; p <= k; ++p) {
    const Complex c(x[2 * (p - 1)], -x[2 * (p - 1) + 1]);
    out.u[p] = 0.5 * c;
    out.u[-p] = 0.5 * std::conj(c);
  }
  out.u_norm = sobolev_seminorm(out.u, 0.5);
  out.v_norm = sobolev_seminorm(v, 0.5);
  out.residual = out.v_norm > 0 ? (a * x - b).norm() / b.norm() : 0;
  return out;
}

}  // namespace wpc
