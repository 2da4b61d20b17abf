#include "wpc/quadrature.hpp"

#include <limits>
#include <utility>

namespace wpc {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<Real, Real> legendre(int n, Real x) {
  Real p0 = 1, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1)};
}

}  // namespace

GaussLegendre::GaussLegendre(int n) : nodes(n), weights(n) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
  if (n == 1) {
    nodes[0] = 0;
    weights[0] = 2;
    return;
  }
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const Real dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const Real dp = legendre(n, x).second;
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2 / ((1 - x * x) * dp * dp);
  }
}

Real TanhSinh::integrate(const std::function<Real(Real, Real, Real)>& f, Real a, Real b) const {
  const Real half = 0.5 * (b - a);
  const Real mid = 0.5 * (a + b);
  constexpr Real kTMax = 6.5;

  // Sum over abscissae t = k·step; odd k only after the first level.
  auto sweep = [&](Real step, bool odd_only) {
    Real sum = 0;
    const long kmax = static_cast<long>(kTMax / step);
    for (long k = odd_only ? 1 : 0; k <= kmax; k += odd_only ? 2 : 1) {
      const Real t = k * step;
      const Real s = 0.5 * kPi * std::sinh(t);
      const Real c = std::cosh(s);
      // 1 - x and 1 + x without cancellation.
      const Real complement = 1 / (std::exp(s) * c);
      const Real w = 0.5 * kPi * std::cosh(t) / (c * c);
      if (w < std::numeric_limits<Real>::min()) break;
      const Real dist = half * complement;  // distance to the nearer end
      if (dist <= 0) break;
      const Real xr = mid + half * std::tanh(s);
      const Real right = f(xr, (b - a) - dist, dist);
      sum += w * right;
      if (k != 0) {
        const Real xl = mid - half * std::tanh(s);
        sum += w * f(xl, dist, (b - a) - dist);
      }
    }
    return sum;
  };

  Real step = 0.5;
  Real estimate = step * sweep(step, false) * half;
  for (int level = 1; level <= max_levels; ++level) {
    step *= 0.5;
    const Real refined = 0.5 * estimate + step * sweep(step, true) * half;
    const Real diff = std::abs(refined - estimate);
    estimate = refined;
    if (level >= 3 && diff <= tolerance * std::abs(estimate)) break;
  }
  return estimate;
}

Real TanhSinh::integrate(const std::function<Real(Real)>& f, Real a, Real b) const {
  return integrate([&](Real x, Real, Real) { return f(x); }, a, b);
}

}  // namespace wpc
