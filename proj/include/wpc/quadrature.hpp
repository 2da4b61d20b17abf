#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "wpc/types.hpp"

namespace wpc {

/// Gauss–Legendre rule on [-1, 1].
struct GaussLegendre {
  RealVector nodes;
  RealVector weights;

  explicit GaussLegendre(int n);

  /// ∫_a^b f.
  template <typename F>
  Real integrate(F&& f, Real a, Real b) const {
    const Real half = 0.5 * (b - a);
    const Real mid = 0.5 * (a + b);
    Real sum = 0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return sum * half;
  }
};

/// Double-exponential (tanh–sinh) quadrature on [a, b]. Integrable endpoint
/// singularities are fine; the integrand receives the abscissa together with
/// its distances to a and to b so it can avoid cancellation near either end.
struct TanhSinh {
  Real tolerance = 1e-14;
  int max_levels = 8;

  Real integrate(const std::function<Real(Real x, Real from_a, Real to_b)>& f, Real a, Real b) const;
  Real integrate(const std::function<Real(Real)>& f, Real a, Real b) const;
};

}  // namespace wpc
