#pragma once

#include <cmath>
#include <random>

#include "wpc/fourier.hpp"

namespace wpc::testing {

// Seeded generators for property checks.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  Real uniform(Real lo, Real hi) { return std::uniform_real_distribution<Real>(lo, hi)(rng_); }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  Complex in_disk(Real radius) {
    const Real r = radius * std::sqrt(uniform(0, 1));
    return std::polar(r, uniform(0, kTwoPi));
  }

  // Random real trigonometric polynomial of degree <= k with decaying modes.
  FourierSeries real_trig(long k, Real decay = 1.0) {
    FourierSeries a(k);
    a[0] = uniform(-1, 1);
    for (long n = 1; n <= k; ++n) {
      a[n] = Complex(uniform(-1, 1), uniform(-1, 1)) / std::pow(static_cast<Real>(n), decay);
      a[-n] = std::conj(a[n]);
    }
    return a;
  }

  FourierSeries complex_trig(long k) {
    FourierSeries a(k);
    for (long n = -k; n <= k; ++n) a[n] = Complex(uniform(-1, 1), uniform(-1, 1));
    return a;
  }

 private:
  std::mt19937_64 rng_;
};

// ζ(3) by direct summation with an Euler–Maclaurin tail.
inline Real zeta3() {
  Real s = 0;
  const long n = 100000;
  for (long k = n; k >= 1; --k) s += 1.0 / (static_cast<Real>(k) * k * k);
  const Real m = static_cast<Real>(n);
  return s + 1 / (2 * m * m) - 1 / (2 * m * m * m);
}

inline Real max_abs(const ComplexVector& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace wpc::testing
