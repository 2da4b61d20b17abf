#include <doctest.h>

#include "support.hpp"
#include "wpc/bmo.hpp"

using namespace wpc;
using testing::Gen;

namespace {

// ∫_0^1 |log s + 1| ds via s = e^{-x}: ∫_0^∞ |1 - x| e^{-x} dx.
Real log_oscillation_oracle() {
  const Real h = 1e-4;
  Real sum = 0;
  for (Real x = 0.5 * h; x < 60; x += h) sum += std::abs(1 - x) * std::exp(-x) * h;
  return sum;
}

GridFunction flat_log(long n) {
  return GridFunction::sample(
      n, [](Real t) { return std::log(2 * std::pow(std::sin(t / 2), 2)); }, Sampling::kCellCenters);
}

}  // namespace

TEST_CASE("constants have no oscillation") {
  const auto c = GridFunction::sample(256, [](Real) { return 3.0; });
  const OscillationProfile p = bmo_norm_estimate(c, 4 * c.spacing());
  CHECK(p.size() == 6);
  for (std::size_t k = 0; k < p.size(); ++k) {
    CHECK(p.worst_oscillation[k] == 0);
    CHECK(p.at_zero[k] == 0);
  }
  CHECK(vmo_verdict(p, 0.05) == VmoVerdict::kVanishing);
  CHECK_THROWS_AS(bmo_norm_estimate(c, c.spacing()), PreconditionError);
}

TEST_CASE("flat map: oscillation at zero tends to 4/e") {
  const Real oracle = 2 * log_oscillation_oracle();
  CHECK(oracle == doctest::Approx(4 / std::exp(1.0)).epsilon(1e-6));
  const GridFunction u = flat_log(1 << 16);
  const OscillationProfile p = bmo_norm_estimate(u, 1e-2);
  CHECK(p.at_zero.back() == doctest::Approx(oracle).epsilon(0.01));
  CHECK(vmo_verdict(p, 0.1) == VmoVerdict::kPersistent);
  for (std::size_t k = 0; k < p.size(); ++k) CHECK(p.worst_oscillation[k] >= p.at_zero[k]);
}

TEST_CASE("parabola: worst oscillation at the largest scale") {
  const long n = 1 << 12;
  const auto u = GridFunction::sample(n, [](Real t) { return (kPi - t) * (kPi - t); });
  const OscillationProfile p = bmo_norm_estimate(u, 0.01);
  CHECK(p.norm() == p.worst_oscillation.front());
  CHECK(p.norm() > 0);
  for (std::size_t k = 0; k + 1 < p.size(); ++k) CHECK(p.worst_oscillation[k + 1] <= p.worst_oscillation[k]);

  // Brute-force oracle at scale π over the same 64 positions, fine midpoint rule.
  Real oracle = 0;
  for (int pos = 0; pos < 64; ++pos) {
    const Real a = kTwoPi * pos / 64;
    const int m = 20000;
    auto f = [&](int i) {
      Real t = a + kPi * (i + 0.5) / m;
      if (t >= kTwoPi) t -= kTwoPi;
      return (kPi - t) * (kPi - t);
    };
    Real mean = 0;
    for (int i = 0; i < m; ++i) mean += f(i) / m;
    Real dev = 0;
    for (int i = 0; i < m; ++i) dev += std::abs(f(i) - mean) / m;
    oracle = std::max(oracle, dev);
  }
  CHECK(p.worst_oscillation.front() == doctest::Approx(oracle).epsilon(1e-3));
  CHECK(vmo_verdict(p, 0.1) == VmoVerdict::kVanishing);
}

TEST_CASE("property: invariance under constants and aligned shifts") {
  Gen g(17);
  for (int trial = 0; trial < 10; ++trial) {
    const long n = 1L << g.integer(8, 11);
    const GridFunction u = g.real_trig(g.integer(1, 20), 1).synthesize(n);
    const OscillationProfile p = bmo_norm_estimate(u, 8 * u.spacing());
    const Real c = g.uniform(-5, 5);
    const OscillationProfile q = bmo_norm_estimate(GridFunction(u.values().array() + c), 8 * u.spacing());
    const OscillationProfile r = bmo_norm_estimate(u.shifted((n / 64) * g.integer(1, 63)), 8 * u.spacing());
    for (std::size_t k = 0; k < p.size(); ++k) {
      CHECK(std::abs(q.worst_oscillation[k] - p.worst_oscillation[k]) < 1e-12);
      CHECK(std::abs(r.worst_oscillation[k] - p.worst_oscillation[k]) < 1e-12);
      CHECK(p.worst_oscillation[k] <= 2 * u.values().cwiseAbs().maxCoeff() + 1e-12);
    }
    // Smooth functions: oscillation decays at fine scales.
    CHECK(p.worst_oscillation.back() < p.worst_oscillation.front());
  }
}

TEST_CASE("John–Nirenberg probe") {
  const long n = 1 << 14;
  const auto c = GridFunction::sample(n, [](Real) { return 2.0; });
  const TailReport rc = john_nirenberg_probe(c, 0, kPi);
  for (std::size_t k = 1; k < rc.lambdas.size(); ++k) CHECK(rc.distribution[k] == 0);

  const auto cosine = GridFunction::sample(n, [](Real t) { return std::cos(t); });
  const TailReport rcos = john_nirenberg_probe(cosine, 0, kTwoPi);
  for (std::size_t k = 0; k < rcos.lambdas.size(); ++k)
    if (rcos.lambdas[k] > 2) CHECK(rcos.distribution[k] == 0);

  // 2 log sin(θ/2) on (0, π): u_I = -2 log 2 and below u_I the distribution is
  // (2/π) arcsin(e^{(u_I - λ)/2}), an exponential tail with rate 1/2.
  auto log_sine = [](long m) {
    return GridFunction::sample(m, [](Real t) { return 2 * std::log(std::sin(t / 2)); }, Sampling::kCellCenters);
  };
  const TailReport r = john_nirenberg_probe(log_sine(n), 0, kPi, {1.0, 0.25});
  CHECK(r.rate == doctest::Approx(0.5).epsilon(0.05));
  const Real mean = -2 * std::log(2.0);
  for (std::size_t k = 0; k < r.lambdas.size(); ++k) {
    const Real lam = r.lambdas[k];
    if (lam < 1.5 || r.distribution[k] * n / 2 < 50) continue;
    const Real exact = 2 / kPi * std::asin(std::exp((mean - lam) / 2));
    CHECK(r.distribution[k] == doctest::Approx(exact).epsilon(0.05));
  }
  // The p = 1 moment of e^{|u - u_I|} grows without bound under refinement
  // because the tail rate is below 1; p = 1/4 stays bounded.
  const TailReport fine = john_nirenberg_probe(log_sine(4 * n), 0, kPi, {1.0, 0.25});
  CHECK(fine.moments[0].value > 3 * r.moments[0].value);
  CHECK(fine.moments[1].value == doctest::Approx(r.moments[1].value).epsilon(0.05));
  CHECK(std::isinf(r.moments[0].bound));
  CHECK(r.bmo > 0);
}

TEST_CASE("exponential integrability") {
  const auto zero = GridFunction::sample(64, [](Real) { return 0.0; });
  for (Real p : {1.0, 2.5}) CHECK(exp_lp_norm(zero, p).value == doctest::Approx(1.0).epsilon(1e-15));
  const ExpNorm flat = exp_lp_norm(flat_log(1024), 1);
  CHECK(flat.value == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(flat.profile.size() == 4);
  CHECK_THROWS_AS(exp_lp_norm(zero, 0.5), InvalidArgument);
}

TEST_CASE("property: exponential norms converge along BMO-convergent sequences") {
  Gen g(41);
  for (int trial = 0; trial < 5; ++trial) {
    const long n = 1024;
    const GridFunction u = g.real_trig(6, 1).synthesize(n);
    FourierSeries v = g.real_trig(10, 0.5);
    v[0] = 0;
    const GridFunction dv = v.synthesize(n);
    for (Real p : {1.0, 3.0}) {
      const Real base = exp_lp_norm(u, p).value;
      Real prev_gap = std::numeric_limits<Real>::infinity(), prev_bmo = prev_gap;
      for (int k = 3; k <= 8; ++k) {
        const Real eps = std::pow(0.5, k);
        const GridFunction un(u.values() + eps * dv.values());
        const Real bmo = bmo_norm_estimate(un - u, 8 * u.spacing()).norm();
        const Real gap = std::abs(exp_lp_norm(un, p).value - base);
        CHECK(bmo < prev_bmo);
        CHECK(gap < prev_gap);
        prev_bmo = bmo;
        prev_gap = gap;
      }
      CHECK(prev_gap < 0.05 * base);
    }
  }
}
