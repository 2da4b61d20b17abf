#include <doctest.h>

#include "support.hpp"
#include "wpc/circle_map.hpp"

using namespace wpc;
using testing::Gen;

namespace {

// Boundary action of the Möbius map, computed directly in C.
Complex mobius_point(Complex a, Real beta, Real theta) {
  const Complex z = std::polar(1.0, theta);
  return std::polar(1.0, beta) * (z - a) / (1.0 - std::conj(a) * z);
}

// Distance on the circle between e^{iφ} and the expected point.
Real circle_gap(Real phi, Complex expected) { return std::abs(std::polar(1.0, phi) - expected); }

CircleMap wavy(long n, Real eps) {
  RealVector lift(n);
  for (long j = 0; j < n; ++j) {
    const Real t = kTwoPi * j / n;
    lift[j] = t + eps * std::sin(t) + 0.5 * eps * std::sin(2 * t + 1);
  }
  return CircleMap::from_lift(lift);
}

}  // namespace

TEST_CASE("lift validation and storage") {
  RealVector bad = RealVector::LinSpaced(16, 0, 1);
  bad[5] = bad[4];
  CHECK_THROWS_AS(CircleMap::from_lift(bad), InvalidArgument);
  RealVector wide(16);
  for (int j = 0; j < 16; ++j) wide[j] = 3 * kTwoPi * j / 16;
  CHECK_THROWS_AS(CircleMap::from_lift(wide), InvalidArgument);

  const CircleMap r = CircleMap::rotation(-1.0, 64);
  CHECK(r.lift(0) == doctest::Approx(kTwoPi - 1.0));
  CHECK(r.periodic_part().maxCoeff() - r.periodic_part().minCoeff() < 1e-14);
  CHECK(r.lift(0.3 + kTwoPi) - r.lift(0.3) == doctest::Approx(kTwoPi));
  CHECK(std::abs(r.normalized().lift(0)) < 1e-15);
}

TEST_CASE("closed forms resample exactly") {
  const CircleMap m = CircleMap::mobius({0.3, -0.2}, 0.7, 64);
  const CircleMap fine = m.resampled(4096);
  for (long j = 0; j < 4096; ++j) {
    const Real t = fine.theta(j);
    CHECK(circle_gap(fine.lift_samples()[j], mobius_point({0.3, -0.2}, 0.7, t)) < 1e-12);
  }
}

TEST_CASE("composition") {
  const long n = 256;
  for (const CircleMap& h : {CircleMap::mobius({0.4, 0.1}, 0.3, n), wavy(n, 0.3)}) {
    CHECK(lift_distance(compose(h, CircleMap::identity(n)), h) < 1e-13);
    CHECK(lift_distance(compose(CircleMap::identity(n), h), h) < 1e-13);
  }
  const CircleMap r = compose(CircleMap::rotation(1.0, n), CircleMap::rotation(2.5, n));
  for (long j = 0; j < n; ++j) CHECK(circle_gap(r.lift_samples()[j], std::polar(1.0, r.theta(j) + 3.5)) < 1e-14);

  // Möbius group law: the inverse of (a, β) is (-a e^{iβ}, -β).
  const Complex a(0.35, -0.5);
  const Real beta = 1.2;
  const CircleMap id = compose(CircleMap::mobius(a, beta, n), CircleMap::mobius(-a * std::polar(1.0, beta), -beta, n));
  for (long j = 0; j < n; ++j) CHECK(circle_gap(id.lift_samples()[j], std::polar(1.0, id.theta(j))) < 1e-13);
}

TEST_CASE("inversion") {
  const long n = 1 << 12;
  CHECK(lift_distance(invert(CircleMap::identity(n)), CircleMap::identity(n)) < 1e-14);
  const CircleMap r = invert(CircleMap::rotation(0.8, n));
  for (long j = 0; j < n; j += 97) CHECK(circle_gap(r.lift_samples()[j], std::polar(1.0, r.theta(j) - 0.8)) < 1e-14);

  const CircleMap inv = invert(CircleMap::mobius(0.3, 0, n));
  Real gap = 0;
  for (long j = 0; j < n; ++j) gap = std::max(gap, circle_gap(inv.lift_samples()[j], mobius_point(-0.3, 0, inv.theta(j))));
  CHECK(gap < 1e-8);
  CHECK(lift_distance(compose(CircleMap::mobius(0.3, 0, n), inv), CircleMap::identity(n)) < 1e-12);
}

TEST_CASE("sampled maps: inverse and composition converge under refinement") {
  struct Wavy final : ClosedForm {
    Real lift(Real t) const override { return t + 0.4 * std::sin(t) + 0.2 * std::sin(2 * t + 1); }
    Real lift_derivative(Real t) const override { return 1 + 0.4 * std::cos(t) + 0.4 * std::cos(2 * t + 1); }
    std::string family() const override { return "wavy"; }
  };
  const auto form = std::make_shared<Wavy>();
  Real prev_inv = 1, prev_comp = 1;
  for (long n : {64L, 256L, 1024L}) {
    const CircleMap exact = CircleMap::from_closed_form(form, n);
    const CircleMap sampled = CircleMap::from_lift(exact.lift_samples());
    const Real d_inv = lift_distance(invert(sampled), invert(exact));
    const Real d_comp = lift_distance(compose(sampled, sampled), compose(exact, exact));
    CHECK(d_inv < 2.0 / n);
    CHECK(d_comp < 2.0 / n);
    CHECK(d_inv < prev_inv);
    CHECK(d_comp < prev_comp);
    prev_inv = d_inv;
    prev_comp = d_comp;
    CHECK(lift_distance(compose(sampled, invert(sampled)), CircleMap::identity(n)) < 1e-12);
  }
}

TEST_CASE("property: random Möbius maps compose and invert consistently") {
  Gen g(99);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex a = g.in_disk(0.8), b = g.in_disk(0.8);
    const Real alpha = g.uniform(-kPi, kPi), beta = g.uniform(-kPi, kPi);
    const long n = 128;
    const CircleMap h = CircleMap::mobius(a, alpha, n), k = CircleMap::mobius(b, beta, n);
    const CircleMap hk = compose(h, k);
    for (long j = 0; j < n; j += 7) {
      const Complex z = mobius_point(a, alpha, std::arg(mobius_point(b, beta, hk.theta(j))));
      CHECK(circle_gap(hk.lift_samples()[j], z) < 1e-12);
    }
    CHECK(lift_distance(compose(invert(h), h), CircleMap::identity(n)) < 1e-11);
    const RealVector s = hk.lift_samples();
    for (long j = 0; j + 1 < n; ++j) CHECK(s[j + 1] > s[j]);
  }
}

TEST_CASE("derivatives") {
  const long n = 1 << 12;
  const DerivativeData id = derivative(CircleMap::identity(n));
  CHECK(testing::max_abs(id.phi_prime.values().array() - 1.0) < 1e-15);
  CHECK(testing::max_abs(id.log_phi_prime.values()) < 1e-15);
  CHECK(id.provenance == Provenance::kAnalytic);

  // Möbius: centred differences of the boundary argument.
  const Complex a(0.3, 0.4);
  const DerivativeData m = derivative(CircleMap::mobius(a, 0.5, n));
  for (long j = 0; j < n; j += 101) {
    const Real t = m.phi_prime.theta(j), e = 1e-5;
    const Real fd = std::arg(mobius_point(a, 0.5, t + e) / mobius_point(a, 0.5, t - e)) / (2 * e);
    CHECK(m.phi_prime[j].real() == doctest::Approx(fd).epsilon(1e-8));
    CHECK(std::exp(m.log_phi_prime[j].real()) == doctest::Approx(m.phi_prime[j].real()).epsilon(1e-12));
  }

  // Analytic and spectral agree for real-analytic maps.
  const DerivativeData s = spectral_derivative_data(CircleMap::mobius(a, 0.5, n));
  CHECK(s.provenance == Provenance::kSpectral);
  CHECK(testing::max_abs(s.phi_prime.values() - m.phi_prime.values()) < 1e-8);
  const CircleMap sampled = CircleMap::from_lift(CircleMap::mobius(a, 0.5, n).lift_samples());
  CHECK(derivative(sampled).provenance == Provenance::kSpectral);

  const DerivativeData flat = derivative(CircleMap::sine(-1, 256));
  CHECK(flat.degenerate);
  CHECK(flat.phi_prime.sampling() == Sampling::kCellCenters);
  for (long j = 0; j < 256; ++j)
    CHECK(flat.phi_prime[j].real() == doctest::Approx(1 - std::cos(flat.phi_prime.theta(j))).epsilon(1e-12));
  CHECK(derivative(CircleMap::sine(-1, 256), Sampling::kNodes).degenerate);
  CHECK(CircleMap::sine(-1, 64).family() == "sine_flat");
}

TEST_CASE("maps from boundary densities") {
  const long n = 256;
  const auto zero = GridFunction::sample(n, [](Real) { return 0.0; });
  CHECK(lift_distance(from_boundary_density(zero, false), CircleMap::identity(n)) < 1e-13);

  const auto flat_log = GridFunction::sample(
      n, [](Real t) { return std::log(2 * std::pow(std::sin(t / 2), 2)); }, Sampling::kCellCenters);
  const CircleMap flat = from_boundary_density(flat_log, false);
  for (long j = 0; j < n; ++j) CHECK(std::abs(flat.lift(flat.theta(j)) - (flat.theta(j) - std::sin(flat.theta(j)))) < 1e-12);
  for (Real t : {0.1, 1.7, 4.0}) CHECK(std::abs(flat.lift(t) - (t - std::sin(t))) < 1e-12);

  const auto shifted = GridFunction::sample(n, [](Real t) { return 0.3 + 0.5 * std::cos(t); });
  CHECK_THROWS_AS(from_boundary_density(shifted, false), PreconditionError);
}

TEST_CASE("property: derivative of a density map returns the density") {
  Gen g(3);
  for (int trial = 0; trial < 10; ++trial) {
    const long n = 1L << g.integer(5, 10);
    const Sampling s = trial % 2 ? Sampling::kCellCenters : Sampling::kNodes;
    const GridFunction u = g.real_trig(g.integer(1, 8), 2).synthesize(n, s);
    const CircleMap h = from_boundary_density(u, true);
    const DerivativeData d = derivative(h);
    const RealVector diff = d.log_phi_prime.real() - u.real();
    CHECK(diff.maxCoeff() - diff.minCoeff() < 1e-8);
    CHECK(d.log_phi_prime.sampling() == s);
    const RealVector lift = h.lift_samples();
    for (long j = 0; j + 1 < n; ++j) CHECK(lift[j + 1] > lift[j]);
    CHECK(h.lift(kTwoPi) - h.lift(0) == doctest::Approx(kTwoPi).epsilon(1e-13));
    // Node values from the fast path agree with pointwise evaluation.
    for (long j = 0; j < n; j += n / 8) CHECK(std::abs(lift[j] - h.closed_form()->lift(h.theta(j)) - h.offset()) < 1e-11);
  }
}
