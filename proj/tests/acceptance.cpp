// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "wpc/bmo.hpp"
#include "wpc/diagnostics.hpp"
#include "wpc/gallery.hpp"
#include "wpc/pullback.hpp"

using namespace wpc;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

Real at_level(const DyadicProfile& p, long level) {
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p.levels[k] == level) return p.values[k];
  return std::numeric_limits<Real>::quiet_NaN();
}

PowerSeries log_derivative_of(const ComplexVector& f, long order) {
  ComplexVector c = ComplexVector::Zero(order + 2);
  c.head(f.size()) = f;
  return series_log(PowerSeries(c).derivative());
}

// Cosine coefficients of φ'_α (series oracle for the counterexample).
Real phi_prime_cosine(Real alpha, long n, Real harmonic) {
  const Real m = static_cast<Real>(n);
  const Real c = 1 / (std::pow(std::log(2 * alpha), 2) + kPi * kPi / 6);
  return c * (2 * std::log(2 * alpha) / m + (2 * harmonic + 1 / m) / m + 1 / (m * m));
}

Real phi_prime_series_sum(Real alpha, long k) {
  Real s = 0, harmonic = 0;
  for (long n = 1; n <= k; ++n) {
    s += 0.5 * static_cast<Real>(n) * std::pow(phi_prime_cosine(alpha, n, harmonic), 2);
    harmonic += 1 / static_cast<Real>(n);
  }
  return s;
}

std::vector<CircleMap> metric_gallery(long n) {
  return {CircleMap::identity(n),
          CircleMap::rotation(1.1, n),
          CircleMap::mobius(0.3, 0, n),
          CircleMap::mobius({0, 0.5}, 1, n),
          CircleMap::sine(0.3, n),
          build_counterexample(2, n).map,
          build_counterexample(4, n).map};
}

void fourier_exactness(Outcome& o) {
  const auto u = GridFunction::sample(1 << 14, [](Real t) { return (kPi - t) * (kPi - t); });
  const FourierSeries a = fourier_coefficients_seam_corrected(u, 64);
  Real err = 0;
  for (long n = 1; n <= 64; ++n) err = std::max(err, std::abs(a[n] - 2.0 / (n * n)));
  o.detail << "max |a_n - 2/n^2| = " << err;
  o.require(err < 1e-10, "< 1e-10");
}

void h_half_dual(Outcome& o) {
  const long n = 1 << 12;
  const std::vector<std::pair<std::string, GridFunction>> cases = {
      {"e^{i theta}", GridFunction::sample(n, [](Real t) { return std::polar(1.0, t); })},
      {"(pi - theta)^2", GridFunction::sample(n, [](Real t) { return (kPi - t) * (kPi - t); }, Sampling::kCellCenters)},
      {"log phi'_2", build_counterexample(2, n).derivative.log_phi_prime}};
  for (const auto& [name, u] : cases) {
    const Real spectral = std::pow(sobolev_seminorm(spectrum(u), 0.5), 2);
    const DoubleIntegral d = h_half_double_integral(u);
    const Real rel = std::abs(d.normalized - spectral) / spectral;
    o.detail << name << ": rel diff " << rel << "; ";
    o.require(rel < 0.01, name + " within 1%");
  }
}

void mobius_metric(Outcome& o) {
  const long n = 1 << 12;
  Real worst = 0;
  for (Real a : {0.1, 0.3, 0.5, 0.7}) {
    const Real d = metric_d(CircleMap::mobius(a, 0, n), CircleMap::identity(n)).value;
    worst = std::max(worst, std::abs(d * d + 2 * std::log(1 - a * a)));
  }
  o.detail << "max |d^2 + 2 log(1 - a^2)| = " << worst;
  o.require(worst < 1e-6, "< 1e-6");
}

void energy_identity(Outcome& o) {
  const long n = 1 << 12, k = 32;
  const Real m = energy_identity_residual(CircleMap::mobius(0.3, 0, n), k);
  const Real s = energy_identity_residual(CircleMap::sine(0.3, n), k);
  Real trivial = energy_identity_residual(CircleMap::identity(n), k);
  for (Real beta : {0.5, 2.0, -1.3}) trivial = std::max(trivial, energy_identity_residual(CircleMap::rotation(beta, n), k));
  o.detail << "mobius " << m << ", sine " << s << ", identity/rotations " << trivial;
  o.require(m < 1e-6 && s < 1e-6, "< 1e-6");
  o.require(trivial <= 1e-12, "trivial maps <= 1e-12");
}

void commutator_identity(Outcome& o) {
  const CircleMap h = CircleMap::mobius(0.3, 0, 1 << 12);
  for (int degree : {1, 2}) {
    ComplexVector c = ComplexVector::Zero(degree + 1);
    c[degree] = 1;
    const Real r = commutator_identity_residual(h, PowerSeries(c));
    o.detail << "z^" << degree << ": " << r << "; ";
    o.require(r < 1e-6, "< 1e-6");
  }
}

void welding_identity(Outcome& o) {
  const long n = 1 << 12;
  const WeldingTriple t = mobius_welding_triple(0.3, 0, n);
  const Real m = welding_identity_residual(t.h, t.log_fp, t.log_gp);
  Real rot = 0;
  for (Real beta : {0.0, 0.7, -2.0, 3.0}) {
    const WeldingTriple r = mobius_welding_triple(0, beta, n);
    rot = std::max(rot, welding_identity_residual(r.h, r.log_fp, r.log_gp));
  }
  o.detail << "mobius 0.3: " << m << ", rotations: " << rot;
  o.require(m < 1e-8, "mobius < 1e-8");
  o.require(rot <= 1e-12, "rotations <= 1e-12");
}

void counterexample_suite(Outcome& o) {
  // Thresholds first checked on the exact coefficient series.
  const Real oracle_ratio = phi_prime_series_sum(2, 1 << 14) / phi_prime_series_sum(2, 1 << 8);
  o.detail << "series oracle S(2^14)/S(2^8) = " << oracle_ratio << "; ";
  o.require(oracle_ratio > 1.5, "oracle ratio > 1.5");

  const Counterexample c = build_counterexample(2, 1 << 16);
  const DyadicProfile pp = sobolev_profile(spectrum(c.derivative.phi_prime), 0.5);
  const DyadicProfile pl = sobolev_profile(spectrum(c.derivative.log_phi_prime), 0.5);
  bool increasing = true;
  for (std::size_t k = 1; k < pp.size(); ++k) increasing = increasing && pp.values[k] > pp.values[k - 1];
  const Real rp = at_level(pp, 1 << 14) / at_level(pp, 1 << 8);
  const Real rl = at_level(pl, 1 << 14) / at_level(pl, 1 << 8);
  o.detail << "phi' ratio " << rp << (increasing ? " (increasing)" : " (not increasing)") << ", log phi' ratio " << rl;
  o.require(increasing, "phi' profile strictly increasing");
  o.require(rp > 1.5, "phi' ratio > 1.5");
  o.require(rl < 1.10, "log phi' ratio < 1.10");

  const auto form = std::make_shared<CounterexampleForm>(2);
  auto sup = [&](long n) { return derivative(CircleMap::from_closed_form(form, n)).phi_prime.real().maxCoeff(); };
  const Real s10 = sup(1 << 10), s16 = sup(1 << 16);
  o.detail << "; sup phi' " << s10 << " -> " << s16;
  o.require(s16 >= 2 * s10, "sup phi' doubles");
}

void integral_bound(Outcome& o) {
  for (Real alpha : {1.5, 2.0, 4.0}) {
    const GIntegral g = counterexample_g_integral(alpha);
    o.detail << "alpha " << alpha << ": " << g.value << " < " << g.bound << "; ";
    o.require(g.value < g.bound, "below bound");
  }
}

void grunsky(Outcome& o) {
  Real entries = 0;
  for (Complex a : {Complex(0.3, 0), Complex(0, 0.5), Complex(-0.4, 0.2)})
    entries = std::max(entries, grunsky_matrix(mobius_welding_triple(a, 0.3, 256).log_fp, 32).matrix.cwiseAbs().maxCoeff());
  ComplexVector f = ComplexVector::Zero(3);
  f[1] = 1;
  f[2] = 0.4;
  const Real norm = grunsky_matrix(log_derivative_of(f, 256), 32).operator_norm();
  Real relation = 0;
  for (Complex a : {Complex(0.3, 0), Complex(0, 0.5)}) {
    const WeldingTriple t = mobius_welding_triple(a, 0.3, 1 << 12);
    relation = std::max(relation, grunsky_relation_residual(t.h, t.log_fp, 16));
  }
  o.detail << "mobius max entry " << entries << ", ||G|| for z + 0.4 z^2 = " << norm << ", relation residual "
           << relation;
  o.require(entries <= 1e-10, "mobius entries <= 1e-10");
  o.require(norm < 1, "norm < 1");
  o.require(relation < 1e-4, "relation < 1e-4");
}

void ahlfors_weil(Outcome& o) {
  ComplexVector f = ComplexVector::Zero(3);
  f[1] = 1;
  f[2] = 0.2;
  const PowerSeries s = schwarzian(log_derivative_of(f, 64));
  const WpNorm w = wp_norm(ahlfors_weil_mu(s));
  const Real sup_gap = std::abs(w.sup - 0.5 * norm_b2(s));
  const Real int_gap = std::abs(w.integral - 0.25 * std::pow(norm_script_b(s), 2));
  o.detail << "|sup|mu| - ||S||_B2/2| = " << sup_gap << ", |integral - ||S||^2/4| = " << int_gap;
  o.require(sup_gap < 1e-3, "sup within 1e-3");
  o.require(int_gap < 1e-4, "integral within 1e-4");
}

void vmo_failure(Outcome& o) {
  const Real target = 4 / std::exp(1.0);
  // At 2^22 nodes the lift θ - sin θ is flat below double resolution next to
  // 2π, so log φ' comes straight from the closed-form density.
  const long n = 1L << 22;
  const RealVector dens = SineForm(-1).derivative_on(n, Sampling::kCellCenters);
  const GridFunction u = GridFunction::from_real(dens.array().log().matrix(), Sampling::kCellCenters);
  for (Real scale : {1e-2, 1e-3, 1e-4}) {
    const long cells = std::lround(scale / u.spacing());
    const Real osc = mean_oscillation(u, 0, cells);
    o.detail << "scale " << scale << ": " << osc << "; ";
    o.require(std::abs(osc - target) < 0.05 * target, "within 5% of 4/e");
  }
  const GridFunction coarse = derivative(build_sine_flat(1 << 16)).log_phi_prime;
  const VmoVerdict v = vmo_verdict(bmo_norm_estimate(coarse, 1e-2), 0.1);
  o.detail << "verdict " << to_string(v);
  o.require(v == VmoVerdict::kPersistent, "persistent");
}

void group_continuity(Outcome& o) {
  const long n = 1 << 12;
  const CircleMap g = CircleMap::mobius({0, 0.2}, 0.5, n), h = CircleMap::mobius(0.3, 0, n);
  std::vector<CircleMap> gn, hn;
  for (int k = 1; k <= 10; ++k) {
    gn.push_back(g);
    hn.push_back(CircleMap::mobius(0.3 + std::ldexp(1.0, -k), 0, n));
  }
  const ContinuityReport r = group_continuity_probe(gn, hn, g, h, 1e-3);
  o.detail << "at n = 10: d'(h_n^-1, h^-1) = " << r.inversion.back() << ", d'(g h_n, g h) = " << r.composition.back();
  o.require(r.inversion_monotone && r.composition_monotone, "monotone");
  o.require(r.inversion.back() < 1e-3 && r.composition.back() < 1e-3, "< 1e-3 at n = 10");
}

void plumbing(Outcome& o) {
  const long n = 1 << 12;
  const std::vector<CircleMap> maps = {CircleMap::identity(n),       CircleMap::rotation(2.0, n),
                                       CircleMap::mobius({0.3, 0.2}, 0.5, n), CircleMap::sine(0.3, n),
                                       build_sine_flat(n),           build_counterexample(2, n).map};
  Real worst = 0;
  for (const CircleMap& h : maps) worst = std::max(worst, lift_distance(compose(h, invert(h)), CircleMap::identity(n)));
  testing::Gen gen(13);
  Real pull = 0;
  for (const CircleMap& h : {maps[2], maps[3]}) {
    const FourierSeries u = gen.complex_trig(16);
    const FourierSeries back = pullback_apply(invert(h), pullback_apply(h, u));
    for (long m = -16; m <= 16; ++m) pull = std::max(pull, std::abs(back[m] - u[m]));
    for (long m = 17; m <= back.max_mode(); ++m) pull = std::max({pull, std::abs(back[m]), std::abs(back[-m])});
  }
  o.detail << "max ||h o h^-1 - id|| = " << worst << ", max |P_{h^-1} P_h u - u| = " << pull;
  o.require(worst < 1e-8, "compose/invert < 1e-8");
  o.require(pull < 1e-8, "pull-back round trip < 1e-8");
}

void metric_axioms(Outcome& o) {
  const long n = 1 << 12;
  const std::vector<CircleMap> g = metric_gallery(n);
  const std::size_t m = g.size();
  std::vector<std::vector<Real>> d(m, std::vector<Real>(m));
  Real order = -1, sym = 0, tri = -1;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      d[i][j] = metric_d(g[i], g[j]).value;
      order = std::max(order, d[i][j] - metric_d_prime(g[i], g[j]).value);
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      sym = std::max(sym, std::abs(d[i][j] - d[j][i]));
      for (std::size_t k = 0; k < m; ++k) tri = std::max(tri, d[i][k] - d[i][j] - d[j][k]);
    }
  o.detail << m << " maps (sine_flat excluded: d undefined); max(d - d') = " << order << ", asymmetry " << sym
           << ", max triangle excess " << tri;
  o.require(order <= 1e-10, "d <= d'");
  o.require(sym <= 1e-10, "symmetry");
  o.require(tri <= 1e-10, "triangle inequality");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"Fourier exactness", fourier_exactness},
      {"H^{1/2} spectral vs double integral", h_half_dual},
      {"Mobius metric closed form", mobius_metric},
      {"energy identity", energy_identity},
      {"commutator identity", commutator_identity},
      {"welding identity", welding_identity},
      {"counterexample divergence suite", counterexample_suite},
      {"g integral bound", integral_bound},
      {"Grunsky operator", grunsky},
      {"Ahlfors-Weil identities", ahlfors_weil},
      {"VMO failure of the flat map", vmo_failure},
      {"group continuity", group_continuity},
      {"operator and group plumbing", plumbing},
      {"metric axioms", metric_axioms}};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    o.detail.precision(4);
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "threw: " << e.what();
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.str().c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
