#include "wpc/gallery.hpp"

#include <cmath>
#include <limits>

#include "wpc/diagnostics.hpp"
#include "wpc/quadrature.hpp"

namespace wpc {

namespace {

const GaussLegendre& cell_rule() {
  static const GaussLegendre rule(16);
  return rule;
}

Real bracket(Real alpha, Real theta, Real sin_half) {
  const Real l = std::log(alpha) - std::log(sin_half);
  return l * l + 0.25 * (kPi - theta) * (kPi - theta);
}

}  // namespace

CounterexampleForm::CounterexampleForm(Real alpha, long table_cells) : alpha_(alpha) {
  if (!(alpha > 1)) throw InvalidArgument("counterexample needs alpha > 1");
  if (table_cells < 2) throw InvalidArgument("counterexample table needs at least two cells");
  cell_ = kPi / static_cast<Real>(table_cells);
  table_.resize(table_cells + 1);
  table_[0] = 0;
  // The first cell holds the log^2 singularity; tanh–sinh handles it.
  const TanhSinh ts;
  table_[1] = ts.integrate([&](Real x, Real from_a, Real) { return bracket(alpha_, x, std::sin(0.5 * from_a)); },
                           0.0, cell_);
  for (long k = 1; k < table_cells; ++k)
    table_[k + 1] = table_[k] + cell_rule().integrate([&](Real x) { return density(x); },
                                                      cell_ * static_cast<Real>(k), cell_ * static_cast<Real>(k + 1));
  c_ = kPi / table_[table_cells];
}

Real CounterexampleForm::density(Real theta) const { return bracket(alpha_, theta, std::sin(0.5 * theta)); }

Real CounterexampleForm::primitive(Real theta) const {
  if (theta <= 0) return 0;
  const long cells = table_.size() - 1;
  const long k = std::min<long>(static_cast<long>(theta / cell_), cells - 1);
  const Real a = cell_ * static_cast<Real>(k);
  if (theta == a) return table_[k];
  if (k == 0) {
    const TanhSinh ts;
    return ts.integrate([&](Real x, Real from_a, Real) { return bracket(alpha_, x, std::sin(0.5 * from_a)); }, 0.0,
                        theta);
  }
  return table_[k] + cell_rule().integrate([&](Real x) { return density(x); }, a, theta);
}

Real CounterexampleForm::lift(Real theta) const {
  // φ' is symmetric about π, so φ(2π - θ) = 2π - φ(θ).
  if (theta <= kPi) return c_ * primitive(theta);
  return kTwoPi - c_ * primitive(kTwoPi - theta);
}

Real CounterexampleForm::lift_derivative(Real theta) const {
  const Real t = theta - kTwoPi * std::floor(theta / kTwoPi);
  if (t == 0) return std::numeric_limits<Real>::infinity();
  return c_ * density(t);
}

RealVector CounterexampleForm::lift_on_nodes(long n) const {
  RealVector v(n);
  for (long j = 0; j < n; ++j) v[j] = lift(kTwoPi * static_cast<Real>(j) / static_cast<Real>(n));
  return v;
}

Real counterexample_constant(Real alpha) {
  if (!(alpha > 1)) throw InvalidArgument("counterexample needs alpha > 1");
  const TanhSinh ts;
  const Real half = ts.integrate([&](Real x, Real from_a, Real) { return bracket(alpha, x, std::sin(0.5 * from_a)); },
                                 0.0, kPi);
  return kPi / half;
}

Counterexample build_counterexample(Real alpha, long n) {
  auto form = std::make_shared<CounterexampleForm>(alpha);
  CircleMap map = CircleMap::from_closed_form(form, n);
  DerivativeData d = derivative(map);
  return {std::move(map), std::move(d), form->c_alpha()};
}

GIntegral counterexample_g_integral(Real alpha, int nodes) {
  if (!(alpha > 1)) throw InvalidArgument("counterexample needs alpha > 1");
  // In w = 1 - z = ρe^{iθ}, |g'|^2 = 1/(ρ^2 (log^2(2α/ρ) + θ^2)). With
  // u = 1/log(2α/ρ) the area integral becomes ∫_0^U ∫_{-π}^{π} dθ du / (1 + u^2 θ^2).
  const Real top = 1 / std::log(2 * alpha);
  const GaussLegendre rule(nodes);
  GIntegral g;
  g.value = rule.integrate(
      [&](Real u) { return rule.integrate([&](Real t) { return 1 / (1 + u * u * t * t); }, -kPi, kPi); }, 0.0, top);
  g.bound = kTwoPi * top;
  return g;
}

CircleMap build_sine_flat(long n) { return CircleMap::sine(-1, n); }

FlowField flow_field(Real alpha, Real d_alpha, long n) {
  if (!(alpha > 1)) throw InvalidArgument("flow field needs alpha > 1");
  const Real d = d_alpha > 0 ? d_alpha : 1e-3 * (alpha - 1);
  if (!(d < 0.25 * (alpha - 1))) throw PreconditionError("d_alpha must be small against alpha - 1");
  GridFunction::check_size(n);

  const CircleMap base = CircleMap::from_closed_form(std::make_shared<CounterexampleForm>(alpha), n);
  RealVector at(n);
  for (long j = 0; j < n; ++j) at[j] = solve_lift(base, kTwoPi * static_cast<Real>(j) / static_cast<Real>(n));

  auto speed = [&](Real step) {
    const CounterexampleForm up(alpha + step), down(alpha - step);
    RealVector v(n);
    for (long j = 0; j < n; ++j) v[j] = (up.lift(at[j]) - down.lift(at[j])) / (2 * step);
    return v;
  };
  const RealVector v1 = speed(d), v2 = speed(0.5 * d), v4 = speed(0.25 * d);
  const Real e12 = (v1 - v2).cwiseAbs().maxCoeff(), e24 = (v2 - v4).cwiseAbs().maxCoeff();

  const Real ratio = e24 > 0 ? e12 / e24 : std::numeric_limits<Real>::infinity();
  const Real scale = v1.cwiseAbs().maxCoeff();
  if (e12 > 1e-9 * (1 + scale) && !(ratio > 2))
    throw PreconditionError("central difference in alpha does not converge under step halving");

  ComplexVector field(n), sp(n);
  Real defect = 0;
  for (long j = 0; j < n; ++j) {
    const Complex z = std::polar(1.0, kTwoPi * static_cast<Real>(j) / static_cast<Real>(n));
    sp[j] = v1[j];
    field[j] = kI * z * v1[j];
    if (std::abs(field[j]) > 0) {
      const Real c = std::abs(std::real(std::conj(kI * z) * field[j])) / std::abs(field[j]);
      defect = std::max(defect, std::abs(c - 1));
    }
  }
  FlowField f;
  f.field = GridFunction(std::move(field));
  f.speed = GridFunction(std::move(sp));
  f.step = d;
  f.richardson_error = e12 * 4 / 3;
  f.richardson_ratio = ratio;
  f.tangential_defect = defect;
  f.field_h32 = sobolev_profile(spectrum(f.speed), 1.5);
  ComplexVector e(n);
  const RealVector psi = base.lift_samples();
  for (long j = 0; j < n; ++j) e[j] = std::polar(1.0, psi[j]);
  f.map_h32 = sobolev_profile(spectrum(GridFunction(std::move(e))), 1.5);
  return f;
}

WeldingTriple mobius_welding_triple(Complex a, Real beta, long n, long truncation) {
  if (!(std::abs(a) < 1)) throw InvalidArgument("welding triple needs |a| < 1");
  WeldingTriple t;
  t.h = CircleMap::mobius(a, beta, n);
  t.a = a;
  t.beta = beta;
  ComplexVector g(1);
  g[0] = Complex(-std::log(1 - std::norm(a)), beta);
  t.log_gp = PowerSeries(g, PowerSeries::Domain::kExterior);
  if (a == Complex(0)) {
    t.pole = Complex(std::numeric_limits<Real>::infinity(), 0);
    t.log_fp = PowerSeries::zero(truncation);
    return t;
  }
  t.pole = -std::polar(1.0, beta) / std::conj(a);
  // log f' = -2 log(1 - z/p).
  ComplexVector f = ComplexVector::Zero(truncation + 1);
  Complex q = 1;
  for (long k = 1; k <= truncation; ++k) {
    q /= t.pole;
    f[k] = 2.0 * q / static_cast<Real>(k);
  }
  t.log_fp = PowerSeries(f);
  return t;
}

}  // namespace wpc
