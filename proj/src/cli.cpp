#include "wpc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "wpc/bmo.hpp"
#include "wpc/diagnostics.hpp"
#include "wpc/gallery.hpp"
#include "wpc/pullback.hpp"

namespace wpc {

namespace {

const std::vector<std::string> kCommands = {"analyze", "metric", "operators", "grunsky",
                                            "counterexample", "flow", "welding-check", "sweep"};

const char* kSweepColumns = "value,d,d_prime,h_half_sq,h_half_trend,qs_constant,symmetric_deviation,wp_class";

struct Context {
  const RunConfig& config;
  Json flags = Json::array();
  Json checks = Json::array();
  bool passed = true;

  void check(const std::string& name, bool ok) {
    checks.push_back({{"name", name}, {"passed", ok}});
    passed = passed && ok;
  }
  void flag(const std::string& where, const std::string& kind, const std::string& message) {
    flags.push_back({{"where", where}, {"kind", kind}, {"message", message}});
    passed = false;
  }

  // Runs f; numerical failures become flags and the entry becomes null.
  template <typename F>
  Json attempt(const std::string& where, F&& f) {
    try {
      return f();
    } catch (const AliasingError& e) {
      flag(where, "aliasing", e.what());
    } catch (const BranchError& e) {
      flag(where, "branch", e.what());
    } catch (const UndefinedMetric& e) {
      flag(where, "degenerate", e.what());
    } catch (const PreconditionError& e) {
      flag(where, "precondition", e.what());
    } catch (const ConsistencyError& e) {
      flag(where, "consistency", e.what());
    }
    return nullptr;
  }
};

std::optional<long> grid_for(const RunConfig& c, const Json& spec) {
  if (c.grid) return c.grid;
  if (spec.contains("grid") || (spec.is_object() && (spec.value("family", "") == "samples" ||
                                                     spec.value("family", "") == "from_u")))
    return std::nullopt;
  return kDefaultGrid;
}

Json parsed_or_null(const std::string& text) { return text.empty() ? Json(nullptr) : parse_json_argument(text); }

CircleMap primary_map(const RunConfig& c) {
  if (c.map.empty()) throw SpecError("--map is required for " + c.command + " (run `wpc --help` for the schema)");
  const Json spec = parse_json_argument(c.map);
  return map_from_json(spec, grid_for(c, spec));
}

Json map_summary(const CircleMap& h) {
  Json s{{"family", h.family()}, {"grid", h.size()}};
  if (h.has_closed_form()) {
    Json p = Json::object();
    for (const auto& [k, v] : h.closed_form()->params()) p[k] = v;
    s["params"] = p;
  }
  return s;
}

// Value of f on grids n of the list that are admissible, as a profile over n.
template <typename F>
DyadicProfile grid_profile(const std::vector<long>& grids, F&& f) {
  DyadicProfile p;
  for (long n : grids) p.push(n, f(n));
  return p;
}

std::vector<long> grids_down(long n, int count, long min_size) {
  std::vector<long> g;
  for (int k = count - 1; k >= 0; --k)
    if ((n >> k) >= min_size) g.push_back(n >> k);
  return g;
}

Real at_level(const DyadicProfile& p, long level) {
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p.levels[k] == level) return p.values[k];
  return std::numeric_limits<Real>::quiet_NaN();
}

// Disk automorphism parameters of a Möbius, rotation or identity map.
std::optional<std::pair<Complex, Real>> automorphism_of(const CircleMap& h) {
  if (!h.has_closed_form()) return std::nullopt;
  const auto& f = h.closed_form();
  if (f->family() == "identity") return std::pair<Complex, Real>{0, 0};
  if (const auto* r = dynamic_cast<const RotationForm*>(f.get())) return std::pair<Complex, Real>{0, r->beta()};
  if (const auto* m = dynamic_cast<const MobiusForm*>(f.get())) return std::pair<Complex, Real>{m->a(), m->beta()};
  return std::nullopt;
}

Json analyze(Context& ctx) {
  const CircleMap h = primary_map(ctx.config);
  Json r{{"map", map_summary(h)}};
  const MembershipReport m = wp_membership(h, ctx.config.thresholds);
  Json reasons = Json::array();
  for (const auto& s : m.reasons) reasons.push_back(s);
  r["membership"] = {
      {"wp_class", to_string(m.wp_class)},
      {"quasisymmetric", to_string(m.quasisymmetric)},
      {"symmetric", to_string(m.symmetric)},
      {"degenerate", m.degenerate},
      {"reasons", reasons},
      {"qs_constant", measured(m.qs_constant, m.qs_profile)},
      {"symmetric_deviation", measured(m.symmetric_profile.last(), m.symmetric_profile)},
  };
  if (m.degenerate) ctx.flag("membership", "degenerate", "φ' vanishes on the grid");

  const DerivativeData d = derivative(h);
  Json norms = Json::object();
  norms["log_phi_prime_h_half_sq"] = measured(m.h_half_profile.last(), m.h_half_profile, m.wp_class);
  norms["log_phi_prime_bmo"] = ctx.attempt("bmo", [&] {
    const OscillationProfile o = bmo_norm_estimate(d.log_phi_prime, 8 * d.log_phi_prime.spacing());
    DyadicProfile p;
    for (std::size_t k = 0; k < o.size(); ++k)
      p.push(std::lround(o.scales[k] / d.log_phi_prime.spacing()), o.worst_oscillation[k]);
    Json out = measured(o.norm(), p);
    out["profile_levels"] = "arc length in cells";
    out["vmo"] = std::string(to_string(vmo_verdict(o, 0.05)));
    return out;
  });
  const SmoothnessProbe s = smoothness_probe(h, ctx.config.thresholds);
  norms["h_three_halves_sq"] = measured(s.h32_profile.last(), s.h32_profile, s.h32);
  norms["phi_prime_h_half_sq"] = measured(s.phi_prime_profile.last(), s.phi_prime_profile, s.phi_prime);
  norms["phi_prime_sup"] = measured(s.lipschitz_profile.last(), s.lipschitz_profile);
  r["norms"] = norms;
  ctx.check("wp_class is yes-trend", m.wp_class == Trend::kYes);
  return r;
}

Json metric(Context& ctx) {
  const CircleMap h1 = primary_map(ctx.config);
  CircleMap h2 = CircleMap::identity(h1.size());
  if (!ctx.config.map2.empty()) {
    const Json spec = parse_json_argument(ctx.config.map2);
    h2 = map_from_json(spec, grid_for(ctx.config, spec));
  }
  Json r{{"map", map_summary(h1)}, {"map2", map_summary(h2)}};
  std::optional<Real> d, dp;
  r["d"] = ctx.attempt("d", [&] {
    const MetricValue v = metric_d(h1, h2, ctx.config.thresholds);
    d = v.value;
    ctx.check("d profile is not divergent", v.trend != Trend::kNo);
    return measured(v.value, v.profile, v.trend);
  });
  r["d_prime"] = ctx.attempt("d_prime", [&] {
    const MetricValue v = metric_d_prime(h1, h2, ctx.config.thresholds);
    dp = v.value;
    ctx.check("d' profile is not divergent", v.trend != Trend::kNo);
    return measured(v.value, v.profile, v.trend);
  });
  r["profile_levels"] = "partial sums over modes |n| <= level, squared";
  if (d && dp) ctx.check("d <= d'", *d <= *dp + 1e-12);
  return r;
}

// Entries of several matrices in one table, keyed by the matrix label.
std::string labelled_matrix_csv(const std::vector<const OperatorMatrix*>& ms) {
  std::ostringstream os;
  os << "matrix,row,col,re,im\n";
  for (const OperatorMatrix* m : ms) {
    std::istringstream rows(matrix_csv(*m));
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) os << m->label << ',' << line << '\n';
  }
  return os.str();
}

Json operators(Context& ctx, std::string& csv) {
  const CircleMap h = primary_map(ctx.config);
  const long k = ctx.config.trunc;
  if (k > h.size() / 8) throw InvalidArgument("--trunc must be at most grid/8");
  Json r{{"map", map_summary(h)}, {"trunc", k}};
  const std::vector<long> grids = grids_down(h.size(), 3, 8 * k);
  r["P"] = ctx.attempt("pm_matrices", [&] {
    const PmMatrices pm = pm_matrices(h, k);
    csv = labelled_matrix_csv({&pm.plus, &pm.minus});
    long scored = 0;
    for (bool s : pm.scored) scored += s;
    return Json{{"P_plus", matrix_json(pm.plus)}, {"P_minus", matrix_json(pm.minus)}, {"scored_columns", scored}};
  });
  r["energy_identity_residual"] = ctx.attempt("energy_identity", [&] {
    const DyadicProfile p = grid_profile(grids, [&](long n) { return energy_identity_residual(h.resampled(n), k); });
    ctx.check("energy identity residual < 1e-6", p.last() < 1e-6);
    return measured(p.last(), p);
  });
  Json comm = Json::object();
  for (int degree : {1, 2}) {
    ComplexVector c = ComplexVector::Zero(degree + 1);
    c[degree] = 1;
    const PowerSeries phi(c);
    const std::string name = degree == 1 ? "z" : "z^2";
    comm[name] = ctx.attempt("commutator " + name, [&] {
      const DyadicProfile p = grid_profile(grids, [&](long n) { return commutator_identity_residual(h.resampled(n), phi); });
      ctx.check("commutator residual for " + name + " < 1e-6", p.last() < 1e-6);
      return measured(p.last(), p);
    });
  }
  r["commutator_identity_residual"] = comm;
  r["profile_levels"] = "grid size N";
  return r;
}

PowerSeries log_derivative_of_polynomial(const Json& coeffs, long order) {
  if (!coeffs.is_array()) throw SpecError("--poly expects a JSON array of numbers or [re, im] pairs");
  ComplexVector f = ComplexVector::Zero(order + 2);
  f[1] = 1;
  if (static_cast<long>(coeffs.size()) > order) throw SpecError("--poly has too many coefficients");
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const Json& c = coeffs[j];
    if (c.is_number()) f[j + 2] = c.get<Real>();
    else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number())
      f[j + 2] = Complex(c[0].get<Real>(), c[1].get<Real>());
    else throw SpecError("--poly entry " + std::to_string(j) + " is not a number or [re, im] pair");
  }
  return series_log(PowerSeries(f).derivative());
}

Json grunsky(Context& ctx, std::string& csv) {
  const long k = ctx.config.trunc;
  Json r{{"trunc", k}};
  PowerSeries log_fp{ComplexVector::Zero(1)};
  std::optional<CircleMap> h;
  if (!ctx.config.poly.empty()) {
    log_fp = log_derivative_of_polynomial(parse_json_argument(ctx.config.poly), std::max<long>(256, 4 * k));
    r["source"] = "polynomial";
    r["log_f_prime"] = series_to_json(log_fp.truncated(std::min<long>(log_fp.truncation(), 2 * k)));
  } else {
    const CircleMap map = primary_map(ctx.config);
    if (k > map.size() / 8) throw InvalidArgument("--trunc must be at most grid/8");
    const auto aut = automorphism_of(map);
    if (!aut) throw SpecError("grunsky needs --poly or a map with a known welding (identity, rotation, mobius)");
    log_fp = mobius_welding_triple(aut->first, aut->second, map.size(), std::max<long>(64, 4 * k)).log_fp;
    h = map;
    r["source"] = "welding";
    r["log_f_prime"] = series_to_json(log_fp.truncated(std::min<long>(log_fp.truncation(), 2 * k)));
    r["map"] = map_summary(map);
  }
  r["grunsky"] = ctx.attempt("grunsky_matrix", [&] {
    const OperatorMatrix g = grunsky_matrix(log_fp, k);
    csv = labelled_matrix_csv({&g});
    const DyadicProfile p = grid_profile(grids_down(k, 3, 1), [&](long m) {
      return operator_norm(g.matrix.topLeftCorner(m, m));
    });
    ctx.check("operator norm < 1", p.last() < 1);
    for (const auto& w : g.warnings) ctx.flag("grunsky_matrix", "aliasing", w);
    return Json{{"matrix", matrix_json(g)},
                {"operator_norm", measured(p.last(), p)},
                {"operator_norm_levels", "truncation K"},
                {"max_abs_entry", number(g.matrix.cwiseAbs().maxCoeff())}};
  });
  if (h) {
    r["relation_residual"] = ctx.attempt("grunsky_relation", [&] {
      const auto aut = *automorphism_of(*h);
      const DyadicProfile p = grid_profile(grids_down(h->size(), 2, 8 * k), [&](long n) {
        const WeldingTriple t = mobius_welding_triple(aut.first, aut.second, n, std::max<long>(64, 4 * k));
        return grunsky_relation_residual(t.h, t.log_fp, k);
      });
      ctx.check("relation residual < 1e-4", p.last() < 1e-4);
      Json out = measured(p.last(), p);
      out["profile_levels"] = "grid size N";
      return out;
    });
  } else {
    r["relation_residual"] = nullptr;
  }
  return r;
}

Json counterexample(Context& ctx) {
  const Real alpha = ctx.config.alpha;
  const long n = ctx.config.grid.value_or(kDefaultGrid);
  const Counterexample c = build_counterexample(alpha, n);
  const auto& th = ctx.config.thresholds;
  Json r{{"alpha", alpha}, {"grid", n}};

  const Real closed = 1 / (std::pow(std::log(2 * alpha), 2) + kPi * kPi / 6);
  r["c_alpha"] = exact(closed);
  const DyadicProfile cq = grid_profile({512, 1024, 2048}, [&](long cells) { return CounterexampleForm(alpha, cells).c_alpha(); });
  r["c_alpha_quadrature"] = measured(cq.last(), cq);
  r["c_alpha_quadrature"]["profile_levels"] = "table cells";

  const DyadicProfile pp = sobolev_profile(spectrum(c.derivative.phi_prime), 0.5);
  const DyadicProfile pl = sobolev_profile(spectrum(c.derivative.log_phi_prime), 0.5);
  const Trend tp = classify_partial_sums(pp, th), tl = classify_partial_sums(pl, th);
  r["phi_prime_h_half_sq"] = measured(pp.last(), pp, tp);
  r["phi_prime_h_half_sq"]["ratio_last_to_256"] = number(pp.last() / at_level(pp, 256));
  r["log_phi_prime_h_half_sq"] = measured(pl.last(), pl, tl);
  r["log_phi_prime_h_half_sq"]["ratio_last_to_256"] = number(pl.last() / at_level(pl, 256));

  const auto form = std::make_shared<CounterexampleForm>(alpha);
  std::vector<long> sup_grids;
  for (long m = std::min<long>(1024, n); m <= n; m *= 4) sup_grids.push_back(m);
  if (sup_grids.back() != n) sup_grids.push_back(n);
  const DyadicProfile sup = grid_profile(sup_grids, [&](long m) {
    return derivative(CircleMap::from_closed_form(form, m)).phi_prime.real().maxCoeff();
  });
  r["phi_prime_sup"] = measured(sup.last(), sup);
  r["phi_prime_sup"]["profile_levels"] = "grid size N";

  const DyadicProfile gp = grid_profile({12, 24, 48}, [&](long nodes) {
    return counterexample_g_integral(alpha, static_cast<int>(nodes)).value;
  });
  const Real bound = kTwoPi / std::log(2 * alpha);
  r["g_integral"] = measured(gp.last(), gp);
  r["g_integral"]["profile_levels"] = "Gauss nodes";
  r["g_bound"] = exact(bound);
  r["membership"] = to_string(wp_membership(c.map, th).wp_class);

  ctx.check("phi' profile diverges", tp == Trend::kNo);
  ctx.check("log phi' profile converges", tl == Trend::kYes);
  ctx.check("g integral below 2 pi / log(2 alpha)", gp.last() < bound);
  bool increasing = true;
  for (std::size_t k = 1; k < sup.size(); ++k) increasing = increasing && sup.values[k] > sup.values[k - 1];
  ctx.check("sup phi' increases under refinement", increasing);
  return r;
}

std::string flow_csv(const FlowField& f) {
  std::ostringstream os;
  os << std::setprecision(17) << "theta,field_re,field_im,speed\n";
  for (long j = 0; j < f.field.size(); ++j)
    os << f.field.theta(j) << ',' << f.field[j].real() << ',' << f.field[j].imag() << ',' << f.speed[j].real() << '\n';
  return os.str();
}

Json flow(Context& ctx, std::string& csv) {
  const Real alpha = ctx.config.alpha;
  const long n = ctx.config.grid.value_or(kDefaultGrid);
  Json r{{"alpha", alpha}, {"grid", n}};
  r["flow"] = ctx.attempt("flow_field", [&] {
    const FlowField coarse = flow_field(alpha, 0, n / 2);
    const FlowField f = flow_field(alpha, 0, n);
    csv = flow_csv(f);
    DyadicProfile defect;
    defect.push(n / 2, coarse.tangential_defect);
    defect.push(n, f.tangential_defect);
    DyadicProfile diffs;
    const Real d1 = 0.75 * f.richardson_error;
    diffs.push(2, d1);
    diffs.push(4, d1 / f.richardson_ratio);
    const Trend tf = classify_partial_sums(f.field_h32, ctx.config.thresholds);
    const Trend tm = classify_partial_sums(f.map_h32, ctx.config.thresholds);
    ctx.check("field is tangential", f.tangential_defect < 1e-6);
    ctx.check("field is H^{3/2}", tf == Trend::kYes);
    Json richardson = measured(f.richardson_error, diffs);
    richardson["ratio"] = number(f.richardson_ratio);
    richardson["profile_levels"] = "step divisor";
    Json tangential = measured(f.tangential_defect, defect);
    tangential["profile_levels"] = "grid size N";
    return Json{{"step", exact(f.step)},
                {"richardson", richardson},
                {"tangential_defect", tangential},
                {"field_h_three_halves_sq", measured(f.field_h32.last(), f.field_h32, tf)},
                {"map_h_three_halves_sq", measured(f.map_h32.last(), f.map_h32, tm)}};
  });
  return r;
}

Json welding_check(Context& ctx) {
  const CircleMap h = primary_map(ctx.config);
  const auto aut = automorphism_of(h);
  if (!aut) throw SpecError("welding-check needs a map with a known welding (identity, rotation, mobius)");
  Json r{{"map", map_summary(h)}};
  r["welding_residual"] = ctx.attempt("welding", [&] {
    const DyadicProfile p = grid_profile(grids_down(h.size(), 2, 8), [&](long n) {
      const WeldingTriple t = mobius_welding_triple(aut->first, aut->second, n);
      return welding_identity_residual(t.h, t.log_fp, t.log_gp);
    });
    ctx.check("welding residual < 1e-8", p.last() < 1e-8);
    Json out = measured(p.last(), p);
    out["profile_levels"] = "grid size N";
    return out;
  });
  const WeldingTriple t = mobius_welding_triple(aut->first, aut->second, h.size());
  r["pole"] = std::isfinite(std::abs(t.pole)) ? Json{{"re", t.pole.real()}, {"im", t.pole.imag()}} : Json("inf");
  r["log_g_prime"] = {{"re", t.log_gp[0].real()}, {"im", t.log_gp[0].imag()}, {"exact", true}};
  return r;
}

struct SweepRow {
  Real value = 0;
  Real d = std::numeric_limits<Real>::quiet_NaN(), d_prime = d, h_half = d, qs = d, symmetric = d;
  std::string h_half_trend = "inconclusive", wp_class = "inconclusive";
  std::vector<std::string> flags;
};

SweepRow sweep_point(const Json& spec, const std::optional<long> grid, const std::string& param, Real value,
                     const TrendThresholds& th) {
  SweepRow row;
  row.value = value;
  Json s = spec;
  s["params"][param] = value;
  const CircleMap h = map_from_json(s, grid);
  const CircleMap id = CircleMap::identity(h.size());
  const MembershipReport m = wp_membership(h, th);
  row.h_half = m.h_half_profile.last();
  row.h_half_trend = to_string(classify_partial_sums(m.h_half_profile, th));
  row.qs = m.qs_constant;
  row.symmetric = m.symmetric_profile.last();
  row.wp_class = to_string(m.wp_class);
  try {
    row.d = metric_d(h, id, th).value;
    row.d_prime = metric_d_prime(h, id, th).value;
  } catch (const UndefinedMetric& e) {
    row.flags.push_back(e.what());
  }
  return row;
}

Json sweep(Context& ctx, std::string& csv) {
  const RunConfig& c = ctx.config;
  if (c.map.empty()) throw SpecError("--map is required for sweep (run `wpc --help` for the schema)");
  if (c.param.empty()) throw InvalidArgument("sweep needs --param");
  if (c.steps < 1) throw InvalidArgument("sweep needs --steps >= 1");
  const Json spec = parse_json_argument(c.map);
  const std::optional<long> grid = grid_for(c, spec);
  std::vector<Real> values;
  for (int k = 0; k < c.steps; ++k)
    values.push_back(c.steps == 1 ? c.from : c.from + (c.to - c.from) * k / (c.steps - 1));
  // Reject a bad template before fanning out.
  Json first = spec;
  first["params"][c.param] = values.front();
  map_from_json(first, grid);

  // Points run in parallel in batches; rows are assembled in order.
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SweepRow> rows;
  for (std::size_t start = 0; start < values.size(); start += width) {
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t k = start; k < std::min(values.size(), start + width); ++k)
      batch.push_back(std::async(std::launch::async, sweep_point, spec, grid, c.param, values[k], c.thresholds));
    for (auto& f : batch) rows.push_back(f.get());
  }

  std::ostringstream os;
  os << std::setprecision(17) << kSweepColumns << '\n';
  Json table = Json::array();
  for (const SweepRow& row : rows) {
    os << row.value << ',' << row.d << ',' << row.d_prime << ',' << row.h_half << ',' << row.h_half_trend << ','
       << row.qs << ',' << row.symmetric << ',' << row.wp_class << '\n';
    table.push_back({{c.param, row.value},
                     {"d", number(row.d)},
                     {"d_prime", number(row.d_prime)},
                     {"h_half_sq", number(row.h_half)},
                     {"h_half_trend", row.h_half_trend},
                     {"qs_constant", number(row.qs)},
                     {"symmetric_deviation", number(row.symmetric)},
                     {"wp_class", row.wp_class}});
    for (const auto& f : row.flags) ctx.flag(c.param + "=" + std::to_string(row.value), "degenerate", f);
  }
  csv = os.str();
  return Json{{"param", c.param},
              {"rows", table},
              {"note", "finest-level estimates; run analyze on a single point for full profiles"}};
}

// Long-format rows for every {"value", "profile"} entry of a report.
void flatten(const std::string& path, const Json& j, std::ostringstream& os) {
  if (!j.is_object()) return;
  if (j.contains("value") && !j.at("value").is_object()) {
    os << path << ",," << j.at("value").dump() << '\n';
    if (j.contains("profile") && j.at("profile").is_object()) {
      const Json& p = j.at("profile");
      for (std::size_t k = 0; k < p.at("levels").size(); ++k)
        os << path << ',' << p.at("levels")[k].dump() << ',' << p.at("values")[k].dump() << '\n';
    }
    return;
  }
  for (const auto& [key, value] : j.items()) flatten(path.empty() ? key : path + "." + key, value, os);
}

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

Json config_echo(const RunConfig& c) {
  Json e{{"command", c.command},
         {"map", parsed_or_null(c.map)},
         {"map2", parsed_or_null(c.map2)},
         {"grid", c.grid ? Json(*c.grid) : Json(nullptr)},
         {"trunc", c.trunc},
         {"alpha", c.alpha},
         {"tolerances", {{"cauchy", c.thresholds.cauchy}, {"diverge", c.thresholds.diverge}}},
         {"format", c.format == OutputFormat::kJson ? "json" : "csv"},
         {"assert", c.assert_verdicts}};
  if (!c.poly.empty()) e["poly"] = parse_json_argument(c.poly);
  if (c.command == "sweep") e["sweep"] = {{"param", c.param}, {"from", c.from}, {"to", c.to}, {"steps", c.steps}};
  return e;
}

}  // namespace

void validate(const RunConfig& c) {
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
    throw InvalidArgument("unknown command " + c.command);
  if (c.grid && (!is_power_of_two(*c.grid) || *c.grid < 8)) throw InvalidArgument("--grid must be a power of two >= 8");
  if (c.trunc < 1) throw InvalidArgument("--trunc must be positive");
  if (c.trunc > c.grid.value_or(kDefaultGrid) / 8) throw InvalidArgument("--trunc must be at most grid/8");
  if (!(c.thresholds.cauchy > 0) || !(c.thresholds.diverge > 0)) throw InvalidArgument("tolerances must be positive");
  if (!(c.alpha > 1)) throw InvalidArgument("--alpha must exceed 1");
}

RunResult run(const RunConfig& config) {
  validate(config);
  Context ctx{config};
  RunResult out;
  Json result;
  const std::string& cmd = config.command;
  if (cmd == "analyze") result = analyze(ctx);
  else if (cmd == "metric") result = metric(ctx);
  else if (cmd == "operators") result = operators(ctx, out.csv);
  else if (cmd == "grunsky") result = grunsky(ctx, out.csv);
  else if (cmd == "counterexample") result = counterexample(ctx);
  else if (cmd == "flow") result = flow(ctx, out.csv);
  else if (cmd == "welding-check") result = welding_check(ctx);
  else result = sweep(ctx, out.csv);

  out.report = Json{{"tool", "wpc"},          {"version", kVersion}, {"schema", kReportSchema},
                    {"config", config_echo(config)}, {"result", result},
                    {"flags", ctx.flags},
                    {"verdict", {{"passed", ctx.passed}, {"checks", ctx.checks}}}};
  if (!config.no_meta) out.report["meta"] = {{"timestamp", timestamp()}};
  if (out.csv.empty()) {
    std::ostringstream os;
    os << "quantity,level,value\n";
    flatten("", result, os);
    out.csv = os.str();
  }
  out.passed = ctx.passed;
  return out;
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const RunResult r = run(config);
    const std::string text = config.format == OutputFormat::kJson ? r.report.dump(2) + "\n" : r.csv;
    if (config.out.empty()) {
      out << text;
    } else {
      std::ofstream f(config.out);
      if (!f) throw InvalidArgument("cannot write " + config.out);
      f << text;
    }
    return config.assert_verdicts && !r.passed ? 2 : 0;
  } catch (const std::exception& e) {
    err << "wpc: error: " << e.what() << '\n';
    return 1;
  }
}

std::string help_footer() {
  std::ostringstream os;
  os << '\n' << kMapSpecSchema << "\n\n"
     << "CSV output (--csv):\n"
     << "  sweep           " << kSweepColumns << "\n"
     << "  flow            theta,field_re,field_im,speed (one row per grid node)\n"
     << "  operators       matrix,row,col,re,im for P_plus and P_minus\n"
     << "  grunsky         matrix,row,col,re,im for the Grunsky matrix\n"
     << "  other commands  quantity,level,value; one row per reported quantity with an\n"
     << "                  empty level, then one row per refinement-profile entry\n\n"
     << "Exit status: 0 ok, 1 error, 2 a check failed under --assert.\n";
  return os.str();
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical diagnostics for Weil-Petersson circle homeomorphisms", "wpc"};
  app.footer(help_footer());
  app.require_subcommand(1);

  RunConfig c;
  long grid = 0;
  bool json = false, csv = false;
  app.add_option("--map", c.map, "map spec: inline JSON or @file");
  app.add_option("--map2", c.map2, "second map spec for metric (default identity)");
  auto* grid_opt = app.add_option("--grid", grid, "grid size N, a power of two (default 4096 or the grid of the map spec)");
  app.add_option("--trunc", c.trunc, "truncation K <= N/8")->capture_default_str();
  app.add_option("--alpha", c.alpha, "counterexample parameter alpha > 1")->capture_default_str();
  app.add_option("--tol-cauchy", c.thresholds.cauchy, "relative increment below which a profile converges")
      ->capture_default_str();
  app.add_option("--tol-diverge", c.thresholds.diverge, "relative increment above which a profile diverges")
      ->capture_default_str();
  app.add_flag("--assert", c.assert_verdicts, "exit 2 when a check fails or a numerical flag is raised");
  auto* json_opt = app.add_flag("--json", json, "JSON report (default)");
  app.add_flag("--csv", csv, "CSV table instead of JSON")->excludes(json_opt);
  app.add_option("--out", c.out, "output file (default stdout)");
  app.add_flag("--no-meta", c.no_meta, "omit the timestamp so reports are byte-identical");
  app.add_option("--poly", c.poly, "grunsky: JSON array of c_2, c_3, ... for f = z + c_2 z^2 + ...");
  app.add_option("--param", c.param, "sweep: parameter name inside params");
  app.add_option("--from", c.from, "sweep: first value");
  app.add_option("--to", c.to, "sweep: last value");
  app.add_option("--steps", c.steps, "sweep: number of values");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"analyze", "quasisymmetry, symmetry and WP membership of --map"},
      {"metric", "d and d' between --map and --map2"},
      {"operators", "P+ and P- matrices with energy and commutator residuals"},
      {"grunsky", "Grunsky matrix, norm and relation residual (--poly or a Mobius --map)"},
      {"counterexample", "divergence suite for the counterexample family at --alpha"},
      {"flow", "tangent field of the counterexample family at --alpha"},
      {"welding-check", "welding identity residual for a Mobius --map"},
      {"sweep", "CSV over --param from --from to --to in --steps values"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  for (const auto* sub : app.get_subcommands()) c.command = sub->get_name();
  if (grid_opt->count()) c.grid = grid;
  c.format = csv ? OutputFormat::kCsv : OutputFormat::kJson;
  return execute(c, out, err);
}

}  // namespace wpc
