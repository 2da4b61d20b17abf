#include "wpc/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "wpc/gallery.hpp"

namespace wpc {

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw SpecError("map spec " + (pointer.empty() ? std::string("/") : pointer) + ": " + what +
                  " (run `wpc --help` for the schema)");
}

const std::set<std::string>& known_families() {
  static const std::set<std::string> f = {"identity", "rotation", "mobius", "sine", "sine_flat",
                                          "wp_counterexample", "from_u", "samples"};
  return f;
}

// Parameters a family accepts; anything else in "params" is rejected.
std::set<std::string> allowed_params(const std::string& family) {
  if (family == "rotation") return {"beta"};
  if (family == "mobius") return {"a_re", "a_im", "beta"};
  if (family == "sine") return {"amplitude"};
  if (family == "wp_counterexample") return {"alpha"};
  if (family == "from_u") return {"u", "sampling", "renormalize"};
  if (family == "samples") return {"lift"};
  return {};
}

Real real_param(const Json& params, const std::string& key, std::optional<Real> fallback) {
  if (!params.contains(key)) {
    if (fallback) return *fallback;
    fail("/params/" + key, "required number is missing");
  }
  const Json& v = params.at(key);
  if (!v.is_number()) fail("/params/" + key, "expected a number");
  const Real x = v.get<Real>();
  if (!std::isfinite(x)) fail("/params/" + key, "expected a finite number");
  return x;
}

RealVector real_array(const Json& params, const std::string& key) {
  if (!params.contains(key) || !params.at(key).is_array()) fail("/params/" + key, "expected an array of numbers");
  const Json& a = params.at(key);
  RealVector out(static_cast<Eigen::Index>(a.size()));
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!a[j].is_number()) fail("/params/" + key + "/" + std::to_string(j), "expected a number");
    out[static_cast<Eigen::Index>(j)] = a[j].get<Real>();
  }
  return out;
}

long spec_grid(const Json& spec, std::optional<long> grid) {
  if (grid) return *grid;
  if (!spec.contains("grid")) fail("/grid", "required for closed-form families");
  const Json& g = spec.at("grid");
  if (!g.is_number_integer()) fail("/grid", "expected an integer");
  return g.get<long>();
}

Json json_array(const RealVector& v) {
  Json a = Json::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) a.push_back(v[j]);
  return a;
}

Json samples_spec(const CircleMap& h) {
  return Json{{"family", "samples"}, {"params", {{"lift", json_array(h.lift_samples())}}}, {"grid", h.size()}};
}

}  // namespace

Json parse_json_argument(const std::string& text) {
  std::string body = text;
  if (!text.empty() && text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw SpecError("cannot open " + text.substr(1));
    std::ostringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw SpecError(std::string("map spec is not valid JSON: ") + e.what());
  }
}

CircleMap map_from_json(const Json& spec, std::optional<long> grid) {
  if (!spec.is_object()) fail("", "expected an object");
  for (const auto& [key, value] : spec.items())
    if (key != "family" && key != "params" && key != "grid") fail("/" + key, "unknown key");
  if (!spec.contains("family") || !spec.at("family").is_string()) fail("/family", "expected a string");
  const std::string family = spec.at("family").get<std::string>();
  if (!known_families().count(family)) fail("/family", "unknown family \"" + family + "\"");

  const Json params = spec.value("params", Json::object());
  if (!params.is_object()) fail("/params", "expected an object");
  const std::set<std::string> allowed = allowed_params(family);
  for (const auto& [key, value] : params.items())
    if (!allowed.count(key)) fail("/params/" + key, "not a parameter of " + family);

  try {
    if (family == "samples") {
      const RealVector lift = real_array(params, "lift");
      if (spec.contains("grid") && spec.at("grid") != lift.size()) fail("/grid", "does not match the lift length");
      return CircleMap::from_lift(lift);
    }
    if (family == "from_u") {
      const RealVector u = real_array(params, "u");
      if (spec.contains("grid") && spec.at("grid") != u.size()) fail("/grid", "does not match the length of u");
      const std::string s = params.value("sampling", std::string("nodes"));
      if (s != "nodes" && s != "cells") fail("/params/sampling", "expected \"nodes\" or \"cells\"");
      if (params.contains("renormalize") && !params.at("renormalize").is_boolean())
        fail("/params/renormalize", "expected a boolean");
      const bool renormalize = params.value("renormalize", true);
      const GridFunction gu = GridFunction::from_real(u, s == "cells" ? Sampling::kCellCenters : Sampling::kNodes);
      const CircleMap h = from_boundary_density(gu, renormalize);
      return grid && *grid != h.size() ? h.resampled(*grid) : h;
    }

    const long n = spec_grid(spec, grid);
    if (family == "identity") return CircleMap::identity(n);
    if (family == "rotation") return CircleMap::rotation(real_param(params, "beta", {}), n);
    if (family == "mobius") {
      const Complex a(real_param(params, "a_re", 0.0), real_param(params, "a_im", 0.0));
      return CircleMap::mobius(a, real_param(params, "beta", 0.0), n);
    }
    if (family == "sine") return CircleMap::sine(real_param(params, "amplitude", {}), n);
    if (family == "sine_flat") return build_sine_flat(n);
    return build_counterexample(real_param(params, "alpha", {}), n).map;
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    fail("", e.what());
  }
}

Json map_to_json(const CircleMap& h) {
  if (!h.has_closed_form()) return samples_spec(h);
  const auto& form = h.closed_form();
  const std::string family = form->family();
  if (!known_families().count(family) || family == "samples") return samples_spec(h);
  if (CircleMap::from_closed_form(form, h.size()).offset() != h.offset()) return samples_spec(h);

  Json params = Json::object();
  if (family == "from_u") {
    const auto& density = dynamic_cast<const DensityForm&>(*form);
    params["u"] = json_array(density.density_log().real());
    params["sampling"] = density.density_log().sampling() == Sampling::kCellCenters ? "cells" : "nodes";
    params["renormalize"] = density.renormalize();
    if (density.density_log().size() != h.size()) return samples_spec(h);
  } else {
    for (const auto& [key, value] : form->params()) params[key] = value;
  }
  return Json{{"family", family}, {"params", params}, {"grid", h.size()}};
}

Json number(Real v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json exact(Real v) { return Json{{"value", number(v)}, {"exact", true}}; }

Json profile_json(const DyadicProfile& p) {
  Json levels = Json::array(), values = Json::array();
  for (std::size_t k = 0; k < p.size(); ++k) {
    levels.push_back(p.levels[k]);
    values.push_back(number(p.values[k]));
  }
  return Json{{"levels", levels}, {"values", values}};
}

Json measured(Real v, const DyadicProfile& p, std::optional<Trend> trend) {
  Json out{{"value", number(v)}, {"profile", profile_json(p)}};
  if (trend) out["trend"] = std::string(to_string(*trend));
  return out;
}

Json matrix_json(const OperatorMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.matrix.rows(); ++i) {
    Json r = Json::array(), s = Json::array();
    for (Eigen::Index j = 0; j < m.matrix.cols(); ++j) {
      r.push_back(number(m.matrix(i, j).real()));
      s.push_back(number(m.matrix(i, j).imag()));
    }
    re.push_back(r);
    im.push_back(s);
  }
  return Json{{"label", m.label}, {"basis", m.basis},      {"rows", m.matrix.rows()}, {"cols", m.matrix.cols()},
              {"re", re},         {"im", im},              {"warnings", m.warnings}};
}

Json series_to_json(const PowerSeries& f) {
  Json c = Json::array();
  for (long n = 0; n <= f.truncation(); ++n) c.push_back({f[n].real(), f[n].imag()});
  return Json{{"domain", f.domain() == PowerSeries::Domain::kDisk ? "disk" : "exterior"},
              {"truncation", f.truncation()},
              {"coefficients", c}};
}

PowerSeries series_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("coefficients") || !j.at("coefficients").is_array())
    throw SpecError("series: expected {\"domain\", \"truncation\", \"coefficients\"}");
  const std::string domain = j.value("domain", std::string("disk"));
  if (domain != "disk" && domain != "exterior") throw SpecError("series /domain: expected \"disk\" or \"exterior\"");
  const Json& c = j.at("coefficients");
  if (c.empty()) throw SpecError("series /coefficients: empty");
  if (j.contains("truncation") && j.at("truncation") != c.size() - 1)
    throw SpecError("series /truncation: does not match the coefficient count");
  ComplexVector v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (!c[n].is_array() || c[n].size() != 2 || !c[n][0].is_number() || !c[n][1].is_number())
      throw SpecError("series /coefficients/" + std::to_string(n) + ": expected [re, im]");
    v[static_cast<Eigen::Index>(n)] = Complex(c[n][0].get<Real>(), c[n][1].get<Real>());
  }
  return PowerSeries(v, domain == "disk" ? PowerSeries::Domain::kDisk : PowerSeries::Domain::kExterior);
}

std::string matrix_csv(const OperatorMatrix& m) {
  std::ostringstream os;
  os << std::setprecision(17) << "row,col,re,im\n";
  for (Eigen::Index i = 0; i < m.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < m.matrix.cols(); ++j)
      os << i << ',' << j << ',' << m.matrix(i, j).real() << ',' << m.matrix(i, j).imag() << '\n';
  return os.str();
}

std::string oscillation_csv(const OscillationProfile& p) {
  std::ostringstream os;
  os << std::setprecision(17) << "scale,worst_oscillation,at_zero\n";
  for (std::size_t k = 0; k < p.size(); ++k)
    os << p.scales[k] << ',' << p.worst_oscillation[k] << ',' << p.at_zero[k] << '\n';
  return os.str();
}

}  // namespace wpc
