#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "wpc/bmo.hpp"
#include "wpc/circle_map.hpp"
#include "wpc/holo.hpp"
#include "wpc/profile.hpp"

namespace wpc {

/// Insertion-ordered, so the same report is always written the same way.
using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
/// Bumped whenever the report layout changes.
inline constexpr int kReportSchema = 1;

inline constexpr const char* kMapSpecSchema = R"(map spec (JSON object):
  {"family": F, "params": {...}, "grid": N}
  identity                       no params
  rotation                       beta
  mobius                         a_re, a_im, beta (each default 0), |a| < 1
  sine                           amplitude, |amplitude| <= 1 (lift θ + ε sin θ)
  sine_flat                      no params (lift θ - sin θ)
  wp_counterexample              alpha > 1
  from_u                         u: array of N reals, sampling: "nodes" | "cells",
                                 renormalize: bool (default true)
  samples                        lift: array of N strictly increasing reals
  grid is a power of two >= 8; it is implied by the array length for from_u and
  samples. Pass inline JSON or @path to a file.)";

/// Malformed map spec. The message names the offending JSON pointer.
class SpecError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Inline JSON text, or @path to a file holding it.
Json parse_json_argument(const std::string& text);

/// Builds the map a map spec describes. A grid override replaces its
/// grid for closed forms; sampled families keep their own length.
CircleMap map_from_json(const Json& spec, std::optional<long> grid = {});

/// Spec that rebuilds h. Closed forms outside the schema, and closed forms
/// carrying a non-default normalization, are written as samples; the
/// sample values round-trip bit for bit.
Json map_to_json(const CircleMap& h);

/// Finite numbers as numbers, the rest as "inf", "-inf" or "nan".
Json number(Real v);
/// {"value": v, "exact": true}
Json exact(Real v);
/// {"levels": [...], "values": [...]}
Json profile_json(const DyadicProfile& p);
/// {"value": v, "profile": {...}} plus "trend" when given.
Json measured(Real v, const DyadicProfile& p, std::optional<Trend> trend = {});
/// {"label", "basis", "rows", "cols", "re": [[...]], "im": [[...]], "warnings"}
Json matrix_json(const OperatorMatrix& m);

/// {"domain": "disk" | "exterior", "truncation": K, "coefficients": [[re, im], ...]}
Json series_to_json(const PowerSeries& f);
PowerSeries series_from_json(const Json& j);

/// Header "row,col,re,im", one line per entry.
std::string matrix_csv(const OperatorMatrix& m);
/// Header "scale,worst_oscillation,at_zero", one line per scale.
std::string oscillation_csv(const OscillationProfile& p);

}  // namespace wpc
