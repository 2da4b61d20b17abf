#include "wpc/profile.hpp"

#include <cmath>

namespace wpc {

std::string_view to_string(Trend t) {
  switch (t) {
    case Trend::kYes:
      return "yes-trend";
    case Trend::kNo:
      return "no-trend";
    case Trend::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::vector<Real> relative_increments(const DyadicProfile& p) {
  std::vector<Real> out;
  for (std::size_t k = 1; k < p.size(); ++k) {
    const Real s = p.values[k];
    out.push_back(s > 0 ? (s - p.values[k - 1]) / s : 0.0);
  }
  return out;
}

Trend classify_partial_sums(const DyadicProfile& p, const TrendThresholds& t) {
  if (p.empty()) return Trend::kInconclusive;
  // Identically zero sums: nothing to converge.
  if (std::abs(p.last()) < 1e-24) return Trend::kYes;
  if (p.size() < 4) return Trend::kInconclusive;

  const std::size_t n = p.size();
  const Real d1 = p.values[n - 3] - p.values[n - 4];
  const Real d2 = p.values[n - 2] - p.values[n - 3];
  const Real d3 = p.values[n - 1] - p.values[n - 2];
  const Real s = p.last();
  const Real r1 = d1 / p.values[n - 3];
  const Real r2 = d2 / p.values[n - 2];
  const Real r3 = d3 / s;

  if (r3 < t.cauchy) return Trend::kYes;
  if (r1 >= t.diverge && r2 >= t.diverge && r3 >= t.diverge) return Trend::kNo;
  if (d2 >= d1 && d3 >= d2) return Trend::kNo;
  if (d2 <= t.contraction * d1 && d3 <= t.contraction * d2 && r3 < t.diverge) return Trend::kYes;
  return Trend::kInconclusive;
}

}  // namespace wpc
