#pragma once

#include <string_view>
#include <vector>

#include "wpc/types.hpp"

namespace wpc {

/// Values of a quantity at a sequence of dyadic resolutions (truncation orders,
/// grid sizes or scales), ordered from coarse to fine.
struct DyadicProfile {
  std::vector<long> levels;
  std::vector<Real> values;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  Real last() const { return values.back(); }
  void push(long level, Real value) {
    levels.push_back(level);
    values.push_back(value);
  }
};

/// Three-way verdict for a numerical membership question.
enum class Trend { kYes, kNo, kInconclusive };

std::string_view to_string(Trend t);

/// Increment thresholds for deciding whether a nondecreasing partial-sum
/// profile is Cauchy or divergent.
///
/// A profile is Cauchy when its last relative increment is below `cauchy`, or
/// when its last three increments contract by at least `contraction` per
/// dyadic step while the last relative increment stays below `diverge`.
/// It is divergent when the last three relative increments all exceed
/// `diverge`, or when the increments stop decreasing.
struct TrendThresholds {
  Real cauchy = 1e-3;
  Real diverge = 1e-2;
  Real contraction = 0.9;
};

Trend classify_partial_sums(const DyadicProfile& partial_sums,
                            const TrendThresholds& thresholds = {});

/// Relative increments (S_k - S_{k-1}) / S_k, one shorter than the profile.
std::vector<Real> relative_increments(const DyadicProfile& partial_sums);

}  // namespace wpc
