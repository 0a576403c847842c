#pragma once

#include "rdecaf/types.hpp"

#include <cstddef>
#include <vector>

namespace rdecaf {

/// Running sum of explained-variance (or energy) ratios.
struct CevCurve {
  std::vector<double> cumulative;

  std::size_t k_max() const noexcept { return cumulative.size(); }
  /// Cumulative value after keeping k components (1-based).
  double at(std::size_t k) const { return cumulative.at(k - 1); }
};

CevCurve cev_curve(const Vector& ratios);

/// Slack used when comparing a prefix sum against the target, so that e.g.
/// 0.5 + 0.3 counts as reaching 0.8.
inline constexpr double kCevSlack = 1e-12;

/// Smallest k with cumulative[k] >= target; k_max when no prefix reaches
/// the target. Never returns 0. `target` must lie in (0, 1].
std::size_t select_k_for_cev(const CevCurve& curve, double target);

}  // namespace rdecaf
