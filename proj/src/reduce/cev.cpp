#include "rdecaf/reduce/cev.hpp"

#include "rdecaf/error.hpp"

namespace rdecaf {

CevCurve cev_curve(const Vector& ratios) {
  CevCurve curve;
  curve.cumulative.reserve(static_cast<std::size_t>(ratios.size()));
  double running = 0.0;
  for (Eigen::Index i = 0; i < ratios.size(); ++i) {
    if (ratios(i) < 0.0) throw DataError("explained-variance ratios must be non-negative");
    running += ratios(i);
    curve.cumulative.push_back(running);
  }
  return curve;
}

std::size_t select_k_for_cev(const CevCurve& curve, double target) {
  if (!(target > 0.0 && target <= 1.0)) throw DataError("CEV target must lie in (0, 1]");
  if (curve.cumulative.empty()) throw DataError("CEV curve is empty");
  for (std::size_t k = 0; k < curve.cumulative.size(); ++k) {
    if (curve.cumulative[k] >= target - kCevSlack) return k + 1;
  }
  return curve.k_max();
}

}  // namespace rdecaf
