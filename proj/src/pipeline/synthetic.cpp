#include "rdecaf/pipeline/synthetic.hpp"

#include "rdecaf/error.hpp"
#include "rdecaf/random.hpp"

#include <array>
#include <cstdio>

namespace rdecaf {

LabeledFeatureSet make_synthetic_fixture(const SyntheticSpec& spec) {
  if (spec.d_informative < 1 || spec.d_informative >= spec.d_total) {
    throw DataError("synthetic fixture needs 1 <= d_informative < d_total");
  }
  if (spec.n < 2) throw DataError("synthetic fixture needs at least 2 samples");
  if (!(spec.noise_scale >= 0.0)) throw DataError("noise_scale must be non-negative");

  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto d = static_cast<Eigen::Index>(spec.d_total);
  const auto m = static_cast<Eigen::Index>(spec.d_informative);
  Rng rng(spec.seed);

  Vector u(m);
  for (Eigen::Index j = 0; j < m; ++j) u(j) = rng.normal();
  u.normalize();
  Matrix mixing(d, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) mixing(i, j) = rng.normal();
  }

  constexpr std::array<std::uint16_t, 4> kMags{40, 100, 200, 400};
  LabeledFeatureSet set;
  set.features.resize(n, d);
  set.labels.resize(spec.n);
  set.magnifications.resize(spec.n);
  set.sample_ids.resize(spec.n);
  Vector z(m);
  Vector noise(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    const int label = static_cast<int>(r % 2);
    for (Eigen::Index j = 0; j < m; ++j) z(j) = rng.normal();
    z += (label == kMalignant ? 1.0 : -1.0) * u;
    for (Eigen::Index j = 0; j < d; ++j) noise(j) = spec.noise_scale * rng.normal();
    set.features.row(i) = (mixing * z + noise).transpose();
    set.labels[r] = label;
    set.magnifications[r] = kMags[(r / 2) % kMags.size()];
    std::array<char, 32> id{};
    std::snprintf(id.data(), id.size(), "synth-%05zu", r);
    set.sample_ids[r] = id.data();
  }
  return set;
}

}  // namespace rdecaf
