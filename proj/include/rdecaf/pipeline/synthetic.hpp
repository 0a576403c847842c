#pragma once

#include "rdecaf/featureset/featureset.hpp"

#include <cstddef>
#include <cstdint>

namespace rdecaf {

struct SyntheticSpec {
  std::uint64_t seed = 0;
  std::size_t n = 400;
  std::size_t d_total = 512;
  std::size_t d_informative = 20;
  double noise_scale = 1.0;
};

/// Two-class stand-in for deep activation features. A latent z in
/// d_informative dims has class means at -u and +u (|u| = 1, so the means are
/// 2 apart) and unit isotropic noise; it is mapped into d_total dims by a
/// Gaussian mixing matrix, then noise of scale noise_scale is added to every
/// coordinate. Labels alternate 0/1, magnifications cycle 40/100/200/400.
LabeledFeatureSet make_synthetic_fixture(const SyntheticSpec& spec);

}  // namespace rdecaf
