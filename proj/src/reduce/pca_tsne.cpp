#include "rdecaf/reduce/reduce.hpp"

namespace rdecaf {

PcaTsneResult pca_then_tsne(const Matrix& x, double cev_target, const TsneConfig& config) {
  const PcaModel pca = pca_fit(x);
  const CevCurve curve = cev_curve(pca.explained_variance_ratio);
  PcaTsneResult out;
  out.pca_components = select_k_for_cev(curve, cev_target);
  out.cev_reached = curve.at(out.pca_components);
  out.tsne = tsne_embed(pca_project(pca, x, out.pca_components), config);
  return out;
}

}  // namespace rdecaf
