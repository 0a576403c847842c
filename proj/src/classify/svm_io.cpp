#include "rdecaf/classify/svm.hpp"

#include "detail/byte_io.hpp"
#include "rdecaf/error.hpp"

#include <array>
#include <cstring>

namespace rdecaf {
namespace {

constexpr std::array<char, 4> kMagic{'R', 'S', 'V', 'M'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 2 + 1 + 8 + 4 + 4;

}  // namespace

void save_svm_model(const SvmModel& model, const std::filesystem::path& path) {
  const auto m = static_cast<std::size_t>(model.support_vectors.rows());
  const std::size_t d = model.dims();
  if (static_cast<std::size_t>(model.dual_coefficients.size()) != m) {
    throw DataError("SVM model has mismatched coefficient count");
  }
  std::string out;
  out.reserve(kHeaderBytes + 8 * (m * d + m + 1));
  out.append(kMagic.data(), kMagic.size());
  detail::put_le<std::uint16_t>(out, kVersion);
  out.push_back(static_cast<char>(model.kernel.kind == KernelKind::kRbf ? 0 : 1));
  detail::put_f64(out, model.kernel.gamma);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      detail::put_f64(out, model.support_vectors(static_cast<Eigen::Index>(i),
                                                 static_cast<Eigen::Index>(j)));
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    detail::put_f64(out, model.dual_coefficients(static_cast<Eigen::Index>(i)));
  }
  detail::put_f64(out, model.bias);
  detail::write_file(path, out);
}

SvmModel load_svm_model(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < kHeaderBytes || std::memcmp(p, kMagic.data(), 4) != 0) {
    throw DataError(path.string() + ": missing RSVM magic bytes");
  }
  const auto version = detail::get_le<std::uint16_t>(p + 4);
  if (version != kVersion) {
    throw DataError(path.string() + ": unsupported RSVM version " + std::to_string(version));
  }
  SvmModel model;
  const unsigned char kind = p[6];
  if (kind > 1) throw DataError(path.string() + ": unknown kernel kind");
  model.kernel.kind = kind == 0 ? KernelKind::kRbf : KernelKind::kLinear;
  model.kernel.gamma = detail::get_f64(p + 7);
  const std::size_t m = detail::get_le<std::uint32_t>(p + 15);
  const std::size_t d = detail::get_le<std::uint32_t>(p + 19);
  if (bytes.size() != kHeaderBytes + 8 * (m * d + m + 1)) {
    throw DataError(path.string() + ": RSVM size does not match header");
  }
  const unsigned char* q = p + kHeaderBytes;
  model.support_vectors.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j, q += 8) {
      model.support_vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          detail::get_f64(q);
    }
  }
  model.dual_coefficients.resize(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i, q += 8) {
    model.dual_coefficients(static_cast<Eigen::Index>(i)) = detail::get_f64(q);
  }
  model.bias = detail::get_f64(q);
  return model;
}

}  // namespace rdecaf
