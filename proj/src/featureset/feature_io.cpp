#include "rdecaf/featureset/featureset.hpp"

#include "rdecaf/error.hpp"
#include "detail/byte_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>
#include <string_view>

namespace rdecaf {
namespace {

using detail::get_le;
using detail::put_le;
using detail::read_file;
using detail::write_file;

constexpr std::array<char, 4> kRdcfMagic{'R', 'D', 'C', 'F'};
constexpr std::uint16_t kRdcfVersion = 1;

std::string row_prefix(std::size_t row) { return "row " + std::to_string(row) + ": "; }

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto result = std::from_chars(text.data(), end, value);
  return result.ec == std::errc() && result.ptr == end && !text.empty();
}

LabeledFeatureSet load_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": missing CSV header");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_commas(line);
  if (header.size() < 4 || header[0] != "sample_id" || header[1] != "label" ||
      header[2] != "magnification") {
    throw DataError(path.string() +
                    ": CSV header must start with sample_id,label,magnification,f0");
  }
  const std::size_t d = header.size() - 3;
  for (std::size_t j = 0; j < d; ++j) {
    if (header[3 + j] != "f" + std::to_string(j)) {
      throw DataError(path.string() + ": CSV header column " + std::to_string(3 + j) +
                      " should be f" + std::to_string(j));
    }
  }

  std::vector<double> values;
  LabeledFeatureSet set;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != d + 3) {
      throw DataError(row_prefix(row) + "expected " + std::to_string(d) +
                      " feature values, found " +
                      std::to_string(fields.size() < 3 ? 0 : fields.size() - 3));
    }
    int label = -1;
    if (!parse_number(fields[1], label) || (label != kBenign && label != kMalignant)) {
      throw DataError(row_prefix(row) + "label '" + std::string(fields[1]) +
                      "' is not 0 or 1");
    }
    int mag = 0;
    if (!parse_number(fields[2], mag) || !is_valid_magnification(mag)) {
      throw DataError(row_prefix(row) + "magnification '" + std::string(fields[2]) +
                      "' is not one of 40/100/200/400");
    }
    for (std::size_t j = 0; j < d; ++j) {
      double v = 0.0;
      if (!parse_number(fields[3 + j], v)) {
        throw DataError(row_prefix(row) + "cannot parse value '" + std::string(fields[3 + j]) +
                        "' in column f" + std::to_string(j));
      }
      if (!std::isfinite(v)) {
        throw DataError(row_prefix(row) + "non-finite value in column f" + std::to_string(j));
      }
      values.push_back(v);
    }
    set.sample_ids.emplace_back(fields[0]);
    set.labels.push_back(label);
    set.magnifications.push_back(static_cast<std::uint16_t>(mag));
    ++row;
  }
  if (row == 0) throw DataError(path.string() + ": no data rows");

  set.features = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                Eigen::RowMajor>>(
      values.data(), static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(d));
  return set;
}

void save_csv(const LabeledFeatureSet& set, const std::filesystem::path& path) {
  std::string out = "sample_id,label,magnification";
  for (std::size_t j = 0; j < set.dims(); ++j) out += ",f" + std::to_string(j);
  out += '\n';

  std::array<char, 64> buf{};
  for (std::size_t i = 0; i < set.size(); ++i) {
    const std::string& id = set.sample_ids[i];
    if (id.find_first_of(",\r\n") != std::string::npos) {
      throw DataError(row_prefix(i) + "sample id contains a comma or line break");
    }
    out += id;
    out += ',';
    out += std::to_string(set.labels[i]);
    out += ',';
    out += std::to_string(set.magnifications[i]);
    for (Eigen::Index j = 0; j < set.features.cols(); ++j) {
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(),
                                     set.features(static_cast<Eigen::Index>(i), j));
      out += ',';
      out.append(buf.data(), res.ptr);
    }
    out += '\n';
  }
  write_file(path, out);
}

LabeledFeatureSet load_rdcf(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  constexpr std::size_t kHeader = 4 + 2 + 4 + 4;
  if (bytes.size() < kHeader || std::memcmp(p, kRdcfMagic.data(), 4) != 0) {
    throw DataError(path.string() + ": missing RDCF magic bytes");
  }
  const auto version = get_le<std::uint16_t>(p + 4);
  if (version != kRdcfVersion) {
    throw DataError(path.string() + ": unsupported RDCF version " + std::to_string(version));
  }
  const std::size_t n = get_le<std::uint32_t>(p + 6);
  const std::size_t d = get_le<std::uint32_t>(p + 10);
  if (n == 0 || d == 0) throw DataError(path.string() + ": RDCF header declares an empty set");
  const std::size_t expected = kHeader + n + 2 * n + 4 * n * d;
  if (bytes.size() != expected) {
    throw DataError(path.string() + ": RDCF size " + std::to_string(bytes.size()) +
                    " bytes does not match header (expected " + std::to_string(expected) + ")");
  }

  LabeledFeatureSet set;
  set.labels.resize(n);
  set.magnifications.resize(n);
  set.sample_ids.resize(n);
  set.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));

  const unsigned char* label_ptr = p + kHeader;
  const unsigned char* mag_ptr = label_ptr + n;
  const unsigned char* feat_ptr = mag_ptr + 2 * n;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = label_ptr[i];
    if (label != kBenign && label != kMalignant) {
      throw DataError(row_prefix(i) + "label " + std::to_string(label) + " is not 0 or 1");
    }
    const int mag = get_le<std::uint16_t>(mag_ptr + 2 * i);
    if (!is_valid_magnification(mag)) {
      throw DataError(row_prefix(i) + "magnification " + std::to_string(mag) +
                      " is not one of 40/100/200/400");
    }
    set.labels[i] = label;
    set.magnifications[i] = static_cast<std::uint16_t>(mag);
    set.sample_ids[i] = std::to_string(i);
    for (std::size_t j = 0; j < d; ++j) {
      const float v = detail::get_f32(feat_ptr + 4 * (i * d + j));
      if (!std::isfinite(v)) {
        throw DataError(row_prefix(i) + "non-finite value in column " + std::to_string(j));
      }
      set.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return set;
}

void save_rdcf(const LabeledFeatureSet& set, const std::filesystem::path& path) {
  const std::size_t n = set.size();
  const std::size_t d = set.dims();
  if (n > UINT32_MAX || d > UINT32_MAX) throw DataError("feature set too large for RDCF");
  std::string out;
  out.reserve(14 + 3 * n + 4 * n * d);
  out.append(kRdcfMagic.data(), kRdcfMagic.size());
  put_le<std::uint16_t>(out, kRdcfVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  for (int label : set.labels) out.push_back(static_cast<char>(label));
  for (std::uint16_t mag : set.magnifications) put_le<std::uint16_t>(out, mag);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto v = static_cast<float>(
          set.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      detail::put_f32(out, v);
    }
  }
  write_file(path, out);
}

}  // namespace

FileFormat parse_file_format(const std::string& name) {
  if (name == "csv") return FileFormat::kCsv;
  if (name == "rdcf") return FileFormat::kRdcf;
  throw ConfigError("unknown feature file format '" + name + "' (expected csv or rdcf)");
}

const char* to_string(FileFormat format) noexcept {
  return format == FileFormat::kCsv ? "csv" : "rdcf";
}

LabeledFeatureSet load_feature_file(const std::filesystem::path& path, FileFormat format) {
  LabeledFeatureSet set = format == FileFormat::kCsv ? load_csv(path) : load_rdcf(path);
  set.validate();
  return set;
}

void save_feature_file(const LabeledFeatureSet& set, const std::filesystem::path& path,
                       FileFormat format) {
  set.validate();
  if (format == FileFormat::kCsv) {
    save_csv(set, path);
  } else {
    save_rdcf(set, path);
  }
}

}  // namespace rdecaf
