#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nlpca/dataset.hpp"
#include "nlpca/error.hpp"

namespace nlpca {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

enum class IdxErrorKind { kOpenFailed, kBadMagic, kTruncated, kTrailingBytes, kDimensionOverflow };

/// IDX parse failure. `offset()` is the byte position where parsing stopped.
class IdxError : public IoError {
 public:
  IdxError(IdxErrorKind kind, std::uint64_t offset, const std::string& what);

  IdxErrorKind kind() const { return kind_; }
  std::uint64_t offset() const { return offset_; }

 private:
  IdxErrorKind kind_;
  std::uint64_t offset_;
};

/// Big-endian IDX3 unsigned-byte image file. Labels are left empty.
RawImageSet load_idx_images(const std::filesystem::path& path);
std::vector<int> load_idx_labels(const std::filesystem::path& path);

RawImageSet parse_idx_images(const std::vector<std::uint8_t>& bytes);
std::vector<int> parse_idx_labels(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> encode_idx_images(const RawImageSet& set);
std::vector<std::uint8_t> encode_idx_labels(const std::vector<int>& labels);

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace nlpca
