#include "nlpca/idx.hpp"

#include <fstream>
#include <iterator>
#include <limits>

namespace nlpca {
namespace {

constexpr std::uint64_t kMaxPayload = std::uint64_t{1} << 34;

std::string hex32(std::uint32_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s = "0x";
  for (int shift = 28; shift >= 0; shift -= 4) s += digits[(v >> shift) & 0xF];
  return s;
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint32_t u32(const char* field) {
    if (bytes_.size() < pos_ + 4) {
      throw IdxError(IdxErrorKind::kTruncated, pos_,
                     std::string("IDX truncated while reading ") + field + " at offset " +
                         std::to_string(pos_));
    }
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v = (v << 8) | bytes_[pos_ + static_cast<std::size_t>(k)];
    pos_ += 4;
    return v;
  }

  void expect_magic(std::uint32_t expected) {
    const std::uint32_t magic = u32("magic");
    if (magic != expected) {
      throw IdxError(IdxErrorKind::kBadMagic, 0,
                     "wrong IDX magic at offset 0: found " + hex32(magic) + ", expected " +
                         hex32(expected));
    }
  }

  // Payload must run exactly to end of file.
  void expect_payload(std::uint64_t size) {
    const std::uint64_t remaining = bytes_.size() - pos_;
    if (remaining < size) {
      throw IdxError(IdxErrorKind::kTruncated, bytes_.size(),
                     "IDX payload truncated at offset " + std::to_string(bytes_.size()) +
                         ": header declares " + std::to_string(size) + " bytes after offset " +
                         std::to_string(pos_));
    }
    if (remaining > size) {
      throw IdxError(IdxErrorKind::kTrailingBytes, pos_ + size,
                     "unexpected trailing bytes at offset " + std::to_string(pos_ + size));
    }
  }

  std::size_t pos() const { return pos_; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IdxError(IdxErrorKind::kOpenFailed, 0, "cannot open IDX file " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

}  // namespace

IdxError::IdxError(IdxErrorKind kind, std::uint64_t offset, const std::string& what)
    : IoError(what), kind_(kind), offset_(offset) {}

RawImageSet parse_idx_images(const std::vector<std::uint8_t>& bytes) {
  Reader reader(bytes);
  reader.expect_magic(kIdxImageMagic);
  const std::uint32_t count = reader.u32("image count");
  const std::uint32_t rows = reader.u32("row count");
  const std::uint32_t cols = reader.u32("column count");
  const std::uint64_t pixels_per_image = std::uint64_t{rows} * cols;
  if (rows > static_cast<std::uint32_t>(std::numeric_limits<int>::max()) ||
      cols > static_cast<std::uint32_t>(std::numeric_limits<int>::max()) ||
      pixels_per_image * count > kMaxPayload) {
    throw IdxError(IdxErrorKind::kDimensionOverflow, 4,
                   "IDX dimensions " + std::to_string(count) + "x" + std::to_string(rows) + "x" +
                       std::to_string(cols) + " at offset 4 exceed the supported size");
  }
  reader.expect_payload(pixels_per_image * count);

  RawImageSet set;
  set.rows = static_cast<int>(rows);
  set.cols = static_cast<int>(cols);
  set.pixels.resize(count, static_cast<Eigen::Index>(pixels_per_image));
  std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos()), bytes.end(),
            set.pixels.data());
  return set;
}

std::vector<int> parse_idx_labels(const std::vector<std::uint8_t>& bytes) {
  Reader reader(bytes);
  reader.expect_magic(kIdxLabelMagic);
  const std::uint32_t count = reader.u32("label count");
  reader.expect_payload(count);
  return {bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos()), bytes.end()};
}

RawImageSet load_idx_images(const std::filesystem::path& path) {
  return parse_idx_images(read_file(path));
}

std::vector<int> load_idx_labels(const std::filesystem::path& path) {
  return parse_idx_labels(read_file(path));
}

std::vector<std::uint8_t> encode_idx_images(const RawImageSet& set) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + static_cast<std::size_t>(set.pixels.size()));
  put_u32(out, kIdxImageMagic);
  put_u32(out, static_cast<std::uint32_t>(set.count()));
  put_u32(out, static_cast<std::uint32_t>(set.rows));
  put_u32(out, static_cast<std::uint32_t>(set.cols));
  out.insert(out.end(), set.pixels.data(), set.pixels.data() + set.pixels.size());
  return out;
}

std::vector<std::uint8_t> encode_idx_labels(const std::vector<int>& labels) {
  std::vector<std::uint8_t> out;
  put_u32(out, kIdxLabelMagic);
  put_u32(out, static_cast<std::uint32_t>(labels.size()));
  for (int label : labels) out.push_back(static_cast<std::uint8_t>(label));
  return out;
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace nlpca
