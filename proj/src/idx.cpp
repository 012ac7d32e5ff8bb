#include "simroc/idx.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "simroc/errors.hpp"

namespace simroc {

std::size_t IdxTensor::item_size() const noexcept {
  std::size_t s = 1;
  for (std::size_t k = 1; k < dims.size(); ++k) s *= dims[k];
  return s;
}

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> b, std::size_t off) {
  return (static_cast<std::uint32_t>(b[off]) << 24) | (static_cast<std::uint32_t>(b[off + 1]) << 16) |
         (static_cast<std::uint32_t>(b[off + 2]) << 8) | static_cast<std::uint32_t>(b[off + 3]);
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

[[noreturn]] void format_error(std::size_t offset, const std::string& what) {
  std::ostringstream msg;
  msg << "IDX format error at offset " << offset << ": " << what;
  throw Error(ErrorCode::kFormat, msg.str());
}

}  // namespace

IdxTensor parse_idx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) format_error(bytes.size(), "truncated magic number");
  const std::uint32_t magic = read_be32(bytes, 0);
  if (magic != kIdxImagesMagic && magic != kIdxLabelsMagic) {
    std::ostringstream m;
    m << "bad magic 0x" << std::hex << magic << " (expected 0x803 or 0x801)";
    format_error(0, m.str());
  }
  const std::size_t rank = magic & 0xffu;
  IdxTensor t;
  std::size_t off = 4;
  for (std::size_t k = 0; k < rank; ++k, off += 4) {
    if (bytes.size() < off + 4) format_error(bytes.size(), "truncated dimension header");
    t.dims.push_back(read_be32(bytes, off));
  }
  std::size_t total = 1;
  for (std::uint32_t d : t.dims) total *= d;
  if (bytes.size() < off + total) {
    std::ostringstream m;
    m << "truncated payload: expected " << total << " bytes, found " << bytes.size() - off;
    format_error(bytes.size(), m.str());
  }
  if (bytes.size() > off + total) format_error(off + total, "trailing bytes after payload");
  t.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(off), bytes.end());
  return t;
}

IdxTensor read_idx(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return parse_idx(bytes);
}

std::vector<std::uint8_t> encode_idx(const IdxTensor& t) {
  if (t.dims.size() != 1 && t.dims.size() != 3) {
    throw Error(ErrorCode::kInvalidInput, "IDX tensors must have rank 1 or 3");
  }
  std::size_t total = 1;
  for (std::uint32_t d : t.dims) total *= d;
  if (total != t.data.size()) throw Error(ErrorCode::kInvalidInput, "IDX payload size mismatch");
  std::vector<std::uint8_t> out;
  out.reserve(4 + 4 * t.dims.size() + t.data.size());
  put_be32(out, t.magic());
  for (std::uint32_t d : t.dims) put_be32(out, d);
  out.insert(out.end(), t.data.begin(), t.data.end());
  return out;
}

void write_idx(const std::filesystem::path& path, const IdxTensor& t) {
  const auto bytes = encode_idx(t);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

LabeledDataset idx_to_dataset(const IdxTensor& images, const IdxTensor& labels, int num_classes) {
  if (images.dims.size() != 3 || labels.dims.size() != 1) {
    throw Error(ErrorCode::kFormat, "expected an image tensor and a label vector");
  }
  if (images.count() != labels.count()) {
    throw Error(ErrorCode::kFormat, "image and label counts differ");
  }
  const std::size_t n = images.count();
  const std::size_t d = images.item_size();
  RowMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = images.data[i * d + j] / 255.0;
    }
  }
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(labels.data[i]) + 1;
  return LabeledDataset(std::move(x), std::move(y), num_classes);
}

}  // namespace simroc
