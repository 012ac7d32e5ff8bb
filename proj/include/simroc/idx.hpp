#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "simroc/core.hpp"

namespace simroc {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// Unsigned-byte IDX tensor (MNIST images: n x rows x cols; labels: n).
struct IdxTensor {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> data;

  std::uint32_t magic() const noexcept { return 0x00000800u | static_cast<std::uint32_t>(dims.size()); }
  std::size_t count() const noexcept { return dims.empty() ? 0 : dims.front(); }
  std::size_t item_size() const noexcept;
};

/// Decodes a big-endian IDX buffer. Only the two MNIST layouts are
/// accepted; errors carry the byte offset of the problem.
IdxTensor parse_idx(std::span<const std::uint8_t> bytes);
IdxTensor read_idx(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_idx(const IdxTensor& t);
void write_idx(const std::filesystem::path& path, const IdxTensor& t);

/// Images as an n x (rows*cols) matrix scaled to [0,1], with labels + 1 as
/// 1-based classes (digits 0..9 become classes 1..10).
LabeledDataset idx_to_dataset(const IdxTensor& images, const IdxTensor& labels, int num_classes = 10);

}  // namespace simroc
