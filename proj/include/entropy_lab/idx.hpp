// Copyright 2026 The Entropy Lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENTROPY_LAB_IDX_HPP_
#define ENTROPY_LAB_IDX_HPP_

// IDX image/label files (the MNIST container format). All integers are
// big-endian uint32: images are magic 0x00000803, count, rows, cols, then
// count*rows*cols unsigned bytes; labels are magic 0x00000801, count, then
// count bytes.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "entropy_lab/numerics.hpp"

namespace entropy_lab {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

struct LabeledImageSet {
  std::vector<Vector> images;  // flattened row-major, pixels in [0, 1]
  std::vector<int> labels;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return images.size(); }
  std::size_t dim() const { return rows * cols; }
};

// Throws FormatError naming the field and byte offset on wrong magic,
// truncation or an image/label count mismatch.
LabeledImageSet load_idx(std::span<const std::uint8_t> image_bytes,
                         std::span<const std::uint8_t> label_bytes);

LabeledImageSet load_idx_files(const std::filesystem::path& images,
                               const std::filesystem::path& labels);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_idx_images(
    std::size_t rows, std::size_t cols,
    const std::vector<std::vector<std::uint8_t>>& images);
std::vector<std::uint8_t> encode_idx_labels(const std::vector<std::uint8_t>& labels);

}  // namespace entropy_lab

#endif  // ENTROPY_LAB_IDX_HPP_
