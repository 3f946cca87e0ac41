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

#include "entropy_lab/idx.hpp"

#include <fstream>
#include <iterator>
#include <string>

#include "entropy_lab/error.hpp"

namespace entropy_lab {

namespace {

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, std::string stream)
      : bytes_(bytes), stream_(std::move(stream)) {}

  std::uint32_t be32(const char* field) {
    require(4, field);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* field) {
    require(n, field);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t pos() const { return pos_; }
  const std::string& stream() const { return stream_; }

 private:
  void require(std::size_t n, const char* field) {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(stream_ + "." + field, pos_,
                        "truncated " + stream_ + " stream: need " +
                            std::to_string(n) + " bytes, have " +
                            std::to_string(bytes_.size() - pos_));
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::string stream_;
  std::size_t pos_ = 0;
};

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
  }
}

}  // namespace

LabeledImageSet load_idx(std::span<const std::uint8_t> image_bytes,
                         std::span<const std::uint8_t> label_bytes) {
  ByteReader img(image_bytes, "image");
  std::uint32_t magic = img.be32("magic");
  if (magic != kIdxImageMagic) {
    throw FormatError("image.magic", 0,
                      "expected image magic 0x00000803, got " +
                          std::to_string(magic));
  }
  std::uint32_t count = img.be32("count");
  std::uint32_t rows = img.be32("rows");
  std::uint32_t cols = img.be32("cols");

  ByteReader lab(label_bytes, "label");
  std::uint32_t lmagic = lab.be32("magic");
  if (lmagic != kIdxLabelMagic) {
    throw FormatError("label.magic", 0,
                      "expected label magic 0x00000801, got " +
                          std::to_string(lmagic));
  }
  std::uint32_t lcount = lab.be32("count");
  if (lcount != count) {
    throw FormatError("label.count", 4,
                      "label count " + std::to_string(lcount) +
                          " does not match image count " + std::to_string(count));
  }

  LabeledImageSet set;
  set.rows = rows;
  set.cols = cols;
  const std::size_t dim = static_cast<std::size_t>(rows) * cols;
  set.images.reserve(count);
  set.labels.reserve(count);
  for (std::uint32_t n = 0; n < count; ++n) {
    auto pixels = img.take(dim, "pixels");
    Vector v(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      v[static_cast<Eigen::Index>(i)] = pixels[i] / 255.0;
    }
    set.images.push_back(std::move(v));
  }
  auto labels = lab.take(count, "labels");
  for (std::uint8_t l : labels) set.labels.push_back(l);
  return set;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

LabeledImageSet load_idx_files(const std::filesystem::path& images,
                               const std::filesystem::path& labels) {
  auto ib = read_file_bytes(images);
  auto lb = read_file_bytes(labels);
  return load_idx(ib, lb);
}

std::vector<std::uint8_t> encode_idx_images(
    std::size_t rows, std::size_t cols,
    const std::vector<std::vector<std::uint8_t>>& images) {
  std::vector<std::uint8_t> out;
  put_be32(out, kIdxImageMagic);
  put_be32(out, static_cast<std::uint32_t>(images.size()));
  put_be32(out, static_cast<std::uint32_t>(rows));
  put_be32(out, static_cast<std::uint32_t>(cols));
  for (const auto& img : images) out.insert(out.end(), img.begin(), img.end());
  return out;
}

std::vector<std::uint8_t> encode_idx_labels(const std::vector<std::uint8_t>& labels) {
  std::vector<std::uint8_t> out;
  put_be32(out, kIdxLabelMagic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

}  // namespace entropy_lab
