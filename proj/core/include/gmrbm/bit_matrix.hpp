#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gmrbm/error.hpp"

namespace gmrbm {

/// Row-major bit matrix with each row packed into 64-bit words.
/// Padding bits beyond `cols` in the last word of a row are always zero.
class BitMatrix {
 public:
  using Word = std::uint64_t;

  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_((cols + 63) / 64), words_(rows * stride_, 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t words_per_row() const noexcept { return stride_; }
  bool empty() const noexcept { return rows_ == 0; }

  bool get(std::size_t i, std::size_t j) const {
    return (words_[i * stride_ + j / 64] >> (j % 64)) & 1U;
  }

  void set(std::size_t i, std::size_t j, bool value) {
    Word& w = words_[i * stride_ + j / 64];
    const Word mask = Word{1} << (j % 64);
    w = value ? (w | mask) : (w & ~mask);
  }

  std::span<const Word> row(std::size_t i) const {
    return {words_.data() + i * stride_, stride_};
  }

  /// Overwrite row i from a 0/1 byte vector of length cols().
  void set_row(std::size_t i, std::span<const std::uint8_t> bits) {
    require(bits.size() == cols_, ErrorCode::dimension_mismatch, "row length mismatch");
    Word* w = words_.data() + i * stride_;
    std::fill(w, w + stride_, Word{0});
    for (std::size_t j = 0; j < cols_; ++j) {
      if (bits[j]) w[j / 64] |= Word{1} << (j % 64);
    }
  }

  std::vector<std::uint8_t> row_bits(std::size_t i) const {
    std::vector<std::uint8_t> out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = get(i, j) ? 1 : 0;
    return out;
  }

  void append_row(std::span<const std::uint8_t> bits) {
    words_.resize(words_.size() + stride_, 0);
    ++rows_;
    set_row(rows_ - 1, bits);
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> words_;
};

/// Hamming distance between two packed rows of equal word length.
inline std::uint32_t hamming(std::span<const BitMatrix::Word> a, std::span<const BitMatrix::Word> b) {
  require(a.size() == b.size(), ErrorCode::dimension_mismatch, "hamming: length mismatch");
  std::uint32_t d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d += static_cast<std::uint32_t>(std::popcount(a[k] ^ b[k]));
  return d;
}

/// Hamming distance between two unpacked 0/1 vectors.
inline std::uint32_t hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  require(a.size() == b.size(), ErrorCode::dimension_mismatch, "hamming: length mismatch");
  std::uint32_t d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] != 0) != (b[k] != 0) ? 1U : 0U;
  return d;
}

}  // namespace gmrbm
