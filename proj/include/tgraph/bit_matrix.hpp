#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tgraph {

/// Dense n x n boolean matrix with word-packed rows.
class BitMatrix {
 public:
  using Word = std::uint64_t;
  static constexpr int kBits = 64;

  BitMatrix() = default;
  explicit BitMatrix(int n)
      : n_(n), words_((n + kBits - 1) / kBits), data_(static_cast<std::size_t>(n) * words_) {}

  int size() const noexcept { return n_; }
  int words_per_row() const noexcept { return words_; }

  bool test(int r, int c) const noexcept {
    return (data_[index(r, c)] >> (c % kBits)) & 1U;
  }
  void set(int r, int c) noexcept { data_[index(r, c)] |= Word{1} << (c % kBits); }
  void reset(int r, int c) noexcept { data_[index(r, c)] &= ~(Word{1} << (c % kBits)); }

  std::span<Word> row(int r) noexcept {
    return {data_.data() + static_cast<std::size_t>(r) * words_, static_cast<std::size_t>(words_)};
  }
  std::span<const Word> row(int r) const noexcept {
    return {data_.data() + static_cast<std::size_t>(r) * words_, static_cast<std::size_t>(words_)};
  }

  int row_count(int r) const noexcept {
    int total = 0;
    for (Word w : row(r)) total += std::popcount(w);
    return total;
  }

  /// Rows r and s both become their union.
  void merge_rows(int r, int s) noexcept {
    auto a = row(r);
    auto b = row(s);
    for (int w = 0; w < words_; ++w) a[w] = b[w] = a[w] | b[w];
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t index(int r, int c) const noexcept {
    return static_cast<std::size_t>(r) * words_ + static_cast<std::size_t>(c / kBits);
  }

  int n_ = 0;
  int words_ = 0;
  std::vector<Word> data_;
};

}  // namespace tgraph
