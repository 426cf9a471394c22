#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace ewmcast::gf {

// GF(256) over the AES reduction polynomial x^8+x^4+x^3+x+1 (0x11b);
// log/antilog tables built over the generator 0x03.
inline constexpr int kReductionPoly = 0x11b;

const std::array<std::uint8_t, 256>& log_table();
const std::array<std::uint8_t, 510>& exp_table();

inline std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

inline std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return exp_table()[log_table()[a] + log_table()[b]];
}

std::uint8_t inv(std::uint8_t a);

// Incremental row-echelon rank tracker over GF(2) or GF(256).
// Rows are element-per-byte; for GF(2) a bit-packed insert is provided.
class RankAccumulator {
 public:
  RankAccumulator(int q, int dim);

  void reset();

  // Inserts one row; returns true iff the rank increased.
  bool insert(std::span<const std::uint8_t> row);

  // q = 2 fast path: row given as ceil(dim/64) little-endian bit words.
  bool insert_words(std::span<const std::uint64_t> words);

  int rank() const { return rank_; }
  int dim() const { return dim_; }

 private:
  bool insert_gf256(std::span<const std::uint8_t> row);

  int q_;
  int dim_;
  int words_per_row_;
  int rank_ = 0;
  std::vector<std::uint8_t> pivot_present_;
  std::vector<std::uint64_t> pivots2_;    // q = 2: dim rows x words_per_row_
  std::vector<std::uint8_t> pivots256_;   // q = 256: dim rows x dim, leading 1
  std::vector<std::uint64_t> scratch2_;
  std::vector<std::uint8_t> scratch256_;
};

// Rank of an arbitrary matrix (rows of equal length) over GF(q), q in {2, 256}.
int gf_rank(const std::vector<std::vector<std::uint8_t>>& rows, int q);

}  // namespace ewmcast::gf
