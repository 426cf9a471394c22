#include "ewmcast/gf.hpp"

#include <bit>
#include <stdexcept>

namespace ewmcast::gf {

namespace {

struct Tables {
  std::array<std::uint8_t, 256> log{};
  std::array<std::uint8_t, 510> exp{};
};

Tables build_tables() {
  Tables t;
  int x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<std::uint8_t>(x);
    t.log[x] = static_cast<std::uint8_t>(i);
    // multiply by the generator 0x03
    int x2 = x << 1;
    if (x2 & 0x100) x2 ^= kReductionPoly;
    x = x2 ^ x;
  }
  for (int i = 255; i < 510; ++i) t.exp[i] = t.exp[i - 255];
  return t;
}

const Tables& tables() {
  static const Tables t = build_tables();
  return t;
}

}  // namespace

const std::array<std::uint8_t, 256>& log_table() { return tables().log; }
const std::array<std::uint8_t, 510>& exp_table() { return tables().exp; }

std::uint8_t inv(std::uint8_t a) {
  if (a == 0) throw std::invalid_argument("gf: inverse of zero");
  return exp_table()[255 - log_table()[a]];
}

RankAccumulator::RankAccumulator(int q, int dim) : q_(q), dim_(dim) {
  if (q != 2 && q != 256) throw std::invalid_argument("gf: unsupported field size");
  if (dim < 0) throw std::invalid_argument("gf: negative dimension");
  words_per_row_ = (dim + 63) / 64;
  pivot_present_.assign(static_cast<std::size_t>(dim), 0);
  if (q == 2) {
    pivots2_.assign(static_cast<std::size_t>(dim) * words_per_row_, 0);
    scratch2_.assign(static_cast<std::size_t>(words_per_row_), 0);
  } else {
    pivots256_.assign(static_cast<std::size_t>(dim) * dim, 0);
    scratch256_.assign(static_cast<std::size_t>(dim), 0);
  }
}

void RankAccumulator::reset() {
  rank_ = 0;
  pivot_present_.assign(pivot_present_.size(), 0);
}

bool RankAccumulator::insert(std::span<const std::uint8_t> row) {
  if (static_cast<int>(row.size()) != dim_)
    throw std::invalid_argument("gf: row length does not match dimension");
  if (q_ == 256) return insert_gf256(row);
  for (auto& w : scratch2_) w = 0;
  for (int i = 0; i < dim_; ++i) {
    if (row[i] > 1) throw std::invalid_argument("gf: GF(2) entry not in {0,1}");
    if (row[i]) scratch2_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return insert_words(scratch2_);
}

bool RankAccumulator::insert_words(std::span<const std::uint64_t> words) {
  if (q_ != 2 || static_cast<int>(words.size()) != words_per_row_)
    throw std::invalid_argument("gf: packed insert requires GF(2) rows");
  if (words.data() != scratch2_.data())
    scratch2_.assign(words.begin(), words.end());
  for (;;) {
    int lead = -1;
    for (int w = 0; w < words_per_row_; ++w) {
      if (scratch2_[w]) {
        lead = 64 * w + std::countr_zero(scratch2_[w]);
        break;
      }
    }
    if (lead < 0 || lead >= dim_) return false;
    std::uint64_t* pivot = &pivots2_[static_cast<std::size_t>(lead) * words_per_row_];
    if (!pivot_present_[lead]) {
      for (int w = 0; w < words_per_row_; ++w) pivot[w] = scratch2_[w];
      pivot_present_[lead] = 1;
      ++rank_;
      return true;
    }
    for (int w = 0; w < words_per_row_; ++w) scratch2_[w] ^= pivot[w];
  }
}

bool RankAccumulator::insert_gf256(std::span<const std::uint8_t> row) {
  for (int i = 0; i < dim_; ++i) scratch256_[i] = row[i];
  const auto& lg = log_table();
  const auto& ex = exp_table();
  for (int c = 0; c < dim_; ++c) {
    const std::uint8_t v = scratch256_[c];
    if (v == 0) continue;
    std::uint8_t* pivot = &pivots256_[static_cast<std::size_t>(c) * dim_];
    if (pivot_present_[c]) {
      const int lv = lg[v];
      scratch256_[c] = 0;
      for (int j = c + 1; j < dim_; ++j) {
        const std::uint8_t pj = pivot[j];
        if (pj) scratch256_[j] ^= ex[lv + lg[pj]];
      }
    } else {
      const int liv = 255 - lg[v];
      pivot[c] = 1;
      for (int j = c + 1; j < dim_; ++j) {
        const std::uint8_t sj = scratch256_[j];
        pivot[j] = sj ? ex[liv + lg[sj]] : 0;
      }
      pivot_present_[c] = 1;
      ++rank_;
      return true;
    }
  }
  return false;
}

int gf_rank(const std::vector<std::vector<std::uint8_t>>& rows, int q) {
  if (rows.empty()) return 0;
  const int cols = static_cast<int>(rows.front().size());
  RankAccumulator acc(q, cols);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != cols)
      throw std::invalid_argument("gf: ragged matrix");
    acc.insert(row);
  }
  return acc.rank();
}

}  // namespace ewmcast::gf
