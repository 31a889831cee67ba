#pragma once

#include <cstdint>
#include <span>

namespace phieq {

// Mixed-radix index over action profiles. Player 0 is the most significant
// digit, so profile (a_0, ..., a_{n-1}) has index sum_i a_i * l^(n-1-i).
class ProfileIndexer {
 public:
  ProfileIndexer(int n_players, int n_actions);

  std::int64_t size() const { return size_; }
  int n_players() const { return n_; }
  int n_actions() const { return l_; }

  std::int64_t index(std::span<const int> profile) const;
  void decode(std::int64_t idx, std::span<int> out) const;

  // Dense tables are only materialized up to 2^24 cells.
  static constexpr std::int64_t kDenseCellCap = std::int64_t(1) << 24;
  static bool dense_ok(int n_players, int n_actions);

 private:
  int n_;
  int l_;
  std::int64_t size_;
};

}  // namespace phieq
