#include "phieq/profiles.hpp"

#include <stdexcept>

namespace phieq {

ProfileIndexer::ProfileIndexer(int n_players, int n_actions)
    : n_(n_players), l_(n_actions) {
  if (n_players < 0 || n_actions < 1)
    throw std::invalid_argument("ProfileIndexer: bad dimensions");
  size_ = 1;
  for (int i = 0; i < n_players; ++i) {
    if (size_ > kDenseCellCap / n_actions + 1)
      throw std::invalid_argument("ProfileIndexer: profile space exceeds dense cap");
    size_ *= n_actions;
  }
  if (size_ > kDenseCellCap)
    throw std::invalid_argument("ProfileIndexer: profile space exceeds dense cap");
}

bool ProfileIndexer::dense_ok(int n_players, int n_actions) {
  std::int64_t size = 1;
  for (int i = 0; i < n_players; ++i) {
    size *= n_actions;
    if (size > kDenseCellCap) return false;
  }
  return true;
}

std::int64_t ProfileIndexer::index(std::span<const int> profile) const {
  if (static_cast<int>(profile.size()) != n_)
    throw std::invalid_argument("ProfileIndexer::index: wrong profile length");
  std::int64_t idx = 0;
  for (int i = 0; i < n_; ++i) {
    if (profile[i] < 0 || profile[i] >= l_)
      throw std::invalid_argument("ProfileIndexer::index: action out of range");
    idx = idx * l_ + profile[i];
  }
  return idx;
}

void ProfileIndexer::decode(std::int64_t idx, std::span<int> out) const {
  if (static_cast<int>(out.size()) != n_)
    throw std::invalid_argument("ProfileIndexer::decode: wrong output length");
  for (int i = n_ - 1; i >= 0; --i) {
    out[i] = static_cast<int>(idx % l_);
    idx /= l_;
  }
}

}  // namespace phieq
