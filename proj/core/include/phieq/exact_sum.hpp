#pragma once

#include <vector>

namespace phieq {

// Error-free accumulation of doubles via a nonoverlapping expansion
// (two-sum based). The running sum is represented exactly, so complete
// cancellation can be detected with an exact-zero test instead of a
// tolerance. Used by the exact mode of the team zero-sum check, where the
// accumulated terms cancel pairwise by construction.
class ExactSum {
 public:
  void add(double x) {
    std::vector<double> kept;
    kept.reserve(parts_.size() + 1);
    for (double p : parts_) {
      const double s = x + p;
      const double bv = s - x;
      const double av = s - bv;
      const double err = (x - av) + (p - bv);
      if (err != 0.0) kept.push_back(err);
      x = s;
    }
    if (x != 0.0) kept.push_back(x);
    parts_ = std::move(kept);
  }

  double value() const {
    double v = 0.0;
    for (double p : parts_) v += p;
    return v;
  }

  bool is_zero() const { return parts_.empty(); }

 private:
  std::vector<double> parts_;  // nonoverlapping, increasing magnitude
};

}  // namespace phieq
