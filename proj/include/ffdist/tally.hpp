#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ffdist/error.hpp"

namespace ffdist {

/// Overflow-checked counter arithmetic.
inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw Error(ErrorKind::kBudgetExceeded, "64-bit counter overflow");
  }
  return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw Error(ErrorKind::kBudgetExceeded, "64-bit counter overflow");
  }
  return r;
}

/// Counts keyed by a residue in [0, p). Dense below kDenseLimit, hashed above.
/// clear() only touches the slots that were written, so one tally can be
/// reused across many apexes at O(touched) cost.
class Tally {
 public:
  static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 24U;

  explicit Tally(std::uint64_t p) : dense_(p <= kDenseLimit) {
    if (dense_) slots_.assign(p, 0);
  }

  void add(std::uint64_t key, std::uint64_t w = 1) {
    if (dense_) {
      if (slots_[key] == 0) touched_.push_back(key);
      slots_[key] = checked_add(slots_[key], w);
    } else {
      auto& c = sparse_[key];
      c = checked_add(c, w);
    }
  }

  [[nodiscard]] std::uint64_t get(std::uint64_t key) const {
    if (dense_) return slots_[key];
    auto it = sparse_.find(key);
    return it == sparse_.end() ? 0 : it->second;
  }

  [[nodiscard]] std::uint64_t sum_of_squares() const {
    std::uint64_t s = 0;
    for_each([&](std::uint64_t, std::uint64_t c) { s = checked_add(s, checked_mul(c, c)); });
    return s;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    if (dense_) {
      for (std::uint64_t k : touched_) fn(k, slots_[k]);
    } else {
      for (const auto& [k, c] : sparse_) fn(k, c);
    }
  }

  /// Nonzero entries sorted by key.
  [[nodiscard]] std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for_each([&](std::uint64_t k, std::uint64_t c) { out.emplace_back(k, c); });
    std::sort(out.begin(), out.end());
    return out;
  }

  void clear() {
    if (dense_) {
      for (std::uint64_t k : touched_) slots_[k] = 0;
      touched_.clear();
    } else {
      sparse_.clear();
    }
  }

 private:
  bool dense_;
  std::vector<std::uint64_t> slots_;
  std::vector<std::uint64_t> touched_;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
};

}  // namespace ffdist
