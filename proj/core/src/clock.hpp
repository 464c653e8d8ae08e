#pragma once

#include <chrono>
#include <cstdint>

#include "tm2qbf/evaluator.hpp"

namespace tm2qbf::detail {

struct BudgetHit {};

class Clock {
 public:
  explicit Clock(const Budget& budget)
      : budget_(budget), start_(std::chrono::steady_clock::now()) {}

  void tick(std::uint64_t n = 1) {
    nodes_ += n;
    if (budget_.nodes != 0 && nodes_ > budget_.nodes) throw BudgetHit{};
    if (budget_.time.count() != 0 && (nodes_ & 0x3FF) < n) {
      if (std::chrono::steady_clock::now() - start_ > budget_.time) throw BudgetHit{};
    }
  }

  std::uint64_t nodes() const { return nodes_; }

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  Budget budget_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t nodes_ = 0;
};

}  // namespace tm2qbf::detail
