#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace brt {

/// Malformed input or a violated precondition. Maps to CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A computation whose size estimate exceeds a configured cap. Maps to CLI exit code 2.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::uint64_t cap, std::uint64_t estimate)
      : std::runtime_error(what + " (cap " + std::to_string(cap) + ", estimate " +
                           (estimate == UINT64_MAX ? std::string(">= 2^64") : std::to_string(estimate)) + ")"),
        cap_(cap),
        estimate_(estimate) {}

  std::uint64_t cap() const { return cap_; }
  std::uint64_t estimate() const { return estimate_; }

 private:
  std::uint64_t cap_;
  std::uint64_t estimate_;
};

inline constexpr std::uint64_t kDefaultNodeCap = 1'000'000;

namespace detail {

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > UINT64_MAX / b) return UINT64_MAX;
  return a * b;
}

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

inline std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp && r != UINT64_MAX; ++i) r = sat_mul(r, base);
  return base == 1 ? 1 : r;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = sat_mul(r, n - k + i);
    if (r == UINT64_MAX) return r;
    r /= i;
  }
  return r;
}

}  // namespace detail
}  // namespace brt
