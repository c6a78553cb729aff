#include "zw/combinatorics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "zw/error.hpp"

namespace zw {

std::uint64_t factorial(int k) {
  if (k < 0) throw ZwError(ErrorKind::RangeViolation, "factorial of a negative number");
  if (k > 20) throw ZwError(ErrorKind::TooLarge, std::to_string(k) + "! overflows 64 bits");
  std::uint64_t r = 1;
  for (int i = 2; i <= k; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > UINT64_MAX) throw ZwError(ErrorKind::TooLarge, "binomial coefficient overflows");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t multinomial(int k, const std::vector<int>& parts) {
  long long sum = 0;
  for (int p : parts) {
    if (p < 0) throw ZwError(ErrorKind::PartsMismatch, "negative part");
    sum += p;
  }
  if (sum != k)
    throw ZwError(ErrorKind::PartsMismatch,
                  "parts sum to " + std::to_string(sum) + ", expected " + std::to_string(k));
  unsigned __int128 r = 1;
  int acc = 0;
  for (int p : parts) {
    acc += p;
    r *= binomial(acc, p);
    if (r > UINT64_MAX) throw ZwError(ErrorKind::TooLarge, "multinomial coefficient overflows");
  }
  return static_cast<std::uint64_t>(r);
}

double sqrt_factorial(int k) { return std::sqrt(static_cast<double>(factorial(k))); }

}  // namespace zw
