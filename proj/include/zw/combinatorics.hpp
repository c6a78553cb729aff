#pragma once

#include <cstdint>
#include <vector>

namespace zw {

/** k! in exact arithmetic; throws ZwError(TooLarge) past 20!. */
std::uint64_t factorial(int k);

/** k! / prod(parts_i!) in exact arithmetic; throws PartsMismatch if the parts
 *  do not sum to k, TooLarge on overflow. */
std::uint64_t multinomial(int k, const std::vector<int>& parts);

std::uint64_t binomial(int n, int k);

/** sqrt(k!) as a double. */
double sqrt_factorial(int k);

}  // namespace zw
