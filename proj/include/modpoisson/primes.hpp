#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace modpoisson {

// All primes <= n (simple odds-only Eratosthenes; intended for n up to ~1e8).
std::vector<std::uint32_t> primes_up_to(std::uint64_t n);

// Calls f(p) for every prime p in [2, hi], in increasing order, using a
// segmented sieve so memory stays O(sqrt(hi)) + one block.  Suitable for
// hi up to a few times 1e9.
void for_each_prime(std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& f);

}  // namespace modpoisson
