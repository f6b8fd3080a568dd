#include "modpoisson/primes.hpp"

#include <cmath>
#include <cstring>

namespace modpoisson {

std::vector<std::uint32_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint32_t> primes;
    if (n < 2) return primes;
    primes.push_back(2);
    if (n < 3) return primes;
    // composite[i] marks 2i+3.
    std::uint64_t m = (n - 1) / 2;
    std::vector<bool> composite(m, false);
    for (std::uint64_t i = 0; i < m; ++i) {
        if (composite[i]) continue;
        std::uint64_t p = 2 * i + 3;
        primes.push_back(static_cast<std::uint32_t>(p));
        if (p * p > n) continue;
        for (std::uint64_t j = (p * p - 3) / 2; j < m; j += p) {
            composite[j] = true;
        }
    }
    return primes;
}

void for_each_prime(std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& f) {
    if (hi < 2) return;
    f(2);
    auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi)));
    while (root * root > hi) --root;
    while ((root + 1) * (root + 1) <= hi) ++root;
    std::vector<std::uint32_t> base = primes_up_to(root);

    constexpr std::uint64_t kBlock = 1u << 20;  // odd numbers per block
    std::vector<std::uint8_t> mark(kBlock);
    // Scan odd numbers 3, 5, ... in blocks of kBlock odds.
    for (std::uint64_t lo = 3; lo <= hi; lo += 2 * kBlock) {
        std::uint64_t lim = std::min(hi, lo + 2 * kBlock - 2);
        std::uint64_t count = (lim - lo) / 2 + 1;
        std::memset(mark.data(), 0, count);
        for (std::uint32_t p : base) {
            if (p == 2) continue;
            std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
            if (pp > lim) break;
            std::uint64_t start = pp;
            if (start < lo) {
                std::uint64_t rem = lo % p;
                start = (rem == 0) ? lo : lo + (p - rem);
                if ((start & 1) == 0) start += p;
            }
            for (std::uint64_t v = start; v <= lim; v += 2 * p) {
                mark[(v - lo) / 2] = 1;
            }
        }
        for (std::uint64_t i = 0; i < count; ++i) {
            if (!mark[i]) f(lo + 2 * i);
        }
    }
}

}  // namespace modpoisson
