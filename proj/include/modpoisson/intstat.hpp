#pragma once

#include <cstdint>
#include <vector>

#include "modpoisson/dist.hpp"

namespace modpoisson::intstat {

// Table of omega(n) = number of distinct prime divisors for 2 <= n <= N,
// filled by one additive sieve pass.  N <= 1e8 (one byte per integer).
class OmegaSieve {
public:
    static OmegaSieve build(std::uint64_t N);

    std::uint64_t limit() const { return n_; }
    int omega(std::uint64_t n) const {
        return static_cast<int>(omega_[static_cast<std::size_t>(n)]);
    }
    const std::vector<std::uint32_t>& primes() const { return primes_; }

private:
    std::uint64_t n_ = 0;
    std::vector<std::uint8_t> omega_;
    std::vector<std::uint32_t> primes_;
};

// exp((1 - e^{iu}) log log N) * (1/N) * sum_{2<=n<=N} e^{iu (omega(n)-1)};
// at u = 0 this is exactly (N-1)/N.
Complex erdos_kac_scaled_charfn(const OmegaSieve& sieve, double u);

struct SignSumRow {
    std::uint64_t N;
    long long S;    // sum_{n<=N} (-1)^{omega(n)}, n from 1
    double scaled;  // |S| (log N)^2 / N
};

// Running sign sums at the requested thresholds (one sieve pass).
std::vector<SignSumRow> sign_sum(const OmegaSieve& sieve,
                                 std::vector<std::uint64_t> N_values);

struct EmpiricalOmega {
    dist::DiscreteDistribution dist;  // law of omega(n) - 1, n uniform in [2, N]
    double lambda;                    // log log N
};

EmpiricalOmega omega_empirical_dist(const OmegaSieve& sieve);

}  // namespace modpoisson::intstat
