#include "modpoisson/intstat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "modpoisson/errors.hpp"

namespace modpoisson::intstat {

OmegaSieve OmegaSieve::build(std::uint64_t N) {
    if (N < 2) throw std::invalid_argument("OmegaSieve: N must be >= 2");
    if (N > 100'000'000ull) {
        throw resource_limit_error("OmegaSieve: N must be <= 1e8");
    }
    OmegaSieve s;
    s.n_ = N;
    s.omega_.assign(static_cast<std::size_t>(N) + 1, 0);
    for (std::uint64_t i = 2; i <= N; ++i) {
        if (s.omega_[static_cast<std::size_t>(i)] == 0) {
            s.primes_.push_back(static_cast<std::uint32_t>(i));
            for (std::uint64_t j = i; j <= N; j += i) {
                ++s.omega_[static_cast<std::size_t>(j)];
            }
        }
    }
    return s;
}

namespace {

// Histogram of omega(n) - 1 over 2 <= n <= N (omega < 32 in this range).
std::vector<long long> shifted_histogram(const OmegaSieve& sieve) {
    std::vector<long long> h(32, 0);
    for (std::uint64_t n = 2; n <= sieve.limit(); ++n) {
        ++h[static_cast<std::size_t>(sieve.omega(n) - 1)];
    }
    while (h.size() > 1 && h.back() == 0) h.pop_back();
    return h;
}

}  // namespace

Complex erdos_kac_scaled_charfn(const OmegaSieve& sieve, double u) {
    auto h = shifted_histogram(sieve);
    Complex acc = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (h[k] == 0) continue;
        acc += static_cast<double>(h[k]) *
               std::polar(1.0, u * static_cast<double>(k));
    }
    double N = static_cast<double>(sieve.limit());
    Complex w = std::polar(1.0, u);
    return std::exp((1.0 - w) * std::log(std::log(N))) * acc / N;
}

std::vector<SignSumRow> sign_sum(const OmegaSieve& sieve,
                                 std::vector<std::uint64_t> N_values) {
    std::sort(N_values.begin(), N_values.end());
    for (std::uint64_t N : N_values) {
        if (N < 2 || N > sieve.limit()) {
            throw std::invalid_argument("sign_sum: threshold outside sieve");
        }
    }
    std::vector<SignSumRow> rows;
    long long S = 1;  // n = 1 contributes (-1)^0
    std::size_t next = 0;
    for (std::uint64_t n = 2; n <= sieve.limit() && next < N_values.size();
         ++n) {
        S += (sieve.omega(n) % 2 == 0) ? 1 : -1;
        while (next < N_values.size() && N_values[next] == n) {
            double logN = std::log(static_cast<double>(n));
            rows.push_back(SignSumRow{});
            rows.back().N = n;
            rows.back().S = S;
            rows.back().scaled = std::abs(static_cast<double>(S)) * logN *
                                 logN / static_cast<double>(n);
            ++next;
        }
    }
    return rows;
}

EmpiricalOmega omega_empirical_dist(const OmegaSieve& sieve) {
    auto h = shifted_histogram(sieve);
    long long total = 0;
    for (long long c : h) total += c;
    std::vector<Rational> w;
    w.reserve(h.size());
    for (long long c : h) {
        Rational r(static_cast<long>(c), static_cast<long>(total));
        r.canonicalize();
        w.push_back(std::move(r));
    }
    EmpiricalOmega out{
        dist::DiscreteDistribution::from_rational(0, std::move(w)),
        std::log(std::log(static_cast<double>(sieve.limit())))};
    return out;
}

}  // namespace modpoisson::intstat
