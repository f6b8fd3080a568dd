#include "modpoisson/arith.hpp"

#include <cmath>

namespace modpoisson {

BigInt binomial(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

BigInt binomial(const BigInt& n, unsigned long k) {
    BigInt r;
    mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

BigInt factorial(unsigned long n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

BigInt big_pow(unsigned long base, unsigned long exp) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                            19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    // n - 1 = d * 2^s with d odd; the base set below is deterministic for
    // every n < 2^64.
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                            19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool is_prime_power_u64(std::uint64_t q, std::uint64_t* base, int* exponent) {
    if (q < 2) return false;
    // If q = p^k then p = q^{1/k}; try every k down to 1 with an exact
    // integer root check.
    for (int k = 63; k >= 1; --k) {
        auto r = static_cast<std::uint64_t>(
            std::llround(std::pow(static_cast<double>(q), 1.0 / k)));
        for (std::uint64_t cand = (r > 2 ? r - 2 : 2); cand <= r + 2; ++cand) {
            // cand^k == q without overflow?
            std::uint64_t v = 1;
            bool overflow = false;
            for (int i = 0; i < k; ++i) {
                if (v > q / cand) {
                    overflow = true;
                    break;
                }
                v *= cand;
            }
            if (!overflow && v == q && is_prime_u64(cand)) {
                if (base) *base = cand;
                if (exponent) *exponent = k;
                return true;
            }
        }
    }
    return false;
}

}  // namespace modpoisson
