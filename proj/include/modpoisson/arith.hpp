#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>

namespace modpoisson {

using Complex = std::complex<double>;
using BigInt = mpz_class;
using Rational = mpq_class;

inline double to_double(const BigInt& n) { return n.get_d(); }
inline double to_double(const Rational& r) { return r.get_d(); }

// C(n, k) for machine-word n.
BigInt binomial(unsigned long n, unsigned long k);
// C(n, k) for big n (used for (Pi + t - 1 choose t) with huge Pi).
BigInt binomial(const BigInt& n, unsigned long k);

BigInt factorial(unsigned long n);

// base^exp as a big integer.
BigInt big_pow(unsigned long base, unsigned long exp);

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

// True iff q = p^k for a prime p and k >= 1; reports p and k when asked.
bool is_prime_power_u64(std::uint64_t q, std::uint64_t* base = nullptr,
                        int* exponent = nullptr);

}  // namespace modpoisson
