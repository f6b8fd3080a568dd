#pragma once

#include <complex>

#include "modpoisson/arith.hpp"

namespace modpoisson::specfun {

// Stopping rule for truncated infinite products/series: keep adding terms
// until the tail bound drops below `tolerance`, giving up past `max_terms`.
struct TruncationPolicy {
    double tolerance = 1e-9;
    long max_terms = 100'000'000;
    void validate() const;
};

// 1/Gamma(z), entire in z.  Rational (Lanczos-type) approximation on
// Re(z) >= 1/2, extended left by 1/Gamma(z) = z * (1/Gamma(z+1)).
// Relative error <= 1e-12 for |z| <= 4; exact zeros at z = 0, -1, -2, ...
Complex reciprocal_gamma(Complex z);

// phi1(u) = 1/Gamma(e^{iu} + 1).
Complex phi1(double u);

// phi2(u) = prod_p (1 - 1/p)^{e^{iu}} (1 + e^{iu}/(p - 1)) over primes,
// truncated at P with log-tail bound sum_{p > P} 4/p^2 < 4/(P-1) below
// policy.tolerance.
Complex phi2_primes(double u, const TruncationPolicy& policy);

// E(e^{iuX}) for X ~ Poisson(lambda): exp(lambda (e^{iu} - 1)).
Complex poisson_charfn(double lambda, double u);

// H_b = sum_{j=1}^{b} 1/j, H_0 = 0.
double harmonic(long b);

}  // namespace modpoisson::specfun
