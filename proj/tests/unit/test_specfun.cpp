#include "modpoisson/specfun.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "modpoisson/errors.hpp"
#include "../support/oracles.hpp"

using modpoisson::Complex;
using modpoisson::truncation_not_reached;
namespace specfun = modpoisson::specfun;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("reciprocal gamma agrees with the Stirling-series oracle") {
    // Two independent evaluation routes must agree to 1e-12 relative on
    // |z| <= 4 (excluding a neighborhood of the zeros, where the relative
    // scale degenerates; those are pinned separately below).
    std::mt19937_64 rng(20260818);
    std::uniform_real_distribution<double> coord(-4.0, 4.0);
    int tested = 0;
    while (tested < 500) {
        Complex z(coord(rng), coord(rng));
        if (std::abs(z) > 4.0) continue;
        bool near_zero_of_rgamma = false;
        for (int m = 0; m <= 4; ++m) {
            if (std::abs(z + static_cast<double>(m)) < 0.05) {
                near_zero_of_rgamma = true;
            }
        }
        if (near_zero_of_rgamma) continue;
        ++tested;
        Complex mine = specfun::reciprocal_gamma(z);
        Complex ref = oracles::reciprocal_gamma_stirling(z);
        CHECK(std::abs(mine - ref) <= 1e-12 * std::max(std::abs(ref), 1e-30));
    }
}

TEST_CASE("reciprocal gamma reference points") {
    // 1/Gamma(1/2) = 1/sqrt(pi)
    CHECK(specfun::reciprocal_gamma(Complex(0.5, 0.0)).real() ==
          doctest::Approx(0.5641895835477563).epsilon(1e-12));
    // 1/Gamma(1) = 1/Gamma(2) = 1, 1/Gamma(5) = 1/24
    CHECK(std::abs(specfun::reciprocal_gamma(Complex(1.0, 0.0)) - 1.0) <= 1e-13);
    CHECK(std::abs(specfun::reciprocal_gamma(Complex(2.0, 0.0)) - 1.0) <= 1e-13);
    CHECK(std::abs(specfun::reciprocal_gamma(Complex(5.0, 0.0)) -
                   1.0 / 24.0) <= 1e-14);
    // Entire function: exact zeros at the nonpositive integers.
    for (int m = 0; m <= 4; ++m) {
        Complex v = specfun::reciprocal_gamma(Complex(-m, 0.0));
        CHECK(std::abs(v) <= 1e-13);
    }
}

TEST_CASE("reciprocal gamma satisfies the downward recurrence") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    int tested = 0;
    while (tested < 100) {
        Complex z(coord(rng), coord(rng));
        if (std::abs(z) > 3.0) continue;
        ++tested;
        Complex lhs = specfun::reciprocal_gamma(z);
        Complex rhs = z * specfun::reciprocal_gamma(z + 1.0);
        CHECK(std::abs(lhs - rhs) <=
              1e-12 * std::max({std::abs(lhs), std::abs(rhs), 1e-8}));
    }
}

TEST_CASE("phi1 values and invariants") {
    // phi1(0) = 1/Gamma(2) = 1.
    CHECK(std::abs(specfun::phi1(0.0) - 1.0) <= 1e-13);
    // phi1(pi) = 1/Gamma(0) = 0.
    CHECK(std::abs(specfun::phi1(kPi)) <= 1e-13);
    // |1/Gamma(1 + e^{iu})| peaks a bit above 2 (|Gamma(1+i)| ~ 0.498), so
    // 2.1 is the honest uniform cap.
    for (int i = -20; i <= 20; ++i) {
        double u = i * 0.37;
        CHECK(std::abs(specfun::phi1(u)) <= 2.1);
        CHECK(std::abs(specfun::phi1(u) - specfun::phi1(u + 2.0 * kPi)) <=
              1e-12);
    }
    // Conjugate symmetry: phi1(-u) = conj(phi1(u)).
    CHECK(std::abs(specfun::phi1(-1.3) - std::conj(specfun::phi1(1.3))) <=
          1e-13);
}

TEST_CASE("poisson charfn closed form matches its series") {
    CHECK(std::abs(specfun::poisson_charfn(0.0, 2.2) - 1.0) <= 1e-15);
    CHECK(std::abs(specfun::poisson_charfn(3.0, 0.0) - 1.0) <= 1e-15);
    for (double lambda : {0.5, 2.0, 7.0}) {
        for (double u : {0.3, 1.0, 2.9}) {
            Complex series = 0.0;
            double logl = std::log(lambda);
            for (int k = 0; k <= 80; ++k) {
                double logp = k * logl - lambda - std::lgamma(k + 1.0);
                series += std::exp(logp) * std::polar(1.0, u * k);
            }
            CHECK(std::abs(specfun::poisson_charfn(lambda, u) - series) <=
                  1e-12);
            CHECK(std::abs(specfun::poisson_charfn(lambda, u)) <= 1.0 + 1e-15);
        }
    }
}

TEST_CASE("harmonic numbers") {
    CHECK(specfun::harmonic(0) == 0.0);
    CHECK(specfun::harmonic(1) == 1.0);
    CHECK(specfun::harmonic(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-15));
    CHECK(specfun::harmonic(100) ==
          doctest::Approx(5.187377517639621).epsilon(1e-14));
}

TEST_CASE("truncation policy validation") {
    specfun::TruncationPolicy bad_tol{0.0, 100};
    CHECK_THROWS_AS(bad_tol.validate(), std::invalid_argument);
    specfun::TruncationPolicy bad_terms{1e-6, 0};
    CHECK_THROWS_AS(bad_terms.validate(), std::invalid_argument);
    specfun::TruncationPolicy fine{1e-6, 1000};
    CHECK_NOTHROW(fine.validate());
}

TEST_CASE("phi2 over primes: stability and basic values") {
    specfun::TruncationPolicy loose{1e-5, 100'000'000};
    specfun::TruncationPolicy tight{1e-6, 100'000'000};
    // u = 0: every factor is exactly 1.
    CHECK(std::abs(specfun::phi2_primes(0.0, tight) - 1.0) <= 1e-10);
    for (double u : {0.5, 1.0, 2.0}) {
        CHECK(std::abs(specfun::phi2_primes(u, loose) -
                       specfun::phi2_primes(u, tight)) <= 2e-5);
    }
    // Too few allowed terms must raise, not silently truncate.
    specfun::TruncationPolicy starved{1e-6, 10};
    CHECK_THROWS_AS(specfun::phi2_primes(1.0, starved), truncation_not_reached);
}

TEST_CASE("phi2 over primes: deep truncation agreement" *
          doctest::skip(false)) {
    // 1e-6 against 1e-9 (the latter sweeps primes to ~4e9).
    specfun::TruncationPolicy a{1e-6, 2'000'000'000};
    specfun::TruncationPolicy b{1e-9, 2'000'000'000};
    Complex va = specfun::phi2_primes(1.0, a);
    Complex vb = specfun::phi2_primes(1.0, b);
    CHECK(std::abs(va - vb) <= 2e-6);
}
