#include "modpoisson/specfun.hpp"

#include <cmath>
#include <stdexcept>

#include "modpoisson/errors.hpp"
#include "modpoisson/primes.hpp"

namespace modpoisson::specfun {

void TruncationPolicy::validate() const {
    if (!(tolerance > 0.0) || !(tolerance < 1.0)) {
        throw std::invalid_argument(
            "TruncationPolicy.tolerance must lie in (0, 1)");
    }
    if (max_terms < 1) {
        throw std::invalid_argument("TruncationPolicy.max_terms must be >= 1");
    }
}

namespace {

// 13-term rational Lanczos approximation, g = 6.024680040776729583740234375,
// accurate to full double precision on Re(z) >= 1/2.  The sqrt(2*pi) factor
// is folded into the numerator; the denominator is the rising factorial
// z (z+1) ... (z+11).
constexpr double kLanczosG = 6.024680040776729583740234375;

constexpr double kLanczosNum[13] = {
    23531376880.41075968857200767445163675473,
    42919803642.64909876895789904700198885093,
    35711959237.35566804944018545154716670596,
    17921034426.03720969991975575445893111267,
    6039542586.35202800506429164430729792107,
    1439720407.311721673663223072794912393972,
    248874557.8620541565114603864132294232163,
    31426415.58540019438061423162831820536287,
    2876370.628935372441225409051620849613599,
    186056.2653952234950402949897160456992822,
    8071.672002365816210638002902272250613822,
    210.8242777515793458725097339207133627117,
    2.506628274631000270164908177133837338626,
};

Complex lanczos_sum(Complex z) {
    Complex num = kLanczosNum[12];
    for (int k = 11; k >= 0; --k) num = num * z + kLanczosNum[k];
    Complex den = z;
    for (int k = 1; k <= 11; ++k) den *= z + static_cast<double>(k);
    return num / den;
}

}  // namespace

Complex reciprocal_gamma(Complex z) {
    // Shift into Re >= 1/2; the product prefix picks up exact zeros at the
    // nonpositive integers.  Five shifts suffice for |z| <= 4.
    Complex prefix = 1.0;
    int shifts = 0;
    while (z.real() < 0.5) {
        prefix *= z;
        z += 1.0;
        if (++shifts >= 16) {
            throw std::invalid_argument(
                "reciprocal_gamma: argument too far left of the axis");
        }
    }
    Complex zgh = z + (kLanczosG - 0.5);
    // 1/Gamma(z) = exp(zgh) * zgh^{1/2 - z} / S(z)
    Complex value =
        std::exp(zgh + (Complex(0.5, 0.0) - z) * std::log(zgh)) /
        lanczos_sum(z);
    return prefix * value;
}

Complex phi1(double u) {
    return reciprocal_gamma(std::polar(1.0, u) + 1.0);
}

Complex phi2_primes(double u, const TruncationPolicy& policy) {
    policy.validate();
    // Tail of the log-product over p > P is below 4/(P-1).
    double p_needed = 4.0 / policy.tolerance + 1.0;
    if (p_needed > 6e9) {
        throw truncation_not_reached(
            "phi2_primes: tolerance needs primes beyond 6e9");
    }
    auto hi = static_cast<std::uint64_t>(p_needed) + 1;
    Complex w = std::polar(1.0, u);
    Complex product = 1.0;
    long terms = 0;
    bool exhausted = false;
    for_each_prime(hi, [&](std::uint64_t p) {
        if (exhausted) return;
        if (++terms > policy.max_terms) {
            exhausted = true;
            return;
        }
        double x = 1.0 / static_cast<double>(p);
        // (1 - 1/p)^w * (1 + w/(p-1))
        Complex factor = std::exp(w * std::log1p(-x)) *
                         (1.0 + w / static_cast<double>(p - 1));
        product *= factor;
    });
    if (exhausted) {
        throw truncation_not_reached(
            "phi2_primes: max_terms reached before the tail bound");
    }
    return product;
}

Complex poisson_charfn(double lambda, double u) {
    if (lambda < 0.0) {
        throw std::invalid_argument("poisson_charfn: lambda must be >= 0");
    }
    return std::exp(lambda * (std::polar(1.0, u) - 1.0));
}

double harmonic(long b) {
    if (b < 0) throw std::invalid_argument("harmonic: b must be >= 0");
    long double h = 0.0L;
    for (long j = b; j >= 1; --j) h += 1.0L / j;
    return static_cast<double>(h);
}

}  // namespace modpoisson::specfun
