#include "modpoisson/perms.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "modpoisson/errors.hpp"

namespace modpoisson::perms {

void CycleType::validate() const {
    if (d < 1) throw std::invalid_argument("cycle type needs d >= 1");
    if (multiplicities.size() != static_cast<std::size_t>(d)) {
        throw std::invalid_argument("cycle type needs d multiplicity slots");
    }
    long total = 0;
    for (int j = 1; j <= d; ++j) {
        int r = multiplicities[j - 1];
        if (r < 0) throw std::invalid_argument("negative multiplicity");
        total += static_cast<long>(j) * r;
    }
    if (total != d) {
        throw std::invalid_argument("cycle lengths must sum to d");
    }
}

int CycleType::min_cycle_length() const {
    for (int j = 1; j <= d; ++j) {
        if (multiplicities[j - 1] > 0) return j;
    }
    return 0;
}

std::string CycleType::to_string() const {
    std::string s;
    for (int j = 1; j <= d; ++j) {
        int r = multiplicities[j - 1];
        if (r == 0) continue;
        if (!s.empty()) s += '*';
        s += std::to_string(j);
        if (r > 1) {
            s += '^';
            s += std::to_string(r);
        }
    }
    return s;
}

dist::DiscreteDistribution cycle_count_dist(int d) {
    if (d < 1) throw std::invalid_argument("cycle_count_dist: d must be >= 1");
    if (d > 5000) {
        throw resource_limit_error("cycle_count_dist: d must be <= 5000");
    }
    // Row of unsigned Stirling numbers of the first kind, c[k] = c(n, k).
    std::vector<BigInt> c(static_cast<std::size_t>(d) + 1);
    c[1] = 1;
    for (int n = 2; n <= d; ++n) {
        for (int k = n; k >= 1; --k) {
            c[k] = c[k] * (n - 1) + c[k - 1];
        }
    }
    BigInt dfact = factorial(static_cast<unsigned long>(d));
    std::vector<Rational> w;
    w.reserve(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k) {
        Rational r(c[k], dfact);
        r.canonicalize();
        w.push_back(std::move(r));
    }
    return dist::DiscreteDistribution::from_rational(1, std::move(w));
}

Complex cycle_charfn_product(int d, double u) {
    if (d < 1) throw std::invalid_argument("cycle_charfn_product: d >= 1");
    Complex w = std::polar(1.0, u);
    Complex prod = 1.0;
    for (int j = 1; j <= d; ++j) {
        prod *= 1.0 + (w - 1.0) / static_cast<double>(j);
    }
    return prod;
}

Complex explicit_permut_ratio(int d, double u) {
    if (d < 1) throw std::invalid_argument("explicit_permut_ratio: d >= 1");
    const double pi = std::acos(-1.0);
    double r = std::remainder(u, 2.0 * pi);
    if (std::abs(std::abs(r) - pi) <= 1e-6) {
        throw degenerate_frequency_error(
            "explicit_permut_ratio: u is an odd multiple of pi");
    }
    Complex w = std::polar(1.0, u);
    Complex gamma_w = 1.0 / specfun::reciprocal_gamma(w);
    return gamma_w * std::exp(-(std::log(static_cast<double>(d))) * (w - 1.0)) *
           cycle_charfn_product(d, u);
}

Rational conjugacy_class_prob(const CycleType& type) {
    type.validate();
    BigInt den = 1;
    for (int j = 1; j <= type.d; ++j) {
        int r = type.multiplicities[j - 1];
        if (r == 0) continue;
        BigInt jp;
        mpz_ui_pow_ui(jp.get_mpz_t(), static_cast<unsigned long>(j),
                      static_cast<unsigned long>(r));
        den *= jp * factorial(static_cast<unsigned long>(r));
    }
    Rational p(1, den);
    p.canonicalize();
    return p;
}

Complex restricted_cycle_charfn(int d, int b, double u) {
    if (d < 1 || b < 0) {
        throw std::invalid_argument("restricted_cycle_charfn: need d >= 1, b >= 0");
    }
    if (d > 5000) {
        throw resource_limit_error("restricted_cycle_charfn: d must be <= 5000");
    }
    Complex w = std::polar(1.0, u);
    std::vector<Complex> g(static_cast<std::size_t>(d) + 1);
    std::vector<Complex> prefix(static_cast<std::size_t>(d) + 1);
    g[0] = 1.0;
    prefix[0] = 1.0;
    for (int n = 1; n <= d; ++n) {
        if (n >= b + 1) {
            g[n] = w * prefix[n - b - 1] / static_cast<double>(n);
        } else {
            g[n] = 0.0;
        }
        prefix[n] = prefix[n - 1] + g[n];
    }
    return g[d];
}

namespace {

// One level of the inclusion-exclusion recursion: out[d'] = Phi_{d',b}
// given prev[d'] = Phi_{d',b-1}.
void pr_level(int b, Complex w, const std::vector<Complex>& prev,
              std::vector<Complex>& out) {
    int d_max = static_cast<int>(prev.size()) - 1;
    for (int dd = 0; dd <= d_max; ++dd) {
        Complex term = 1.0;  // (-w/b)^k / k!, k = 0
        Complex acc = prev[dd];
        for (int k = 1; k * b <= dd; ++k) {
            term *= -w / static_cast<double>(b) / static_cast<double>(k);
            acc += term * prev[dd - k * b];
        }
        out[dd] = acc;
    }
}

}  // namespace

std::vector<std::vector<Complex>> pr_permut_table(int d_max, int b_max,
                                                  double u) {
    if (d_max < 1 || b_max < 0 || b_max > d_max) {
        throw std::invalid_argument("pr_permut_table: need 0 <= b_max <= d_max");
    }
    if (d_max > 2000) {
        throw resource_limit_error("pr_permut_table: d_max must be <= 2000");
    }
    Complex w = std::polar(1.0, u);
    std::vector<std::vector<Complex>> table(
        static_cast<std::size_t>(b_max) + 1,
        std::vector<Complex>(static_cast<std::size_t>(d_max) + 1));
    table[0][0] = 1.0;
    for (int dd = 1; dd <= d_max; ++dd) {
        table[0][dd] = cycle_charfn_product(dd, u);
    }
    for (int b = 1; b <= b_max; ++b) pr_level(b, w, table[b - 1], table[b]);
    return table;
}

Complex pr_permut_recursion(int d, int b, double u) {
    if (d < 1 || b < 0 || b > d) {
        throw std::invalid_argument("pr_permut_recursion: need 0 <= b <= d");
    }
    if (d > 2000) {
        throw resource_limit_error("pr_permut_recursion: d must be <= 2000");
    }
    Complex w = std::polar(1.0, u);
    std::vector<Complex> prev(static_cast<std::size_t>(d) + 1);
    prev[0] = 1.0;
    for (int dd = 1; dd <= d; ++dd) prev[dd] = cycle_charfn_product(dd, u);
    std::vector<Complex> cur(prev.size());
    for (int bb = 1; bb <= b; ++bb) {
        pr_level(bb, w, prev, cur);
        prev.swap(cur);
    }
    return prev[d];
}

Rational min_cycle_gt_b_prob(int d, int b) {
    if (d < 1 || b < 0) {
        throw std::invalid_argument("min_cycle_gt_b_prob: need d >= 1, b >= 0");
    }
    if (d > 5000) {
        throw resource_limit_error("min_cycle_gt_b_prob: d must be <= 5000");
    }
    BigInt dfact = factorial(static_cast<unsigned long>(d));
    // Scaled recursion: H(n) = N(n) d!/n! stays integral, and
    // H(n) = (sum_{m <= n-b-1} H(m)) / n with an exact division.
    std::vector<BigInt> H(static_cast<std::size_t>(d) + 1);
    H[0] = dfact;
    std::vector<BigInt> prefix(static_cast<std::size_t>(d) + 1);
    prefix[0] = dfact;
    for (int n = 1; n <= d; ++n) {
        if (n >= b + 1) {
            BigInt num = prefix[n - b - 1];
            mpz_divexact_ui(H[n].get_mpz_t(), num.get_mpz_t(),
                            static_cast<unsigned long>(n));
        }
        prefix[n] = prefix[n - 1] + H[n];
    }
    Rational p(H[d], dfact);
    p.canonicalize();
    return p;
}

BigInt subsets_count_S(int k, int b, int d) {
    if (k < 0 || b < 1 || d < 0) {
        throw std::invalid_argument("subsets_count_S: need k >= 0, b >= 1, d >= 0");
    }
    if (static_cast<long>(k) * b > d) {
        throw std::invalid_argument("subsets_count_S: k*b must be <= d");
    }
    // d!/(d-kb)! as a falling factorial, then exact division by b^k k!.
    BigInt num = 1;
    for (long i = 0; i < static_cast<long>(k) * b; ++i) num *= d - i;
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(b),
                  static_cast<unsigned long>(k));
    den *= factorial(static_cast<unsigned long>(k));
    BigInt out;
    mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

dist::DiscreteDistribution sample_cycle_count(int d, std::uint64_t seed,
                                              long n_samples) {
    if (d < 1 || n_samples < 1) {
        throw std::invalid_argument("sample_cycle_count: need d >= 1, n >= 1");
    }
    std::mt19937_64 rng(seed);
    std::vector<long> counts(static_cast<std::size_t>(d) + 1, 0);
    for (long s = 0; s < n_samples; ++s) {
        int c = 1;
        // Bernoulli(1/(k+1)) via an exact modulus test so the stream is
        // platform-independent.
        for (int k = 1; k < d; ++k) {
            if (rng() % static_cast<std::uint64_t>(k + 1) == 0) ++c;
        }
        ++counts[c];
    }
    std::vector<Rational> w;
    w.reserve(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k) {
        Rational r(counts[k], n_samples);
        r.canonicalize();
        w.push_back(std::move(r));
    }
    return dist::DiscreteDistribution::from_rational(1, std::move(w));
}

Complex restricted_modpoisson_check(int d, int b, double u) {
    if (d < 2 || b < 0 || b >= d) {
        throw std::invalid_argument(
            "restricted_modpoisson_check: need 0 <= b < d, d >= 2");
    }
    Complex w = std::polar(1.0, u);
    double lam = std::log(static_cast<double>(d)) - specfun::harmonic(b);
    Complex numer = restricted_cycle_charfn(d, b, u);
    double denom = min_cycle_gt_b_prob(d, b).get_d();
    return std::exp(lam * (1.0 - w)) * numer / denom;
}

namespace {

void enumerate_partitions(int remaining, int max_part, std::vector<int>& mult,
                          int d, std::vector<CycleType>& out) {
    if (remaining == 0) {
        CycleType t;
        t.d = d;
        t.multiplicities = mult;
        out.push_back(std::move(t));
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        ++mult[part - 1];
        enumerate_partitions(remaining - part, part, mult, d, out);
        --mult[part - 1];
    }
}

}  // namespace

std::vector<CycleType> all_cycle_types(int d) {
    if (d < 1 || d > 40) {
        throw resource_limit_error("all_cycle_types: d must be in [1, 40]");
    }
    std::vector<CycleType> out;
    std::vector<int> mult(static_cast<std::size_t>(d), 0);
    enumerate_partitions(d, d, mult, d, out);
    return out;
}

}  // namespace modpoisson::perms
