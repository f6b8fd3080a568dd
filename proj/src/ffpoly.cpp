#include "modpoisson/ffpoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "modpoisson/errors.hpp"

namespace modpoisson::ffpoly {

namespace {

// Moebius function of a small integer by trial division.
int moebius(unsigned long n) {
    int mu = 1;
    for (unsigned long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

}  // namespace

IrreducibleTable IrreducibleTable::build(std::uint64_t q, int J) {
    if (!is_prime_power_u64(q)) {
        throw std::invalid_argument("IrreducibleTable: q must be a prime power");
    }
    if (J < 1 || J > 10000) {
        throw std::invalid_argument("IrreducibleTable: J must be in [1, 10000]");
    }
    IrreducibleTable t;
    t.q_ = q;
    t.J_ = J;
    t.counts_.resize(static_cast<std::size_t>(J));
    for (int j = 1; j <= J; ++j) {
        BigInt acc = 0;
        for (int delta = 1; delta <= j; ++delta) {
            if (j % delta != 0) continue;
            int mu = moebius(static_cast<unsigned long>(delta));
            if (mu == 0) continue;
            BigInt qp;
            mpz_ui_pow_ui(qp.get_mpz_t(), static_cast<unsigned long>(q),
                          static_cast<unsigned long>(j / delta));
            acc += mu * qp;
        }
        BigInt pi;
        mpz_divexact_ui(pi.get_mpz_t(), acc.get_mpz_t(),
                        static_cast<unsigned long>(j));
        t.counts_[static_cast<std::size_t>(j - 1)] = pi;
    }
    return t;
}

const BigInt& IrreducibleTable::count(int j) const {
    if (j < 1 || j > J_) {
        throw std::invalid_argument("IrreducibleTable::count: degree out of range");
    }
    return counts_[static_cast<std::size_t>(j - 1)];
}

BigInt IrreducibleTable::q_pow(int n) const {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(q_),
                  static_cast<unsigned long>(n));
    return r;
}

BigInt IrreducibleTable::necklace_sum(int j) const {
    BigInt acc = 0;
    for (int delta = 1; delta <= j; ++delta) {
        if (j % delta == 0) acc += delta * count(delta);
    }
    return acc;
}

namespace {

// Triangular coefficient array A[n][k], 0 <= k <= n <= D, tracking degree n
// and factor-count mark k.
using Tri = std::vector<std::vector<BigInt>>;

Tri make_tri(int D) {
    Tri A(static_cast<std::size_t>(D) + 1);
    for (int n = 0; n <= D; ++n) {
        A[static_cast<std::size_t>(n)].resize(static_cast<std::size_t>(n) + 1);
    }
    A[0][0] = 1;
    return A;
}

// Multiply A in place by sum_t coeffs[t] mark^{t, if marked} T^{j t}
// (coeffs[0] must be 1).  Reads only rows strictly below the one being
// written, so descending n keeps the update exact.
void apply_series(Tri& A, int D, int j, const std::vector<BigInt>& coeffs,
                  bool marked) {
    for (int n = D; n >= j; --n) {
        auto& row = A[static_cast<std::size_t>(n)];
        int tmax = std::min(n / j, static_cast<int>(coeffs.size()) - 1);
        for (int k = 0; k <= n; ++k) {
            BigInt& cell = row[static_cast<std::size_t>(k)];
            for (int t = 1; t <= tmax; ++t) {
                int kk = marked ? k - t : k;
                int nn = n - t * j;
                if (kk < 0 || kk > nn) continue;
                mpz_addmul(cell.get_mpz_t(),
                           coeffs[static_cast<std::size_t>(t)].get_mpz_t(),
                           A[static_cast<std::size_t>(nn)]
                            [static_cast<std::size_t>(kk)].get_mpz_t());
            }
        }
    }
}

// Coefficients of (1 - T^j)^{-Pi} up to t_max: C(Pi + t - 1, t).
std::vector<BigInt> neg_binomial_coeffs(const BigInt& Pi, int t_max) {
    std::vector<BigInt> c(static_cast<std::size_t>(t_max) + 1);
    c[0] = 1;
    for (int t = 1; t <= t_max; ++t) {
        // C(Pi+t-1, t) = C(Pi+t-2, t-1) * (Pi+t-1) / t
        BigInt num = c[static_cast<std::size_t>(t - 1)] * (Pi + (t - 1));
        mpz_divexact_ui(c[static_cast<std::size_t>(t)].get_mpz_t(),
                        num.get_mpz_t(), static_cast<unsigned long>(t));
    }
    return c;
}

// Coefficients of (1 + mark T^j)^{Pi} up to s_max: C(Pi, s).
std::vector<BigInt> binomial_coeffs(const BigInt& Pi, int s_max) {
    std::vector<BigInt> c(static_cast<std::size_t>(s_max) + 1);
    for (int s = 0; s <= s_max; ++s) {
        c[static_cast<std::size_t>(s)] =
            binomial(Pi, static_cast<unsigned long>(s));
    }
    return c;
}

// c_k = sum_{s >= k} C(s, k) (-1)^{s-k} a_s turns coefficients in
// mark-1 (v) basis into plain mark (u) basis.
std::vector<BigInt> shift_basis_to_u(const std::vector<BigInt>& a) {
    int d = static_cast<int>(a.size()) - 1;
    std::vector<BigInt> c(a.size());
    for (int k = 0; k <= d; ++k) {
        BigInt bin = 1;  // C(s, k) starting at s = k
        BigInt acc = 0;
        int sign = 1;
        for (int s = k; s <= d; ++s) {
            if (s > k) {
                // C(s, k) = C(s-1, k) * s / (s - k)
                bin *= s;
                mpz_divexact_ui(bin.get_mpz_t(), bin.get_mpz_t(),
                                static_cast<unsigned long>(s - k));
            }
            if (sign > 0) {
                mpz_addmul(acc.get_mpz_t(), bin.get_mpz_t(),
                           a[static_cast<std::size_t>(s)].get_mpz_t());
            } else {
                mpz_submul(acc.get_mpz_t(), bin.get_mpz_t(),
                           a[static_cast<std::size_t>(s)].get_mpz_t());
            }
            sign = -sign;
        }
        c[static_cast<std::size_t>(k)] = acc;
    }
    return c;
}

// Shared engine: counts by factor statistic for monic degree-d polynomials
// whose irreducible factors all have degree > min_degree_excl.
std::vector<BigInt> factor_count_dp(const IrreducibleTable& table, int d,
                                    FactorStatVariant variant,
                                    int min_degree_excl) {
    bool squarefree = variant.restriction == Restriction::squarefree;
    bool with_mult = variant.multiplicity == Multiplicity::with_multiplicity;
    // The two squarefree ensembles coincide: every factor is simple.
    bool distinct_all = !squarefree && !with_mult;

    Tri A = make_tri(d);
    for (int j = min_degree_excl + 1; j <= d; ++j) {
        const BigInt& Pi = table.count(j);
        int t_max = d / j;
        if (distinct_all) {
            apply_series(A, d, j, neg_binomial_coeffs(Pi, t_max), false);
            apply_series(A, d, j, binomial_coeffs(Pi, t_max), true);
        } else if (with_mult && !squarefree) {
            apply_series(A, d, j, neg_binomial_coeffs(Pi, t_max), true);
        } else {
            apply_series(A, d, j, binomial_coeffs(Pi, t_max), true);
        }
    }
    std::vector<BigInt> counts = A[static_cast<std::size_t>(d)];
    if (distinct_all) counts = shift_basis_to_u(counts);
    for (const BigInt& c : counts) {
        if (c < 0) throw std::logic_error("factor_count_dp: negative count");
    }
    return counts;
}

}  // namespace

dist::DiscreteDistribution OmegaLaw::distribution() const {
    std::vector<Rational> w;
    w.reserve(counts.size());
    for (const BigInt& c : counts) {
        Rational r(c, normalizer);
        r.canonicalize();
        w.push_back(std::move(r));
    }
    return dist::DiscreteDistribution::from_rational(0, std::move(w));
}

Complex OmegaLaw::charfn(double u) const {
    // Near u = pi the alternating sum cancels from q^d all the way down to
    // ~q^{d/2}, far below double rounding on the individual terms, so the
    // accumulation runs in GMP floats with enough headroom to keep the
    // rounding floor under the survivor.
    std::size_t bits = mpz_sizeinbase(normalizer.get_mpz_t(), 2);
    mp_bitcnt_t prec = static_cast<mp_bitcnt_t>(bits + bits / 2 + 128);
    mpf_class zr(std::cos(u), prec), zi(std::sin(u), prec);
    mpf_class pr(1.0, prec), pim(0.0, prec);  // z^k
    mpf_class sr(0.0, prec), sim(0.0, prec);
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (k > 0) {
            mpf_class nr(pr * zr - pim * zi, prec);
            mpf_class ni(pr * zi + pim * zr, prec);
            pr = nr;
            pim = ni;
        }
        if (counts[k] == 0) continue;
        mpf_class c(counts[k], prec);
        sr += c * pr;
        sim += c * pim;
    }
    mpf_class n(normalizer, prec);
    sr /= n;
    sim /= n;
    return Complex(sr.get_d(), sim.get_d());
}

Complex OmegaLaw::charfn_shifted(double u) const {
    return charfn(u) * std::polar(1.0, -u);
}

OmegaLaw omega_law(const IrreducibleTable& table, int d,
                   FactorStatVariant variant) {
    if (d < 1) throw std::invalid_argument("omega_law: d must be >= 1");
    if (d > 400) throw resource_limit_error("omega_law: d must be <= 400");
    if (table.max_degree() < d) {
        throw std::invalid_argument("omega_law: table shorter than d");
    }
    OmegaLaw law;
    law.q = table.q();
    law.d = d;
    law.variant = variant;
    law.counts = factor_count_dp(table, d, variant, 0);
    BigInt total = 0;
    for (const BigInt& c : law.counts) total += c;
    if (variant.restriction == Restriction::squarefree) {
        BigInt expected = (d == 1)
                              ? table.q_pow(1)
                              : BigInt(table.q_pow(d) - table.q_pow(d - 1));
        if (total != expected) {
            throw std::logic_error("omega_law: squarefree count mismatch");
        }
        law.normalizer = total;
    } else {
        if (total != table.q_pow(d)) {
            throw std::logic_error("omega_law: counts must total q^d");
        }
        law.normalizer = table.q_pow(d);
    }
    return law;
}

dist::DiscreteDistribution omega_distribution(const IrreducibleTable& table,
                                              int d,
                                              FactorStatVariant variant) {
    return omega_law(table, d, variant).distribution();
}

namespace {

// Dense little-endian coefficient vectors over F_q, q prime.
using Poly = std::vector<int>;

int poly_deg(const Poly& f) { return static_cast<int>(f.size()) - 1; }

// Remainder of monic f by monic g (q prime).
Poly poly_mod(Poly f, const Poly& g, int q) {
    int dg = poly_deg(g);
    while (poly_deg(f) >= dg) {
        int shift = poly_deg(f) - dg;
        int lead = f.back();
        if (lead != 0) {
            for (int i = 0; i <= dg; ++i) {
                f[static_cast<std::size_t>(i + shift)] =
                    (f[static_cast<std::size_t>(i + shift)] -
                     lead * g[static_cast<std::size_t>(i)] % q + q * q) %
                    q;
            }
        }
        f.pop_back();
        while (!f.empty() && f.back() == 0) f.pop_back();
        if (f.empty()) return f;
    }
    return f;
}

// Exact quotient of monic f by monic divisor g.
Poly poly_divexact(Poly f, const Poly& g, int q) {
    int dg = poly_deg(g);
    int dq = poly_deg(f) - dg;
    Poly quot(static_cast<std::size_t>(dq) + 1, 0);
    for (int shift = dq; shift >= 0; --shift) {
        int lead = (poly_deg(f) == dg + shift) ? f.back() : 0;
        quot[static_cast<std::size_t>(shift)] = lead;
        if (lead != 0) {
            for (int i = 0; i <= dg; ++i) {
                f[static_cast<std::size_t>(i + shift)] =
                    (f[static_cast<std::size_t>(i + shift)] -
                     lead * g[static_cast<std::size_t>(i)] % q + q * q) %
                    q;
            }
        }
        while (!f.empty() && f.back() == 0) f.pop_back();
    }
    return quot;
}

bool poly_divides(const Poly& g, const Poly& f, int q) {
    return poly_mod(f, g, q).empty();
}

// All monic irreducibles over F_q of degree 1..max_deg, grouped by degree.
std::vector<std::vector<Poly>> monic_irreducibles(int q, int max_deg) {
    std::vector<std::vector<Poly>> irr(static_cast<std::size_t>(max_deg) + 1);
    for (int m = 1; m <= max_deg; ++m) {
        std::uint64_t total = 1;
        for (int i = 0; i < m; ++i) total *= static_cast<std::uint64_t>(q);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            Poly f(static_cast<std::size_t>(m) + 1, 0);
            std::uint64_t rest = idx;
            for (int i = 0; i < m; ++i) {
                f[static_cast<std::size_t>(i)] = static_cast<int>(rest % q);
                rest /= q;
            }
            f[static_cast<std::size_t>(m)] = 1;
            bool reducible = false;
            for (int e = 1; 2 * e <= m && !reducible; ++e) {
                for (const Poly& g : irr[static_cast<std::size_t>(e)]) {
                    if (poly_divides(g, f, q)) {
                        reducible = true;
                        break;
                    }
                }
            }
            if (!reducible) irr[static_cast<std::size_t>(m)].push_back(f);
        }
    }
    return irr;
}

}  // namespace

OmegaLaw brute_force_omega_law(std::uint64_t q, int d,
                               FactorStatVariant variant) {
    if (!is_prime_u64(q)) {
        throw std::invalid_argument("brute_force_omega_law: q must be prime");
    }
    if (d < 1) throw std::invalid_argument("brute_force_omega_law: d >= 1");
    double qd = std::pow(static_cast<double>(q), d);
    if (qd > 2e6) {
        throw resource_limit_error("brute_force_omega_law: q^d must be <= 2e6");
    }
    int qi = static_cast<int>(q);
    auto irr = monic_irreducibles(qi, d / 2);

    bool squarefree = variant.restriction == Restriction::squarefree;
    bool with_mult = variant.multiplicity == Multiplicity::with_multiplicity;

    OmegaLaw law;
    law.q = q;
    law.d = d;
    law.variant = variant;
    law.counts.assign(static_cast<std::size_t>(d) + 1, BigInt(0));

    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) total *= q;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Poly f(static_cast<std::size_t>(d) + 1, 0);
        std::uint64_t rest = idx;
        for (int i = 0; i < d; ++i) {
            f[static_cast<std::size_t>(i)] = static_cast<int>(rest % q);
            rest /= q;
        }
        f[static_cast<std::size_t>(d)] = 1;

        int distinct = 0, with_multiplicity = 0;
        bool is_squarefree = true;
        Poly rem = f;
        for (int e = 1; poly_deg(rem) > 0 && 2 * e <= poly_deg(rem); ++e) {
            for (const Poly& g : irr[static_cast<std::size_t>(e)]) {
                if (2 * e > poly_deg(rem)) break;
                if (!poly_divides(g, rem, qi)) continue;
                int mult = 0;
                do {
                    rem = poly_divexact(rem, g, qi);
                    ++mult;
                } while (poly_deg(rem) >= e && poly_divides(g, rem, qi));
                ++distinct;
                with_multiplicity += mult;
                if (mult > 1) is_squarefree = false;
            }
        }
        if (poly_deg(rem) > 0) {
            // Whatever is left has no factor of degree <= deg/2: irreducible.
            ++distinct;
            ++with_multiplicity;
        }
        if (squarefree && !is_squarefree) continue;
        int stat = with_mult ? with_multiplicity : distinct;
        law.counts[static_cast<std::size_t>(stat)] += 1;
    }
    BigInt norm = 0;
    for (const BigInt& c : law.counts) norm += c;
    law.normalizer = norm;
    return law;
}

dist::DiscreteDistribution brute_force_omega_distribution(
    std::uint64_t q, int d, FactorStatVariant variant) {
    return brute_force_omega_law(q, d, variant).distribution();
}

BigInt cycle_type_poly_count(const IrreducibleTable& table,
                             const perms::CycleType& type) {
    type.validate();
    if (table.max_degree() < type.d) {
        throw std::invalid_argument("cycle_type_poly_count: table too short");
    }
    BigInt prod = 1;
    for (int j = 1; j <= type.d; ++j) {
        int r = type.multiplicities[static_cast<std::size_t>(j - 1)];
        if (r == 0) continue;
        prod *= binomial(table.count(j), static_cast<unsigned long>(r));
    }
    return prod;
}

std::vector<EquidistRow> equidistribution_residual(const IrreducibleTable& table,
                                                   int d) {
    if (d < 1 || d > 30) {
        throw resource_limit_error("equidistribution_residual: d must be <= 30");
    }
    if (table.max_degree() < d) {
        throw std::invalid_argument("equidistribution_residual: table too short");
    }
    double lnq = std::log(static_cast<double>(table.q()));
    BigInt qd = table.q_pow(d);
    BigInt d_sq(static_cast<long>(d) * d);
    std::vector<EquidistRow> rows;
    for (const auto& type : perms::all_cycle_types(d)) {
        EquidistRow row;
        row.type = type;
        row.count = cycle_type_poly_count(table, type);
        Rational prob = perms::conjugacy_class_prob(type);
        Rational ratio = Rational(row.count) / (Rational(qd) * prob);
        row.residual = std::abs(ratio.get_d() - 1.0);
        int lmin = type.min_cycle_length();
        row.bound = 3.0 * d * std::exp(-0.5 * lmin * lnq);
        row.in_range = table.q_pow(lmin) >= d_sq;
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

// sum_{k >= 2} x^k / k, computed without cancellation for small x.
double s2_tail(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 0.25) return -std::log1p(-x) - x;
    double term = x * x;
    double acc = term / 2.0;
    for (int k = 3; k < 200; ++k) {
        term *= x;
        double add = term / k;
        acc += add;
        if (add < acc * 1e-18) break;
    }
    return acc;
}

// 1/j + Pi_q(j) log(1 - q^{-j}), exactly regrouped as
// E_j/(j q^j) - Pi_q(j) s2(q^{-j}) with E_j = q^j - j Pi_q(j) held exactly.
double mertens_log_term(const IrreducibleTable& table, int j) {
    BigInt E = table.q_pow(j) - j * table.count(j);
    Rational first(E, j * table.q_pow(j));
    double x = std::exp(-j * std::log(static_cast<double>(table.q())));
    return first.get_d() - table.count(j).get_d() * s2_tail(x);
}

}  // namespace

MertensResult mertens_product(const IrreducibleTable& table, int d) {
    if (d < 1) throw std::invalid_argument("mertens_product: d must be >= 1");
    if (table.max_degree() < d) {
        throw std::invalid_argument("mertens_product: table shorter than d");
    }
    double small = 0.0;
    for (int j = d; j >= 1; --j) small += mertens_log_term(table, j);
    MertensResult r;
    r.residual = std::abs(std::expm1(small));
    r.product = std::exp(-specfun::harmonic(d) + small);
    return r;
}

GammaQ gamma_q(const IrreducibleTable& table, int J_used) {
    if (J_used < 1) throw std::invalid_argument("gamma_q: J_used must be >= 1");
    if (table.max_degree() < J_used) {
        throw std::invalid_argument("gamma_q: table shorter than J_used");
    }
    double acc = 0.0;
    for (int j = J_used; j >= 1; --j) acc += mertens_log_term(table, j);
    GammaQ g;
    g.value = acc;
    g.tail_bound =
        4.0 * std::exp(-0.5 * J_used * std::log(static_cast<double>(table.q())));
    return g;
}

namespace {

Complex euler_product_ff(const IrreducibleTable& table, double u,
                         FactorStatVariant variant,
                         const TruncationPolicy& policy) {
    policy.validate();
    double q = static_cast<double>(table.q());
    double lnq = std::log(q);
    // Tail of the log product over degrees > J is below
    // sum_{j>J} 4 q^{-j}/j <= 4 q^{-J} / ((J+1)(q-1)).
    int J = 2;
    while (4.0 * std::exp(-J * lnq) / ((J + 1) * (q - 1.0)) >
           policy.tolerance) {
        ++J;
        if (J > 100000) {
            throw truncation_not_reached("euler_product_ff: tolerance too small");
        }
    }
    if (J > policy.max_terms) {
        throw truncation_not_reached("euler_product_ff: exceeds max_terms");
    }
    if (J > table.max_degree()) {
        throw truncation_not_reached("euler_product_ff: table too short");
    }
    bool squarefree = variant.restriction == Restriction::squarefree;
    bool with_mult = variant.multiplicity == Multiplicity::with_multiplicity;
    Complex w = std::polar(1.0, u);
    Complex prod = 1.0;
    for (int j = 1; j <= J; ++j) {
        double Pi = table.count(j).get_d();
        double x = std::exp(-j * lnq);
        Complex real_part = std::exp(w * (Pi * std::log1p(-x)));
        Complex base;
        double exponent = Pi;
        if (squarefree) {
            base = 1.0 + w * x;
        } else if (with_mult) {
            base = 1.0 - w * x;
            exponent = -Pi;
        } else {
            base = 1.0 + w * (x / (1.0 - x));
        }
        Complex pw;
        if (std::abs(base) == 0.0) {
            pw = 0.0;  // q = 2, j = 1, u = pi kills the product exactly
        } else {
            pw = std::exp(exponent * std::log(base));
        }
        prod *= real_part * pw;
    }
    return prod;
}

}  // namespace

Complex phi2_ff(const IrreducibleTable& table, double u,
                const TruncationPolicy& policy) {
    return euler_product_ff(table, u, kDistinctAll, policy);
}

Complex thmain_scaled_from_law(const OmegaLaw& law, double u) {
    Complex w = std::polar(1.0, u);
    double logd = std::log(static_cast<double>(law.d));
    return std::exp(logd * (1.0 - w)) * law.charfn_shifted(u);
}

Complex thmain_scaled_charfn(const IrreducibleTable& table, int d, double u,
                             FactorStatVariant variant) {
    return thmain_scaled_from_law(omega_law(table, d, variant), u);
}

Complex thmain_limit(const IrreducibleTable& table, double u,
                     FactorStatVariant variant,
                     const TruncationPolicy& policy) {
    Complex value =
        specfun::phi1(u) * euler_product_ff(table, u, variant, policy);
    if (variant.restriction == Restriction::squarefree) {
        double q = static_cast<double>(table.q());
        value *= q / (q - 1.0);
    }
    return value;
}

OmegaLaw rough_omega_law(const IrreducibleTable& table, int d, int b) {
    if (d < 1 || b < 0) {
        throw std::invalid_argument("rough_omega_law: need d >= 1, b >= 0");
    }
    if (d > 400) throw resource_limit_error("rough_omega_law: d must be <= 400");
    if (table.max_degree() < d) {
        throw std::invalid_argument("rough_omega_law: table shorter than d");
    }
    OmegaLaw law;
    law.q = table.q();
    law.d = d;
    law.variant = kDistinctAll;
    law.counts = factor_count_dp(table, d, kDistinctAll, b);
    law.normalizer = table.q_pow(d);
    return law;
}

Complex T_db(const IrreducibleTable& table, int d, int b, double u) {
    return rough_omega_law(table, d, b).charfn(u);
}

SmoothTail smooth_tail_R(const IrreducibleTable& table, int d, int b) {
    if (b < 1 || b >= d) {
        throw std::invalid_argument(
            "smooth_tail_R: requires 1 <= b < d (b = d has no thinning)");
    }
    if (table.max_degree() < b) {
        throw std::invalid_argument("smooth_tail_R: table shorter than b");
    }
    double q = static_cast<double>(table.q());
    double lnq = std::log(q);
    int D = d + static_cast<int>(std::ceil(2.0 * b * std::log(
                                                      static_cast<double>(d))));
    // a[m] = number of b-smooth monic polynomials of degree m.
    std::vector<BigInt> a(static_cast<std::size_t>(D) + 1);
    a[0] = 1;
    for (int j = 1; j <= b; ++j) {
        auto coeffs = neg_binomial_coeffs(table.count(j), D / j);
        for (int m = D; m >= j; --m) {
            for (int t = 1; t * j <= m; ++t) {
                mpz_addmul(a[static_cast<std::size_t>(m)].get_mpz_t(),
                           coeffs[static_cast<std::size_t>(t)].get_mpz_t(),
                           a[static_cast<std::size_t>(m - t * j)].get_mpz_t());
            }
        }
    }
    double partial = 0.0;
    for (int m = D; m > d; --m) {
        Rational term(a[static_cast<std::size_t>(m)], table.q_pow(m));
        partial += term.get_d();
    }
    // Rankin: R(x, b) <= q^{-sigma x} prod_{j<=b} (1 - q^{-j(1-sigma)})^{-Pi_j}
    // with sigma = 1/(b ln q), so q^{-sigma x} = e^{-x/b}.
    double sigma = 1.0 / (b * lnq);
    double logF = 0.0;
    for (int j = 1; j <= b; ++j) {
        logF -= table.count(j).get_d() *
                std::log1p(-std::exp(-j * (1.0 - sigma) * lnq));
    }
    double F = std::exp(logF);
    SmoothTail r;
    r.value = partial + std::exp(-static_cast<double>(D) / b) * F;
    r.rankin_bound = std::exp(-static_cast<double>(d) / b) * F;
    return r;
}

double smooth_partial_S(const IrreducibleTable& table, int d, int b) {
    if (b < 1 || d < 0) {
        throw std::invalid_argument("smooth_partial_S: need b >= 1, d >= 0");
    }
    if (table.max_degree() < b) {
        throw std::invalid_argument("smooth_partial_S: table shorter than b");
    }
    // s[m] = number of squarefree b-smooth monic polynomials of degree m.
    std::vector<BigInt> s(static_cast<std::size_t>(d) + 1);
    s[0] = 1;
    for (int j = 1; j <= b; ++j) {
        auto coeffs = binomial_coeffs(table.count(j), d / j);
        for (int m = d; m >= j; --m) {
            for (int t = 1; t * j <= m; ++t) {
                mpz_addmul(s[static_cast<std::size_t>(m)].get_mpz_t(),
                           coeffs[static_cast<std::size_t>(t)].get_mpz_t(),
                           s[static_cast<std::size_t>(m - t * j)].get_mpz_t());
            }
        }
    }
    BigInt num = 0;
    for (int m = 0; m <= d; ++m) {
        num += s[static_cast<std::size_t>(m)] * table.q_pow(d - m);
    }
    Rational value(num, table.q_pow(d));
    return value.get_d();
}

double smooth_upper_mertens(const IrreducibleTable& table, int b) {
    if (b < 1 || table.max_degree() < b) {
        throw std::invalid_argument("smooth_upper_mertens: bad b");
    }
    double lnq = std::log(static_cast<double>(table.q()));
    double acc = 0.0;
    for (int j = 1; j <= b; ++j) {
        acc -= table.count(j).get_d() * std::log1p(-std::exp(-j * lnq));
    }
    return std::exp(acc);
}

}  // namespace modpoisson::ffpoly
