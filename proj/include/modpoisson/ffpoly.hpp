#pragma once

#include <cstdint>
#include <vector>

#include "modpoisson/dist.hpp"
#include "modpoisson/perms.hpp"

namespace modpoisson::ffpoly {

using specfun::TruncationPolicy;

// Counts of monic irreducibles over F_q by degree, from the divisor-sum
// formula Pi_q(j) = (1/j) sum_{delta | j} mu(delta) q^{j/delta}.
class IrreducibleTable {
public:
    // q must be a prime power; J >= 1 is the largest degree tabulated.
    static IrreducibleTable build(std::uint64_t q, int J);

    std::uint64_t q() const { return q_; }
    int max_degree() const { return J_; }
    const BigInt& count(int j) const;  // Pi_q(j), 1 <= j <= J
    BigInt q_pow(int n) const;         // q^n

    // sum_{delta | j} delta * Pi_q(delta); equals q^j.
    BigInt necklace_sum(int j) const;

private:
    std::uint64_t q_ = 0;
    int J_ = 0;
    std::vector<BigInt> counts_;
};

enum class Multiplicity { distinct, with_multiplicity };
enum class Restriction { all_polys, squarefree };

struct FactorStatVariant {
    Multiplicity multiplicity = Multiplicity::distinct;
    Restriction restriction = Restriction::all_polys;
};

inline constexpr FactorStatVariant kDistinctAll{Multiplicity::distinct,
                                                Restriction::all_polys};
inline constexpr FactorStatVariant kDistinctSquarefree{
    Multiplicity::distinct, Restriction::squarefree};
inline constexpr FactorStatVariant kWithMultAll{
    Multiplicity::with_multiplicity, Restriction::all_polys};
inline constexpr FactorStatVariant kWithMultSquarefree{
    Multiplicity::with_multiplicity, Restriction::squarefree};

// Exact counts of monic degree-d polynomials by factor count:
// counts[k] = #{f : stat(f) = k}, normalizer = q^d (all polynomials) or
// the squarefree count (squarefree restriction).
struct OmegaLaw {
    std::uint64_t q = 0;
    int d = 0;
    FactorStatVariant variant;
    std::vector<BigInt> counts;  // index k = 0..d
    BigInt normalizer;

    dist::DiscreteDistribution distribution() const;
    // E(e^{iu (stat - 1)}).
    Complex charfn_shifted(double u) const;
    // E(e^{iu stat}).
    Complex charfn(double u) const;
};

// Generating-function DP per irreducible degree.  d <= 400.
OmegaLaw omega_law(const IrreducibleTable& table, int d,
                   FactorStatVariant variant);
dist::DiscreteDistribution omega_distribution(const IrreducibleTable& table,
                                              int d, FactorStatVariant variant);

// Enumerates and factors every monic degree-d polynomial (prime q,
// q^d <= 2e6); the independent oracle for omega_law.
OmegaLaw brute_force_omega_law(std::uint64_t q, int d,
                               FactorStatVariant variant);
dist::DiscreteDistribution brute_force_omega_distribution(
    std::uint64_t q, int d, FactorStatVariant variant);

// Number of squarefree monic f of degree d whose factorization type matches
// the cycle type: prod_j C(Pi_q(j), r_j).
BigInt cycle_type_poly_count(const IrreducibleTable& table,
                             const perms::CycleType& type);

struct EquidistRow {
    perms::CycleType type;
    BigInt count;
    double residual;  // |count / (q^d P(type)) - 1|
    double bound;     // 3 d q^{-lmin/2}
    bool in_range;    // q^{lmin/2} >= d, where the bound is asserted
};

// Frobenius equidistribution check across all cycle types of degree d
// (partition enumeration, d <= 30).
std::vector<EquidistRow> equidistribution_residual(const IrreducibleTable& table,
                                                   int d);

struct MertensResult {
    double product;   // e^{-H_d} (1 + residual-size deviation)
    double residual;  // |e^{H_d} * prod_{j<=d} (1 - q^{-j})^{Pi_q(j)} - 1|
};

// Sharp finite Mertens product over F_q[X]; the residual decays like
// q^{-d/2} and is computed cancellation-free.
MertensResult mertens_product(const IrreducibleTable& table, int d);

struct GammaQ {
    double value;       // partial sum of sum_j [1/j + Pi_q(j) log(1 - q^{-j})]
    double tail_bound;  // 4 q^{-J_used/2}
};

// The F_q[X] Euler-Mertens constant; exactly zero in the limit, so the
// partial sum itself must stay within tail_bound of zero.
GammaQ gamma_q(const IrreducibleTable& table, int J_used);

// prod_{j} [(1 - q^{-j})^{e^{iu}} (1 + e^{iu}/(q^j - 1))]^{Pi_q(j)},
// truncated once the log tail sum_{j>J} 4 q^{-j}/j is below tolerance.
Complex phi2_ff(const IrreducibleTable& table, double u,
                const TruncationPolicy& policy);

// exp((1 - e^{iu}) log d) * E(e^{iu (stat(f) - 1)}) over the chosen ensemble.
Complex thmain_scaled_charfn(const IrreducibleTable& table, int d, double u,
                             FactorStatVariant variant);
// Same, reusing a precomputed law (cheap per-frequency sweeps).
Complex thmain_scaled_from_law(const OmegaLaw& law, double u);

// Limit of the scaled charfn: phi1(u) times the variant's Euler product,
// with the squarefree ensembles renormalized by 1/(1 - 1/q).
Complex thmain_limit(const IrreducibleTable& table, double u,
                     FactorStatVariant variant, const TruncationPolicy& policy);

// T(d, b) = q^{-d} sum over monic degree-d f with all irreducible factors
// of degree > b of e^{iu omega(f)}; T(d, 0) = E(e^{iu omega}).
Complex T_db(const IrreducibleTable& table, int d, int b, double u);

// Exact restricted law behind T_db (distinct factors, all polynomials,
// irreducible degrees > b only).
OmegaLaw rough_omega_law(const IrreducibleTable& table, int d, int b);

struct SmoothTail {
    double value;         // sum_{d < m <= D} a_m q^{-m} + Rankin remainder at D
    double rankin_bound;  // q^{-sigma d} prod_{j<=b} (1 - q^{j(sigma-1)})^{-Pi_q(j)}
};

// Tail of the b-smooth flat sum R(d, b) = sum_{deg g > d, g b-smooth} q^{-deg g},
// evaluated by DP up to D = d + ceil(2 b log d) and bounded by Rankin's trick
// with sigma = 1/(b log q).  Requires 1 <= b < d.
SmoothTail smooth_tail_R(const IrreducibleTable& table, int d, int b);

// Partial flat sum over squarefree b-smooth g of degree <= d, exact.
double smooth_partial_S(const IrreducibleTable& table, int d, int b);

// prod_{j<=b} (q^j/(q^j - 1))^{Pi_q(j)}, the upper-Mertens majorant of the
// smooth flat sums.
double smooth_upper_mertens(const IrreducibleTable& table, int b);

}  // namespace modpoisson::ffpoly
