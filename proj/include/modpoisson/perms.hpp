#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modpoisson/dist.hpp"

namespace modpoisson::perms {

// Cycle type of a permutation of d letters: multiplicities[j-1] = r_j is the
// number of cycles of length j, with sum_j j*r_j = d.
struct CycleType {
    int d = 0;
    std::vector<int> multiplicities;

    void validate() const;
    int min_cycle_length() const;  // smallest j with r_j > 0
    std::string to_string() const;  // e.g. "1^2*3"
};

// Exact law of the cycle count of a uniform permutation of d letters,
// P(count = k) = c(d, k)/d! with c the unsigned first-kind triangle
// c(n, k) = c(n-1, k-1) + (n-1) c(n-1, k).
dist::DiscreteDistribution cycle_count_dist(int d);

// E(e^{iu * cyclecount}) = prod_{j=1}^{d} (1 - 1/j + e^{iu}/j).
Complex cycle_charfn_product(int d, double u);

// Gamma(e^{iu}) * exp(-(log d)(e^{iu} - 1)) * cycle_charfn_product(d, u);
// tends to 1 at rate O(1/d).  Frequencies within 1e-6 of an odd multiple
// of pi are rejected (Gamma has a pole there).
Complex explicit_permut_ratio(int d, double u);

// P(uniform permutation has this cycle type) = prod_j 1/(j^{r_j} r_j!).
Rational conjugacy_class_prob(const CycleType& type);

// E(e^{iu * cyclecount}; all cycles longer than b) over uniform
// permutations of d letters, via the EGF recursion
// g(n) = (e^{iu}/n) * sum_{m=0}^{n-b-1} g(m), g(0) = 1.
Complex restricted_cycle_charfn(int d, int b, double u);

// Same quantity through the inclusion-exclusion recursion
// Phi_{d,b} = sum_{k=0}^{floor(d/b)} (-e^{iu}/b)^k / k! * Phi_{d-kb,b-1},
// with Phi_{.,0} the unrestricted product.
Complex pr_permut_recursion(int d, int b, double u);

// Full recursion table for one frequency: entry [b'][d'] for b' <= b_max,
// d' <= d_max.  Cheap way to sweep many (d, b) pairs at once.
std::vector<std::vector<Complex>> pr_permut_table(int d_max, int b_max,
                                                  double u);

// P(all cycles longer than b), exact.
Rational min_cycle_gt_b_prob(int d, int b);

// Number of ways to place k disjoint b-cycles in d letters:
// d! / ((d - kb)! b^k k!).  Requires k*b <= d.
BigInt subsets_count_S(int k, int b, int d);

// Empirical cycle-count law from n_samples draws of
// 1 + sum_{k=1}^{d-1} Bernoulli(1/(k+1)), seeded and deterministic.
dist::DiscreteDistribution sample_cycle_count(int d, std::uint64_t seed,
                                              long n_samples);

// exp((log d - H_b)(1 - e^{iu})) * restricted_cycle_charfn(d, b, u)
//   / P(all cycles longer than b);
// approaches 1/Gamma(e^{iu}) for b fixed, d large.
Complex restricted_modpoisson_check(int d, int b, double u);

// All cycle types of degree d (partitions of d), deterministic order.
std::vector<CycleType> all_cycle_types(int d);

}  // namespace modpoisson::perms
