#pragma once

#include <functional>
#include <vector>

#include "modpoisson/arith.hpp"
#include "modpoisson/specfun.hpp"

namespace modpoisson::dist {

using specfun::TruncationPolicy;

// A probability distribution on a finite integer range
// [offset, offset + size).  Weights are kept as exact rationals when the
// construction is exact, with a floating mirror always available; purely
// numerical constructions carry doubles only.
class DiscreteDistribution {
public:
    static DiscreteDistribution from_rational(long offset,
                                              std::vector<Rational> weights);
    static DiscreteDistribution from_floating(long offset,
                                              std::vector<double> weights);
    static DiscreteDistribution point_mass(long k);

    long offset() const { return offset_; }
    std::size_t size() const { return probs_.size(); }
    long min_support() const { return offset_; }
    long max_support() const { return offset_ + static_cast<long>(size()) - 1; }

    bool is_rational() const { return !rational_.empty(); }
    const std::vector<double>& probs() const { return probs_; }
    const std::vector<Rational>& rational_probs() const;

    // P(X = k), zero outside the stored range.
    double prob(long k) const;
    Rational rational_prob(long k) const;
    double mean() const;

private:
    long offset_ = 0;
    std::vector<double> probs_;
    std::vector<Rational> rational_;
};

// E(e^{iuX}).
Complex charfn(const DiscreteDistribution& d, double u);

struct PoissonTruncation {
    long lo = 0;
    long hi = 0;
    double omitted_mass = 0.0;
};

// Poisson(lambda) truncated to a window carrying all but at most
// cutoff_mass of the mass, then renormalized.  cutoff_mass in (0, 1e-6].
DiscreteDistribution poisson_dist(double lambda, double cutoff_mass,
                                  PoissonTruncation* info = nullptr);

// Kolmogorov distance: sup over integers of |CDF_a - CDF_b|, by a single
// merged sweep over both supports (exact rational sweep when both sides
// are exact).
double ks_distance(const DiscreteDistribution& a,
                   const DiscreteDistribution& b);

// Characteristic-function bound on the Kolmogorov distance:
// (1/4) * integral_{-pi}^{pi} |phi_a(u) - phi_b(u)| / |u| du,
// midpoint rule with quad_points >= 64 nodes (u = 0 is never a node; the
// integrand extends continuously there by |E(X_a) - E(X_b)|).
double ks_charfn_bound(const DiscreteDistribution& a,
                       const DiscreteDistribution& b, int quad_points = 2048);

// sup_k |CDF(k) - NormalCDF((k + 1/2 - lambda)/sqrt(lambda))| over support
// points k, the continuity-corrected normal approximation error.
double clt_normalized_ks(const DiscreteDistribution& d, double lambda);

// Distribution of sum of independent Bernoulli(x_n).  The rational overload
// is exact; it is meant for at most ~64 factors.
DiscreteDistribution bernoulli_sum_dist(const std::vector<double>& xs);
DiscreteDistribution bernoulli_sum_dist(const std::vector<Rational>& xs);

// Limit function of the Bernoulli-sum model:
// prod_n (1 + x_n (e^{iu} - 1)) exp(x_n (1 - e^{iu})), consuming terms until
// the remaining log-tail bound sum 2 x_n^2 is below policy.tolerance.
Complex bernoulli_model_limit(double u, const std::vector<double>& xs,
                              const TruncationPolicy& policy);

// Characteristic-function samples on a frequency grid together with the
// Poisson parameter attached to the sequence.
struct CharFnGrid {
    std::vector<double> u_values;
    std::vector<Complex> samples;
    double lambda = 0.0;
    void validate() const;
};

CharFnGrid make_grid(const DiscreteDistribution& d, std::vector<double> u,
                     double lambda);

// Poisson renormalization: sample(u) -> exp(lambda (1 - e^{iu})) sample(u).
CharFnGrid modpoisson_scale(const CharFnGrid& grid);

// Gaussian renormalization parameters (mean drift beta, variance gamma).
struct ModGaussianScaling {
    double beta = 0.0;
    double gamma = 0.0;
};

// exp(-iu beta + u^2 gamma / 2) * sample.
Complex mod_gaussian_scale(const ModGaussianScaling& s, double u,
                           Complex sample);

// Cube-root rescaling of a Poisson-type charfn:
// exp(t^2 lambda^{1/3} / 2) * exp(-i t lambda^{2/3}) * charfn(t / lambda^{1/3});
// for Poisson(lambda) itself this tends to exp(-i t^3 / 6) as lambda grows.
Complex mod_gaussian_cube_transform(
    double lambda, double t, const std::function<Complex(double)>& charfn_at);

struct PrimeModel {
    DiscreteDistribution dist;
    double lambda = 0.0;  // sum_{p <= y} -log(1 - 1/p)
};

// Sum of independent Bernoulli(1/p) over primes p <= y.
PrimeModel prime_model(std::uint64_t y);

// Standard normal CDF via erfc.
double normal_cdf(double x);

// (1/2) sum_k |P_a(k) - P_b(k)|.
double total_variation(const DiscreteDistribution& a,
                       const DiscreteDistribution& b);

}  // namespace modpoisson::dist
