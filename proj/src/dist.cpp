#include "modpoisson/dist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "modpoisson/errors.hpp"
#include "modpoisson/primes.hpp"

namespace modpoisson::dist {

namespace {

// Compensated sum, enough to keep 1e5-term windows well under 1e-13 drift.
double kahan_sum(const std::vector<double>& v) {
    double s = 0.0, c = 0.0;
    for (double x : v) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

// Nudge the largest weight so the vector sums to 1 to the last ulp; the
// adjustment is below any tolerance used downstream.
void renormalize_exactly(std::vector<double>& w) {
    double s = kahan_sum(w);
    for (double& x : w) x /= s;
    double resid = 1.0 - kahan_sum(w);
    auto it = std::max_element(w.begin(), w.end());
    *it += resid;
}

}  // namespace

DiscreteDistribution DiscreteDistribution::from_rational(
    long offset, std::vector<Rational> weights) {
    if (weights.empty()) {
        throw std::invalid_argument("distribution needs at least one weight");
    }
    Rational sum = 0;
    for (const Rational& w : weights) {
        if (w < 0) throw std::invalid_argument("negative weight");
        sum += w;
    }
    if (sum != 1) {
        throw std::invalid_argument("rational weights must sum to exactly 1");
    }
    std::size_t lo = 0, hi = weights.size();
    while (lo + 1 < hi && weights[lo] == 0) ++lo;
    while (hi > lo + 1 && weights[hi - 1] == 0) --hi;
    DiscreteDistribution d;
    d.offset_ = offset + static_cast<long>(lo);
    d.rational_.assign(weights.begin() + lo, weights.begin() + hi);
    d.probs_.reserve(d.rational_.size());
    for (const Rational& w : d.rational_) d.probs_.push_back(w.get_d());
    return d;
}

DiscreteDistribution DiscreteDistribution::from_floating(
    long offset, std::vector<double> weights) {
    if (weights.empty()) {
        throw std::invalid_argument("distribution needs at least one weight");
    }
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("weights must be finite and >= 0");
        }
    }
    if (std::abs(kahan_sum(weights) - 1.0) > 1e-12) {
        throw std::invalid_argument("floating weights must sum to 1 (1e-12)");
    }
    std::size_t lo = 0, hi = weights.size();
    while (lo + 1 < hi && weights[lo] == 0.0) ++lo;
    while (hi > lo + 1 && weights[hi - 1] == 0.0) --hi;
    DiscreteDistribution d;
    d.offset_ = offset + static_cast<long>(lo);
    d.probs_.assign(weights.begin() + lo, weights.begin() + hi);
    return d;
}

DiscreteDistribution DiscreteDistribution::point_mass(long k) {
    return from_rational(k, {Rational(1)});
}

const std::vector<Rational>& DiscreteDistribution::rational_probs() const {
    if (rational_.empty()) {
        throw std::logic_error("distribution is not in exact-rational form");
    }
    return rational_;
}

double DiscreteDistribution::prob(long k) const {
    long idx = k - offset_;
    if (idx < 0 || idx >= static_cast<long>(probs_.size())) return 0.0;
    return probs_[static_cast<std::size_t>(idx)];
}

Rational DiscreteDistribution::rational_prob(long k) const {
    const auto& rp = rational_probs();
    long idx = k - offset_;
    if (idx < 0 || idx >= static_cast<long>(rp.size())) return Rational(0);
    return rp[static_cast<std::size_t>(idx)];
}

double DiscreteDistribution::mean() const {
    long double m = 0.0L;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        m += static_cast<long double>(probs_[i]) *
             (offset_ + static_cast<long>(i));
    }
    return static_cast<double>(m);
}

Complex charfn(const DiscreteDistribution& d, double u) {
    const auto& p = d.probs();
    Complex rot = std::polar(1.0, u);
    Complex phase = std::polar(1.0, u * static_cast<double>(d.offset()));
    Complex acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        // Resync the incremental rotation now and then to cap drift.
        if ((i & 0xfffu) == 0 && i > 0) {
            phase = std::polar(
                1.0, u * static_cast<double>(d.offset() +
                                             static_cast<long>(i)));
        }
        acc += p[i] * phase;
        phase *= rot;
    }
    return acc;
}

DiscreteDistribution poisson_dist(double lambda, double cutoff_mass,
                                  PoissonTruncation* info) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("poisson_dist: lambda must be finite, >= 0");
    }
    if (!(cutoff_mass > 0.0) || cutoff_mass > 1e-6) {
        throw std::invalid_argument(
            "poisson_dist: cutoff_mass must lie in (0, 1e-6]");
    }
    if (lambda == 0.0) {
        if (info) *info = {0, 0, 0.0};
        return DiscreteDistribution::point_mass(0);
    }
    long mode = static_cast<long>(std::floor(lambda));
    // log pmf at the mode, then ratio recursions outward; the recursion
    // preserves exact ties such as P(3) = P(4) at lambda = 4.
    double log_pmode = mode * std::log(lambda) - lambda -
                       std::lgamma(static_cast<double>(mode) + 1.0);
    double pmode = std::exp(log_pmode);

    std::vector<double> up;  // pmf(mode+1), pmf(mode+2), ...
    double p = pmode;
    long k = mode;
    for (;;) {
        ++k;
        p *= lambda / static_cast<double>(k);
        up.push_back(p);
        if (k >= lambda) {
            double r = lambda / static_cast<double>(k + 1);
            if (p * r / (1.0 - r) <= cutoff_mass / 2 || p < 1e-320) break;
        }
    }
    std::vector<double> down;  // pmf(mode-1), pmf(mode-2), ...
    p = pmode;
    k = mode;
    while (k > 0) {
        p *= static_cast<double>(k) / lambda;
        --k;
        down.push_back(p);
        if (k == 0) break;
        if (static_cast<double>(k) < lambda) {
            double r = static_cast<double>(k) / lambda;
            if (p * r / (1.0 - r) <= cutoff_mass / 2 || p < 1e-320) break;
        }
    }
    long lo = mode - static_cast<long>(down.size());
    long hi = mode + static_cast<long>(up.size());
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (auto it = down.rbegin(); it != down.rend(); ++it) w.push_back(*it);
    w.push_back(pmode);
    for (double x : up) w.push_back(x);

    double total = kahan_sum(w);
    if (info) {
        info->lo = lo;
        info->hi = hi;
        info->omitted_mass = std::max(0.0, 1.0 - total);
    }
    renormalize_exactly(w);
    return DiscreteDistribution::from_floating(lo, std::move(w));
}

double ks_distance(const DiscreteDistribution& a,
                   const DiscreteDistribution& b) {
    long lo = std::min(a.min_support(), b.min_support());
    long hi = std::max(a.max_support(), b.max_support());
    if (a.is_rational() && b.is_rational()) {
        Rational fa = 0, fb = 0, best = 0;
        for (long k = lo; k <= hi; ++k) {
            fa += a.rational_prob(k);
            fb += b.rational_prob(k);
            Rational gap = abs(fa - fb);
            if (gap > best) best = gap;
        }
        return best.get_d();
    }
    double fa = 0.0, fb = 0.0, best = 0.0;
    for (long k = lo; k <= hi; ++k) {
        fa += a.prob(k);
        fb += b.prob(k);
        best = std::max(best, std::abs(fa - fb));
    }
    return best;
}

double ks_charfn_bound(const DiscreteDistribution& a,
                       const DiscreteDistribution& b, int quad_points) {
    if (quad_points < 64) {
        throw std::invalid_argument("ks_charfn_bound: quad_points must be >= 64");
    }
    const double pi = std::acos(-1.0);
    double h = 2.0 * pi / quad_points;
    double acc = 0.0;
    double mean_gap = std::abs(a.mean() - b.mean());
    for (int j = 0; j < quad_points; ++j) {
        double u = -pi + (j + 0.5) * h;
        double integrand;
        if (std::abs(u) < 1e-14) {
            integrand = mean_gap;
        } else {
            integrand = std::abs(charfn(a, u) - charfn(b, u)) / std::abs(u);
        }
        acc += integrand;
    }
    return 0.25 * h * acc;
}

double clt_normalized_ks(const DiscreteDistribution& d, double lambda) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("clt_normalized_ks: lambda must be > 0");
    }
    double sq = std::sqrt(lambda);
    double cdf = 0.0, best = 0.0;
    for (long k = d.min_support(); k <= d.max_support(); ++k) {
        cdf += d.prob(k);
        double z = (static_cast<double>(k) + 0.5 - lambda) / sq;
        best = std::max(best, std::abs(cdf - normal_cdf(z)));
    }
    return best;
}

DiscreteDistribution bernoulli_sum_dist(const std::vector<double>& xs) {
    std::vector<double> w{1.0};
    for (double x : xs) {
        if (!(x >= 0.0) || !(x <= 1.0)) {
            throw std::invalid_argument("bernoulli parameter outside [0, 1]");
        }
        w.push_back(0.0);
        for (std::size_t k = w.size() - 1; k > 0; --k) {
            w[k] = w[k] * (1.0 - x) + w[k - 1] * x;
        }
        w[0] *= (1.0 - x);
    }
    renormalize_exactly(w);
    return DiscreteDistribution::from_floating(0, std::move(w));
}

DiscreteDistribution bernoulli_sum_dist(const std::vector<Rational>& xs) {
    if (xs.size() > 64) {
        throw resource_limit_error(
            "bernoulli_sum_dist: exact mode supports at most 64 factors");
    }
    std::vector<Rational> w{Rational(1)};
    for (const Rational& x : xs) {
        if (x < 0 || x > 1) {
            throw std::invalid_argument("bernoulli parameter outside [0, 1]");
        }
        w.emplace_back(0);
        for (std::size_t k = w.size() - 1; k > 0; --k) {
            w[k] = w[k] * (1 - x) + w[k - 1] * x;
        }
        w[0] *= (1 - x);
    }
    return DiscreteDistribution::from_rational(0, std::move(w));
}

Complex bernoulli_model_limit(double u, const std::vector<double>& xs,
                              const TruncationPolicy& policy) {
    policy.validate();
    // Suffix log-tail bounds: sum over the unconsumed terms of 2 x_n^2.
    std::vector<double> suffix(xs.size() + 1, 0.0);
    for (std::size_t n = xs.size(); n > 0; --n) {
        suffix[n - 1] = suffix[n] + 2.0 * xs[n - 1] * xs[n - 1];
    }
    std::size_t needed = 0;
    while (needed < xs.size() && suffix[needed] > policy.tolerance) ++needed;
    if (needed == xs.size() && !xs.empty()) {
        // Even the last term alone kept the bound above tolerance, so the
        // supplied sequence ended before the stopping rule was met.
        throw truncation_not_reached(
            "bernoulli_model_limit: terms exhausted before the tail bound");
    }
    if (static_cast<long>(needed) > policy.max_terms) {
        throw truncation_not_reached(
            "bernoulli_model_limit: max_terms reached before the tail bound");
    }
    Complex w = std::polar(1.0, u);
    Complex prod = 1.0;
    for (std::size_t n = 0; n < needed; ++n) {
        double x = xs[n];
        prod *= (1.0 + x * (w - 1.0)) * std::exp(x * (1.0 - w));
    }
    return prod;
}

void CharFnGrid::validate() const {
    if (u_values.size() != samples.size()) {
        throw std::invalid_argument("grid arrays must have equal length");
    }
    for (std::size_t i = 1; i < u_values.size(); ++i) {
        if (!(u_values[i] > u_values[i - 1])) {
            throw std::invalid_argument("grid frequencies must be increasing");
        }
    }
    for (std::size_t i = 0; i < u_values.size(); ++i) {
        if (u_values[i] == 0.0 && std::abs(samples[i] - 1.0) > 1e-12) {
            throw std::invalid_argument("charfn sample at u = 0 must be 1");
        }
    }
}

CharFnGrid make_grid(const DiscreteDistribution& d, std::vector<double> u,
                     double lambda) {
    CharFnGrid g;
    g.u_values = std::move(u);
    g.samples.reserve(g.u_values.size());
    for (double v : g.u_values) g.samples.push_back(charfn(d, v));
    g.lambda = lambda;
    g.validate();
    return g;
}

CharFnGrid modpoisson_scale(const CharFnGrid& grid) {
    grid.validate();
    CharFnGrid out = grid;
    for (std::size_t i = 0; i < out.u_values.size(); ++i) {
        Complex w = std::polar(1.0, out.u_values[i]);
        out.samples[i] *= std::exp(grid.lambda * (1.0 - w));
    }
    return out;
}

Complex mod_gaussian_scale(const ModGaussianScaling& s, double u,
                           Complex sample) {
    return std::exp(Complex(u * u * s.gamma / 2.0, -u * s.beta)) * sample;
}

Complex mod_gaussian_cube_transform(
    double lambda, double t, const std::function<Complex(double)>& charfn_at) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument(
            "mod_gaussian_cube_transform: lambda must be > 0");
    }
    double lam13 = std::cbrt(lambda);
    double lam23 = lam13 * lam13;
    Complex gauss = std::exp(Complex(t * t * lam13 / 2.0, -t * lam23));
    return gauss * charfn_at(t / lam13);
}

PrimeModel prime_model(std::uint64_t y) {
    if (y < 2) throw std::invalid_argument("prime_model: y must be >= 2");
    if (y > 100'000'000ull) {
        throw resource_limit_error("prime_model: y must be <= 1e8");
    }
    auto primes = primes_up_to(y);
    std::vector<double> xs;
    xs.reserve(primes.size());
    for (auto p : primes) xs.push_back(1.0 / static_cast<double>(p));
    // lambda_y = sum_{p <= y} -log(1 - 1/p), small terms first.
    long double lam = 0.0L;
    for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
        lam += -std::log1p(-1.0L / static_cast<long double>(*it));
    }
    PrimeModel m{bernoulli_sum_dist(xs), static_cast<double>(lam)};
    return m;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double total_variation(const DiscreteDistribution& a,
                       const DiscreteDistribution& b) {
    long lo = std::min(a.min_support(), b.min_support());
    long hi = std::max(a.max_support(), b.max_support());
    double acc = 0.0;
    for (long k = lo; k <= hi; ++k) acc += std::abs(a.prob(k) - b.prob(k));
    return acc / 2.0;
}

}  // namespace modpoisson::dist
