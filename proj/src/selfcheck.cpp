#include "modpoisson/selfcheck.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "modpoisson/dist.hpp"
#include "modpoisson/ffpoly.hpp"
#include "modpoisson/intstat.hpp"
#include "modpoisson/perms.hpp"
#include "modpoisson/specfun.hpp"

namespace modpoisson::selfcheck {

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

struct Harness {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << what;
        }
    }
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

void check_rgamma_recurrence(Harness& h) {
    std::mt19937_64 rng(411);
    std::uniform_real_distribution<double> re(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        Complex z(re(rng), re(rng));
        if (std::abs(z) > 3.0) z /= std::abs(z) / 2.0;
        Complex lhs = specfun::reciprocal_gamma(z);
        Complex rhs = z * specfun::reciprocal_gamma(z + 1.0);
        double scale = std::max(std::abs(lhs), 1e-30);
        h.expect(std::abs(lhs - rhs) / scale <= 1e-12,
                 "recurrence gap at z=(" + fmt(z.real()) + "," +
                     fmt(z.imag()) + ")");
    }
}

void check_rgamma_reference(Harness& h) {
    double v = specfun::reciprocal_gamma(Complex(0.5, 0.0)).real();
    double ref = 1.0 / std::sqrt(std::acos(-1.0));
    h.expect(std::abs(v - ref) / ref <= 1e-12, "1/Gamma(1/2) off");
    for (int m = 0; m <= 3; ++m) {
        double z = -static_cast<double>(m);
        h.expect(std::abs(specfun::reciprocal_gamma(Complex(z, 0.0))) <= 1e-13,
                 "zero missed at z=" + fmt(z));
    }
}

void check_phi1_bounded_periodic(Harness& h) {
    // sup_u |1/Gamma(1 + e^{iu})| is about 2.008, reached near u = pi/2
    // where 1/|Gamma(1 + i)| = 2.0072...; 2.1 is a safe uniform cap.
    const double pi = std::acos(-1.0);
    for (int i = 0; i <= 40; ++i) {
        double u = -2.0 * pi + i * (4.0 * pi / 40.0);
        Complex a = specfun::phi1(u);
        h.expect(std::abs(a) <= 2.1, "|phi1| > 2.1 at u=" + fmt(u));
        Complex b = specfun::phi1(u + 2.0 * pi);
        h.expect(std::abs(a - b) <= 1e-12, "phi1 period break at u=" + fmt(u));
    }
}

void check_poisson_charfn_modulus(Harness& h) {
    std::mt19937_64 rng(412);
    std::uniform_real_distribution<double> lam(0.0, 50.0);
    std::uniform_real_distribution<double> fre(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        double l = lam(rng), u = fre(rng);
        h.expect(std::abs(specfun::poisson_charfn(l, u)) <= 1.0 + 1e-12,
                 "|poisson charfn| > 1");
    }
}

void check_phi2_truncation_stability(Harness& h) {
    specfun::TruncationPolicy loose{1e-5, 100'000'000};
    specfun::TruncationPolicy tight{1e-6, 100'000'000};
    for (double u : {0.5, 1.0, 2.0}) {
        Complex a = specfun::phi2_primes(u, loose);
        Complex b = specfun::phi2_primes(u, tight);
        h.expect(std::abs(a - b) <= 2e-5, "phi2 instability at u=" + fmt(u));
    }
}

void check_ks_metric_properties(Harness& h) {
    std::mt19937_64 rng(413);
    std::uniform_real_distribution<double> un(0.0, 1.0);
    auto random_dist = [&]() {
        std::vector<double> w(5);
        double s = 0.0;
        for (double& x : w) {
            x = un(rng) + 1e-3;
            s += x;
        }
        for (double& x : w) x /= s;
        double drift = 1.0;
        for (double x : w) drift -= x;
        w[0] += drift;
        return dist::DiscreteDistribution::from_floating(
            static_cast<long>(rng() % 5), std::move(w));
    };
    for (int i = 0; i < 100; ++i) {
        auto a = random_dist(), b = random_dist(), c = random_dist();
        double ab = dist::ks_distance(a, b);
        double ba = dist::ks_distance(b, a);
        double ac = dist::ks_distance(a, c);
        double cb = dist::ks_distance(c, b);
        h.expect(std::abs(ab - ba) <= 1e-15, "ks asymmetry");
        h.expect(ab <= ac + cb + 1e-12, "ks triangle violation");
        h.expect(dist::ks_distance(a, a) == 0.0, "ks(a,a) != 0");
    }
}

void check_modpoisson_scale_identity(Harness& h) {
    const double lambda = 3.7;
    std::vector<double> grid;
    for (int i = -10; i <= 10; ++i) grid.push_back(0.3 * i);
    dist::CharFnGrid g;
    g.u_values = grid;
    g.lambda = lambda;
    for (double u : grid) g.samples.push_back(specfun::poisson_charfn(lambda, u));
    auto scaled = dist::modpoisson_scale(g);
    for (std::size_t i = 0; i < scaled.samples.size(); ++i) {
        h.expect(std::abs(scaled.samples[i] - 1.0) <= 1e-12,
                 "scaled Poisson sample != 1 at u=" + fmt(grid[i]));
    }
}

void check_feller_model_phi1(Harness& h) {
    const long N = 10'000;
    std::vector<double> xs;
    xs.reserve(N);
    for (long k = 1; k <= N; ++k) xs.push_back(1.0 / static_cast<double>(k + 1));
    auto d = dist::bernoulli_sum_dist(xs);
    double lambda = std::log(static_cast<double>(N + 1));
    for (double u : {0.5, 1.0, 2.0}) {
        Complex scaled = std::exp(lambda * (1.0 - std::polar(1.0, u))) *
                         dist::charfn(d, u);
        h.expect(std::abs(scaled - specfun::phi1(u)) <= 0.02,
                 "Bernoulli-sum scaled charfn far from phi1 at u=" + fmt(u));
    }
}

void check_prime_model_ks(Harness& h) {
    for (std::uint64_t y : {100ull, 1000ull, 10000ull}) {
        auto m = dist::prime_model(y);
        auto pois = dist::poisson_dist(m.lambda, 1e-12);
        double ks = dist::ks_distance(m.dist, pois);
        h.expect(ks * std::sqrt(m.lambda) <= 1.0,
                 "prime model ks*sqrt(lambda)=" + fmt(ks * std::sqrt(m.lambda)) +
                     " at y=" + std::to_string(y));
        double bound = dist::ks_charfn_bound(m.dist, pois, 2048);
        h.expect(bound >= ks - 1e-9, "charfn bound below ks at y=" +
                                         std::to_string(y));
    }
}

void check_stirling_vs_product(Harness& h) {
    const double pi = std::acos(-1.0);
    for (int d : {1, 2, 3, 5, 10, 50, 200}) {
        auto law = perms::cycle_count_dist(d);
        for (int i = -10; i <= 10; ++i) {
            double u = pi * i / 10.0;
            Complex a = dist::charfn(law, u);
            Complex b = perms::cycle_charfn_product(d, u);
            h.expect(std::abs(a - b) <= 1e-10,
                     "product/Stirling gap at d=" + std::to_string(d));
        }
    }
}

void check_restricted_recursion(Harness& h) {
    for (double u : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        auto table = perms::pr_permut_table(200, 8, u);
        for (int b = 1; b <= 8; ++b) {
            for (int d : {10, 50, 200}) {
                if (b > d) continue;
                Complex egf = perms::restricted_cycle_charfn(d, b, u);
                h.expect(std::abs(table[b][d] - egf) <= 1e-9,
                         "recursion/EGF gap at d=" + std::to_string(d) +
                             ", b=" + std::to_string(b));
            }
        }
    }
}

void check_conjugacy_probs(Harness& h) {
    for (int d : {1, 5, 12, 20}) {
        Rational total = 0;
        for (const auto& t : perms::all_cycle_types(d)) {
            total += perms::conjugacy_class_prob(t);
        }
        h.expect(total == 1, "class probabilities not summing to 1 at d=" +
                                 std::to_string(d));
    }
}

void check_min_cycle_asymptotic(Harness& h) {
    const int d = 2000;
    for (int b = 4; b <= 20; ++b) {
        double p = perms::min_cycle_gt_b_prob(d, b).get_d();
        double v = b * p * std::exp(kEulerGamma);
        h.expect(v >= 0.8 && v <= 1.25,
                 "b*P*e^gamma=" + fmt(v) + " at b=" + std::to_string(b));
    }
}

void check_explicit_ratio_drift(Harness& h) {
    for (double u : {0.5, 1.0, 2.0}) {
        double base = 100.0 *
                      std::abs(perms::explicit_permut_ratio(100, u) - 1.0);
        for (int d : {200, 400, 800}) {
            double v = d * std::abs(perms::explicit_permut_ratio(d, u) - 1.0);
            h.expect(v <= 2.0 * base + 1e-9,
                     "d|ratio-1| grows at d=" + std::to_string(d) +
                         ", u=" + fmt(u));
        }
    }
}

void check_necklace_identity(Harness& h) {
    for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull, 7ull, 9ull}) {
        auto table = ffpoly::IrreducibleTable::build(q, 60);
        for (int d = 1; d <= 60; ++d) {
            h.expect(table.necklace_sum(d) == table.q_pow(d),
                     "necklace identity broken at q=" + std::to_string(q) +
                         ", d=" + std::to_string(d));
        }
    }
}

void check_omega_dp_vs_brute(Harness& h) {
    for (std::uint64_t q : {2ull, 3ull}) {
        auto table = ffpoly::IrreducibleTable::build(q, 6);
        for (int d = 1; d <= 5; ++d) {
            for (auto variant :
                 {ffpoly::kDistinctAll, ffpoly::kDistinctSquarefree,
                  ffpoly::kWithMultAll, ffpoly::kWithMultSquarefree}) {
                auto dp = ffpoly::omega_law(table, d, variant);
                auto bf = ffpoly::brute_force_omega_law(q, d, variant);
                bool same = dp.normalizer == bf.normalizer;
                for (std::size_t k = 0; same && k < dp.counts.size(); ++k) {
                    BigInt other = k < bf.counts.size() ? bf.counts[k] : BigInt(0);
                    same = dp.counts[k] == other;
                }
                h.expect(same, "DP/brute mismatch at q=" + std::to_string(q) +
                                   ", d=" + std::to_string(d));
            }
        }
    }
}

void check_squarefree_type_counts(Harness& h) {
    for (std::uint64_t q : {2ull, 3ull, 5ull}) {
        auto table = ffpoly::IrreducibleTable::build(q, 12);
        for (int d = 2; d <= 12; ++d) {
            BigInt total = 0;
            for (const auto& t : perms::all_cycle_types(d)) {
                total += ffpoly::cycle_type_poly_count(table, t);
            }
            h.expect(total == table.q_pow(d) - table.q_pow(d - 1),
                     "squarefree type-count total wrong at q=" +
                         std::to_string(q) + ", d=" + std::to_string(d));
        }
    }
}

void check_equidist_bound(Harness& h) {
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull}) {
        auto table = ffpoly::IrreducibleTable::build(q, 10);
        for (int d = 2; d <= 10; ++d) {
            for (const auto& row : ffpoly::equidistribution_residual(table, d)) {
                if (!row.in_range) continue;
                h.expect(row.residual <= row.bound,
                         "equidistribution residual " + fmt(row.residual) +
                             " above bound at q=" + std::to_string(q) + ", d=" +
                             std::to_string(d) + ", type=" +
                             row.type.to_string());
            }
        }
    }
}

void check_mertens_sharp(Harness& h) {
    for (std::uint64_t q : {2ull, 3ull, 5ull}) {
        auto table = ffpoly::IrreducibleTable::build(q, 30);
        for (int d = 5; d <= 30; ++d) {
            auto r = ffpoly::mertens_product(table, d);
            double cap = 10.0 * std::exp(-0.5 * d *
                                         std::log(static_cast<double>(q)));
            h.expect(r.residual <= cap, "mertens residual above 10 q^{-d/2} at q=" +
                                            std::to_string(q) + ", d=" +
                                            std::to_string(d));
        }
    }
    auto table2 = ffpoly::IrreducibleTable::build(2, 30);
    double r10 = ffpoly::mertens_product(table2, 10).residual;
    double r20 = ffpoly::mertens_product(table2, 20).residual;
    double r30 = ffpoly::mertens_product(table2, 30).residual;
    h.expect(r10 > r20 && r20 > r30, "mertens residual not decreasing");
}

void check_gamma_q_zero(Harness& h) {
    for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull}) {
        auto table = ffpoly::IrreducibleTable::build(q, 60);
        auto g = ffpoly::gamma_q(table, 60);
        h.expect(std::abs(g.value) <= g.tail_bound + 1e-9,
                 "gamma_q partial sum outside tail bound at q=" +
                     std::to_string(q));
        h.expect(g.tail_bound < 1e-8,
                 "gamma_q tail bound too large at q=" + std::to_string(q));
    }
}

void check_rough_law_unrestricted(Harness& h) {
    auto table = ffpoly::IrreducibleTable::build(2, 30);
    auto law = ffpoly::omega_law(table, 30, ffpoly::kDistinctAll);
    auto rough = ffpoly::rough_omega_law(table, 30, 0);
    for (double u : {0.3, 1.0, 2.5}) {
        Complex a = rough.charfn(u);
        Complex b = std::polar(1.0, u) * law.charfn_shifted(u);
        h.expect(std::abs(a - b) <= 1e-12, "T(d,0) mismatch at u=" + fmt(u));
    }
}

void check_smooth_bounds(Harness& h) {
    auto table = ffpoly::IrreducibleTable::build(2, 10);
    for (int d : {20, 40, 80}) {
        auto r = ffpoly::smooth_tail_R(table, d, 4);
        h.expect(r.value <= r.rankin_bound,
                 "smooth tail above Rankin bound at d=" + std::to_string(d));
    }
    double prev = ffpoly::smooth_tail_R(table, 20, 4).rankin_bound;
    for (int d : {40, 80}) {
        double cur = ffpoly::smooth_tail_R(table, d, 4).rankin_bound;
        h.expect(cur < prev, "Rankin bound not shrinking in d");
        prev = cur;
    }
    for (std::uint64_t q : {2ull, 3ull}) {
        auto t = ffpoly::IrreducibleTable::build(q, 8);
        for (int b : {2, 4, 8}) {
            double s = ffpoly::smooth_partial_S(t, 40, b);
            h.expect(s <= ffpoly::smooth_upper_mertens(t, b),
                     "partial smooth sum above its Mertens majorant");
        }
    }
}

void check_sieve_against_trial_division(Harness& h) {
    auto sieve = intstat::OmegaSieve::build(1'000'000);
    std::mt19937_64 rng(414);
    for (int i = 0; i < 10'000; ++i) {
        std::uint64_t n = 2 + rng() % (sieve.limit() - 1);
        std::uint64_t m = n;
        int w = 0;
        for (std::uint64_t p = 2; p * p <= m; ++p) {
            if (m % p == 0) {
                ++w;
                while (m % p == 0) m /= p;
            }
        }
        if (m > 1) ++w;
        h.expect(sieve.omega(n) == w, "omega mismatch at n=" + std::to_string(n));
    }
    long sum10 = 0;
    for (int n = 2; n <= 10; ++n) sum10 += sieve.omega(n);
    h.expect(sum10 == 11, "sum of omega(n), n<=10, is not 11");
    auto rows = intstat::sign_sum(sieve, {10});
    h.expect(rows.size() == 1 && rows[0].S == -4, "S(10) != -4");
}

void check_sign_sum_direction(Harness& h) {
    // S(10^4) = -16 sits right next to a sign change of S, so the pair
    // (10^4, 10^5) runs uphill: |S|(log N)^2/N is 0.136 at 10^4 and 0.954
    // at 10^5.  The decade-apart comparisons starting at 10^5 are the
    // meaningful direction checks at this scale.
    auto sieve = intstat::OmegaSieve::build(10'000'000);
    auto rows = intstat::sign_sum(sieve, {100'000, 1'000'000, 10'000'000});
    h.expect(rows.size() == 3 && rows[1].scaled < rows[0].scaled,
             "scaled sign sum not shrinking from 1e5 to 1e6");
    h.expect(rows.size() == 3 && rows[2].scaled < rows[1].scaled,
             "scaled sign sum not shrinking from 1e6 to 1e7");
}

void check_erdos_kac_u0(Harness& h) {
    auto sieve = intstat::OmegaSieve::build(100'000);
    Complex v = intstat::erdos_kac_scaled_charfn(sieve, 0.0);
    double expect = (100'000.0 - 1.0) / 100'000.0;
    h.expect(std::abs(v - Complex(expect, 0.0)) <= 1e-13,
             "scaled charfn at u=0 is not (N-1)/N");
}

void check_empirical_omega_ks(Harness& h) {
    for (std::uint64_t N : {100'000ull, 1'000'000ull}) {
        auto sieve = intstat::OmegaSieve::build(N);
        auto emp = intstat::omega_empirical_dist(sieve);
        auto pois = dist::poisson_dist(emp.lambda, 1e-12);
        double ks = dist::ks_distance(emp.dist, pois);
        h.expect(ks * std::sqrt(emp.lambda) <= 1.5,
                 "omega empirical ks*sqrt(lambda) above 1.5 at N=" +
                     std::to_string(N));
    }
}

}  // namespace

std::vector<CheckResult> run_all() {
    std::vector<std::pair<std::string, std::function<void(Harness&)>>> checks =
        {
            {"rgamma_recurrence", check_rgamma_recurrence},
            {"rgamma_reference_values", check_rgamma_reference},
            {"phi1_bounded_periodic", check_phi1_bounded_periodic},
            {"poisson_charfn_modulus", check_poisson_charfn_modulus},
            {"phi2_truncation_stability", check_phi2_truncation_stability},
            {"ks_metric_properties", check_ks_metric_properties},
            {"modpoisson_scale_poisson_identity", check_modpoisson_scale_identity},
            {"bernoulli_sum_matches_phi1", check_feller_model_phi1},
            {"prime_model_ks_decay", check_prime_model_ks},
            {"cycle_product_vs_stirling", check_stirling_vs_product},
            {"restricted_recursion_vs_egf", check_restricted_recursion},
            {"conjugacy_probs_sum_to_one", check_conjugacy_probs},
            {"min_cycle_prob_asymptotic", check_min_cycle_asymptotic},
            {"explicit_ratio_drift_bounded", check_explicit_ratio_drift},
            {"necklace_identity", check_necklace_identity},
            {"omega_dp_vs_brute_force", check_omega_dp_vs_brute},
            {"squarefree_type_counts", check_squarefree_type_counts},
            {"equidistribution_bound", check_equidist_bound},
            {"mertens_sharp_error", check_mertens_sharp},
            {"gamma_q_vanishes", check_gamma_q_zero},
            {"rough_law_unrestricted_base", check_rough_law_unrestricted},
            {"smooth_sum_bounds", check_smooth_bounds},
            {"sieve_vs_trial_division", check_sieve_against_trial_division},
            {"sign_sum_direction", check_sign_sum_direction},
            {"erdos_kac_u0_exact", check_erdos_kac_u0},
            {"empirical_omega_ks", check_empirical_omega_ks},
        };
    std::vector<CheckResult> results;
    results.reserve(checks.size());
    for (auto& [name, fn] : checks) {
        Harness h;
        try {
            fn(h);
        } catch (const std::exception& e) {
            h.ok = false;
            h.detail << "exception: " << e.what();
        }
        results.push_back({name, h.ok, h.detail.str()});
    }
    return results;
}

}  // namespace modpoisson::selfcheck
