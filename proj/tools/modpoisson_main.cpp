#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "modpoisson/dist.hpp"
#include "modpoisson/errors.hpp"
#include "modpoisson/ffpoly.hpp"
#include "modpoisson/intstat.hpp"
#include "modpoisson/perms.hpp"
#include "modpoisson/selfcheck.hpp"
#include "modpoisson/specfun.hpp"

using ordered_json = nlohmann::ordered_json;
using modpoisson::BigInt;
using modpoisson::Complex;
using modpoisson::Rational;
namespace dist = modpoisson::dist;
namespace ffpoly = modpoisson::ffpoly;
namespace intstat = modpoisson::intstat;
namespace perms = modpoisson::perms;
namespace specfun = modpoisson::specfun;

namespace {

constexpr std::uint64_t kDefaultSeed = 1729;

// Exit codes: 0 all checks pass, 1 a numeric check failed, 2 usage error,
// 3 resource or truncation limit hit.
[[noreturn]] void usage_error(const std::string& field, const std::string& why) {
    std::cerr << "usage error: " << field << ": " << why << "\n";
    std::exit(2);
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<ordered_json> rows;  // objects keyed by column name

    ordered_json& add_row() {
        rows.emplace_back(ordered_json::object());
        return rows.back();
    }
};

std::string to_csv(const ResultTable& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            if (i) out += ',';
            const ordered_json& cell = row.at(t.columns[i]);
            if (cell.is_number_float()) {
                out += fmt_double(cell.get<double>());
            } else if (cell.is_string()) {
                out += csv_escape(cell.get<std::string>());
            } else {
                out += cell.dump();
            }
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const ordered_json& config, const ResultTable& t) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["config"] = config;
    doc["rows"] = ordered_json::array();
    for (const auto& row : t.rows) doc["rows"].push_back(row);
    return doc.dump(2) + "\n";
}

struct OutputOptions {
    std::string format = "csv";
    std::string out_path;
};

// Everything is computed before the first output byte, so a failed run
// never leaves a partial file behind.
void emit(const OutputOptions& opt, const ordered_json& config,
          const ResultTable& table) {
    std::string payload =
        opt.format == "json" ? to_json(config, table) : to_csv(table);
    if (opt.out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output file " << opt.out_path << "\n";
        std::exit(3);
    }
    f << payload;
}

struct CheckLedger {
    std::vector<ordered_json> failures;

    void require(bool ok, ordered_json info) {
        if (!ok) failures.push_back(std::move(info));
    }

    // Returns the process exit code and prints the machine-readable list.
    int finish() const {
        if (failures.empty()) return 0;
        ordered_json doc;
        doc["failures"] = ordered_json::array();
        for (const auto& f : failures) doc["failures"].push_back(f);
        std::cerr << doc.dump() << "\n";
        return 1;
    }
};

std::vector<double> resolve_u_grid(const std::vector<double>& explicit_grid,
                                   double u_min, double u_max, int u_count) {
    if (!explicit_grid.empty()) return explicit_grid;
    if (u_count < 1) usage_error("u-count", "must be >= 1");
    if (!(u_min < u_max)) usage_error("u-min/u-max", "need u-min < u-max");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(u_count));
    if (u_count == 1) {
        grid.push_back(u_min);
        return grid;
    }
    for (int i = 0; i < u_count; ++i) {
        grid.push_back(u_min + (u_max - u_min) * i / (u_count - 1));
    }
    return grid;
}

int thread_count() {
    const char* env = std::getenv("MODPOISSON_THREADS");
    if (!env) return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 256) {
        usage_error("MODPOISSON_THREADS", "must be an integer in [1, 256]");
    }
    return static_cast<int>(v);
}

ffpoly::FactorStatVariant parse_variant(const std::string& name) {
    if (name == "distinct-all") return ffpoly::kDistinctAll;
    if (name == "distinct-squarefree") return ffpoly::kDistinctSquarefree;
    if (name == "with-mult-all") return ffpoly::kWithMultAll;
    if (name == "with-mult-squarefree") return ffpoly::kWithMultSquarefree;
    usage_error("variant", "unknown variant " + name);
}

// Exact integer count behind a rational probability with known denominator.
std::string exact_count(const Rational& prob, const BigInt& total) {
    Rational c = prob * Rational(total);
    c.canonicalize();
    return c.get_num().get_str();
}

struct CommonArgs {
    OutputOptions output;
    std::uint64_t seed = kDefaultSeed;
    double tolerance = 1e-6;
    std::vector<double> u_grid;
    double u_min = -3.0;
    double u_max = 3.0;
    int u_count = 13;
};

void attach_common(CLI::App* cmd, CommonArgs& args, bool with_grid) {
    cmd->add_option("--format", args.output.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", args.output.out_path,
                    "Output file (default: standard output)");
    cmd->add_option("--seed", args.seed, "Random seed")->capture_default_str();
    cmd->add_option("--tolerance", args.tolerance,
                    "Truncation tolerance for infinite products")
        ->capture_default_str();
    if (with_grid) {
        cmd->add_option("--u-grid", args.u_grid,
                        "Explicit frequency grid (comma separated)")
            ->delimiter(',');
        cmd->add_option("--u-min", args.u_min, "Grid start")
            ->capture_default_str();
        cmd->add_option("--u-max", args.u_max, "Grid end")
            ->capture_default_str();
        cmd->add_option("--u-count", args.u_count, "Grid size")
            ->capture_default_str();
    }
}

ordered_json base_config(const std::string& command, const CommonArgs& args) {
    ordered_json c;
    c["command"] = command;
    c["seed"] = args.seed;
    c["tolerance"] = args.tolerance;
    return c;
}

// ---------------------------------------------------------------- commands

int run_irr_count(const CommonArgs& args, std::uint64_t q, int J) {
    auto table = ffpoly::IrreducibleTable::build(q, J);
    ResultTable t;
    t.columns = {"d", "Pi_q_d"};
    for (int d = 1; d <= J; ++d) {
        auto& row = t.add_row();
        row["d"] = d;
        row["Pi_q_d"] = table.count(d).get_str();
    }
    ordered_json config = base_config("irr-count", args);
    config["q"] = q;
    config["J"] = J;
    emit(args.output, config, t);
    return 0;
}

int run_omega_dist(const CommonArgs& args, std::uint64_t q, int d,
                   const std::string& variant_name) {
    auto variant = parse_variant(variant_name);
    auto table = ffpoly::IrreducibleTable::build(q, d);
    auto law = ffpoly::omega_law(table, d, variant);
    ResultTable t;
    t.columns = {"k", "count", "prob"};
    for (std::size_t k = 0; k < law.counts.size(); ++k) {
        if (law.counts[k] == 0) continue;
        Rational p(law.counts[k], law.normalizer);
        p.canonicalize();
        auto& row = t.add_row();
        row["k"] = k;
        row["count"] = law.counts[k].get_str();
        row["prob"] = p.get_d();
    }
    ordered_json config = base_config("omega-dist", args);
    config["q"] = q;
    config["d"] = d;
    config["variant"] = variant_name;
    emit(args.output, config, t);
    return 0;
}

int run_perm_dist(const CommonArgs& args, int d, long samples) {
    if (samples < 0) usage_error("samples", "must be >= 0");
    dist::DiscreteDistribution law =
        samples == 0 ? perms::cycle_count_dist(d)
                     : perms::sample_cycle_count(d, args.seed, samples);
    BigInt total = samples == 0 ? modpoisson::factorial(
                                      static_cast<unsigned long>(d))
                                : BigInt(samples);
    ResultTable t;
    t.columns = {"k", "count", "prob"};
    for (long k = law.min_support(); k <= law.max_support(); ++k) {
        Rational p = law.rational_prob(k);
        if (p.get_num() == 0) continue;
        auto& row = t.add_row();
        row["k"] = k;
        row["count"] = exact_count(p, total);
        row["prob"] = p.get_d();
    }
    ordered_json config = base_config("perm-dist", args);
    config["d"] = d;
    config["samples"] = samples;
    emit(args.output, config, t);
    return 0;
}

int run_restricted_perm(const CommonArgs& args, int d, int b) {
    auto grid = resolve_u_grid(args.u_grid, args.u_min, args.u_max,
                               args.u_count);
    ResultTable t;
    t.columns = {"u",           "egf_re",       "egf_im",
                 "recursion_re", "recursion_im", "abs_diff"};
    CheckLedger checks;
    for (double u : grid) {
        Complex egf = perms::restricted_cycle_charfn(d, b, u);
        Complex rec = perms::pr_permut_recursion(d, b, u);
        double diff = std::abs(egf - rec);
        auto& row = t.add_row();
        row["u"] = u;
        row["egf_re"] = egf.real();
        row["egf_im"] = egf.imag();
        row["recursion_re"] = rec.real();
        row["recursion_im"] = rec.imag();
        row["abs_diff"] = diff;
        checks.require(diff <= 1e-9,
                       {{"command", "restricted-perm"},
                        {"check", "recursion_matches_generating_function"},
                        {"u", u},
                        {"abs_diff", diff},
                        {"limit", 1e-9}});
    }
    ordered_json config = base_config("restricted-perm", args);
    config["d"] = d;
    config["b"] = b;
    config["u_grid"] = grid;
    emit(args.output, config, t);
    return checks.finish();
}

int run_equidist(const CommonArgs& args, std::uint64_t q, int d) {
    auto table = ffpoly::IrreducibleTable::build(q, d);
    auto rows = ffpoly::equidistribution_residual(table, d);
    ResultTable t;
    t.columns = {"cycle_type", "count", "prob", "residual", "bound"};
    CheckLedger checks;
    for (const auto& r : rows) {
        auto& row = t.add_row();
        row["cycle_type"] = r.type.to_string();
        row["count"] = r.count.get_str();
        row["prob"] = perms::conjugacy_class_prob(r.type).get_d();
        row["residual"] = r.residual;
        row["bound"] = r.bound;
        if (r.in_range) {
            checks.require(r.residual <= r.bound,
                           {{"command", "equidist"},
                            {"check", "residual_within_bound"},
                            {"cycle_type", r.type.to_string()},
                            {"residual", r.residual},
                            {"limit", r.bound}});
        }
    }
    ordered_json config = base_config("equidist", args);
    config["q"] = q;
    config["d"] = d;
    emit(args.output, config, t);
    return checks.finish();
}

int run_mertens(const CommonArgs& args, std::uint64_t q, int d_max) {
    auto table = ffpoly::IrreducibleTable::build(q, d_max);
    double lnq = std::log(static_cast<double>(q));
    ResultTable t;
    t.columns = {"d", "product", "residual", "q_pow_minus_half_d"};
    CheckLedger checks;
    for (int d = 1; d <= d_max; ++d) {
        auto r = ffpoly::mertens_product(table, d);
        double decay = std::exp(-0.5 * d * lnq);
        auto& row = t.add_row();
        row["d"] = d;
        row["product"] = r.product;
        row["residual"] = r.residual;
        row["q_pow_minus_half_d"] = decay;
        if (d >= 5) {
            checks.require(r.residual <= 10.0 * decay,
                           {{"command", "mertens"},
                            {"check", "residual_within_ten_qhalf"},
                            {"d", d},
                            {"residual", r.residual},
                            {"limit", 10.0 * decay}});
        }
    }
    ordered_json config = base_config("mertens", args);
    config["q"] = q;
    config["d_max"] = d_max;
    emit(args.output, config, t);
    return checks.finish();
}

int run_gamma_q(const CommonArgs& args, std::uint64_t q, int J) {
    auto table = ffpoly::IrreducibleTable::build(q, J);
    auto g = ffpoly::gamma_q(table, J);
    ResultTable t;
    t.columns = {"J_used", "value", "tail_bound"};
    auto& row = t.add_row();
    row["J_used"] = J;
    row["value"] = g.value;
    row["tail_bound"] = g.tail_bound;
    CheckLedger checks;
    checks.require(std::abs(g.value) <= g.tail_bound + 1e-9,
                   {{"command", "gamma-q"},
                    {"check", "partial_sum_within_tail"},
                    {"value", g.value},
                    {"limit", g.tail_bound + 1e-9}});
    ordered_json config = base_config("gamma-q", args);
    config["q"] = q;
    config["J"] = J;
    emit(args.output, config, t);
    return checks.finish();
}

int run_thmain(const CommonArgs& args, std::uint64_t q, std::vector<int> d_list,
               const std::string& variant_name) {
    if (d_list.empty()) usage_error("d", "need at least one degree");
    auto variant = parse_variant(variant_name);
    auto grid = resolve_u_grid(args.u_grid, args.u_min, args.u_max,
                               args.u_count);
    int d_top = *std::max_element(d_list.begin(), d_list.end());
    // The limit's product over irreducibles converges like q^{-J/2}, so the
    // table must reach past the largest requested degree when the tolerance
    // is small.
    double lnq = std::log(static_cast<double>(q));
    int j_needed = static_cast<int>(
        std::ceil(2.0 * std::log(4.0 / args.tolerance) / lnq)) + 2;
    int j_table = std::min(std::max(d_top, j_needed), 10'000);
    auto table = ffpoly::IrreducibleTable::build(q, j_table);

    // The per-degree laws dominate the cost; compute them in parallel and
    // assemble rows in the input order so the output is thread-invariant.
    std::vector<ffpoly::OmegaLaw> laws(d_list.size());
    std::vector<std::string> errors(d_list.size());
    std::atomic<std::size_t> next{0};
    int workers = std::min<int>(thread_count(),
                                static_cast<int>(d_list.size()));
    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= d_list.size()) return;
            try {
                laws[i] = ffpoly::omega_law(table, d_list[i], variant);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < d_list.size(); ++i) {
        if (!errors[i].empty()) throw std::invalid_argument(errors[i]);
    }

    specfun::TruncationPolicy policy{args.tolerance, 100'000'000};
    std::vector<Complex> limits;
    limits.reserve(grid.size());
    for (double u : grid) {
        limits.push_back(ffpoly::thmain_limit(table, u, variant, policy));
    }

    ResultTable t;
    t.columns = {"d",        "u",        "scaled_re", "scaled_im",
                 "limit_re", "limit_im", "abs_err"};
    for (std::size_t i = 0; i < d_list.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            Complex scaled = ffpoly::thmain_scaled_from_law(laws[i], grid[j]);
            auto& row = t.add_row();
            row["d"] = d_list[i];
            row["u"] = grid[j];
            row["scaled_re"] = scaled.real();
            row["scaled_im"] = scaled.imag();
            row["limit_re"] = limits[j].real();
            row["limit_im"] = limits[j].imag();
            row["abs_err"] = std::abs(scaled - limits[j]);
        }
    }
    ordered_json config = base_config("thmain", args);
    config["q"] = q;
    config["d_list"] = d_list;
    config["variant"] = variant_name;
    config["u_grid"] = grid;
    emit(args.output, config, t);
    return 0;
}

int run_erdos_kac(const CommonArgs& args, std::vector<std::uint64_t> N_list) {
    if (N_list.empty()) usage_error("N", "need at least one threshold");
    auto grid = resolve_u_grid(args.u_grid, args.u_min, args.u_max,
                               args.u_count);
    specfun::TruncationPolicy policy{args.tolerance, 2'000'000'000};
    std::vector<Complex> limits;
    limits.reserve(grid.size());
    for (double u : grid) {
        limits.push_back(specfun::phi1(u) * specfun::phi2_primes(u, policy));
    }
    ResultTable t;
    t.columns = {"N",        "u",        "scaled_re", "scaled_im",
                 "limit_re", "limit_im", "abs_err"};
    for (std::uint64_t N : N_list) {
        auto sieve = intstat::OmegaSieve::build(N);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            Complex scaled = intstat::erdos_kac_scaled_charfn(sieve, grid[j]);
            auto& row = t.add_row();
            row["N"] = N;
            row["u"] = grid[j];
            row["scaled_re"] = scaled.real();
            row["scaled_im"] = scaled.imag();
            row["limit_re"] = limits[j].real();
            row["limit_im"] = limits[j].imag();
            row["abs_err"] = std::abs(scaled - limits[j]);
        }
    }
    ordered_json config = base_config("erdos-kac", args);
    config["N_list"] = N_list;
    config["u_grid"] = grid;
    emit(args.output, config, t);
    return 0;
}

int run_sign_sum(const CommonArgs& args, std::vector<std::uint64_t> N_list) {
    if (N_list.empty()) usage_error("N", "need at least one threshold");
    std::uint64_t top = *std::max_element(N_list.begin(), N_list.end());
    auto sieve = intstat::OmegaSieve::build(top);
    auto rows = intstat::sign_sum(sieve, N_list);
    ResultTable t;
    t.columns = {"N", "S", "scaled"};
    for (const auto& r : rows) {
        auto& row = t.add_row();
        row["N"] = r.N;
        row["S"] = r.S;
        row["scaled"] = r.scaled;
    }
    ordered_json config = base_config("sign-sum", args);
    config["N_list"] = N_list;
    emit(args.output, config, t);
    return 0;
}

int run_ks(const CommonArgs& args, const std::string& model,
           const std::vector<std::uint64_t>& y_list,
           const std::vector<int>& d_list,
           const std::vector<long>& N_list) {
    struct Case {
        std::uint64_t param;
        dist::DiscreteDistribution law;
        double lambda;
    };
    std::vector<Case> cases;
    if (model == "prime-model") {
        if (y_list.empty()) usage_error("y", "prime-model needs --y values");
        for (std::uint64_t y : y_list) {
            auto m = dist::prime_model(y);
            cases.push_back({y, std::move(m.dist), m.lambda});
        }
    } else if (model == "feller") {
        if (d_list.empty()) usage_error("d", "feller needs --d values");
        for (int d : d_list) {
            cases.push_back({static_cast<std::uint64_t>(d),
                             perms::cycle_count_dist(d),
                             std::log(static_cast<double>(d))});
        }
    } else if (model == "bernoulli") {
        if (N_list.empty()) usage_error("N", "bernoulli needs --N values");
        for (long N : N_list) {
            if (N < 1) usage_error("N", "must be >= 1");
            std::vector<double> xs;
            xs.reserve(static_cast<std::size_t>(N));
            for (long k = 1; k <= N; ++k) {
                xs.push_back(1.0 / static_cast<double>(k + 1));
            }
            cases.push_back({static_cast<std::uint64_t>(N),
                             dist::bernoulli_sum_dist(xs),
                             std::log(static_cast<double>(N + 1))});
        }
    } else {
        usage_error("model", "unknown model " + model);
    }

    ResultTable t;
    t.columns = {"param", "lambda", "ks", "ks_times_sqrt_lambda",
                 "charfn_bound"};
    CheckLedger checks;
    for (const auto& c : cases) {
        auto pois = dist::poisson_dist(c.lambda, 1e-12, nullptr);
        double ks = dist::ks_distance(c.law, pois);
        double bound = dist::ks_charfn_bound(c.law, pois, 2048);
        double ks_sqrt = ks * std::sqrt(c.lambda);
        auto& row = t.add_row();
        row["param"] = c.param;
        row["lambda"] = c.lambda;
        row["ks"] = ks;
        row["ks_times_sqrt_lambda"] = ks_sqrt;
        row["charfn_bound"] = bound;
        checks.require(bound >= ks - 1e-12,
                       {{"command", "ks"},
                        {"check", "charfn_bound_dominates_ks"},
                        {"model", model},
                        {"param", c.param},
                        {"ks", ks},
                        {"charfn_bound", bound}});
        if (model == "prime-model") {
            checks.require(ks_sqrt <= 1.0,
                           {{"command", "ks"},
                            {"check", "ks_times_sqrt_lambda_at_most_one"},
                            {"param", c.param},
                            {"value", ks_sqrt},
                            {"limit", 1.0}});
        }
    }
    ordered_json config = base_config("ks", args);
    config["model"] = model;
    if (!y_list.empty()) config["y_list"] = y_list;
    if (!d_list.empty()) config["d_list"] = d_list;
    if (!N_list.empty()) config["N_list"] = N_list;
    emit(args.output, config, t);
    return checks.finish();
}

int run_selftest(const CommonArgs& args) {
    auto results = modpoisson::selfcheck::run_all();
    ResultTable t;
    t.columns = {"name", "pass", "detail"};
    CheckLedger checks;
    for (const auto& r : results) {
        auto& row = t.add_row();
        row["name"] = r.name;
        row["pass"] = r.pass ? 1 : 0;
        row["detail"] = r.detail;
        checks.require(r.pass, {{"command", "selftest"},
                                {"check", r.name},
                                {"detail", r.detail}});
    }
    ordered_json config = base_config("selftest", args);
    emit(args.output, config, t);
    return checks.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for mod-Poisson statistics of "
                 "permutation cycles, polynomial factorizations over F_q, "
                 "and prime divisor counts"};
    app.require_subcommand(1);

    CommonArgs args;

    std::uint64_t q = 2;
    int d = 1;
    int b = 0;
    int J = 1;
    int d_max = 1;
    long samples = 0;
    std::vector<int> d_list;
    std::vector<std::uint64_t> N_list;
    std::vector<std::uint64_t> y_list;
    std::vector<long> N_bern;
    std::string variant_name = "distinct-all";
    std::string model;

    auto* irr = app.add_subcommand("irr-count",
                                   "Count monic irreducibles by degree");
    irr->add_option("--q", q, "Field size (prime power)")->required();
    irr->add_option("--J", J, "Largest degree")->required();
    attach_common(irr, args, false);

    auto* omega = app.add_subcommand(
        "omega-dist", "Law of the irreducible-factor count at degree d");
    omega->add_option("--q", q, "Field size (prime power)")->required();
    omega->add_option("--d", d, "Degree")->required();
    omega->add_option("--variant", variant_name,
                      "distinct-all | distinct-squarefree | with-mult-all | "
                      "with-mult-squarefree")
        ->capture_default_str();
    attach_common(omega, args, false);

    auto* perm = app.add_subcommand("perm-dist",
                                    "Law of the cycle count of a uniform "
                                    "permutation");
    perm->add_option("--d", d, "Number of letters")->required();
    perm->add_option("--samples", samples,
                     "Draws for the seeded sampler (0 = exact law)")
        ->capture_default_str();
    attach_common(perm, args, false);

    auto* restricted = app.add_subcommand(
        "restricted-perm",
        "Charfn of the cycle count with all cycles longer than b, two ways");
    restricted->add_option("--d", d, "Number of letters")->required();
    restricted->add_option("--b", b, "Shortest excluded cycle length")
        ->required();
    attach_common(restricted, args, true);

    auto* equi = app.add_subcommand(
        "equidist", "Factorization-type frequencies against S_d class sizes");
    equi->add_option("--q", q, "Field size (prime power)")->required();
    equi->add_option("--d", d, "Degree")->required();
    attach_common(equi, args, false);

    auto* mert = app.add_subcommand("mertens",
                                    "Finite Mertens products over F_q[X]");
    mert->add_option("--q", q, "Field size (prime power)")->required();
    mert->add_option("--d-max,--d", d_max, "Largest truncation degree")
        ->required();
    attach_common(mert, args, false);

    auto* gq = app.add_subcommand("gamma-q",
                                  "Partial sums of the vanishing "
                                  "Euler-Mertens constant");
    gq->add_option("--q", q, "Field size (prime power)")->required();
    gq->add_option("--J", J, "Truncation degree")->required();
    attach_common(gq, args, false);

    auto* thm = app.add_subcommand(
        "thmain",
        "Scaled factor-count charfn against its limit across degrees");
    thm->add_option("--q", q, "Field size (prime power)")->required();
    thm->add_option("--d", d_list, "Degrees (repeatable or comma separated)")
        ->required()
        ->delimiter(',');
    thm->add_option("--variant", variant_name,
                    "distinct-all | distinct-squarefree | with-mult-all | "
                    "with-mult-squarefree")
        ->capture_default_str();
    attach_common(thm, args, true);

    auto* ek = app.add_subcommand(
        "erdos-kac", "Scaled charfn of the prime-divisor count");
    ek->add_option("--N", N_list, "Thresholds (repeatable or comma separated)")
        ->required()
        ->delimiter(',');
    attach_common(ek, args, true);

    auto* ss = app.add_subcommand("sign-sum",
                                  "Running sums of (-1)^{omega(n)}");
    ss->add_option("--N", N_list, "Thresholds (repeatable or comma separated)")
        ->required()
        ->delimiter(',');
    attach_common(ss, args, false);

    auto* ks = app.add_subcommand(
        "ks", "Kolmogorov distances to the matching Poisson law");
    ks->add_option("--model", model,
                   "prime-model | feller | bernoulli")
        ->required();
    ks->add_option("--y", y_list, "Prime cutoffs for prime-model")
        ->delimiter(',');
    ks->add_option("--d", d_list, "Degrees for feller")->delimiter(',');
    ks->add_option("--N", N_bern, "Term counts for bernoulli")->delimiter(',');
    attach_common(ks, args, false);

    auto* st = app.add_subcommand("selftest",
                                  "Run the library invariant suite");
    attach_common(st, args, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (irr->parsed()) return run_irr_count(args, q, J);
        if (omega->parsed()) return run_omega_dist(args, q, d, variant_name);
        if (perm->parsed()) return run_perm_dist(args, d, samples);
        if (restricted->parsed()) return run_restricted_perm(args, d, b);
        if (equi->parsed()) return run_equidist(args, q, d);
        if (mert->parsed()) return run_mertens(args, q, d_max);
        if (gq->parsed()) return run_gamma_q(args, q, J);
        if (thm->parsed()) return run_thmain(args, q, d_list, variant_name);
        if (ek->parsed()) return run_erdos_kac(args, N_list);
        if (ss->parsed()) return run_sign_sum(args, N_list);
        if (ks->parsed()) return run_ks(args, model, y_list, d_list, N_bern);
        if (st->parsed()) return run_selftest(args);
    } catch (const modpoisson::resource_limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const modpoisson::truncation_not_reached& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
