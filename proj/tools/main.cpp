// zrf command line: deterministic checks and Monte Carlo experiments for
// the random Euler-product field, with CSV/JSON results and reproducibility
// manifests.
//
// Exit codes: 0 success, 1 argument error, 2 resource/IO error,
// 3 failed acceptance check (mgf-check).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "support/manifest.hpp"
#include "support/records.hpp"
#include "zrf.h"

namespace {

using zrfcli::Cell;
using zrfcli::Manifest;
using zrfcli::Table;

constexpr double kMgfTolerance = 1e-10;

int status_exit_code(zrf_status status) {
    switch (status) {
        case ZRF_OK: return 0;
        case ZRF_ERROR_ARGUMENT: return 1;
        default: return 2;
    }
}

// Throws are reserved for I/O; C API failures surface through this.
struct CApiFailure {
    zrf_status status;
    std::string message;
};

void check(zrf_status status) {
    if (status != ZRF_OK) {
        throw CApiFailure{status, zrf_last_error_message()};
    }
}

const char* cache_dir() { return std::getenv("ZRF_PRIME_CACHE"); }

// Small local generator for the randomized identity checks.
struct CheckRng {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

struct CommonOpts {
    int r = -1;
    int k = 3;
    double trials = 1000;
    std::uint64_t seed = 1;
    double resolution = 0.0;
    double ci_level = 0.95;
    int threads = 0;
    std::string format = "csv";
    std::string out;
};

void add_common(CLI::App* sub, CommonOpts& opts, bool with_band = true) {
    if (with_band) {
        sub->add_option("--r", opts.r, "band lower dyadic index (>= -1)");
        sub->add_option("--k", opts.k, "band upper dyadic index");
        sub->add_option("--trials", opts.trials, "Monte Carlo trial count");
        sub->add_option("--seed", opts.seed, "base seed");
        sub->add_option("--resolution", opts.resolution,
                        "certified-max grid step (0 = 2^{-3k}/64)");
        sub->add_option("--ci-level", opts.ci_level, "confidence level");
        sub->add_option("--threads", opts.threads, "worker threads (0 = auto)");
    }
    sub->add_option("--format", opts.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", opts.out, "output file (stdout when omitted)");
}

zrf_trial_config make_config(const CommonOpts& opts) {
    if (!(opts.trials >= 1.0) || opts.trials != std::floor(opts.trials)) {
        throw CApiFailure{ZRF_ERROR_ARGUMENT, "--trials must be a positive integer"};
    }
    zrf_trial_config cfg;
    cfg.r = opts.r;
    cfg.k = opts.k;
    cfg.n_trials = static_cast<std::uint64_t>(opts.trials);
    cfg.base_seed = opts.seed;
    cfg.resolution = opts.resolution;
    cfg.ci_level = opts.ci_level;
    cfg.hypothesis_c = 1.0;
    cfg.threads = opts.threads;
    return cfg;
}

void record_common(Manifest& manifest, const CommonOpts& opts) {
    manifest.parameters["r"] = opts.r;
    manifest.parameters["k"] = opts.k;
    manifest.parameters["trials"] = static_cast<std::uint64_t>(opts.trials);
    manifest.parameters["seed"] = opts.seed;
    manifest.parameters["resolution"] = opts.resolution;
    double eff = opts.resolution;
    if (!(eff > 0.0)) check(zrf_default_resolution(opts.k, &eff));
    manifest.parameters["effective_resolution"] = eff;
    manifest.parameters["ci_level"] = opts.ci_level;
    manifest.parameters["threads"] = opts.threads;
}

// Renders the table, writes the output file plus manifest (or stdout when
// no --out was given).
void emit(Manifest& manifest, const Table& table, const CommonOpts& opts,
          std::chrono::steady_clock::time_point started) {
    const std::string bytes = opts.format == "csv" ? zrfcli::render_csv(table)
                                                   : zrfcli::render_json(table);
    manifest.parameters["format"] = opts.format;
    if (opts.out.empty()) {
        std::cout << bytes;
        return;
    }
    zrfcli::write_output_file(manifest, opts.out, bytes);
    manifest.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    zrfcli::write_manifest_file(manifest, zrfcli::manifest_path_for(opts.out));
}

void append_estimate_cells(std::vector<Cell>& row, const zrf_tail_estimate& est) {
    row.emplace_back(est.threshold);
    row.emplace_back(est.hits);
    row.emplace_back(est.ambiguous);
    row.emplace_back(est.n);
    row.emplace_back(est.p_hat);
    row.emplace_back(est.ci_lo);
    row.emplace_back(est.ci_hi);
}

// ---------------- subcommands ----------------

int run_sieve(const CommonOpts& opts, double limit, Manifest manifest,
              std::chrono::steady_clock::time_point started) {
    if (!(limit >= 2.0) || limit != std::floor(limit)) {
        throw CApiFailure{ZRF_ERROR_ARGUMENT, "--limit must be an integer >= 2"};
    }
    manifest.parameters["limit"] = static_cast<std::uint64_t>(limit);
    zrf_primes* primes = nullptr;
    check(zrf_primes_sieve(static_cast<std::uint64_t>(limit), cache_dir(), &primes));
    const uint64_t* data = nullptr;
    uint64_t count = 0;
    check(zrf_primes_data(primes, &data, &count));
    const std::uint64_t largest = count > 0 ? data[count - 1] : 0;
    zrf_primes_free(primes);

    Table table;
    table.record_type = "sieve";
    table.columns = {"limit", "count", "largest_prime"};
    table.add_row({static_cast<std::uint64_t>(limit), count, largest});
    emit(manifest, table, opts, started);
    return 0;
}

int run_lemma_a1(const CommonOpts& opts, unsigned m, double q_max, double p_min,
                 Manifest manifest, std::chrono::steady_clock::time_point started) {
    manifest.parameters["m"] = m;
    manifest.parameters["Q"] = q_max;
    manifest.parameters["P"] = p_min;

    std::vector<double> q_values;
    for (double q = 1000.0; q <= q_max; q *= 10.0) q_values.push_back(q);
    if (q_values.empty() || q_values.back() != q_max) q_values.push_back(q_max);

    Table table;
    table.record_type = "lemma_a1";
    table.columns = {"m", "P", "Q", "prime_sum", "closed_form", "residual"};
    for (const double q : q_values) {
        double sum = 0.0;
        double residual = 0.0;
        check(zrf_prime_log_power_sum(p_min, q, m, cache_dir(), &sum));
        check(zrf_lemma_a1_residual(p_min, q, m, cache_dir(), &residual));
        table.add_row({static_cast<std::uint64_t>(m), p_min, q, sum, sum - residual,
                       residual});
    }
    emit(manifest, table, opts, started);
    return 0;
}

int run_mgf_check(const CommonOpts& opts, double checks, Manifest manifest,
                  std::chrono::steady_clock::time_point started) {
    if (!(checks >= 1.0) || checks != std::floor(checks)) {
        throw CApiFailure{ZRF_ERROR_ARGUMENT, "--trials must be a positive integer"};
    }
    const auto n_checks = static_cast<std::uint64_t>(checks);
    manifest.parameters["checks_per_family"] = n_checks;
    manifest.parameters["seed"] = opts.seed;
    manifest.parameters["tolerance"] = kMgfTolerance;

    zrf_primes* primes = nullptr;
    check(zrf_primes_sieve(100000, cache_dir(), &primes));
    const uint64_t* pdata = nullptr;
    uint64_t pcount = 0;
    check(zrf_primes_data(primes, &pdata, &pcount));

    CheckRng rng{opts.seed};
    Table table;
    table.record_type = "mgf_check";
    table.columns = {"kind", "p",  "lambda1", "lambda2", "h1",
                     "h2",   "k",  "series",  "quadrature", "abs_diff"};
    double max_diff = 0.0;

    for (std::uint64_t i = 0; i < n_checks; ++i) {
        const std::uint64_t p = pdata[rng.next() % pcount];
        const double lambda = 4.0 * rng.uniform();
        double series = 0.0;
        double quad = 0.0;
        check(zrf_mgf_derivative_single(p, lambda, &series));
        check(zrf_mgf_derivative_single_quadrature(p, lambda, &quad));
        const double diff = std::abs(series - quad);
        max_diff = std::max(max_diff, diff);
        table.add_row({std::string("univariate"), p, lambda, 0.0, 0.0, 0.0,
                       std::uint64_t{0}, series, quad, diff});
    }
    for (std::uint64_t i = 0; i < n_checks; ++i) {
        const std::uint64_t p = pdata[rng.next() % pcount];
        const auto k = static_cast<std::uint64_t>(1 + rng.next() % 4);
        const double half = std::ldexp(1.0, -3 * static_cast<int>(k) - 1);
        double h1 = half * (2.0 * rng.uniform() - 1.0);
        double h2 = half * (2.0 * rng.uniform() - 1.0);
        while (h2 == h1) h2 = half * (2.0 * rng.uniform() - 1.0);
        const double lambda1 = 4.0 * rng.uniform();
        const double lambda2 = rng.uniform() / std::abs(h2 - h1);
        double series = 0.0;
        double quad = 0.0;
        check(zrf_mgf_derivative_joint(p, lambda1, lambda2, h1, h2, &series));
        check(zrf_mgf_derivative_joint_quadrature(p, lambda1, lambda2, h1, h2, &quad));
        const double diff = std::abs(series - quad);
        max_diff = std::max(max_diff, diff);
        table.add_row({std::string("bivariate"), p, lambda1, lambda2, h1, h2, k,
                       series, quad, diff});
    }
    zrf_primes_free(primes);

    manifest.parameters["max_abs_diff"] = max_diff;
    emit(manifest, table, opts, started);
    if (max_diff > kMgfTolerance) {
        std::cerr << "mgf identity check failed: max |series - quadrature| = "
                  << zrfcli::format_double(max_diff) << " > "
                  << zrfcli::format_double(kMgfTolerance) << "\n";
        return 3;
    }
    return 0;
}

struct BoundsOpts {
    double hypothesis_c = 1.0;
    double lead_c = 1.0;
    double decay_c = 1.0;
    double x = 0.0;
    double a = 0.0;
    double y = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
    double big_k = 0.0;
    double l_factor = 0.0;
    bool has_x = false, has_a = false, has_y = false, has_h = false;
    bool has_big_k = false, has_l = false;
};

int run_bounds(const CommonOpts& opts, const BoundsOpts& b, Manifest manifest,
               std::chrono::steady_clock::time_point started) {
    Table table;
    table.record_type = "bounds";
    table.columns = {"name", "value"};

    double v = 0.0;
    check(zrf_band_scale_value(opts.r, opts.k, &v));
    table.add_row({std::string("band_scale_v"), v});

    zrf_bound_params params;
    params.r = opts.r;
    params.k = opts.k;
    params.hypothesis_c = b.hypothesis_c;
    params.lead_c = b.lead_c;
    params.decay_c = b.decay_c;

    if (b.has_x) {
        double lambda1 = 0.0;
        check(zrf_chernoff_lambda1(b.x, v, &lambda1));
        table.add_row({std::string("chernoff_lambda1"), lambda1});
        double value = 0.0;
        check(zrf_bound_lemma41(&params, b.x, &value));
        table.add_row({std::string("lemma41_bound"), value});
        check(zrf_bound_prop32(&params, b.x, &value));
        table.add_row({std::string("prop32_bound"), value});
        if (b.has_a) {
            check(zrf_bound_prop31(&params, b.x, b.a, &value));
            table.add_row({std::string("prop31_bound"), value});
        }
        if (b.has_y && b.has_h) {
            double lambda2 = 0.0;
            check(zrf_chernoff_lambda2(b.y, b.h1, b.h2, opts.k, &lambda2));
            table.add_row({std::string("chernoff_lambda2"), lambda2});
            check(zrf_bound_lemma42(&params, b.x, b.y, b.h1, b.h2, &value));
            table.add_row({std::string("lemma42_bound"), value});
        }
    }
    if (b.has_big_k && b.has_l) {
        double value = 0.0;
        check(zrf_theorem_bound(opts.k, b.big_k, b.l_factor, &value));
        table.add_row({std::string("theorem_bound"), value});
    }
    if (b.has_l) {
        zrf_grid* grid = nullptr;
        check(zrf_grid_create(opts.r, opts.k, b.l_factor, &grid));
        uint64_t count = 0;
        check(zrf_grid_count(grid, &count));
        zrf_grid_free(grid);
        table.add_row({std::string("grid_count"), static_cast<double>(count)});
    }

    manifest.parameters["r"] = opts.r;
    manifest.parameters["k"] = opts.k;
    manifest.parameters["C"] = b.hypothesis_c;
    manifest.parameters["c"] = b.lead_c;
    manifest.parameters["c_tilde"] = b.decay_c;
    if (b.has_x) manifest.parameters["x"] = b.x;
    if (b.has_a) manifest.parameters["a"] = b.a;
    if (b.has_y) manifest.parameters["y"] = b.y;
    if (b.has_h) {
        manifest.parameters["h1"] = b.h1;
        manifest.parameters["h2"] = b.h2;
    }
    if (b.has_big_k) manifest.parameters["K"] = b.big_k;
    if (b.has_l) manifest.parameters["L"] = b.l_factor;
    emit(manifest, table, opts, started);
    return 0;
}

int run_tail(const CommonOpts& opts, const std::string& mode,
             const std::vector<double>& xs, double h, Manifest manifest,
             std::chrono::steady_clock::time_point started) {
    const zrf_trial_config cfg = make_config(opts);
    record_common(manifest, opts);
    manifest.parameters["mode"] = mode;
    manifest.parameters["h"] = h;
    manifest.parameters["x"] = xs;

    Table table;
    table.record_type = "tail";
    table.columns = {"mode", "h",     "threshold", "hits", "ambiguous",
                     "n",    "p_hat", "ci_lo",     "ci_hi"};
    if (mode == "point") {
        std::vector<zrf_tail_estimate> estimates(xs.size());
        check(zrf_estimate_point_tail(&cfg, cache_dir(), xs.data(), xs.size(),
                                      estimates.data()));
        for (const auto& est : estimates) {
            std::vector<Cell> row{std::string(mode), 0.0};
            append_estimate_cells(row, est);
            table.add_row(std::move(row));
        }
    } else {
        for (const double x : xs) {
            zrf_tail_estimate est;
            check(zrf_estimate_interval_max_tail(&cfg, cache_dir(), h, x, &est));
            std::vector<Cell> row{std::string(mode), h};
            append_estimate_cells(row, est);
            table.add_row(std::move(row));
        }
    }
    emit(manifest, table, opts, started);
    return 0;
}

int run_continuity(const CommonOpts& opts, double h, double x,
                   const std::vector<double>& a_values, Manifest manifest,
                   std::chrono::steady_clock::time_point started) {
    const zrf_trial_config cfg = make_config(opts);
    record_common(manifest, opts);
    manifest.parameters["h"] = h;
    manifest.parameters["x"] = x;
    manifest.parameters["a"] = a_values;

    Table table;
    table.record_type = "continuity";
    table.columns = {"h", "x",     "a",     "threshold", "hits", "ambiguous",
                     "n", "p_hat", "ci_lo", "ci_hi"};
    for (const double a : a_values) {
        zrf_tail_estimate est;
        check(zrf_estimate_continuity_event(&cfg, cache_dir(), h, x, a, &est));
        std::vector<Cell> row{h, x, a};
        append_estimate_cells(row, est);
        table.add_row(std::move(row));
    }
    emit(manifest, table, opts, started);
    return 0;
}

int run_joint(const CommonOpts& opts, double x, double y, double h1, double h2,
              bool has_h2, Manifest manifest,
              std::chrono::steady_clock::time_point started) {
    if (!has_h2) h2 = std::ldexp(1.0, -3 * opts.k - 1);
    const zrf_trial_config cfg = make_config(opts);
    record_common(manifest, opts);
    manifest.parameters["x"] = x;
    manifest.parameters["y"] = y;
    manifest.parameters["h1"] = h1;
    manifest.parameters["h2"] = h2;

    zrf_tail_estimate est;
    check(zrf_estimate_joint_increment(&cfg, cache_dir(), x, y, h1, h2, &est));
    Table table;
    table.record_type = "joint";
    table.columns = {"x", "y",     "h1",    "h2",   "threshold", "hits",
                     "ambiguous", "n", "p_hat", "ci_lo", "ci_hi"};
    std::vector<Cell> row{x, y, h1, h2};
    append_estimate_cells(row, est);
    table.add_row(std::move(row));
    emit(manifest, table, opts, started);
    return 0;
}

int run_gap(const CommonOpts& opts, double big_k, double l_factor, Manifest manifest,
            std::chrono::steady_clock::time_point started) {
    const zrf_trial_config cfg = make_config(opts);
    record_common(manifest, opts);
    manifest.parameters["K"] = big_k;
    manifest.parameters["L"] = l_factor;

    zrf_gap_result result;
    check(zrf_gap_experiment(&cfg, cache_dir(), big_k, l_factor, &result));

    Table table;
    table.record_type = "gap";
    table.columns = {"K",        "L",        "grid_count",  "n_trials",
                     "gap_min",  "gap_max",  "gap_mean",    "negative_gap_trials",
                     "exceed_hits", "exceed_ambiguous", "exceed_p_hat",
                     "exceed_ci_lo", "exceed_ci_hi", "theorem_bound"};
    table.add_row({big_k, l_factor, result.grid_count, cfg.n_trials, result.gap_min,
                   result.gap_max, result.gap_mean, result.negative_gap_trials,
                   result.exceed.hits, result.exceed.ambiguous, result.exceed.p_hat,
                   result.exceed.ci_lo, result.exceed.ci_hi, result.bound});
    emit(manifest, table, opts, started);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zrf: random Euler-product model of log|zeta| -- simulation "
                 "and bound verification"};
    app.require_subcommand(1);

    const auto started = std::chrono::steady_clock::now();
    Manifest manifest;
    manifest.command_line = zrfcli::join_command_line(argc, argv);

    int rc = 0;
    const auto guard = [&rc](auto&& fn) {
        return [&rc, fn]() {
            try {
                rc = fn();
            } catch (const CApiFailure& e) {
                std::cerr << "error: " << e.message << "\n";
                rc = status_exit_code(e.status);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                rc = 2;
            }
        };
    };

    // sieve
    auto sieve_opts = std::make_shared<CommonOpts>();
    auto sieve_limit = std::make_shared<double>(1e6);
    CLI::App* sieve = app.add_subcommand("sieve", "generate primes up to a limit");
    add_common(sieve, *sieve_opts, false);
    sieve->add_option("--limit", *sieve_limit, "sieve limit (inclusive)");
    sieve->callback(guard([&, sieve_opts, sieve_limit] {
        Manifest m = manifest;
        m.subcommand = "sieve";
        return run_sieve(*sieve_opts, *sieve_limit, std::move(m), started);
    }));

    // lemma-a1
    auto la_opts = std::make_shared<CommonOpts>();
    auto la_m = std::make_shared<unsigned>(1);
    auto la_q = std::make_shared<double>(1e6);
    auto la_p = std::make_shared<double>(1.0);
    CLI::App* lemma = app.add_subcommand(
        "lemma-a1", "prime log-power sums against their closed form");
    add_common(lemma, *la_opts, false);
    lemma->add_option("--m", *la_m, "log power (>= 1)");
    lemma->add_option("--Q", *la_q, "largest right endpoint");
    lemma->add_option("--P", *la_p, "left endpoint (default 1)");
    lemma->callback(guard([&, la_opts, la_m, la_q, la_p] {
        Manifest m = manifest;
        m.subcommand = "lemma-a1";
        return run_lemma_a1(*la_opts, *la_m, *la_q, *la_p, std::move(m), started);
    }));

    // mgf-check
    auto mgf_opts = std::make_shared<CommonOpts>();
    auto mgf_checks = std::make_shared<double>(50);
    CLI::App* mgf = app.add_subcommand(
        "mgf-check", "Bessel moment identity: series vs quadrature");
    add_common(mgf, *mgf_opts, false);
    mgf->add_option("--trials", *mgf_checks, "random checks per family");
    mgf->add_option("--seed", mgf_opts->seed, "base seed");
    mgf->callback(guard([&, mgf_opts, mgf_checks] {
        Manifest m = manifest;
        m.subcommand = "mgf-check";
        return run_mgf_check(*mgf_opts, *mgf_checks, std::move(m), started);
    }));

    // bounds
    auto bounds_opts = std::make_shared<CommonOpts>();
    auto bounds_extra = std::make_shared<BoundsOpts>();
    CLI::App* bounds = app.add_subcommand(
        "bounds", "evaluate the closed-form bounds (no simulation)");
    add_common(bounds, *bounds_opts, false);
    bounds->add_option("--r", bounds_opts->r, "band lower dyadic index");
    bounds->add_option("--k", bounds_opts->k, "band upper dyadic index");
    bounds->add_option("--C", bounds_extra->hypothesis_c, "hypothesis constant C");
    bounds->add_option("--c", bounds_extra->lead_c, "leading constant c");
    bounds->add_option("--c-tilde", bounds_extra->decay_c, "decay constant c~");
    auto* opt_x = bounds->add_option("--x", bounds_extra->x, "point threshold x");
    auto* opt_a = bounds->add_option("--a", bounds_extra->a, "continuity jump a");
    auto* opt_y = bounds->add_option("--y", bounds_extra->y, "increment threshold y");
    auto* opt_h1 = bounds->add_option("--h1", bounds_extra->h1, "first offset");
    auto* opt_h2 = bounds->add_option("--h2", bounds_extra->h2, "second offset");
    auto* opt_bk = bounds->add_option("--K", bounds_extra->big_k, "gap threshold K");
    auto* opt_l = bounds->add_option("--L", bounds_extra->l_factor, "grid factor L");
    bounds->callback(guard([&, bounds_opts, bounds_extra, opt_x, opt_a, opt_y, opt_h1,
                            opt_h2, opt_bk, opt_l] {
        bounds_extra->has_x = opt_x->count() > 0;
        bounds_extra->has_a = opt_a->count() > 0;
        bounds_extra->has_y = opt_y->count() > 0;
        bounds_extra->has_h = opt_h1->count() > 0 && opt_h2->count() > 0;
        bounds_extra->has_big_k = opt_bk->count() > 0;
        bounds_extra->has_l = opt_l->count() > 0;
        Manifest m = manifest;
        m.subcommand = "bounds";
        return run_bounds(*bounds_opts, *bounds_extra, std::move(m), started);
    }));

    // tail
    auto tail_opts = std::make_shared<CommonOpts>();
    auto tail_mode = std::make_shared<std::string>("point");
    auto tail_xs = std::make_shared<std::vector<double>>();
    auto tail_h = std::make_shared<double>(0.0);
    CLI::App* tail = app.add_subcommand(
        "tail", "Monte Carlo tail of the derivative (point or interval max)");
    add_common(tail, *tail_opts);
    tail->add_option("--mode", *tail_mode, "point or interval")
        ->check(CLI::IsMember({"point", "interval"}));
    tail->add_option("--x", *tail_xs, "threshold(s), comma separated")
        ->delimiter(',');
    tail->add_option("--h", *tail_h, "interval centre (interval mode)");
    tail->callback(guard([&, tail_opts, tail_mode, tail_xs, tail_h] {
        if (tail_xs->empty()) tail_xs->push_back(2.0);
        Manifest m = manifest;
        m.subcommand = "tail";
        return run_tail(*tail_opts, *tail_mode, *tail_xs, *tail_h, std::move(m),
                        started);
    }));

    // continuity
    auto cont_opts = std::make_shared<CommonOpts>();
    auto cont_h = std::make_shared<double>(0.0);
    auto cont_x = std::make_shared<double>(2.0);
    auto cont_as = std::make_shared<std::vector<double>>();
    CLI::App* continuity = app.add_subcommand(
        "continuity", "Monte Carlo joint continuity event for the derivative");
    add_common(continuity, *cont_opts);
    continuity->add_option("--h", *cont_h, "interval centre");
    continuity->add_option("--x", *cont_x, "point threshold x");
    continuity->add_option("--a", *cont_as, "jump size(s) a, comma separated")
        ->delimiter(',');
    continuity->callback(guard([&, cont_opts, cont_h, cont_x, cont_as] {
        if (cont_as->empty()) cont_as->push_back(2.0);
        Manifest m = manifest;
        m.subcommand = "continuity";
        return run_continuity(*cont_opts, *cont_h, *cont_x, *cont_as, std::move(m),
                              started);
    }));

    // joint
    auto joint_opts = std::make_shared<CommonOpts>();
    auto joint_x = std::make_shared<double>(0.0);
    auto joint_y = std::make_shared<double>(0.0);
    auto joint_h1 = std::make_shared<double>(0.0);
    auto joint_h2 = std::make_shared<double>(0.0);
    CLI::App* joint = app.add_subcommand(
        "joint", "Monte Carlo joint tail of derivative and increment");
    add_common(joint, *joint_opts);
    joint->add_option("--x", *joint_x, "point threshold x");
    joint->add_option("--y", *joint_y, "increment threshold y");
    joint->add_option("--h1", *joint_h1, "first offset");
    auto* opt_jh2 = joint->add_option("--h2", *joint_h2, "second offset");
    joint->callback(guard([&, joint_opts, joint_x, joint_y, joint_h1, joint_h2,
                           opt_jh2] {
        Manifest m = manifest;
        m.subcommand = "joint";
        return run_joint(*joint_opts, *joint_x, *joint_y, *joint_h1, *joint_h2,
                         opt_jh2->count() > 0, std::move(m), started);
    }));

    // gap
    auto gap_opts = std::make_shared<CommonOpts>();
    auto gap_k = std::make_shared<double>(2.0);
    auto gap_l = std::make_shared<double>(1.755);
    CLI::App* gap = app.add_subcommand(
        "gap", "continuous vs discrete maximum over the equidistant grid");
    add_common(gap, *gap_opts);
    gap->add_option("--K", *gap_k, "allowed gap K");
    gap->add_option("--L", *gap_l, "grid factor L");
    gap->callback(guard([&, gap_opts, gap_k, gap_l] {
        Manifest m = manifest;
        m.subcommand = "gap";
        return run_gap(*gap_opts, *gap_k, *gap_l, std::move(m), started);
    }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << std::flush;
        return 1;
    }
    return rc;
}
