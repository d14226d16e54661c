#include "zrf.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "zrf/bounds.hpp"
#include "zrf/errors.hpp"
#include "zrf/experiments.hpp"
#include "zrf/field.hpp"
#include "zrf/primes.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

thread_local std::string g_last_error;

std::optional<std::filesystem::path> cache_path(const char* dir) {
    if (dir == nullptr || dir[0] == '\0') return std::nullopt;
    return std::filesystem::path(dir);
}

template <typename Fn>
zrf_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return ZRF_OK;
    } catch (const zrf::argument_error& e) {
        g_last_error = e.what();
        return ZRF_ERROR_ARGUMENT;
    } catch (const zrf::resource_error& e) {
        g_last_error = e.what();
        return ZRF_ERROR_RESOURCE;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return ZRF_ERROR_RESOURCE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ZRF_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return ZRF_ERROR_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw zrf::argument_error(what);
}

zrf::TrialConfig to_config(const zrf_trial_config* cfg) {
    require(cfg != nullptr, "null trial config");
    zrf::TrialConfig out;
    out.r = cfg->r;
    out.k = cfg->k;
    out.n_trials = cfg->n_trials;
    out.base_seed = cfg->base_seed;
    out.resolution = cfg->resolution;
    out.ci_level = cfg->ci_level;
    out.hypothesis_c = cfg->hypothesis_c;
    out.threads = cfg->threads;
    return out;
}

zrf::BoundParams to_params(const zrf_bound_params* params) {
    require(params != nullptr, "null bound params");
    zrf::BoundParams out;
    out.r = params->r;
    out.k = params->k;
    out.hypothesis_c = params->hypothesis_c;
    out.lead_c = params->lead_c;
    out.decay_c = params->decay_c;
    return out;
}

zrf_tail_estimate to_c(const zrf::TailEstimate& est) {
    return {est.threshold, est.hits, est.ambiguous, est.n,
            est.p_hat,     est.ci_lo, est.ci_hi};
}

}  // namespace

struct zrf_primes {
    std::vector<uint64_t> values;
};

struct zrf_band {
    std::shared_ptr<const zrf::PrimeBand> band;
};

struct zrf_sample {
    std::shared_ptr<const zrf::PrimeBand> band;  // keeps the band alive
    zrf::FieldSample sample;
};

struct zrf_grid {
    zrf::GridSpec spec;
};

extern "C" {

const char* zrf_version_string(void) { return kVersion; }

const char* zrf_last_error_message(void) { return g_last_error.c_str(); }

zrf_status zrf_primes_sieve(uint64_t limit, const char* cache_dir, zrf_primes** out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        auto handle = std::make_unique<zrf_primes>();
        handle->values = zrf::sieve_primes_cached(limit, cache_path(cache_dir));
        *out = handle.release();
    });
}

void zrf_primes_free(zrf_primes* primes) { delete primes; }

zrf_status zrf_primes_count(const zrf_primes* primes, uint64_t* out) {
    return guarded([&] {
        require(primes != nullptr && out != nullptr, "null pointer");
        *out = primes->values.size();
    });
}

zrf_status zrf_primes_data(const zrf_primes* primes, const uint64_t** data,
                           uint64_t* count) {
    return guarded([&] {
        require(primes != nullptr && data != nullptr && count != nullptr,
                "null pointer");
        *data = primes->values.data();
        *count = primes->values.size();
    });
}

zrf_status zrf_band_create(int32_t r, int32_t k, const char* cache_dir,
                           zrf_band** out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        auto handle = std::make_unique<zrf_band>();
        handle->band = std::make_shared<const zrf::PrimeBand>(
            zrf::build_band(r, k, cache_path(cache_dir)));
        *out = handle.release();
    });
}

void zrf_band_free(zrf_band* band) { delete band; }

zrf_status zrf_band_size(const zrf_band* band, uint64_t* out) {
    return guarded([&] {
        require(band != nullptr && out != nullptr, "null pointer");
        *out = band->band->size();
    });
}

zrf_status zrf_band_scale(const zrf_band* band, double* out) {
    return guarded([&] {
        require(band != nullptr && out != nullptr, "null pointer");
        *out = band->band->scale();
    });
}

zrf_status zrf_band_entry(const zrf_band* band, uint64_t index, uint64_t* p,
                          double* log_p, double* inv_sqrt_p) {
    return guarded([&] {
        require(band != nullptr, "null band");
        require(index < band->band->size(), "band entry index out of range");
        const zrf::PrimeEntry& e = band->band->entries()[index];
        if (p != nullptr) *p = e.p;
        if (log_p != nullptr) *log_p = e.log_p;
        if (inv_sqrt_p != nullptr) *inv_sqrt_p = e.inv_sqrt_p;
    });
}

zrf_status zrf_band_scale_value(int32_t r, int32_t k, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        require(r >= -1 && r <= k, "band scale needs -1 <= r <= k");
        *out = zrf::band_scale(r, k);
    });
}

zrf_status zrf_prime_log_power_sum(double P, double Q, uint32_t m,
                                   const char* cache_dir, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::prime_log_power_sum(P, Q, m, cache_path(cache_dir));
    });
}

zrf_status zrf_lemma_a1_residual(double P, double Q, uint32_t m,
                                 const char* cache_dir, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::lemma_a1_residual(P, Q, m, cache_path(cache_dir));
    });
}

zrf_status zrf_sample_create(const zrf_band* band, uint64_t seed, zrf_sample** out) {
    return guarded([&] {
        require(band != nullptr && out != nullptr, "null pointer");
        auto handle = std::make_unique<zrf_sample>();
        handle->band = band->band;
        handle->sample = zrf::sample_field(*handle->band, seed);
        *out = handle.release();
    });
}

void zrf_sample_free(zrf_sample* sample) { delete sample; }

zrf_status zrf_sample_size(const zrf_sample* sample, uint64_t* out) {
    return guarded([&] {
        require(sample != nullptr && out != nullptr, "null pointer");
        *out = sample->sample.thetas.size();
    });
}

zrf_status zrf_sample_theta(const zrf_sample* sample, uint64_t index, double* out) {
    return guarded([&] {
        require(sample != nullptr && out != nullptr, "null pointer");
        require(index < sample->sample.thetas.size(), "theta index out of range");
        *out = sample->sample.thetas[index];
    });
}

zrf_status zrf_field_value(const zrf_sample* sample, double h, double* out) {
    return guarded([&] {
        require(sample != nullptr && out != nullptr, "null pointer");
        *out = zrf::field_value(sample->sample, h);
    });
}

zrf_status zrf_field_derivative(const zrf_sample* sample, double h, double* out) {
    return guarded([&] {
        require(sample != nullptr && out != nullptr, "null pointer");
        *out = zrf::field_derivative(sample->sample, h);
    });
}

zrf_status zrf_field_batch(const zrf_sample* sample, int32_t target,
                           const double* grid, uint64_t count, double* out) {
    return guarded([&] {
        require(sample != nullptr, "null sample");
        require(count == 0 || (grid != nullptr && out != nullptr),
                "null grid or output");
        require(target == ZRF_TARGET_VALUE || target == ZRF_TARGET_DERIVATIVE,
                "unknown evaluation target");
        const auto tgt = target == ZRF_TARGET_VALUE ? zrf::EvalTarget::Value
                                                    : zrf::EvalTarget::Derivative;
        const std::vector<double> values = zrf::field_eval_batch(
            sample->sample, std::span<const double>(grid, count), tgt);
        std::memcpy(out, values.data(), count * sizeof(double));
    });
}

zrf_status zrf_deriv_sup_bound(const zrf_band* band, int32_t order, double* out) {
    return guarded([&] {
        require(band != nullptr && out != nullptr, "null pointer");
        *out = zrf::deriv_sup_bound(*band->band, order);
    });
}

zrf_status zrf_variance_derivative(const zrf_band* band, double* out) {
    return guarded([&] {
        require(band != nullptr && out != nullptr, "null pointer");
        *out = zrf::variance_derivative(*band->band);
    });
}

zrf_status zrf_certified_max_scan(const zrf_sample* sample, double lo, double hi,
                                  int32_t target, double resolution,
                                  zrf_certified_max* out) {
    return guarded([&] {
        require(sample != nullptr && out != nullptr, "null pointer");
        require(target == ZRF_TARGET_VALUE || target == ZRF_TARGET_DERIVATIVE,
                "unknown evaluation target");
        const auto tgt = target == ZRF_TARGET_VALUE ? zrf::EvalTarget::Value
                                                    : zrf::EvalTarget::Derivative;
        const zrf::CertifiedMax cm =
            zrf::certified_max(sample->sample, lo, hi, tgt, resolution);
        *out = {cm.arg_h, cm.value, cm.upper_bound, cm.grid_step, cm.lipschitz_used};
    });
}

zrf_status zrf_default_resolution(int32_t k, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::default_resolution(k);
    });
}

zrf_status zrf_bessel_i0(double u, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::bessel_i0(u);
    });
}

zrf_status zrf_log_i0_expansion(double u, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::log_i0_expansion(u);
    });
}

zrf_status zrf_circular_mgf_identity(double a, double b, double* quadrature,
                                     double* series) {
    return guarded([&] {
        require(quadrature != nullptr && series != nullptr, "null output pointer");
        const auto [quad, ser] = zrf::circular_mgf_identity_check(a, b);
        *quadrature = quad;
        *series = ser;
    });
}

zrf_status zrf_mgf_derivative_single(uint64_t p, double lambda, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::mgf_derivative_single(p, lambda);
    });
}

zrf_status zrf_mgf_derivative_single_quadrature(uint64_t p, double lambda,
                                                double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::mgf_derivative_single_quadrature(p, lambda);
    });
}

zrf_status zrf_mgf_derivative_joint(uint64_t p, double lambda1, double lambda2,
                                    double h1, double h2, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::mgf_derivative_joint(p, lambda1, lambda2, h1, h2);
    });
}

zrf_status zrf_mgf_derivative_joint_quadrature(uint64_t p, double lambda1,
                                               double lambda2, double h1, double h2,
                                               double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::mgf_derivative_joint_quadrature(p, lambda1, lambda2, h1, h2);
    });
}

zrf_status zrf_chernoff_lambda1(double x, double v, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::chernoff_lambda1(x, v);
    });
}

zrf_status zrf_chernoff_lambda2(double y, double h1, double h2, int32_t k,
                                double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::chernoff_lambda2(y, h1, h2, k);
    });
}

zrf_status zrf_bound_lemma41(const zrf_bound_params* params, double x, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::lemma41_bound(to_params(params), x);
    });
}

zrf_status zrf_bound_prop31(const zrf_bound_params* params, double x, double a,
                            double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::prop31_bound(to_params(params), x, a);
    });
}

zrf_status zrf_bound_prop32(const zrf_bound_params* params, double x, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::prop32_bound(to_params(params), x);
    });
}

zrf_status zrf_bound_lemma42(const zrf_bound_params* params, double x, double y,
                             double h1, double h2, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::lemma42_bound(to_params(params), x, y, h1, h2);
    });
}

zrf_status zrf_grid_create(int32_t r, int32_t k, double l_factor, zrf_grid** out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        auto handle = std::make_unique<zrf_grid>();
        handle->spec = zrf::build_grid(r, k, l_factor);
        *out = handle.release();
    });
}

void zrf_grid_free(zrf_grid* grid) { delete grid; }

zrf_status zrf_grid_count(const zrf_grid* grid, uint64_t* out) {
    return guarded([&] {
        require(grid != nullptr && out != nullptr, "null pointer");
        *out = grid->spec.count;
    });
}

zrf_status zrf_grid_points(const zrf_grid* grid, const double** data,
                           uint64_t* count) {
    return guarded([&] {
        require(grid != nullptr && data != nullptr && count != nullptr,
                "null pointer");
        *data = grid->spec.points.data();
        *count = grid->spec.points.size();
    });
}

zrf_status zrf_theorem_bound(int32_t k, double big_k, double l_factor, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::theorem_bound(k, big_k, l_factor);
    });
}

zrf_status zrf_required_l(double big_k, double margin_m, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = zrf::required_l(big_k, margin_m);
    });
}

zrf_status zrf_exact_binomial_ci(uint64_t hits, uint64_t n, double level, double* lo,
                                 double* hi) {
    return guarded([&] {
        require(lo != nullptr && hi != nullptr, "null output pointer");
        std::tie(*lo, *hi) = zrf::exact_binomial_ci(hits, n, level);
    });
}

zrf_status zrf_estimate_point_tail(const zrf_trial_config* cfg, const char* cache_dir,
                                   const double* xs, uint64_t count,
                                   zrf_tail_estimate* out) {
    return guarded([&] {
        require(count > 0 && xs != nullptr && out != nullptr,
                "point tail needs thresholds and an output array");
        const zrf::TrialConfig config = to_config(cfg);
        const zrf::PrimeBand band =
            zrf::build_band(config.r, config.k, cache_path(cache_dir));
        const std::vector<zrf::TailEstimate> estimates = zrf::estimate_point_tail(
            config, band, std::span<const double>(xs, count));
        for (uint64_t i = 0; i < count; ++i) out[i] = to_c(estimates[i]);
    });
}

zrf_status zrf_estimate_interval_max_tail(const zrf_trial_config* cfg,
                                          const char* cache_dir, double h, double x,
                                          zrf_tail_estimate* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        const zrf::TrialConfig config = to_config(cfg);
        const zrf::PrimeBand band =
            zrf::build_band(config.r, config.k, cache_path(cache_dir));
        *out = to_c(zrf::estimate_interval_max_tail(config, band, h, x));
    });
}

zrf_status zrf_estimate_continuity_event(const zrf_trial_config* cfg,
                                         const char* cache_dir, double h, double x,
                                         double a, zrf_tail_estimate* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        const zrf::TrialConfig config = to_config(cfg);
        const zrf::PrimeBand band =
            zrf::build_band(config.r, config.k, cache_path(cache_dir));
        *out = to_c(zrf::estimate_continuity_event(config, band, h, x, a));
    });
}

zrf_status zrf_estimate_joint_increment(const zrf_trial_config* cfg,
                                        const char* cache_dir, double x, double y,
                                        double h1, double h2,
                                        zrf_tail_estimate* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        const zrf::TrialConfig config = to_config(cfg);
        const zrf::PrimeBand band =
            zrf::build_band(config.r, config.k, cache_path(cache_dir));
        *out = to_c(zrf::estimate_joint_increment(config, band, x, y, h1, h2));
    });
}

zrf_status zrf_gap_experiment(const zrf_trial_config* cfg, const char* cache_dir,
                              double big_k, double l_factor, zrf_gap_result* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        const zrf::TrialConfig config = to_config(cfg);
        const zrf::PrimeBand band =
            zrf::build_band(config.r, config.k, cache_path(cache_dir));
        const zrf::GapResult result =
            zrf::gap_experiment(config, band, big_k, l_factor, nullptr);
        out->gap_min = result.gaps.min;
        out->gap_max = result.gaps.max;
        out->gap_mean = result.gaps.mean;
        out->negative_gap_trials = result.gaps.negative;
        out->exceed = to_c(result.exceed);
        out->bound = result.bound;
        out->grid_count = result.grid.count;
    });
}

zrf_status zrf_fit_constants(const zrf_tail_estimate* estimates, uint64_t count,
                             int32_t form, double v, double x, double h1, double h2,
                             int32_t k, zrf_fit_result* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        require(count > 0 && estimates != nullptr, "constant fit needs estimates");
        std::vector<zrf::TailEstimate> cpp;
        cpp.reserve(count);
        for (uint64_t i = 0; i < count; ++i) {
            const zrf_tail_estimate& e = estimates[i];
            zrf::TailEstimate t;
            t.threshold = e.threshold;
            t.hits = e.hits;
            t.ambiguous = e.ambiguous;
            t.n = e.n;
            t.p_hat = e.p_hat;
            t.ci_lo = e.ci_lo;
            t.ci_hi = e.ci_hi;
            cpp.push_back(t);
        }
        zrf::BoundForm bound_form;
        switch (form) {
            case ZRF_FORM_POINT_TAIL: bound_form = zrf::BoundForm::PointTail; break;
            case ZRF_FORM_CONTINUITY: bound_form = zrf::BoundForm::Continuity; break;
            case ZRF_FORM_JOINT_INCREMENT:
                bound_form = zrf::BoundForm::JointIncrement;
                break;
            default: throw zrf::argument_error("unknown bound form");
        }
        zrf::FitContext ctx;
        ctx.v = v;
        ctx.x = x;
        ctx.h1 = h1;
        ctx.h2 = h2;
        ctx.k = k;
        const zrf::FitResult fit = zrf::fit_constants(cpp, bound_form, ctx);
        out->lead_c = fit.lead_c;
        out->decay_c = fit.decay_c;
        out->feasible = fit.feasible ? 1 : 0;
    });
}

}  // extern "C"
