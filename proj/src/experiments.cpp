#include "zrf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

#include "zrf/errors.hpp"
#include "zrf/rng.hpp"
#include "zrf/sum.hpp"

namespace zrf {

namespace {

void check_config(const TrialConfig& cfg) {
    if (cfg.r >= cfg.k) {
        throw argument_error("experiments need r < k (degenerate band rejected), got r=" +
                             std::to_string(cfg.r) + " k=" + std::to_string(cfg.k));
    }
    if (cfg.n_trials < 1) throw argument_error("experiments need n_trials >= 1");
    if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0)) {
        throw argument_error("ci level must lie in (0, 1)");
    }
    if (!(cfg.hypothesis_c > 0.0)) throw argument_error("hypothesis constant C must be > 0");
    if (cfg.threads < 0) throw argument_error("thread count must be >= 0");
}

// Runs fn(t) for t in [0, n); work is chunked over workers but every trial
// is a pure function of its index, so the outcome is scheduling-free.
template <typename Fn>
void for_each_trial(std::uint64_t n, int threads, Fn&& fn) {
    int workers = threads > 0 ? threads
                              : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (static_cast<std::uint64_t>(workers) > n) workers = static_cast<int>(n);
    if (workers == 1) {
        for (std::uint64_t t = 0; t < n; ++t) fn(t);
        return;
    }
    constexpr std::uint64_t kChunk = 16;
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t begin = next.fetch_add(kChunk);
                if (begin >= n) return;
                const std::uint64_t end = std::min(begin + kChunk, n);
                for (std::uint64_t t = begin; t < end; ++t) fn(t);
            }
        });
    }
    for (auto& th : pool) th.join();
}

FieldSample trial_sample(const PrimeBand& band, std::uint64_t base_seed,
                         std::uint64_t trial) {
    return sample_field(band, substream(base_seed, trial));
}

TailEstimate reduce_outcomes(double threshold, const std::vector<TrialOutcome>& out,
                             double level) {
    std::uint64_t hits = 0;
    std::uint64_t ambiguous = 0;
    for (const TrialOutcome o : out) {
        if (o == TrialOutcome::Hit) ++hits;
        if (o == TrialOutcome::Ambiguous) ++ambiguous;
    }
    return make_tail_estimate(threshold, hits, ambiguous, out.size(), level);
}

}  // namespace

double TrialConfig::effective_resolution() const {
    return resolution > 0.0 ? resolution : default_resolution(k);
}

std::pair<double, double> exact_binomial_ci(std::uint64_t hits, std::uint64_t n,
                                            double level) {
    if (n < 1) throw argument_error("binomial CI needs n >= 1");
    if (hits > n) throw argument_error("binomial CI needs hits <= n");
    if (!(level > 0.0 && level < 1.0)) {
        throw argument_error("binomial CI level must lie in (0, 1), got " +
                             std::to_string(level));
    }
    const double alpha = 1.0 - level;
    const auto hd = static_cast<double>(hits);
    const auto nd = static_cast<double>(n);
    double lo = 0.0;
    double hi = 1.0;
    if (hits > 0) {
        lo = boost::math::ibeta_inv(hd, nd - hd + 1.0, alpha / 2.0);
    }
    if (hits < n) {
        hi = boost::math::ibeta_inv(hd + 1.0, nd - hd, 1.0 - alpha / 2.0);
    }
    return {lo, hi};
}

TailEstimate make_tail_estimate(double threshold, std::uint64_t hits,
                                std::uint64_t ambiguous, std::uint64_t n,
                                double level) {
    TailEstimate est;
    est.threshold = threshold;
    est.hits = hits;
    est.ambiguous = ambiguous;
    est.n = n;
    est.p_hat = static_cast<double>(hits) / static_cast<double>(n);
    std::tie(est.ci_lo, est.ci_hi) = exact_binomial_ci(hits, n, level);
    return est;
}

std::vector<double> point_derivative_samples(const TrialConfig& cfg,
                                             const PrimeBand& band, double h) {
    check_config(cfg);
    std::vector<double> values(cfg.n_trials);
    for_each_trial(cfg.n_trials, cfg.threads, [&](std::uint64_t t) {
        const FieldSample s = trial_sample(band, cfg.base_seed, t);
        values[t] = field_derivative(s, h);
    });
    return values;
}

std::vector<TailEstimate> estimate_point_tail(const TrialConfig& cfg,
                                              const PrimeBand& band,
                                              std::span<const double> x_values) {
    check_config(cfg);
    const std::vector<double> d = point_derivative_samples(cfg, band, 0.0);
    std::vector<TailEstimate> out;
    out.reserve(x_values.size());
    for (const double x : x_values) {
        std::uint64_t hits = 0;
        for (const double v : d) {
            if (v >= x) ++hits;
        }
        out.push_back(make_tail_estimate(x, hits, 0, cfg.n_trials, cfg.ci_level));
    }
    return out;
}

std::vector<TailEstimate> estimate_point_tail(const TrialConfig& cfg,
                                              std::span<const double> x_values) {
    check_config(cfg);
    const PrimeBand band = build_band(cfg.r, cfg.k);
    return estimate_point_tail(cfg, band, x_values);
}

TailEstimate estimate_interval_max_tail(const TrialConfig& cfg, const PrimeBand& band,
                                        double h, double x,
                                        std::vector<TrialOutcome>* outcomes) {
    check_config(cfg);
    const double cap = cfg.hypothesis_c * band.scale();
    if (!(x <= cap)) {
        throw argument_error("interval tail threshold x=" + std::to_string(x) +
                             " exceeds the hypothesis cap C*v=" + std::to_string(cap));
    }
    const double half = std::exp2(-3.0 * cfg.k - 1.0);
    const double res = cfg.effective_resolution();
    std::vector<TrialOutcome> out(cfg.n_trials);
    for_each_trial(cfg.n_trials, cfg.threads, [&](std::uint64_t t) {
        const FieldSample s = trial_sample(band, cfg.base_seed, t);
        const CertifiedMax cm =
            certified_max(s, h - half, h + half, EvalTarget::Derivative, res);
        if (cm.value >= x) {
            out[t] = TrialOutcome::Hit;
        } else if (cm.upper_bound < x) {
            out[t] = TrialOutcome::Miss;
        } else {
            out[t] = TrialOutcome::Ambiguous;
        }
    });
    const TailEstimate est = reduce_outcomes(x, out, cfg.ci_level);
    if (outcomes != nullptr) *outcomes = std::move(out);
    return est;
}

TailEstimate estimate_interval_max_tail(const TrialConfig& cfg, double h, double x) {
    check_config(cfg);
    const PrimeBand band = build_band(cfg.r, cfg.k);
    return estimate_interval_max_tail(cfg, band, h, x, nullptr);
}

TailEstimate estimate_continuity_event(const TrialConfig& cfg, const PrimeBand& band,
                                       double h, double x, double a,
                                       std::vector<TrialOutcome>* outcomes) {
    check_config(cfg);
    const double cap = cfg.hypothesis_c * band.scale();
    if (!(x >= 0.0) || !(x <= cap)) {
        throw argument_error("continuity threshold x=" + std::to_string(x) +
                             " outside [0, C*v=" + std::to_string(cap) + "]");
    }
    const double a_cap = std::exp2(6.0 * cfg.k) - x;
    if (!(a >= 2.0) || !(a <= a_cap)) {
        throw argument_error("continuity jump a=" + std::to_string(a) +
                             " outside [2, 2^{6k}-x=" + std::to_string(a_cap) + "]");
    }
    const double half = std::exp2(-3.0 * cfg.k - 1.0);
    const double res = cfg.effective_resolution();
    const double lipschitz = deriv_sup_bound(band, 2);
    const double target = x + a;
    std::vector<TrialOutcome> out(cfg.n_trials);
    for_each_trial(cfg.n_trials, cfg.threads, [&](std::uint64_t t) {
        const FieldSample s = trial_sample(band, cfg.base_seed, t);
        const double point = field_derivative(s, h);
        if (!(point <= x)) {
            out[t] = TrialOutcome::Miss;
            return;
        }
        // The interval max can exceed the centre value by at most
        // lipschitz * half; adding a resolution margin keeps the shortcut
        // classification identical to the full scan's miss.
        if (point + lipschitz * (half + res) < target) {
            out[t] = TrialOutcome::Miss;
            return;
        }
        const CertifiedMax cm =
            certified_max(s, h - half, h + half, EvalTarget::Derivative, res);
        if (cm.value >= target) {
            out[t] = TrialOutcome::Hit;
        } else if (cm.upper_bound < target) {
            out[t] = TrialOutcome::Miss;
        } else {
            out[t] = TrialOutcome::Ambiguous;
        }
    });
    const TailEstimate est = reduce_outcomes(target, out, cfg.ci_level);
    if (outcomes != nullptr) *outcomes = std::move(out);
    return est;
}

TailEstimate estimate_continuity_event(const TrialConfig& cfg, double h, double x,
                                       double a) {
    check_config(cfg);
    const PrimeBand band = build_band(cfg.r, cfg.k);
    return estimate_continuity_event(cfg, band, h, x, a, nullptr);
}

TailEstimate estimate_joint_increment(const TrialConfig& cfg, const PrimeBand& band,
                                      double x, double y, double h1, double h2,
                                      std::vector<TrialOutcome>* outcomes) {
    check_config(cfg);
    const double cap = cfg.hypothesis_c * band.scale();
    if (!(x >= 0.0) || !(x <= cap)) {
        throw argument_error("joint threshold x=" + std::to_string(x) +
                             " outside [0, C*v=" + std::to_string(cap) + "]");
    }
    const double y_cap = std::exp2(6.0 * cfg.k);
    if (!(y >= 0.0) || !(y <= y_cap)) {
        throw argument_error("joint increment y=" + std::to_string(y) +
                             " outside [0, 2^{6k}=" + std::to_string(y_cap) + "]");
    }
    const double half = std::exp2(-3.0 * cfg.k - 1.0);
    if (!(std::abs(h1) <= half) || !(std::abs(h2) <= half)) {
        throw argument_error("joint offsets must lie in [-2^{-3k-1}, 2^{-3k-1}]");
    }
    if (h1 == h2) throw argument_error("joint offsets must be distinct");
    std::vector<TrialOutcome> out(cfg.n_trials);
    for_each_trial(cfg.n_trials, cfg.threads, [&](std::uint64_t t) {
        const FieldSample s = trial_sample(band, cfg.base_seed, t);
        const double d0 = field_derivative(s, 0.0);
        if (d0 < x) {
            out[t] = TrialOutcome::Miss;
            return;
        }
        const double diff = field_derivative(s, h2) - field_derivative(s, h1);
        out[t] = diff >= y ? TrialOutcome::Hit : TrialOutcome::Miss;
    });
    const TailEstimate est = reduce_outcomes(y, out, cfg.ci_level);
    if (outcomes != nullptr) *outcomes = std::move(out);
    return est;
}

TailEstimate estimate_joint_increment(const TrialConfig& cfg, double x, double y,
                                      double h1, double h2) {
    check_config(cfg);
    const PrimeBand band = build_band(cfg.r, cfg.k);
    return estimate_joint_increment(cfg, band, x, y, h1, h2, nullptr);
}

GapResult gap_experiment(const TrialConfig& cfg, const PrimeBand& band, double big_k,
                         double l_factor, std::vector<double>* gap_values) {
    check_config(cfg);
    if (!(big_k > 0.0)) throw argument_error("gap experiment needs K > 0");
    GapResult result;
    result.big_k = big_k;
    result.l_factor = l_factor;
    result.grid = build_grid(cfg.r, cfg.k, l_factor);
    result.bound = theorem_bound(cfg.k, big_k, l_factor);

    const double res = cfg.effective_resolution();
    std::vector<double> gaps(cfg.n_trials);
    std::vector<TrialOutcome> out(cfg.n_trials);
    for_each_trial(cfg.n_trials, cfg.threads, [&](std::uint64_t t) {
        const FieldSample s = trial_sample(band, cfg.base_seed, t);
        const CertifiedMax cm = certified_max(s, 0.0, 1.0, EvalTarget::Value, res);
        const std::vector<double> on_grid = field_value_batch(s, result.grid.points);
        double discrete = on_grid[0];
        for (const double v : on_grid) discrete = std::max(discrete, v);
        gaps[t] = 0.5 * (cm.value + cm.upper_bound) - discrete;
        if (cm.value - discrete > big_k) {
            out[t] = TrialOutcome::Hit;
        } else if (cm.upper_bound - discrete <= big_k) {
            out[t] = TrialOutcome::Miss;
        } else {
            out[t] = TrialOutcome::Ambiguous;
        }
    });

    result.exceed = reduce_outcomes(big_k, out, cfg.ci_level);
    NeumaierSum mean_acc;
    result.gaps.min = std::numeric_limits<double>::infinity();
    result.gaps.max = -std::numeric_limits<double>::infinity();
    for (const double g : gaps) {
        mean_acc.add(g);
        result.gaps.min = std::min(result.gaps.min, g);
        result.gaps.max = std::max(result.gaps.max, g);
        if (g < 0.0) ++result.gaps.negative;
    }
    result.gaps.mean = mean_acc.value() / static_cast<double>(cfg.n_trials);
    if (gap_values != nullptr) *gap_values = std::move(gaps);
    return result;
}

GapResult gap_experiment(const TrialConfig& cfg, double big_k, double l_factor) {
    check_config(cfg);
    const PrimeBand band = build_band(cfg.r, cfg.k);
    return gap_experiment(cfg, band, big_k, l_factor, nullptr);
}

namespace {

double fit_spread(std::span<const FitObservation> obs, double decay_c) {
    double zmax = -std::numeric_limits<double>::infinity();
    double zmin = std::numeric_limits<double>::infinity();
    for (const FitObservation& o : obs) {
        const double z = std::log(o.ci_hi) + o.gauss_term + decay_c * o.decay_term;
        zmax = std::max(zmax, z);
        zmin = std::min(zmin, z);
    }
    return zmax - zmin;
}

double fit_lead(std::span<const FitObservation> obs, double decay_c) {
    double zmax = -std::numeric_limits<double>::infinity();
    for (const FitObservation& o : obs) {
        const double z = std::log(o.ci_hi) + o.gauss_term + decay_c * o.decay_term;
        zmax = std::max(zmax, z);
    }
    return std::exp(zmax);
}

}  // namespace

FitResult fit_constants(std::span<const FitObservation> observations, bool has_decay) {
    FitResult result;
    if (observations.empty()) return result;
    for (const FitObservation& o : observations) {
        if (!(o.ci_hi > 0.0) || !(o.ci_hi <= 1.0) || !std::isfinite(o.gauss_term) ||
            !std::isfinite(o.decay_term) || o.decay_term < 0.0) {
            return result;  // fit failure
        }
    }
    double decay_c = 0.0;
    if (has_decay) {
        // Golden-section search on the (convex) spread of the normalized
        // log upper limits.  Flat data minimizes at zero.
        constexpr double kGolden = 0.6180339887498949;
        double lo = 0.0;
        double hi = 1000.0;
        double x1 = hi - kGolden * (hi - lo);
        double x2 = lo + kGolden * (hi - lo);
        double f1 = fit_spread(observations, x1);
        double f2 = fit_spread(observations, x2);
        for (int it = 0; it < 200; ++it) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - kGolden * (hi - lo);
                f1 = fit_spread(observations, x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + kGolden * (hi - lo);
                f2 = fit_spread(observations, x2);
            }
        }
        decay_c = 0.5 * (lo + hi);
        if (fit_spread(observations, 0.0) <= fit_spread(observations, decay_c)) {
            decay_c = 0.0;
        }
    }
    result.decay_c = decay_c;
    result.lead_c = fit_lead(observations, decay_c);
    result.feasible = std::isfinite(result.lead_c) && result.lead_c > 0.0;
    return result;
}

FitResult fit_constants(std::span<const TailEstimate> estimates, BoundForm form,
                        const FitContext& ctx) {
    if (estimates.empty()) throw argument_error("constant fit needs estimates");
    if (!(ctx.v > 0.0)) throw argument_error("constant fit needs v > 0");
    std::vector<FitObservation> obs;
    obs.reserve(estimates.size());
    const double cap = ctx.hypothesis_c * ctx.v;
    for (const TailEstimate& est : estimates) {
        FitObservation o;
        o.ci_hi = est.ci_hi;
        switch (form) {
            case BoundForm::PointTail: {
                const double x = est.threshold;
                if (!(x >= 0.0) || !(x <= cap)) {
                    throw argument_error("point-tail fit threshold outside [0, C*v]");
                }
                o.gauss_term = 2.0 * x * x / ctx.v;
                o.decay_term = 0.0;
                break;
            }
            case BoundForm::Continuity: {
                const double a = est.threshold - ctx.x;
                if (!(a >= 2.0)) {
                    throw argument_error("continuity fit needs thresholds x + a with a >= 2");
                }
                o.gauss_term = 2.0 * ctx.x * ctx.x / ctx.v;
                o.decay_term = std::pow(a, 1.5);
                break;
            }
            case BoundForm::JointIncrement: {
                const double y = est.threshold;
                if (!(y >= 0.0)) throw argument_error("joint fit needs y >= 0");
                if (ctx.h1 == ctx.h2) throw argument_error("joint fit needs h1 != h2");
                o.gauss_term = 2.0 * ctx.x * ctx.x / ctx.v;
                o.decay_term = std::pow(y, 1.5) /
                               (std::abs(ctx.h2 - ctx.h1) * std::exp2(3.0 * ctx.k));
                break;
            }
        }
        obs.push_back(o);
    }
    return fit_constants(obs, form != BoundForm::PointTail);
}

}  // namespace zrf
