// Monte Carlo estimation of the tail and continuity probabilities, with
// exact binomial confidence intervals and fitted leading/decay constants.
//
// Trials are embarrassingly parallel.  Trial t draws its phases from
// substream(base_seed, t), so results are bit-identical for any worker
// count; aggregation always runs in trial-index order.
//
// Estimates that rely on a certified enclosure classify each trial as a
// hit, a miss, or ambiguous (the enclosure straddles the threshold).
// Ambiguous trials are counted separately and never silently resolved.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zrf/bounds.hpp"
#include "zrf/field.hpp"
#include "zrf/primes.hpp"

namespace zrf {

struct TrialConfig {
    int r = -1;
    int k = 3;
    std::uint64_t n_trials = 1000;
    std::uint64_t base_seed = 1;
    double resolution = 0.0;    // <= 0 means default_resolution(k)
    double ci_level = 0.95;
    double hypothesis_c = 1.0;  // C in the bound hypotheses
    int threads = 0;            // 0 means hardware concurrency

    double effective_resolution() const;
};

struct TailEstimate {
    double threshold = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t ambiguous = 0;
    std::uint64_t n = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
};

enum class TrialOutcome : std::uint8_t { Miss = 0, Hit = 1, Ambiguous = 2 };

// Exact two-sided Clopper-Pearson interval via beta quantiles.
std::pair<double, double> exact_binomial_ci(std::uint64_t hits, std::uint64_t n,
                                            double level);

TailEstimate make_tail_estimate(double threshold, std::uint64_t hits,
                                std::uint64_t ambiguous, std::uint64_t n,
                                double level);

// P(derivative at h = 0 >= x) for each x, one pass over shared trials.
std::vector<TailEstimate> estimate_point_tail(const TrialConfig& cfg,
                                              std::span<const double> x_values);
std::vector<TailEstimate> estimate_point_tail(const TrialConfig& cfg,
                                              const PrimeBand& band,
                                              std::span<const double> x_values);
// The raw per-trial derivative values behind the point tail (shared seeds).
std::vector<double> point_derivative_samples(const TrialConfig& cfg,
                                             const PrimeBand& band, double h);

// P(max of the derivative over [h - 2^{-3k-1}, h + 2^{-3k-1}] >= x), with
// certified enclosures.  A trial is a hit iff the enclosure's certain part
// reaches x; straddling enclosures count as ambiguous.
TailEstimate estimate_interval_max_tail(const TrialConfig& cfg, double h, double x);
TailEstimate estimate_interval_max_tail(const TrialConfig& cfg,
                                        const PrimeBand& band, double h, double x,
                                        std::vector<TrialOutcome>* outcomes = nullptr);

// P(interval max >= x + a and point value <= x): the joint continuity
// event.  threshold of the returned estimate is x + a.
TailEstimate estimate_continuity_event(const TrialConfig& cfg, double h, double x,
                                       double a);
TailEstimate estimate_continuity_event(const TrialConfig& cfg, const PrimeBand& band,
                                       double h, double x, double a,
                                       std::vector<TrialOutcome>* outcomes = nullptr);

// P(derivative(0) >= x and derivative(h2) - derivative(h1) >= y); two point
// evaluations, no enclosures.  threshold of the returned estimate is y.
TailEstimate estimate_joint_increment(const TrialConfig& cfg, double x, double y,
                                      double h1, double h2);
TailEstimate estimate_joint_increment(const TrialConfig& cfg, const PrimeBand& band,
                                      double x, double y, double h1, double h2,
                                      std::vector<TrialOutcome>* outcomes = nullptr);

struct GapSummary {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    std::uint64_t negative = 0;  // trials with midpoint gap below zero
};

// Continuous-vs-discrete maximum experiment for the gap theorem.
struct GapResult {
    double big_k = 0.0;
    double l_factor = 0.0;
    GridSpec grid;
    GapSummary gaps;         // midpoint-gap statistics per trial
    TailEstimate exceed;     // {gap > K}, enclosure-robust counting
    double bound = 0.0;      // theorem_bound(k, K, L)
};

GapResult gap_experiment(const TrialConfig& cfg, double big_k, double l_factor);
GapResult gap_experiment(const TrialConfig& cfg, const PrimeBand& band, double big_k,
                         double l_factor, std::vector<double>* gap_values = nullptr);

// Constant fitting.  For a family of estimates with upper confidence
// limits u_i, Gaussian exponent terms g_i = 2 x_i^2 / v and decay
// covariates s_i (a^{3/2}, or y^{3/2}/(|h2-h1| 2^{3k}), or 0), the fit
// reports the smallest c such that c exp(-g_i - c~ s_i) >= u_i for all i.
// When a decay covariate is present, c~ is chosen by a one-dimensional
// convex search minimizing the spread of log u_i + g_i + c~ s_i, i.e. the
// tightest uniform fit; flat data yields c~ = 0.
enum class BoundForm { PointTail, Continuity, JointIncrement };

struct FitObservation {
    double ci_hi = 0.0;
    double gauss_term = 0.0;  // 2 x^2 / v
    double decay_term = 0.0;  // decay covariate, 0 for the point-tail form
};

struct FitResult {
    double lead_c = 0.0;
    double decay_c = 0.0;
    bool feasible = false;
};

FitResult fit_constants(std::span<const FitObservation> observations,
                        bool has_decay);

// Context for deriving the fit observations from tail estimates.
struct FitContext {
    double v = 0.0;          // band scale
    double x = 0.0;          // fixed point threshold (continuity form)
    double h1 = 0.0;         // joint form
    double h2 = 0.0;
    int k = 0;               // joint form
    double hypothesis_c = 1.0;
};

FitResult fit_constants(std::span<const TailEstimate> estimates, BoundForm form,
                        const FitContext& ctx);

}  // namespace zrf
