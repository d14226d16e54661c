// One realization of the random field on a prime band and everything
// evaluated from it: the field, its derivative, global derivative bounds,
// and certified maxima over intervals.
//
// For a band (r, k) with phases theta_p, the field and its derivative are
//
//   value(h)      = sum cos(theta_p - h log p) / sqrt(p)
//   derivative(h) = sum sin(theta_p - h log p) log p / sqrt(p)
//
// Samples are regenerable from (band, seed) and are never persisted.
// All evaluations are pure; a sample may be read concurrently.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zrf/primes.hpp"

namespace zrf {

struct FieldSample {
    const PrimeBand* band = nullptr;
    std::vector<double> thetas;  // one phase in [0, 2*pi) per band entry
    std::uint64_t seed = 0;
};

enum class EvalTarget {
    Value,       // the field itself
    Derivative,  // d/dh of the field
};

// Grid maximum plus a rigorous enclosure: the true supremum over the
// queried interval lies in [value, upper_bound].
struct CertifiedMax {
    double arg_h = 0.0;
    double value = 0.0;
    double upper_bound = 0.0;
    double grid_step = 0.0;
    double lipschitz_used = 0.0;
};

// Draw i.i.d. uniform phases for every prime of the band.  Deterministic in
// (band size, seed); independent of thread count.
FieldSample sample_field(const PrimeBand& band, std::uint64_t seed);

double field_value(const FieldSample& sample, double h);
double field_derivative(const FieldSample& sample, double h);
double field_eval(const FieldSample& sample, double h, EvalTarget target);

// Elementwise field_eval over an ascending grid.
std::vector<double> field_value_batch(const FieldSample& sample,
                                      std::span<const double> grid);
std::vector<double> field_eval_batch(const FieldSample& sample,
                                     std::span<const double> grid, EvalTarget target);

// sum (log p)^order / sqrt(p) over the band; dominates sup_h of the
// order-th derivative termwise, hence a global Lipschitz constant for the
// (order-1)-th derivative.  order in {1, 2, 3}.
double deriv_sup_bound(const PrimeBand& band, int order);

// Exact one-point variance of the derivative: sum (log p)^2 / (2p).
// Approximately scale()/4 up to a bounded Mertens-type residual.
double variance_derivative(const PrimeBand& band);

// Scan a uniform grid of step <= resolution over [lo, hi]; the certificate
// upper_bound = best grid value + Lipschitz * step / 2.  The subdivision
// count is a power of two (>= 2), so halving the resolution refines the
// grid in place and the interval midpoint is always a grid point.
CertifiedMax certified_max(const FieldSample& sample, double lo, double hi,
                           EvalTarget target, double resolution);

// 2^{-3k} / 64, the default certification step for targets on band (r, k).
double default_resolution(int k);

}  // namespace zrf
