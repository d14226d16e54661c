#include "zrf/field.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "zrf/errors.hpp"
#include "zrf/rng.hpp"
#include "zrf/sum.hpp"

namespace zrf {

FieldSample sample_field(const PrimeBand& band, std::uint64_t seed) {
    FieldSample s;
    s.band = &band;
    s.seed = seed;
    s.thetas.resize(band.size());
    for (std::size_t i = 0; i < band.size(); ++i) {
        s.thetas[i] = phase_from(seed, i);
    }
    return s;
}

namespace {

void check_sample(const FieldSample& sample) {
    if (sample.band == nullptr) {
        throw argument_error("field sample has no band");
    }
    if (sample.thetas.size() != sample.band->size()) {
        throw argument_error("field sample has " + std::to_string(sample.thetas.size()) +
                             " phases for a band of " +
                             std::to_string(sample.band->size()) + " primes");
    }
}

}  // namespace

double field_value(const FieldSample& sample, double h) {
    check_sample(sample);
    const auto& entries = sample.band->entries();
    NeumaierSum acc;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const PrimeEntry& e = entries[i];
        acc.add(std::cos(sample.thetas[i] - h * e.log_p) * e.inv_sqrt_p);
    }
    return acc.value();
}

double field_derivative(const FieldSample& sample, double h) {
    check_sample(sample);
    const auto& entries = sample.band->entries();
    NeumaierSum acc;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const PrimeEntry& e = entries[i];
        acc.add(std::sin(sample.thetas[i] - h * e.log_p) * e.log_p * e.inv_sqrt_p);
    }
    return acc.value();
}

double field_eval(const FieldSample& sample, double h, EvalTarget target) {
    return target == EvalTarget::Value ? field_value(sample, h)
                                       : field_derivative(sample, h);
}

std::vector<double> field_eval_batch(const FieldSample& sample,
                                     std::span<const double> grid,
                                     EvalTarget target) {
    check_sample(sample);
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        out[j] = field_eval(sample, grid[j], target);
    }
    return out;
}

std::vector<double> field_value_batch(const FieldSample& sample,
                                      std::span<const double> grid) {
    return field_eval_batch(sample, grid, EvalTarget::Value);
}

double deriv_sup_bound(const PrimeBand& band, int order) {
    if (order < 1 || order > 3) {
        throw argument_error("derivative bound order must be 1, 2 or 3, got " +
                             std::to_string(order));
    }
    NeumaierSum acc;
    for (const PrimeEntry& e : band.entries()) {
        double t = e.log_p;
        for (int j = 1; j < order; ++j) t *= e.log_p;
        acc.add(t * e.inv_sqrt_p);
    }
    return acc.value();
}

double variance_derivative(const PrimeBand& band) {
    NeumaierSum acc;
    for (const PrimeEntry& e : band.entries()) {
        acc.add(0.5 * e.log_p * e.log_p / static_cast<double>(e.p));
    }
    return acc.value();
}

double default_resolution(int k) {
    return std::ldexp(1.0, -3 * k - 6);
}

CertifiedMax certified_max(const FieldSample& sample, double lo, double hi,
                           EvalTarget target, double resolution) {
    check_sample(sample);
    if (!(lo < hi)) {
        throw argument_error("certified max needs lo < hi");
    }
    if (!(resolution > 0.0)) {
        throw argument_error("certified max needs a positive resolution");
    }

    const double width = hi - lo;
    const double want = width / resolution;
    std::uint64_t n = 2;
    while (static_cast<double>(n) < want) {
        if (n > (1ULL << 31)) {
            throw resource_error("certified max grid would exceed 2^31 points");
        }
        n <<= 1;
    }
    const double step = width / static_cast<double>(n);

    const auto& entries = sample.band->entries();
    double best = 0.0;
    double best_h = lo;
    bool first = true;
    for (std::uint64_t j = 0; j <= n; ++j) {
        const double h = (j == n) ? hi : lo + static_cast<double>(j) * step;
        double val;
        if (target == EvalTarget::Value) {
            NeumaierSum acc;
            for (std::size_t i = 0; i < entries.size(); ++i) {
                const PrimeEntry& e = entries[i];
                acc.add(std::cos(sample.thetas[i] - h * e.log_p) * e.inv_sqrt_p);
            }
            val = acc.value();
        } else {
            NeumaierSum acc;
            for (std::size_t i = 0; i < entries.size(); ++i) {
                const PrimeEntry& e = entries[i];
                acc.add(std::sin(sample.thetas[i] - h * e.log_p) * e.log_p *
                        e.inv_sqrt_p);
            }
            val = acc.value();
        }
        if (first || val > best) {
            best = val;
            best_h = h;
            first = false;
        }
    }

    // The last interval can be one ulp longer than `step` when hi - lo is
    // not a binary multiple of the step.
    const double last_step = hi - (lo + static_cast<double>(n - 1) * step);
    const double cert_step = std::max(step, last_step);
    const double lipschitz =
        deriv_sup_bound(*sample.band, target == EvalTarget::Value ? 1 : 2);

    CertifiedMax out;
    out.arg_h = best_h;
    out.value = best;
    out.upper_bound = best + lipschitz * cert_step / 2.0;
    out.grid_step = cert_step;
    out.lipschitz_used = lipschitz;
    return out;
}

}  // namespace zrf
