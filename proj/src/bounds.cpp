#include "zrf/bounds.hpp"

#include <cmath>
#include <string>

#include "zrf/errors.hpp"
#include "zrf/primes.hpp"
#include "zrf/sum.hpp"

namespace zrf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kMaxBesselArg = 700.0;

void check_bessel_arg(double u) {
    if (!(std::abs(u) <= kMaxBesselArg)) {
        throw argument_error("Bessel I0 argument |" + std::to_string(u) +
                             "| exceeds the overflow guard " +
                             std::to_string(kMaxBesselArg));
    }
}

double i0_series_tail(double u) {
    // sum_{j>=1} (u^2/4)^j / (j!)^2
    const double q = u * u / 4.0;
    double term = q;
    NeumaierSum acc;
    acc.add(term);
    for (int j = 1; term >= 1e-17 * (1.0 + acc.value()); ++j) {
        term *= q / (static_cast<double>(j + 1) * static_cast<double>(j + 1));
        acc.add(term);
    }
    return acc.value();
}

}  // namespace

double bessel_i0(double u) {
    check_bessel_arg(u);
    if (u == 0.0) return 1.0;
    return 1.0 + i0_series_tail(u);
}

double bessel_i0_minus_one(double u) {
    check_bessel_arg(u);
    if (u == 0.0) return 0.0;
    return i0_series_tail(u);
}

double log_bessel_i0(double u) { return std::log1p(bessel_i0_minus_one(u)); }

double log_i0_expansion(double u) {
    if (!(std::abs(u) < 1.0)) {
        throw argument_error("log I0 expansion needs |u| < 1, got " +
                             std::to_string(u));
    }
    const double u2 = u * u;
    return u2 / 4.0 - u2 * u2 / 64.0;
}

double circular_quadrature(double a, double b, int nodes) {
    if (nodes < 8) throw argument_error("circular quadrature needs >= 8 nodes");
    if (!(std::hypot(a, b) <= kMaxBesselArg)) {
        throw argument_error("circular quadrature arguments exceed the overflow guard");
    }
    NeumaierSum acc;
    for (int j = 0; j < nodes; ++j) {
        const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(nodes);
        acc.add(std::exp(a * std::cos(t) + b * std::sin(t)));
    }
    return acc.value() / static_cast<double>(nodes);
}

std::pair<double, double> circular_mgf_identity_check(double a, double b) {
    const double radius = std::hypot(a, b);
    check_bessel_arg(radius);
    return {circular_quadrature(a, b), bessel_i0(radius)};
}

namespace {

double weight(std::uint64_t p) {
    const auto pd = static_cast<double>(p);
    return std::log(pd) / std::sqrt(pd);
}

}  // namespace

double mgf_derivative_single(std::uint64_t p, double lambda) {
    return bessel_i0(lambda * weight(p));
}

double mgf_derivative_single_quadrature(std::uint64_t p, double lambda) {
    return circular_quadrature(0.0, lambda * weight(p));
}

double mgf_derivative_joint(std::uint64_t p, double lambda1, double lambda2,
                            double h1, double h2) {
    const auto pd = static_cast<double>(p);
    const double lp = std::log(pd);
    const double w = lp / std::sqrt(pd);
    const double b = lambda1 + lambda2 * (std::cos(h2 * lp) - std::cos(h1 * lp));
    const double a = lambda2 * (std::sin(h1 * lp) - std::sin(h2 * lp));
    return bessel_i0(w * std::hypot(a, b));
}

double mgf_derivative_joint_quadrature(std::uint64_t p, double lambda1,
                                       double lambda2, double h1, double h2) {
    const auto pd = static_cast<double>(p);
    const double lp = std::log(pd);
    const double w = lp / std::sqrt(pd);
    constexpr int nodes = 2048;
    NeumaierSum acc;
    for (int j = 0; j < nodes; ++j) {
        const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(nodes);
        const double arg = lambda1 * std::sin(t) +
                           lambda2 * (std::sin(t - h2 * lp) - std::sin(t - h1 * lp));
        acc.add(std::exp(w * arg));
    }
    return acc.value() / static_cast<double>(nodes);
}

double BoundParams::v() const {
    if (r < -1 || r >= k) {
        throw argument_error("bound params need -1 <= r < k, got r=" +
                             std::to_string(r) + " k=" + std::to_string(k));
    }
    if (!(hypothesis_c > 0.0) || !(lead_c > 0.0) || !(decay_c > 0.0)) {
        throw argument_error("bound constants must be strictly positive");
    }
    return band_scale(r, k);
}

double chernoff_lambda1(double x, double v) {
    if (!(v > 0.0)) {
        throw argument_error("chernoff lambda1 needs v > 0, got v=" + std::to_string(v));
    }
    return 4.0 * x / v;
}

double chernoff_lambda2(double y, double h1, double h2, int k) {
    if (h1 == h2) throw argument_error("chernoff lambda2 needs h1 != h2");
    if (!(y >= 0.0)) throw argument_error("chernoff lambda2 needs y >= 0");
    return std::sqrt(y) / (std::abs(h2 - h1) * std::exp2(3.0 * k));
}

namespace {

void check_x_hypothesis(const BoundParams& params, double v, double x) {
    const double cap = params.hypothesis_c * v;
    if (!(x >= 0.0) || !(x <= cap)) {
        throw argument_error("x=" + std::to_string(x) + " outside [0, C*v=" +
                             std::to_string(cap) + "]");
    }
}

}  // namespace

double lemma41_bound(const BoundParams& params, double x) {
    const double v = params.v();
    check_x_hypothesis(params, v, x);
    return params.lead_c * std::exp(-2.0 * x * x / v);
}

double prop31_bound(const BoundParams& params, double x, double a) {
    const double v = params.v();
    check_x_hypothesis(params, v, x);
    const double a_cap = std::exp2(6.0 * params.k) - x;
    if (!(a >= 2.0) || !(a <= a_cap)) {
        throw argument_error("a=" + std::to_string(a) + " outside [2, 2^{6k}-x=" +
                             std::to_string(a_cap) + "]");
    }
    return params.lead_c *
           std::exp(-2.0 * x * x / v - params.decay_c * std::pow(a, 1.5));
}

double prop32_bound(const BoundParams& params, double x) {
    const double v = params.v();
    check_x_hypothesis(params, v, x);
    return params.lead_c * std::exp(-2.0 * x * x / v);
}

double lemma42_bound(const BoundParams& params, double x, double y, double h1,
                     double h2) {
    const double v = params.v();
    check_x_hypothesis(params, v, x);
    const double y_cap = std::exp2(6.0 * params.k);
    if (!(y >= 0.0) || !(y <= y_cap)) {
        throw argument_error("y=" + std::to_string(y) + " outside [0, 2^{6k}=" +
                             std::to_string(y_cap) + "]");
    }
    const double half = std::exp2(-3.0 * params.k - 1.0);
    if (!(std::abs(h1) <= half) || !(std::abs(h2) <= half)) {
        throw argument_error("h1, h2 must lie in [-2^{-3k-1}, 2^{-3k-1}]");
    }
    if (h1 == h2) throw argument_error("h1 and h2 must be distinct");
    const double decay =
        params.decay_c * std::pow(y, 1.5) / (std::abs(h2 - h1) * std::exp2(3.0 * params.k));
    return params.lead_c * std::exp(-2.0 * x * x / v - decay);
}

GridSpec build_grid(int r, int k, double l_factor) {
    if (r < -1 || r >= k) {
        throw argument_error("grid needs -1 <= r < k, got r=" + std::to_string(r) +
                             " k=" + std::to_string(k));
    }
    if (!(l_factor > 0.0)) throw argument_error("grid needs L > 0");
    const double v = band_scale(r, k);
    const double raw =
        l_factor * std::sqrt(v) * std::sqrt(static_cast<double>(k) * std::log(2.0));
    const double count_d = std::ceil(raw);
    if (!(count_d >= 2.0)) {
        throw argument_error("grid count " + std::to_string(count_d) +
                             " is below 2; increase L");
    }
    if (count_d > 1e8) {
        throw resource_error("grid count " + std::to_string(count_d) +
                             " exceeds 1e8 points");
    }
    GridSpec spec;
    spec.r = r;
    spec.k = k;
    spec.l_factor = l_factor;
    spec.count = static_cast<std::uint64_t>(count_d);
    spec.points.resize(spec.count);
    const auto denom = static_cast<double>(spec.count - 1);
    for (std::uint64_t j = 0; j < spec.count; ++j) {
        spec.points[j] = static_cast<double>(j) / denom;
    }
    return spec;
}

double theorem_bound(int k, double big_k, double l_factor) {
    if (k < 1) throw argument_error("theorem bound needs k >= 1");
    if (!(big_k > 0.0)) throw argument_error("theorem bound needs K > 0");
    if (!(l_factor > 0.0)) throw argument_error("theorem bound needs L > 0");
    const double m = 1.0 - std::exp(-big_k);
    return std::exp(-0.25 * static_cast<double>(k) * m * m * l_factor * l_factor);
}

double required_l(double big_k, double margin_m) {
    if (!(big_k > 0.0)) throw argument_error("required L needs K > 0");
    if (!(margin_m > 0.0)) throw argument_error("required L needs M > 0");
    return 2.0 * margin_m / (1.0 - std::exp(-big_k));
}

}  // namespace zrf
