#include <cmath>
#include <vector>

#include "doctest.h"
#include "zrf/errors.hpp"
#include "zrf/field.hpp"
#include "zrf/rng.hpp"
#include "zrf/sum.hpp"

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// A one-prime band with a chosen phase, for hand-checkable values.
struct SinglePrime {
    zrf::PrimeBand band;
    zrf::FieldSample sample;

    SinglePrime(std::uint64_t p, double theta)
        : band(-1, 1,
               {{p, std::log(static_cast<double>(p)),
                 1.0 / std::sqrt(static_cast<double>(p))}}) {
        sample.band = &band;
        sample.thetas = {theta};
        sample.seed = 0;
    }
};

}  // namespace

TEST_CASE("sampling is deterministic and in range") {
    const zrf::PrimeBand band = zrf::build_band(-1, 1);
    const zrf::FieldSample a = zrf::sample_field(band, 42);
    const zrf::FieldSample b = zrf::sample_field(band, 42);
    CHECK(a.thetas == b.thetas);
    CHECK(a.thetas.size() == band.size());
    for (const double t : a.thetas) {
        CHECK(t >= 0.0);
        CHECK(t < kTwoPi);
    }
    const zrf::FieldSample c = zrf::sample_field(band, 43);
    CHECK(a.thetas != c.thetas);
}

TEST_CASE("empty band evaluates to zero everywhere") {
    const zrf::PrimeBand band = zrf::build_band(2, 2);
    const zrf::FieldSample s = zrf::sample_field(band, 7);
    CHECK(s.thetas.empty());
    CHECK(zrf::field_value(s, 0.3) == 0.0);
    CHECK(zrf::field_derivative(s, 0.3) == 0.0);
    const zrf::CertifiedMax cm =
        zrf::certified_max(s, 0.0, 1.0, zrf::EvalTarget::Value, 1e-3);
    CHECK(cm.value == 0.0);
    CHECK(cm.upper_bound == 0.0);
}

TEST_CASE("one-prime hand values") {
    // cos(pi/2)/sqrt(2) = 0
    const SinglePrime zero(2, kTwoPi / 4.0);
    CHECK(std::abs(zrf::field_value(zero.sample, 0.0)) < 1e-16);
    // sin(pi/2) ln2 / sqrt2
    CHECK(zrf::field_derivative(zero.sample, 0.0) ==
          doctest::Approx(std::log(2.0) / std::sqrt(2.0)).epsilon(1e-14));

    // theta = 0, h = 1: cos(-ln 2)/sqrt(2) = 0.54393404...
    const SinglePrime flat(2, 0.0);
    CHECK(zrf::field_value(flat.sample, 1.0) ==
          doctest::Approx(0.5439340435069544).epsilon(1e-15));
}

TEST_CASE("per-coordinate phase means vanish over many seeds") {
    const zrf::PrimeBand band = zrf::build_band(-1, 3);
    const std::size_t n_seeds = 10000;
    std::vector<zrf::NeumaierSum> acc(band.size());
    for (std::uint64_t seed = 1; seed <= n_seeds; ++seed) {
        for (std::size_t i = 0; i < band.size(); ++i) {
            acc[i].add(std::cos(zrf::phase_from(seed, i)));
        }
    }
    const double tol = 4.0 / std::sqrt(static_cast<double>(n_seeds));
    for (auto& a : acc) {
        CHECK(std::abs(a.value() / static_cast<double>(n_seeds)) < tol);
    }
}

TEST_CASE("batch evaluation equals the pointwise loop") {
    const zrf::PrimeBand small = zrf::build_band(-1, 2);
    const zrf::FieldSample s = zrf::sample_field(small, 5);
    std::vector<double> grid(4097);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        grid[j] = static_cast<double>(j) / 4096.0;
    }
    const std::vector<double> batch = zrf::field_value_batch(s, grid);
    REQUIRE(batch.size() == grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        CHECK(batch[j] == zrf::field_value(s, grid[j]));
    }

    const zrf::PrimeBand big = zrf::build_band(-1, 4);
    const zrf::FieldSample sb = zrf::sample_field(big, 5);
    std::vector<double> coarse(33);
    for (std::size_t j = 0; j < coarse.size(); ++j) {
        coarse[j] = static_cast<double>(j) / 32.0;
    }
    const std::vector<double> batch_big = zrf::field_value_batch(sb, coarse);
    for (std::size_t j = 0; j < coarse.size(); ++j) {
        CHECK(batch_big[j] == zrf::field_value(sb, coarse[j]));
    }

    CHECK(zrf::field_value_batch(s, std::vector<double>{}).empty());
    CHECK(zrf::field_value_batch(s, std::vector<double>{0.25}) ==
          std::vector<double>{zrf::field_value(s, 0.25)});
}

TEST_CASE("derivative bound examples") {
    const zrf::PrimeBand band = zrf::build_band(-1, 1);
    const double expected = std::log(2.0) / std::sqrt(2.0) +
                            std::log(3.0) / std::sqrt(3.0) +
                            std::log(5.0) / std::sqrt(5.0) +
                            std::log(7.0) / std::sqrt(7.0);
    CHECK(zrf::deriv_sup_bound(band, 1) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(expected == doctest::Approx(2.579).epsilon(1e-3));
    CHECK(zrf::deriv_sup_bound(zrf::build_band(2, 2), 1) == 0.0);

    const SinglePrime one(2, 0.0);
    CHECK(zrf::deriv_sup_bound(one.band, 1) ==
          doctest::Approx(std::log(2.0) / std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(zrf::deriv_sup_bound(band, 0), zrf::argument_error);
    CHECK_THROWS_AS(zrf::deriv_sup_bound(band, 4), zrf::argument_error);
}

TEST_CASE("finite differences match the derivative within the cubic bound") {
    const zrf::PrimeBand band = zrf::build_band(-1, 3);
    const double eps = 1e-6;
    const double truncation = eps * eps * zrf::deriv_sup_bound(band, 3) / 6.0;
    // Rounding of each cosine contributes on top of the truncation term;
    // sum(1/sqrt p) bounds the evaluation noise.
    zrf::NeumaierSum amp;
    for (const auto& e : band.entries()) amp.add(e.inv_sqrt_p);
    const double fp_noise = amp.value() * 0x1.0p-49 / eps;
    for (int trial = 0; trial < 100; ++trial) {
        const zrf::FieldSample s = zrf::sample_field(band, 1000 + trial);
        const double h = zrf::unit_double(zrf::substream(9, trial));
        const double fd =
            (zrf::field_value(s, h + eps) - zrf::field_value(s, h - eps)) / (2 * eps);
        CHECK(std::abs(fd - zrf::field_derivative(s, h)) <= truncation + fp_noise);
    }
}

TEST_CASE("field is additive over a band split with shared phases") {
    const zrf::PrimeBand full = zrf::build_band(-1, 3);
    const zrf::PrimeBand lo = zrf::build_band(-1, 1);
    const zrf::PrimeBand hi = zrf::build_band(1, 3);
    REQUIRE(lo.size() + hi.size() == full.size());

    const zrf::FieldSample s = zrf::sample_field(full, 77);
    zrf::FieldSample s_lo{&lo,
                          {s.thetas.begin(), s.thetas.begin() + lo.size()},
                          s.seed};
    zrf::FieldSample s_hi{&hi, {s.thetas.begin() + lo.size(), s.thetas.end()}, s.seed};
    for (const double h : {0.0, 0.25, 0.9}) {
        CHECK(zrf::field_value(s_lo, h) + zrf::field_value(s_hi, h) ==
              doctest::Approx(zrf::field_value(s, h)).epsilon(1e-13));
        CHECK(zrf::field_derivative(s_lo, h) + zrf::field_derivative(s_hi, h) ==
              doctest::Approx(zrf::field_derivative(s, h)).epsilon(1e-13));
    }
}

TEST_CASE("certified max on a one-prime field matches calculus") {
    // cos(h ln 2)/sqrt 2 decreases on [0,1]; max at h = 0.
    const SinglePrime one(2, 0.0);
    const zrf::CertifiedMax cm =
        zrf::certified_max(one.sample, 0.0, 1.0, zrf::EvalTarget::Value, 1e-5);
    CHECK(cm.arg_h == 0.0);
    CHECK(cm.value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(cm.upper_bound - cm.value <=
          (std::log(2.0) / std::sqrt(2.0)) * 5e-6 * (1 + 1e-12));
    CHECK(cm.upper_bound >= cm.value);
    CHECK(cm.upper_bound - cm.value <= cm.lipschitz_used * cm.grid_step / 2);
}

TEST_CASE("certified max refinement is monotone and sound") {
    const zrf::PrimeBand band = zrf::build_band(-1, 2);
    for (int trial = 0; trial < 100; ++trial) {
        const zrf::FieldSample s = zrf::sample_field(band, 300 + trial);
        const double rho = 1e-3;
        const zrf::CertifiedMax coarse =
            zrf::certified_max(s, 0.0, 1.0, zrf::EvalTarget::Value, rho);
        const zrf::CertifiedMax fine =
            zrf::certified_max(s, 0.0, 1.0, zrf::EvalTarget::Value, rho / 2);
        CHECK(coarse.value <= fine.value);
        CHECK(fine.value <= coarse.upper_bound);

        // the certificate dominates a 10x finer grid scan
        const zrf::CertifiedMax finer =
            zrf::certified_max(s, 0.0, 1.0, zrf::EvalTarget::Value, rho / 10);
        CHECK(finer.value <= coarse.upper_bound);
    }
}

TEST_CASE("certified max argument errors") {
    const zrf::PrimeBand band = zrf::build_band(-1, 1);
    const zrf::FieldSample s = zrf::sample_field(band, 1);
    CHECK_THROWS_AS(zrf::certified_max(s, 1.0, 1.0, zrf::EvalTarget::Value, 1e-3),
                    zrf::argument_error);
    CHECK_THROWS_AS(zrf::certified_max(s, 0.0, 1.0, zrf::EvalTarget::Value, 0.0),
                    zrf::argument_error);
    CHECK_THROWS_AS(zrf::certified_max(s, 0.0, 1.0, zrf::EvalTarget::Value, -1.0),
                    zrf::argument_error);
}

TEST_CASE("variance of the derivative: direct sum and band scale") {
    const zrf::PrimeBand band = zrf::build_band(-1, 2);
    REQUIRE(band.size() == 16);
    const double var = zrf::variance_derivative(band);
    CHECK(var == doctest::Approx(3.2441050525768733).epsilon(1e-12));
    CHECK(band.scale() / 4.0 - var == doctest::Approx(0.6934).epsilon(1e-3));
    CHECK(zrf::variance_derivative(zrf::build_band(2, 2)) == 0.0);
}

TEST_CASE("empirical variance agrees with the exact sum") {
    const zrf::PrimeBand band = zrf::build_band(-1, 2);
    const double var = zrf::variance_derivative(band);
    const std::size_t n = 100000;
    zrf::NeumaierSum sum, sum_sq;
    for (std::uint64_t t = 0; t < n; ++t) {
        const zrf::FieldSample s = zrf::sample_field(band, zrf::substream(111, t));
        const double d = zrf::field_derivative(s, 0.0);
        sum.add(d);
        sum_sq.add(d * d);
    }
    const double mean = sum.value() / static_cast<double>(n);
    const double emp_var =
        (sum_sq.value() - static_cast<double>(n) * mean * mean) /
        static_cast<double>(n - 1);
    // standard error of the sample variance from the exact fourth moments:
    // Var(s^2) ~ (2 sigma^4 - (3/8) sum a_p^4) / n
    zrf::NeumaierSum quartic;
    for (const auto& e : band.entries()) {
        const double a2 = e.log_p * e.log_p / static_cast<double>(e.p);
        quartic.add(a2 * a2);
    }
    const double se = std::sqrt(
        (2.0 * var * var - 0.375 * quartic.value()) / static_cast<double>(n));
    CHECK(std::abs(emp_var - var) <= 4.0 * se);
}

TEST_CASE("law is invariant under translation of h") {
    const zrf::PrimeBand band = zrf::build_band(-1, 2);
    const std::size_t n = 10000;
    zrf::NeumaierSum m0, m1, v0, v1;
    for (std::uint64_t t = 0; t < n; ++t) {
        const zrf::FieldSample s = zrf::sample_field(band, zrf::substream(222, t));
        const double a = zrf::field_derivative(s, 0.0);
        const double b = zrf::field_derivative(s, 0.37);
        m0.add(a);
        m1.add(b);
        v0.add(a * a);
        v1.add(b * b);
    }
    const auto nd = static_cast<double>(n);
    const double var = zrf::variance_derivative(band);
    const double se_mean = std::sqrt(var / nd);
    CHECK(std::abs(m0.value() / nd - m1.value() / nd) <= 4.0 * se_mean * std::sqrt(2.0));
    const double se_var = std::sqrt(2.0 * var * var / nd);
    CHECK(std::abs(v0.value() / nd - v1.value() / nd) <= 4.0 * se_var * std::sqrt(2.0));
}

TEST_CASE("derivative tail is symmetric in sign") {
    const zrf::PrimeBand band = zrf::build_band(-1, 2);
    const std::size_t n = 20000;
    for (const double x : {1.0, 2.0}) {
        std::uint64_t up = 0;
        std::uint64_t down = 0;
        for (std::uint64_t t = 0; t < n; ++t) {
            const zrf::FieldSample s = zrf::sample_field(band, zrf::substream(333, t));
            const double d = zrf::field_derivative(s, 0.0);
            if (d >= x) ++up;
            if (d <= -x) ++down;
        }
        const double p_up = static_cast<double>(up) / static_cast<double>(n);
        const double p_down = static_cast<double>(down) / static_cast<double>(n);
        const double se = std::sqrt(p_up * (1 - p_up) / static_cast<double>(n));
        CHECK(std::abs(p_up - p_down) <= 4.0 * se * std::sqrt(2.0));
    }
}

TEST_CASE("mismatched sample is rejected") {
    const zrf::PrimeBand band = zrf::build_band(-1, 1);
    zrf::FieldSample s = zrf::sample_field(band, 1);
    s.thetas.pop_back();
    CHECK_THROWS_AS(zrf::field_value(s, 0.0), zrf::argument_error);
}
