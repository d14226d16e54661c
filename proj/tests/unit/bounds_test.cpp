#include <cmath>
#include <vector>

#include "doctest.h"
#include "zrf/bounds.hpp"
#include "zrf/errors.hpp"
#include "zrf/rng.hpp"
#include "zrf/sum.hpp"

namespace {

struct TestRng {
    std::uint64_t state;
    double uniform() { return zrf::unit_double(zrf::mix64(++state * zrf::kGolden)); }
};

}  // namespace

TEST_CASE("Bessel I0: frozen values, cross-checked against quadrature") {
    CHECK(zrf::bessel_i0(0.0) == 1.0);
    CHECK(zrf::bessel_i0(0.5) == doctest::Approx(1.0634833707413236).epsilon(1e-14));
    const double u = std::log(2.0) / std::sqrt(2.0);
    CHECK(zrf::bessel_i0(u) == doctest::Approx(1.0609643659870815).epsilon(1e-14));
    CHECK(zrf::bessel_i0(5.0) == doctest::Approx(27.239871823604446).epsilon(1e-14));
    for (const double x : {0.5, u, 2.0, 5.0}) {
        CHECK(zrf::bessel_i0(x) ==
              doctest::Approx(zrf::circular_quadrature(x, 0.0)).epsilon(1e-13));
        CHECK(zrf::bessel_i0(x) ==
              doctest::Approx(std::cyl_bessel_i(0.0, x)).epsilon(1e-12));
        CHECK(zrf::bessel_i0(-x) == zrf::bessel_i0(x));
    }
    CHECK(std::isfinite(zrf::bessel_i0(700.0)));
    CHECK_THROWS_AS(zrf::bessel_i0(700.5), zrf::argument_error);
    CHECK_THROWS_AS(zrf::bessel_i0(-701.0), zrf::argument_error);
}

TEST_CASE("log I0 expansion: arithmetic and domain") {
    CHECK(zrf::log_i0_expansion(0.0) == 0.0);
    CHECK(zrf::log_i0_expansion(0.1) ==
          doctest::Approx(0.0025 - 1.5625e-6).epsilon(1e-15));
    CHECK_THROWS_AS(zrf::log_i0_expansion(1.0), zrf::argument_error);
    CHECK_THROWS_AS(zrf::log_i0_expansion(-1.2), zrf::argument_error);
}

TEST_CASE("log I0 expansion remainder is O(u^6) with a stable constant") {
    // remainder / u^6 approaches 1/576 as u -> 0 and shrinks towards 0.9
    double sup_series = 0.0;
    double sup_quad = 0.0;
    for (double u = 0.05; u <= 0.9 + 1e-12; u += 0.0025) {
        const double poly = zrf::log_i0_expansion(u);
        const double u6 = std::pow(u, 6.0);
        sup_series =
            std::max(sup_series, std::abs(zrf::log_bessel_i0(u) - poly) / u6);
        sup_quad = std::max(
            sup_quad,
            std::abs(std::log(zrf::circular_quadrature(0.0, u)) - poly) / u6);
    }
    // recorded from this sweep; both routes sit just under 1/576
    CHECK(sup_series == doctest::Approx(0.0017355518).epsilon(1e-6));
    CHECK(sup_series < 1.0 / 576.0);
    CHECK(sup_series > 0.99 / 576.0);
    CHECK(std::abs(sup_series - sup_quad) <= 0.01 * sup_series);

    // the sweep remainder at u = 0.5 bounds |log I0(0.5) - expansion|
    CHECK(std::abs(zrf::log_bessel_i0(0.5) - zrf::log_i0_expansion(0.5)) <=
          sup_series * std::pow(0.5, 6.0));
}

TEST_CASE("one-prime MGF examples") {
    CHECK(zrf::mgf_derivative_single(2, 0.0) == 1.0);
    CHECK(zrf::mgf_derivative_single(2, 1.0) ==
          doctest::Approx(1.0609643659870815).epsilon(1e-14));
    CHECK(zrf::mgf_derivative_single(10007, 1.0) ==
          doctest::Approx(1.0021207212253702).epsilon(1e-12));
    CHECK(zrf::mgf_derivative_single(10007, 1.0) ==
          doctest::Approx(zrf::mgf_derivative_single_quadrature(10007, 1.0))
              .epsilon(1e-12));
}

TEST_CASE("joint MGF reduces exactly to the univariate one") {
    // lambda2 = 0
    CHECK(zrf::mgf_derivative_joint(3, 1.7, 0.0, 0.01, 0.02) ==
          zrf::mgf_derivative_single(3, 1.7));
    // h1 == h2
    CHECK(zrf::mgf_derivative_joint(3, 1.7, 2.5, 0.013, 0.013) ==
          zrf::mgf_derivative_single(3, 1.7));
}

TEST_CASE("joint MGF agrees with the raw quadrature") {
    CHECK(zrf::mgf_derivative_joint(3, 1.0, 2.0, 0.0, 0.01) ==
          doctest::Approx(zrf::mgf_derivative_joint_quadrature(3, 1.0, 2.0, 0.0, 0.01))
              .epsilon(1e-11));
}

TEST_CASE("MGF identity holds over random draws in the hypothesis box") {
    TestRng rng{2024};
    const std::vector<std::uint64_t> primes{2,   3,    5,    17,   97,
                                            997, 4999, 7919, 99991};
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t p = primes[static_cast<std::size_t>(
            rng.uniform() * static_cast<double>(primes.size()))];
        const double w =
            std::log(static_cast<double>(p)) / std::sqrt(static_cast<double>(p));
        const double lambda = 5.0 * rng.uniform() / w;  // keeps the argument <= 5
        const double series = zrf::mgf_derivative_single(p, lambda);
        const double quad = zrf::mgf_derivative_single_quadrature(p, lambda);
        CHECK(std::abs(series - quad) <= 1e-10);
    }
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t p = primes[static_cast<std::size_t>(
            rng.uniform() * static_cast<double>(primes.size()))];
        const int k = 1 + static_cast<int>(rng.uniform() * 4.0);
        const double half = std::ldexp(1.0, -3 * k - 1);
        const double h1 = half * (2.0 * rng.uniform() - 1.0);
        double h2 = half * (2.0 * rng.uniform() - 1.0);
        if (h2 == h1) h2 = 0.5 * (h1 + half);
        const double lambda1 = 4.0 * rng.uniform();
        const double lambda2 = rng.uniform() / std::abs(h2 - h1);
        const double series = zrf::mgf_derivative_joint(p, lambda1, lambda2, h1, h2);
        const double quad =
            zrf::mgf_derivative_joint_quadrature(p, lambda1, lambda2, h1, h2);
        CHECK(std::abs(series - quad) <= 1e-10);
    }
}

TEST_CASE("empirical MGF converges to the Bessel value") {
    // p = 2, lambda = 1: mean of exp(W'(0)) over 1e6 phase draws
    const double w = std::log(2.0) / std::sqrt(2.0);
    const std::size_t n = 1000000;
    zrf::NeumaierSum sum, sum_sq;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double value = std::exp(w * std::sin(zrf::phase_from(321, i)));
        sum.add(value);
        sum_sq.add(value * value);
    }
    const auto nd = static_cast<double>(n);
    const double mean = sum.value() / nd;
    const double sd = std::sqrt((sum_sq.value() - nd * mean * mean) / (nd - 1));
    CHECK(std::abs(mean - zrf::bessel_i0(w)) <= 5.0 * sd / std::sqrt(nd));
}

TEST_CASE("circular identity examples and radial symmetry") {
    const auto [q0, s0] = zrf::circular_mgf_identity_check(0.0, 0.0);
    CHECK(q0 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s0 == 1.0);
    const auto [q34, s34] = zrf::circular_mgf_identity_check(3.0, 4.0);
    CHECK(s34 == doctest::Approx(27.239871823604446).epsilon(1e-14));
    CHECK(std::abs(q34 - s34) <= 1e-10);
    const auto [q43, s43] = zrf::circular_mgf_identity_check(4.0, 3.0);
    const auto [qn, sn] = zrf::circular_mgf_identity_check(-3.0, 4.0);
    CHECK(s43 == s34);
    CHECK(sn == s34);
    CHECK(std::abs(q43 - s34) <= 1e-10);
    CHECK(std::abs(qn - s34) <= 1e-10);
}

TEST_CASE("Chernoff parameters") {
    CHECK(zrf::chernoff_lambda1(0.0, 3.75) == 0.0);
    CHECK(zrf::chernoff_lambda1(255.75, 255.75) == 4.0);
    CHECK(zrf::chernoff_lambda1(10.0, 3.75) == doctest::Approx(10.0 + 2.0 / 3.0));
    CHECK_THROWS_AS(zrf::chernoff_lambda1(1.0, 0.0), zrf::argument_error);

    CHECK(zrf::chernoff_lambda2(0.0, 0.0, 1e-3, 3) == 0.0);
    const double step = std::ldexp(1.0, -9);  // 2^{-3k} for k = 3
    CHECK(zrf::chernoff_lambda2(1.0, 0.0, step, 3) == doctest::Approx(1.0));
    CHECK(zrf::chernoff_lambda2(4.0, 0.0, step / 2.0, 3) == doctest::Approx(4.0));
    CHECK_THROWS_AS(zrf::chernoff_lambda2(1.0, 0.1, 0.1, 3), zrf::argument_error);
}

TEST_CASE("bound family: frozen arithmetic") {
    zrf::BoundParams p4{-1, 4, 1.0, 1.0, 1.0};
    CHECK(p4.v() == 255.75);
    CHECK(zrf::lemma41_bound(p4, 0.0) == 1.0);
    CHECK(zrf::lemma41_bound(p4, 16.0) ==
          doctest::Approx(0.13507095659565049).epsilon(1e-14));

    zrf::BoundParams p1{-1, 1, 1.0, 1.0, 1.0};
    CHECK(zrf::prop31_bound(p1, 0.0, 2.0) ==
          doctest::Approx(0.059105746561956225).epsilon(1e-14));

    zrf::BoundParams p2{-1, 2, 1.0, 1.0, 1.0};
    CHECK(p2.v() == 15.75);
    CHECK(zrf::prop32_bound(p2, 6.0) ==
          doctest::Approx(0.01034317319661825).epsilon(1e-14));
    CHECK(zrf::prop32_bound(p2, 6.0) == zrf::lemma41_bound(p2, 6.0));

    zrf::BoundParams p3{-1, 3, 1.0, 1.0, 1.0};
    const double half = std::ldexp(1.0, -10);
    CHECK(zrf::lemma42_bound(p3, 0.0, 1.0, -half, half) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    // y = 0 reduces to the one-point bound
    CHECK(zrf::lemma42_bound(p3, 2.0, 0.0, -half, half) ==
          zrf::lemma41_bound(p3, 2.0));
}

TEST_CASE("bound family: factorization and monotonicity") {
    zrf::BoundParams params{-1, 3, 1.0, 0.7, 1.3};
    for (const double x : {0.0, 1.0, 5.0}) {
        for (const double a : {2.0, 3.5, 6.0}) {
            CHECK(zrf::prop31_bound(params, x, a) ==
                  doctest::Approx(zrf::lemma41_bound(params, x) *
                                  std::exp(-params.decay_c * std::pow(a, 1.5)))
                      .epsilon(1e-14));
        }
    }
    // strictly decreasing in x
    double prev = zrf::lemma41_bound(params, 0.0);
    for (double x = 0.5; x <= 10.0; x += 0.5) {
        const double cur = zrf::lemma41_bound(params, x);
        CHECK(cur < prev);
        prev = cur;
    }
    // halving |h2 - h1| strictly decreases the joint bound for y > 0
    const double half = std::ldexp(1.0, -10);
    const double wide = zrf::lemma42_bound(params, 1.0, 2.0, -half, half);
    const double narrow = zrf::lemma42_bound(params, 1.0, 2.0, -half / 2, half / 2);
    CHECK(narrow < wide);
    // all evaluators positive and <= c
    CHECK(wide > 0.0);
    CHECK(wide <= params.lead_c);
}

TEST_CASE("bound family: hypothesis boxes are hard-rejected") {
    zrf::BoundParams params{-1, 2, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(zrf::lemma41_bound(params, -0.1), zrf::argument_error);
    try {
        zrf::lemma41_bound(params, 15.76);  // just past C*v
        FAIL("x above C*v accepted");
    } catch (const zrf::argument_error& e) {
        CHECK(std::string(e.what()).find("C*v") != std::string::npos);
    }
    CHECK(zrf::lemma41_bound(params, 15.75) > 0.0);  // boundary accepted

    CHECK_THROWS_AS(zrf::prop31_bound(params, 1.0, 1.99), zrf::argument_error);
    const double a_cap = std::exp2(12.0) - 1.0;
    CHECK(zrf::prop31_bound(params, 1.0, a_cap) >= 0.0);  // boundary accepted
    CHECK_THROWS_AS(zrf::prop31_bound(params, 1.0, a_cap + 1.0), zrf::argument_error);

    const double half = std::ldexp(1.0, -7);
    CHECK_THROWS_AS(zrf::lemma42_bound(params, 1.0, -1.0, -half, half),
                    zrf::argument_error);
    CHECK_THROWS_AS(zrf::lemma42_bound(params, 1.0, std::exp2(12.0) + 1.0, -half, half),
                    zrf::argument_error);
    CHECK_THROWS_AS(zrf::lemma42_bound(params, 1.0, 1.0, half, half),
                    zrf::argument_error);
    CHECK_THROWS_AS(zrf::lemma42_bound(params, 1.0, 1.0, -half, 2.0 * half),
                    zrf::argument_error);

    zrf::BoundParams degenerate{2, 2, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(zrf::lemma41_bound(degenerate, 0.0), zrf::argument_error);
    zrf::BoundParams bad_c{-1, 2, 0.0, 1.0, 1.0};
    CHECK_THROWS_AS(zrf::lemma41_bound(bad_c, 0.0), zrf::argument_error);
}

TEST_CASE("grid: frozen counts and contract") {
    const zrf::GridSpec g1 = zrf::build_grid(-1, 4, 2.0);
    CHECK(g1.count == 54);
    const zrf::GridSpec g2 = zrf::build_grid(-1, 10, 1.0);
    CHECK(g2.count == 2696);

    for (const zrf::GridSpec* g : {&g1, &g2}) {
        REQUIRE(g->points.size() == g->count);
        CHECK(g->points.front() == 0.0);
        CHECK(g->points.back() == 1.0);
        const auto count = static_cast<double>(g->count);
        for (std::size_t j = 1; j < g->points.size(); ++j) {
            const double spacing = g->points[j] - g->points[j - 1];
            CHECK(spacing >= 1.0 / count);              // separation
            CHECK(spacing / 2.0 <= 2.0 / count);        // covering radius
        }
    }

    CHECK_THROWS_AS(zrf::build_grid(2, 2, 1.0), zrf::argument_error);
    CHECK_THROWS_AS(zrf::build_grid(-1, 3, 0.0), zrf::argument_error);
    CHECK_THROWS_AS(zrf::build_grid(-1, 1, 0.05), zrf::argument_error);  // count < 2
}

TEST_CASE("gap theorem bound: frozen arithmetic and limits") {
    CHECK(zrf::theorem_bound(4, 2.0, 2.0) ==
          doctest::Approx(0.050258263909090883).epsilon(1e-14));
    CHECK(zrf::theorem_bound(3, 2.0, 1.755) ==
          doctest::Approx(0.17780387968764955).epsilon(1e-14));
    // K -> 0+ sends the bound to 1
    CHECK(zrf::theorem_bound(4, 1e-9, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("required grid factor round trip") {
    CHECK(zrf::required_l(2.0, 1.0) ==
          doctest::Approx(2.3130352854993315).epsilon(1e-14));
    const double big_k = 2.0;
    const double l = 2.0;
    const double margin = 0.5 * (1.0 - std::exp(-big_k)) * l;
    CHECK(zrf::required_l(big_k, margin) == doctest::Approx(l).epsilon(1e-14));
    // K -> infinity leaves 2M
    CHECK(zrf::required_l(700.0, 1.5) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK_THROWS_AS(zrf::required_l(0.0, 1.0), zrf::argument_error);
}
