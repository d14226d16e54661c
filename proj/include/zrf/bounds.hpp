// Closed-form side of the toolkit: the modified Bessel MGFs, the log-MGF
// expansion, Chernoff parameters, the tail/continuity bound family, the
// discretization grid, and the gap-theorem bound.
//
// Every bound evaluator hard-rejects inputs outside its stated hypothesis
// box instead of extrapolating.  All functions here are pure.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace zrf {

// Modified Bessel function of the first kind, order zero, by power series
// with term recurrence t_{j+1} = t_j (u^2/4) / (j+1)^2.  |u| <= 700.
double bessel_i0(double u);

// I0(u) - 1 by the same series (accurate near zero).
double bessel_i0_minus_one(double u);

// log I0(u) without cancellation near zero.
double log_bessel_i0(double u);

// Two-term log-MGF expansion u^2/4 - u^4/64, valid for |u| < 1; the
// remainder is O(u^6).
double log_i0_expansion(double u);

// Periodic trapezoid rule for (1/2pi) \int_0^{2pi} exp(a cos t + b sin t) dt.
// Converges geometrically for this integrand; 2048 nodes give ~1e-13.
double circular_quadrature(double a, double b, int nodes = 2048);

// (quadrature value, series I0(sqrt(a^2+b^2))) -- the two sides of the
// circular moment identity.  Requires a^2 + b^2 <= 700^2.
std::pair<double, double> circular_mgf_identity_check(double a, double b);

// One-prime MGF of the derivative at a point: I0(lambda log p / sqrt(p)).
double mgf_derivative_single(std::uint64_t p, double lambda);
// Same quantity by direct quadrature of exp(lambda * (log p/sqrt p) sin t).
double mgf_derivative_single_quadrature(std::uint64_t p, double lambda);

// Joint MGF of (derivative at 0, derivative increment between h1 and h2)
// for one prime:
//   I0( sqrt( (log p)^2/p * { (l1 + l2 (cos(h2 log p) - cos(h1 log p)))^2
//                            + (l2 (sin(h1 log p) - sin(h2 log p)))^2 } ) )
double mgf_derivative_joint(std::uint64_t p, double lambda1, double lambda2,
                            double h1, double h2);
// Same quantity by direct quadrature of the raw integrand (no trig
// rearrangement), used as the independent cross-check.
double mgf_derivative_joint_quadrature(std::uint64_t p, double lambda1,
                                       double lambda2, double h1, double h2);

// Hypothesis constant C and the fitted constants c, c_tilde for a band
// (r, k).  The leading and decay constants are inputs here, never asserted:
// the experiments report fitted values.
struct BoundParams {
    int r;
    int k;
    double hypothesis_c = 1.0;  // C in "0 <= x <= C (2^{2k} - 2^{2r})"
    double lead_c = 1.0;        // c
    double decay_c = 1.0;       // c~

    // 2^{2k} - 2^{2r}; must be positive for every bound below.
    double v() const;
};

// Chernoff parameter 4x / v for the one-point tail.
double chernoff_lambda1(double x, double v);
// Chernoff parameter sqrt(y) / (|h2 - h1| 2^{3k}) for the increment tail.
double chernoff_lambda2(double y, double h1, double h2, int k);

// One-point derivative tail bound: c exp(-2 x^2 / v), for 0 <= x <= C v.
double lemma41_bound(const BoundParams& params, double x);

// Continuity bound: c exp(-2 x^2 / v - c~ a^{3/2}), for 0 <= x <= C v and
// 2 <= a <= 2^{6k} - x.
double prop31_bound(const BoundParams& params, double x, double a);

// Interval-max tail bound; same closed form as lemma41_bound.
double prop32_bound(const BoundParams& params, double x);

// Joint increment bound:
// c exp(-2 x^2 / v - c~ y^{3/2} / (|h2 - h1| 2^{3k})), for 0 <= x <= C v,
// 0 <= y <= 2^{6k}, h1 != h2 both in [-2^{-3k-1}, 2^{-3k-1}].
double lemma42_bound(const BoundParams& params, double x, double y, double h1,
                     double h2);

// Equidistant discretization of [0, 1] with
// count = ceil(L sqrt(2^{2k} - 2^{2r}) sqrt(k log 2)) points.
struct GridSpec {
    int r;
    int k;
    double l_factor;            // L
    std::uint64_t count;
    std::vector<double> points;  // j / (count - 1), endpoints included
};

GridSpec build_grid(int r, int k, double l_factor);

// Probability that the continuous and discrete maxima differ by more than
// K: exp(-(k/4) (1 - e^{-K})^2 L^2).
double theorem_bound(int k, double big_k, double l_factor);

// The grid factor L(K) = 2 M / (1 - e^{-K}) that makes the gap bound work
// with margin parameter M.
double required_l(double big_k, double margin_m);

}  // namespace zrf
