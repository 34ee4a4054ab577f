#pragma once

#include <cstdint>

namespace quantsine {

enum class TailBoundMode { landau, none };

struct SeriesControl {
    double rel_tol = 1e-12;
    double abs_tol = 1e-15;
    std::int64_t max_terms = 1000000;
    TailBoundMode tail_bound_mode = TailBoundMode::landau;
};

// result of a truncated series evaluation with an honest tail report:
// converged implies tail_estimate <= max(abs_tol, rel_tol * |value|)
struct GSum {
    double value = 0.0;
    double tail_estimate = 0.0;
    std::int64_t terms_used = 0;
    bool converged = false;
};

// J_n(x) for integer n >= 0 (negative n throws). Accurate to about
// 1e-12 * max(1, |J_n|). Power series for |x| <= 12, a dedicated Hankel
// asymptotic path for n in {0,1} with |x| >= 16, Miller downward recurrence
// with Neumann normalization otherwise.
double bessel_j(int n, double x);

// zeta(s) for real s > 1 by Euler-Maclaurin; riemann_zeta_4_3 is the frozen
// constant the amplitude bound needs.
double riemann_zeta(double s);
double riemann_zeta_4_3();

// The quantization-bias kernel g(A, delta) = (delta/pi) sum_k ((-1)^k/k) J_1(2 pi k gamma),
// gamma = A/delta, in three algebraically independent evaluations.

// direct Bessel sum with a certified analytic tail (Hankel wave + oscillatory
// Lerch remainders); ctrl.tail_bound_mode == landau additionally reports the
// coarse |J_1| <= c/x^(1/3) truncation bound in tail_estimate when it dominates
GSum g_series(double amp, double delta, const SeriesControl& ctrl = {});

// finite closed form (delta/pi) * { -pi gamma/2 + 2 sum_{k=1..p} sqrt(gamma^2-(k-1/2)^2)/gamma },
// p = floor(gamma + 1/2); exact -A/2 in the sub-bin regime p = 0
double g_closed(double amp, double delta);

// region-decomposition form: code steps of floor(-gamma cos a + 1/2) on [0, pi]
// accumulated region by region; same function, different rounding path
double g_gray(double amp, double delta);

// S_n(gamma) = sum_k ((-1)^k/k) J_n(2 pi gamma k) for odd n, as the exact finite
// sum -(gamma pi/2) [n==1] + (2/n) sum_{j=1..p} cos(n arcsin((j-1/2)/gamma))
double sum_sn(int n, double gamma);

// dg/dA from the closed form; diverges to +inf at left cell edges
// A = (p - 1/2) delta, throws std::domain_error within 1e-9*delta of one
double g_derivative(double amp, double delta);

// value of g at the minima abscissas A = (p - 1/2) delta:
// (1/2 - p) delta/2 + (2 delta/pi) sum_{k=1..p-1} sqrt(1 - ((k-1/2)/(p-1/2))^2).
// p = 0 gives the sub-bin extreme +delta/4, p = 1 gives -delta/4.
double g_min_envelope(int p, double delta);

// oscillatory tail sum L_s(beta, K) = sum_{k > K} k^{-s} e^{i beta k} used by the
// g_series remainder; exposed for validation against reference values
void lerch_tail(double s, double beta, std::int64_t K, double& re, double& im);

}  // namespace quantsine
