#pragma once

#include <array>
#include <vector>

#include "quantsine/series.hpp"

namespace quantsine {

struct BiasReport {
    double bias_finite_n = 0.0;   // E(A_hat^2) - A^2 at record length N
    double bias_asymptotic = 0.0; // 4 g (A + g), the N -> inf limit
    double g_value = 0.0;
    double h_value = 0.0;
    double h_tail_estimate = 0.0; // rigorous bound on the dropped harmonic tail
    double bound_b1 = 0.0;
    double bound_b2 = 0.0;
};

// one of the 8 sign patterns (eps_U, eps_H, eps_L) applied to U, H, L against I
struct SieveSolution {
    int term_index = 0;  // 0..7, fixed enumeration order
    int eps_u = 1;
    int eps_h = 1;
    int eps_l = 1;
    bool satisfied = false;  // I + eps_u U + eps_h H + eps_l L == 0
};

// Enumerates which of the eight cosine terms of the fourth-order phase average
// C(I,U,H,L,phi) survive integration over phi. Inputs must be positive odd
// integers. Each surviving term carries coefficient +1/8.
std::array<SieveSolution, 8> diophantine_sieve(int i_idx, int u_idx, int h_idx, int l_idx);

// Quadratic error term h(A, delta, N): the phase-averaged squared error series
// collapses over odd harmonics m to (delta^2 / (2 pi^2)) sum_m S_m(gamma)^2 with
// m in {1} union {j N' +- 1} (N' = N/gcd(lambda,N), N' > 2 required; even N')
// or {1} union {2 j N' +- 1} (odd N'). Truncation honors ctrl and the result's
// dropped tail obeys |S_m| <= 2p/m.
struct HTerm {
    double value = 0.0;
    double tail_estimate = 0.0;
    std::int64_t terms_used = 0;
    bool converged = false;
};
HTerm h_term(double amp, double delta, int n_samples, int lambda,
             const SeriesControl& ctrl = {});

// The same object evaluated the slow way: the (h,k) double Bessel series with
// the inner harmonic sum rewritten as (J0(R) - J0(Rbar))/4 and the coherent
// (i,u) average collapsed by difference index. Truncated at k_max in each of
// h and k; kept as an independent diagnostic for small configurations.
double h_term_j0_reference(double amp, double delta, int n_samples, int lambda,
                           int k_max);

BiasReport bias_finite_n(double amp, double delta, int n_samples, int lambda,
                         const SeriesControl& ctrl = {});

double bias_asymptotic(double amp, double delta);

// amplitude-domain bound B(A, delta) = delta^(4/3) zeta(4/3) c / (pi (2 pi A)^(1/3))
// with the Landau-style constant c = 0.7857, and the induced bias bound
// B1 = 4 A B + 4 B^2
double bound_b(double amp, double delta);
double bound_b1(double amp, double delta);

// envelope bound at the p-th minima abscissa: 4 (p - 1/2) delta * g_min_envelope(p)
double bound_b2(double delta, int p);

// E((A_hat^2)^2) in the N -> inf limit: (A^2 + 4 A g + 4 g^2)^2
double asymptotic_second_moment(double amp, double delta);

// delta-method amplitude mean: E(A_hat) ~ sqrt(m) - v / (8 m^(3/2)) for
// m = E(A_hat^2) > 0, v = Var(A_hat^2) >= 0
double amp_bias_delta_method(double mean_amp_sq, double var_amp_sq);

}  // namespace quantsine
