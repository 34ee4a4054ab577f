#include "quantsine/fda.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "compensated.hpp"

namespace quantsine {

namespace {

constexpr double k_pi = std::numbers::pi;

void check_model(double amp, double delta, int n_samples, int lambda) {
    if (!(amp >= 0.0) || !std::isfinite(amp))
        throw std::invalid_argument("amplitude must be finite and >= 0");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("delta must be finite and > 0");
    if (n_samples < 3) throw std::invalid_argument("n_samples must be >= 3");
    if (lambda < 1) throw std::invalid_argument("lambda must be >= 1");
}

long long nearest_envelope_index(double gamma) {
    const long long p = (long long)std::llround(gamma + 0.5);
    return p < 1 ? 1 : p;
}

}  // namespace

std::array<SieveSolution, 8> diophantine_sieve(int i_idx, int u_idx, int h_idx,
                                               int l_idx) {
    for (int v : {i_idx, u_idx, h_idx, l_idx})
        if (v < 1 || v % 2 == 0)
            throw std::invalid_argument("sieve indices must be positive odd integers");
    constexpr int pat[8][3] = {
        {+1, +1, +1}, {+1, -1, -1}, {+1, +1, -1}, {+1, -1, +1},
        {-1, +1, +1}, {-1, -1, -1}, {-1, +1, -1}, {-1, -1, +1},
    };
    std::array<SieveSolution, 8> out;
    for (int t = 0; t < 8; ++t) {
        SieveSolution& s = out[t];
        s.term_index = t;
        s.eps_u = pat[t][0];
        s.eps_h = pat[t][1];
        s.eps_l = pat[t][2];
        s.satisfied =
            i_idx + s.eps_u * u_idx + s.eps_h * h_idx + s.eps_l * l_idx == 0;
    }
    return out;
}

HTerm h_term(double amp, double delta, int n_samples, int lambda,
             const SeriesControl& ctrl) {
    check_model(amp, delta, n_samples, lambda);
    const int nred = n_samples / std::gcd(lambda, n_samples);
    if (nred <= 2)
        throw std::invalid_argument(
            "reduced record length must exceed 2 for the coherent average");

    HTerm out;
    if (amp == 0.0) {
        out.converged = true;
        out.terms_used = 1;
        return out;
    }

    const double gamma = amp / delta;
    const double scale = delta * delta / (2.0 * k_pi * k_pi);
    const double s1 = sum_sn(1, gamma);
    CompSum acc;
    acc.add(s1 * s1);
    out.terms_used = 1;

    const long long p = (long long)std::floor(gamma + 0.5);
    if (p == 0) {
        // sub-bin: every S_m with m >= 3 vanishes, h = A^2/8 with no truncation
        out.value = scale * acc.value();
        out.tail_estimate = 0.0;
        out.converged = true;
        return out;
    }

    // resonant harmonics {1} U {j*base +- 1}; base is even in both branches so
    // every m is odd
    const long long base = (nred % 2 == 0) ? nred : 2ll * nred;
    // dropped-tail bound from |S_m| <= 2p/m, with p padded by one against the
    // cell-edge rounding of floor(gamma + 1/2):
    //   sum_{j' > j} S^2 terms <= 4 (p+1)^2 (1/(base-1)^2 + 1/base^2) / j
    const double tail_coef = scale * 4.0 * double(p + 1) * double(p + 1) *
                             (1.0 / (double(base - 1) * (base - 1)) +
                              1.0 / (double(base) * base));

    for (long long j = 1;; ++j) {
        if (2 * j + 1 > ctrl.max_terms || j * base + 1 > 2000000000ll) {
            out.value = scale * acc.value();
            out.tail_estimate = tail_coef / double(j - 1 > 0 ? j - 1 : 1);
            out.converged = false;
            return out;
        }
        const double lo = sum_sn(int(j * base - 1), gamma);
        const double hi = sum_sn(int(j * base + 1), gamma);
        acc.add(lo * lo + hi * hi);
        out.terms_used = 2 * j + 1;
        const double tail = tail_coef / double(j);
        const double value = scale * acc.value();
        if (tail <= std::max(ctrl.abs_tol, ctrl.rel_tol * std::abs(value))) {
            out.value = value;
            out.tail_estimate = tail;
            out.converged = true;
            return out;
        }
    }
}

double h_term_j0_reference(double amp, double delta, int n_samples, int lambda,
                           int k_max) {
    check_model(amp, delta, n_samples, lambda);
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    if (amp == 0.0) return 0.0;

    const double omega = 2.0 * k_pi * amp / delta;
    std::vector<double> z(k_max + 1);
    for (int m = 1; m <= k_max; ++m) z[m] = omega * m;

    CompSum total;
    for (int j = 0; j < n_samples; ++j) {
        const long long r = (1ll * lambda * j) % n_samples;
        const double psi = 2.0 * k_pi * double(r) / n_samples;
        const double cp = std::cos(psi);
        CompSum inner;
        for (int h = 1; h <= k_max; ++h)
            for (int k = h; k <= k_max; ++k) {
                const double cross = 2.0 * z[h] * z[k] * cp;
                const double ss = z[h] * z[h] + z[k] * z[k];
                const double r_near = std::sqrt(std::max(ss - cross, 0.0));
                const double r_far = std::sqrt(std::max(ss + cross, 0.0));
                const double sign = ((h + k) % 2 == 0) ? 1.0 : -1.0;
                double term = sign / (double(h) * k) *
                              (bessel_j(0, r_near) - bessel_j(0, r_far));
                if (k != h) term *= 2.0;
                inner.add(term);
            }
        total.add(cp * inner.value());
    }
    return delta * delta / (4.0 * k_pi * k_pi) / n_samples * total.value();
}

BiasReport bias_finite_n(double amp, double delta, int n_samples, int lambda,
                         const SeriesControl& ctrl) {
    check_model(amp, delta, n_samples, lambda);
    const double g = g_closed(amp, delta);
    const HTerm h = h_term(amp, delta, n_samples, lambda, ctrl);
    BiasReport r;
    r.g_value = g;
    r.h_value = h.value;
    r.h_tail_estimate = h.tail_estimate;
    r.bias_finite_n = 4.0 * amp * g + 8.0 * h.value;
    r.bias_asymptotic = 4.0 * g * (amp + g);
    r.bound_b1 = amp > 0.0 ? bound_b1(amp, delta)
                           : std::numeric_limits<double>::infinity();
    r.bound_b2 = bound_b2(delta, int(nearest_envelope_index(amp / delta)));
    return r;
}

double bias_asymptotic(double amp, double delta) {
    const double g = g_closed(amp, delta);
    return 4.0 * g * (amp + g);
}

double bound_b(double amp, double delta) {
    if (!(amp > 0.0) || !std::isfinite(amp))
        throw std::invalid_argument("bound requires amplitude > 0");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("delta must be finite and > 0");
    return std::pow(delta, 4.0 / 3.0) * riemann_zeta_4_3() * 0.7857 /
           (k_pi * std::cbrt(2.0 * k_pi * amp));
}

double bound_b1(double amp, double delta) {
    const double b = bound_b(amp, delta);
    return 4.0 * amp * b + 4.0 * b * b;
}

double bound_b2(double delta, int p) {
    if (p < 1) throw std::invalid_argument("envelope bound needs p >= 1");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("delta must be finite and > 0");
    return 4.0 * (double(p) - 0.5) * delta * g_min_envelope(p, delta);
}

double asymptotic_second_moment(double amp, double delta) {
    const double g = g_closed(amp, delta);
    const double m = amp * amp + 4.0 * amp * g + 4.0 * g * g;
    return m * m;
}

double amp_bias_delta_method(double mean_amp_sq, double var_amp_sq) {
    if (!(mean_amp_sq > 0.0) || !std::isfinite(mean_amp_sq))
        throw std::invalid_argument("delta method needs E(A_hat^2) > 0");
    if (!(var_amp_sq >= 0.0) || !std::isfinite(var_amp_sq))
        throw std::invalid_argument("variance must be finite and >= 0");
    return std::sqrt(mean_amp_sq) -
           var_amp_sq / (8.0 * mean_amp_sq * std::sqrt(mean_amp_sq));
}

}  // namespace quantsine
