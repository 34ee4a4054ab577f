#include "quantsine/series.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "compensated.hpp"

namespace quantsine {

namespace {

constexpr double k_pi = std::numbers::pi;

// B_{2m}/(2m)! for the Euler-Maclaurin corrections
constexpr double k_bern[8] = {
    0.0,
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    7.0 / 523069747200.0,
};

// sum_{k >= a} k^{-s} by Euler-Maclaurin, s > 1, a >= 16. With seven Bernoulli
// terms the remainder at a = 16 is below 1e-22 relative.
double tail_zeta(double s, long long a) {
    const double x = double(a);
    const double inv = 1.0 / x;
    const double xs = std::pow(x, -s);
    double acc = xs * x / (s - 1.0) + 0.5 * xs;
    double poch = s;             // (s)_{2m-1}
    double pw = xs * inv;        // x^{-s-2m+1}
    for (int m = 1; m <= 7; ++m) {
        acc += k_bern[m] * poch * pw;
        poch *= (s + 2 * m - 1) * (s + 2 * m);
        pw *= inv * inv;
    }
    return acc;
}

double zeta_pos(double s) {
    CompSum acc;
    for (int k = 1; k < 64; ++k) acc.add(std::pow(double(k), -s));
    acc.add(tail_zeta(s, 64));
    return acc.value();
}

// zeta at the arguments the Lerch expansion visits: s > 1 directly, the
// negative half-integers by the functional equation, and s = 1/2 as a constant
double zeta_any(double s) {
    if (s > 1.0) return zeta_pos(s);
    if (s == 0.5) return -1.46035450880958681289;
    if (s < 0.0)
        return std::pow(2.0, s) * std::pow(k_pi, s - 1.0) *
               std::sin(k_pi * s / 2.0) * std::tgamma(1.0 - s) * zeta_pos(1.0 - s);
    throw std::logic_error("zeta argument outside the supported set");
}

double wrap_pi(double x) {
    double w = std::remainder(x, 2.0 * k_pi);
    if (w == -k_pi) w = k_pi;
    return w;
}

// ---- Bessel J_n ----

double bessel_power_series(int n, double x) {
    const double half = 0.5 * x;
    double t = 1.0;
    for (int i = 1; i <= n; ++i) t *= half / i;
    if (t == 0.0) return 0.0;
    const double q = half * half;
    CompSum acc;
    acc.add(t);
    for (int m = 1; m < 80; ++m) {
        t *= -q / (double(m) * (n + m));
        acc.add(t);
        if (std::abs(t) < 1e-18 * std::abs(acc.value()) + 1e-300) break;
    }
    return acc.value();
}

// Hankel asymptotic for n in {0, 1}, x >= 16. The phase rotation by
// (2n+1)pi/4 is folded into sin/cos of x itself so no precision is lost
// forming x - 3pi/4 at large x.
double bessel_asymptotic01(int n, double x) {
    const double mu = 4.0 * n * n;
    double p = 0.0, q = 0.0;
    double a = 1.0;       // a_j(n)
    double xp = 1.0;      // x^{-j}
    double prev = 1e300;
    for (int j = 0; j <= 36; ++j) {
        const double t = a * xp;
        if (std::abs(t) >= prev) break;
        prev = std::abs(t);
        const int half = j / 2;
        const double sign = (half % 2 == 0) ? 1.0 : -1.0;
        if (j % 2 == 0)
            p += sign * t;
        else
            q += sign * t;
        a *= (mu - double(2 * j + 1) * (2 * j + 1)) / (8.0 * (j + 1));
        xp /= x;
    }
    const double c = std::cos(x), s = std::sin(x);
    const double r = std::numbers::sqrt2 / 2.0;
    double cw, sw;  // cos/sin of x - (2n+1)pi/4
    if (n == 0) {
        cw = (c + s) * r;
        sw = (s - c) * r;
    } else {
        cw = (s - c) * r;
        sw = -(s + c) * r;
    }
    return std::sqrt(2.0 / (k_pi * x)) * (cw * p - sw * q);
}

double bessel_miller(int n, double x) {
    const int top = std::max(n, int(std::ceil(x)));
    int m = top + 24 + int(3.0 * std::sqrt(double(top)));
    if (m % 2 != 0) ++m;
    double jp1 = 0.0;
    double j = 1e-30;
    double norm = 0.0;
    double ans = 0.0;
    for (int k = m; k >= 1; --k) {
        const double jm1 = (2.0 * k / x) * j - jp1;
        jp1 = j;
        j = jm1;
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            ans *= 1e-250;
        }
        const int ord = k - 1;
        if (ord == n) ans = j;
        if (ord > 0 && ord % 2 == 0)
            norm += 2.0 * j;
        else if (ord == 0)
            norm += j;
    }
    return ans / norm;
}

}  // namespace

double bessel_j(int n, double x) {
    if (n < 0) throw std::invalid_argument("bessel order must be >= 0");
    if (!std::isfinite(x)) throw std::invalid_argument("bessel argument must be finite");
    double sign = 1.0;
    if (x < 0.0) {
        x = -x;
        if (n % 2 != 0) sign = -1.0;
    }
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    double v;
    if (x <= 9.0)
        v = bessel_power_series(n, x);
    else if (n <= 1 && x >= 16.0)
        v = bessel_asymptotic01(n, x);
    else
        v = bessel_miller(n, x);
    return sign * v;
}

double riemann_zeta(double s) {
    if (!(s > 1.0)) throw std::invalid_argument("zeta requires s > 1");
    return zeta_pos(s);
}

double riemann_zeta_4_3() {
    static const double v = riemann_zeta(4.0 / 3.0);
    return v;
}

// ---- oscillatory Lerch tail ----

namespace {

// Li_s(e^{i beta}) for 0 < beta < 1 and non-integer s > 1, via the branch-point
// expansion Gamma(1-s) (-i beta)^{s-1} + sum_j zeta(s-j) (i beta)^j / j!
std::complex<double> polylog_on_circle(double s, double beta) {
    const std::complex<double> ib(0.0, beta);
    std::complex<double> branch =
        std::tgamma(1.0 - s) * std::pow(beta, s - 1.0) *
        std::complex<double>(std::cos(k_pi * (s - 1.0) / 2.0),
                             -std::sin(k_pi * (s - 1.0) / 2.0));
    std::complex<double> acc = branch;
    std::complex<double> f(1.0, 0.0);  // (i beta)^j / j!
    for (int j = 0; j <= 70; ++j) {
        const std::complex<double> term = zeta_any(s - j) * f;
        acc += term;
        if (j >= 4 && std::abs(term) < 1e-18 * std::abs(acc)) break;
        f *= ib / double(j + 1);
    }
    return acc;
}

std::complex<double> lerch_abel(double s, double beta, std::int64_t bigk) {
    using cld = std::complex<long double>;
    const long double pil = 3.14159265358979323846264338327950288L;
    const long double a = (long double)(bigk + 1);
    const long double bl = (long double)beta;
    const cld z = std::polar(1.0L, bl);
    const cld one(1.0L, 0.0L);
    const cld w = z / (one - z);

    // forward-difference table of c_j = (a+j)^{-s} in long double; Euler's
    // transform amplifies rounding of c_j by 2^m, so the extra mantissa matters
    constexpr int m_table = 64;
    long double c[m_table];
    for (int j = 0; j < m_table; ++j)
        c[j] = powl(a + (long double)j, -(long double)s);

    cld acc(0.0L, 0.0L);
    cld wp = one / (one - z);
    long double prev = 1e300L;
    for (int m = 0; m < m_table - 1; ++m) {
        const cld term = wp * c[0];
        const long double mag = std::abs(term);
        // once the terms stop shrinking they are amplified rounding noise, so
        // stop at the magnitude minimum like any asymptotic expansion
        if (m >= 4 && mag >= prev) break;
        acc += term;
        if (mag < 1e-20L * std::abs(acc)) break;
        prev = mag;
        wp *= w;
        for (int i = 0; i + m + 1 < m_table; ++i) c[i] = c[i + 1] - c[i];
    }
    const cld za = std::polar(1.0L, fmodl(bl * a, 2.0L * pil));
    const cld r = za * acc;
    return {double(r.real()), double(r.imag())};
}

std::complex<double> lerch_core(double s, double beta, std::int64_t bigk) {
    if (beta == 0.0) return {tail_zeta(s, bigk + 1), 0.0};
    if (beta < 0.0) return std::conj(lerch_core(s, -beta, bigk));
    if (beta >= 1.0) return lerch_abel(s, beta, bigk);
    // subtract the first K terms from the full polylog
    CompSum re, im;
    for (std::int64_t k = 1; k <= bigk; ++k) {
        const double ph = beta * double(k);
        const double p = std::pow(double(k), -s);
        re.add(p * std::cos(ph));
        im.add(p * std::sin(ph));
    }
    const std::complex<double> li = polylog_on_circle(s, beta);
    return {li.real() - re.value(), li.imag() - im.value()};
}

}  // namespace

void lerch_tail(double s, double beta, std::int64_t K, double& re, double& im) {
    if (!(s > 1.0) || !std::isfinite(s))
        throw std::invalid_argument("lerch tail requires s > 1");
    if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
    if (K < 16) throw std::invalid_argument("lerch tail requires K >= 16");
    const std::complex<double> v = lerch_core(s, wrap_pi(beta), K);
    re = v.real();
    im = v.imag();
}

// ---- the bias kernel g in three forms ----

namespace {

void check_g_args(double amp, double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("delta must be finite and > 0");
    if (!(amp >= 0.0) || !std::isfinite(amp))
        throw std::invalid_argument("amplitude must be finite and >= 0");
}

// p = floor(gamma + 1/2), nudged so that (p - 1/2) <= gamma < (p + 1/2) holds
// exactly on the computed doubles; keeps the radicands nonnegative
long long cell_index(double gamma) {
    long long p = (long long)std::floor(gamma + 0.5);
    while (p > 0 && double(p) - 0.5 > gamma) --p;
    while (double(p) + 0.5 <= gamma) ++p;
    return p;
}

// gamma^2 - b^2 in product form; tiny negatives from rounding collapse to 0
double radicand(double gamma, double b) {
    const double r = (gamma - b) * (gamma + b);
    if (r < 0.0) {
        if (r > -64.0 * 2.2e-16 * gamma * gamma) return 0.0;
        throw std::domain_error("amplitude grid inconsistent with cell index");
    }
    return r;
}

double clamped_acos(double v) {
    if (v > 1.0) {
        if (v - 1.0 > 1e-12) throw std::domain_error("arc argument beyond tolerance");
        v = 1.0;
    } else if (v < -1.0) {
        if (-1.0 - v > 1e-12) throw std::domain_error("arc argument beyond tolerance");
        v = -1.0;
    }
    return std::acos(v);
}

double clamped_asin(double v) {
    if (v > 1.0) {
        if (v - 1.0 > 1e-12) throw std::domain_error("arc argument beyond tolerance");
        v = 1.0;
    } else if (v < -1.0) {
        if (-1.0 - v > 1e-12) throw std::domain_error("arc argument beyond tolerance");
        v = -1.0;
    }
    return std::asin(v);
}

}  // namespace

double g_closed(double amp, double delta) {
    check_g_args(amp, delta);
    if (amp == 0.0) return 0.0;
    const double gamma = amp / delta;
    const long long p = cell_index(gamma);
    if (p == 0) return -0.5 * amp;  // empty sum; keep it exact, not pi/pi-rounded
    if (p > 500000000) throw std::invalid_argument("step too small for closed form");
    CompSum acc;
    for (long long k = 1; k <= p; ++k)
        acc.add(std::sqrt(radicand(gamma, double(k) - 0.5)));
    return (delta / k_pi) * (-k_pi * gamma / 2.0 + 2.0 * acc.value() / gamma);
}

double g_gray(double amp, double delta) {
    check_g_args(amp, delta);
    if (amp == 0.0) return 0.0;
    const double gamma = amp / delta;
    const long long p = cell_index(gamma);
    if (p > 500000000) throw std::invalid_argument("step too small for region form");
    // region boundaries beta_j = arccos((1/2 - j)/gamma), j = -p+1 .. p, summed
    // without telescoping; each term goes through acos and sin
    CompSum acc;
    for (long long j = -p + 1; j <= p; ++j)
        acc.add(std::sin(clamped_acos((0.5 - double(j)) / gamma)));
    return (delta / k_pi) * (acc.value() - k_pi * gamma / 2.0);
}

double sum_sn(int n, double gamma) {
    if (n < 1 || n % 2 == 0)
        throw std::invalid_argument("S_n is defined for odd n >= 1");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("gamma must be finite and >= 0");
    const long long p = gamma == 0.0 ? 0 : cell_index(gamma);
    CompSum acc;
    for (long long j = 1; j <= p; ++j)
        acc.add(std::cos(double(n) * clamped_asin((double(j) - 0.5) / gamma)));
    double s = 2.0 / double(n) * acc.value();
    if (n == 1) s -= gamma * k_pi / 2.0;
    return s;
}

double g_derivative(double amp, double delta) {
    check_g_args(amp, delta);
    const double gamma = amp / delta;
    const long long p = cell_index(gamma);
    if (p >= 1 && amp - (double(p) - 0.5) * delta < 1e-9 * delta)
        throw std::domain_error("derivative diverges at the cell edge A = (p - 1/2) delta");
    CompSum acc;
    for (long long k = 1; k <= p; ++k) {
        const double b = double(k) - 0.5;
        acc.add(b * b / (gamma * gamma * std::sqrt(radicand(gamma, b))));
    }
    return -0.5 + 2.0 / k_pi * acc.value();
}

double g_min_envelope(int p, double delta) {
    if (p < 0) throw std::invalid_argument("envelope index must be >= 0");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("delta must be finite and > 0");
    const double gamma = double(p) - 0.5;  // abscissa A = (p - 1/2) delta
    CompSum acc;
    for (int k = 1; k <= p - 1; ++k) {
        const double r = double(k) - 0.5;
        acc.add(std::sqrt(1.0 - (r / gamma) * (r / gamma)));
    }
    return (0.5 - double(p)) * delta / 2.0 + 2.0 * delta / k_pi * acc.value();
}

GSum g_series(double amp, double delta, const SeriesControl& ctrl) {
    check_g_args(amp, delta);
    if (ctrl.max_terms < 1) throw std::invalid_argument("max_terms must be >= 1");
    GSum out;
    if (amp == 0.0) {
        out.converged = true;
        return out;
    }
    const double gamma = amp / delta;
    if (gamma > 1e8) throw std::invalid_argument("step too small for series form");
    const double omega = 2.0 * k_pi * gamma;

    // direct terms out to z = omega k >= 40, at least 256 of them so the
    // analytic remainder machinery has a comfortable start index
    std::int64_t bigk = std::max<std::int64_t>(256, (std::int64_t)std::ceil(40.0 / omega));
    if (bigk > ctrl.max_terms) bigk = ctrl.max_terms;
    const bool wave_ok = omega * double(bigk + 1) >= 40.0 && bigk >= 64;

    CompSum acc;
    for (std::int64_t k = 1; k <= bigk; ++k) {
        const double sign = (k & 1) ? -1.0 : 1.0;
        acc.add(sign / double(k) * bessel_j(1, omega * double(k)));
    }
    double value = (delta / k_pi) * acc.value();
    out.terms_used = bigk;

    double tail = 0.0;
    if (wave_ok) {
        // continue the sum past K with the Hankel wave: J_1(omega k) turned into
        // e^{i beta k} tails, beta = omega + pi wrapped to (-pi, pi]
        const double beta = wrap_pi(omega + k_pi);
        const std::complex<double> e(-std::numbers::sqrt2 / 2.0,
                                     -std::numbers::sqrt2 / 2.0);
        double re, im;
        lerch_tail(1.5, beta, bigk, re, im);
        const std::complex<double> l32 = e * std::complex<double>(re, im);
        lerch_tail(2.5, beta, bigk, re, im);
        const std::complex<double> l52 = e * std::complex<double>(re, im);
        lerch_tail(3.5, beta, bigk, re, im);
        const std::complex<double> l72 = e * std::complex<double>(re, im);
        lerch_tail(4.5, beta, bigk, re, im);
        const std::complex<double> l92 = e * std::complex<double>(re, im);

        const double pref = (delta / k_pi) * std::sqrt(2.0 / (k_pi * omega));
        const double wave =
            pref * (l32.real() - 3.0 / (8.0 * omega) * l52.imag() +
                    15.0 / (128.0 * omega * omega) * l72.real() +
                    105.0 / (1024.0 * omega * omega * omega) * l92.imag());
        value += wave;

        // first omitted Hankel orders bound the truncation; integral bound on
        // the k sums, factor 4 slack, plus a floating-point floor
        const double h112 = std::pow(double(bigk), -4.5) / 4.5;
        const double h132 = std::pow(double(bigk), -5.5) / 5.5;
        tail = pref * 4.0 *
               (0.14423 / std::pow(omega, 4.0) * h112 +
                0.27757 / std::pow(omega, 5.0) * h132);
        tail += 2e-16 * (std::abs(value) + std::abs(wave));
        if (ctrl.tail_bound_mode == TailBoundMode::landau) {
            const double landau = (delta / k_pi) * 0.7857 * std::pow(omega, -1.0 / 3.0) *
                                  3.0 * std::pow(double(bigk), -1.0 / 3.0);
            tail = std::min(tail, landau);
        }
    } else if (ctrl.tail_bound_mode == TailBoundMode::landau) {
        // series cut before the wave regime: only the coarse |J_1| envelope
        // bound is available
        tail = (delta / k_pi) * 0.7857 * std::pow(omega, -1.0 / 3.0) * 3.0 *
               std::pow(double(bigk), -1.0 / 3.0);
    } else {
        out.value = value;
        out.tail_estimate = 0.0;
        out.converged = false;
        return out;
    }

    out.value = value;
    out.tail_estimate = tail;
    out.converged = tail <= std::max(ctrl.abs_tol, ctrl.rel_tol * std::abs(value));
    return out;
}

}  // namespace quantsine
