#include "quantsine/lsfit.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

#include "compensated.hpp"

namespace quantsine {

namespace {

void check_design(std::size_t y_size, int lambda, int n_samples) {
    if (n_samples < 3) throw std::invalid_argument("n_samples must be >= 3");
    if (lambda < 1) throw std::invalid_argument("lambda must be >= 1");
    if (y_size != std::size_t(n_samples))
        throw std::invalid_argument("record length must equal n_samples");
    if ((2ll * lambda) % n_samples == 0)
        throw std::invalid_argument(
            "degenerate design: N divides 2*lambda, sine and cosine columns collapse");
}

double reduced_angle(long long num, int n_samples) {
    const long long r = ((num % n_samples) + n_samples) % n_samples;
    return 2.0 * std::numbers::pi * double(r) / double(n_samples);
}

}  // namespace

ThetaEstimate fit_theta(const std::vector<double>& y, int lambda, int n_samples) {
    check_design(y.size(), lambda, n_samples);
    CompSum p1, p2;
    for (int i = 0; i < n_samples; ++i) {
        const double k = reduced_angle(1ll * lambda * i, n_samples);
        p1.add(y[i] * std::cos(k));
        p2.add(y[i] * std::sin(k));
    }
    ThetaEstimate t;
    t.theta1 = -2.0 / n_samples * p1.value();
    t.theta2 = 2.0 / n_samples * p2.value();
    return t;
}

double amp_sq_estimate(const ThetaEstimate& t) {
    return t.theta1 * t.theta1 + t.theta2 * t.theta2;
}

FitResult fit(const std::vector<double>& y, int lambda, int n_samples) {
    FitResult r;
    r.theta = fit_theta(y, lambda, n_samples);
    r.amp_sq = amp_sq_estimate(r.theta);
    r.amp = std::sqrt(r.amp_sq);
    return r;
}

double amp_sq_double_sum(const std::vector<double>& y, int lambda, int n_samples) {
    check_design(y.size(), lambda, n_samples);
    // evaluates cos(k_i - k_u) per pair on purpose: a genuinely different
    // rounding path from the squared projections
    CompSum acc;
    for (int i = 0; i < n_samples; ++i)
        for (int u = 0; u < n_samples; ++u) {
            const double k = reduced_angle(1ll * lambda * (i - u), n_samples);
            acc.add(y[i] * y[u] * std::cos(k));
        }
    return 4.0 / (double(n_samples) * n_samples) * acc.value();
}

std::vector<double> general_ls_solve(const std::vector<double>& h,
                                     const std::vector<double>& y, int p) {
    if (p < 1 || p > 3) throw std::invalid_argument("p must be in [1, 3]");
    const int n = int(y.size());
    if (n < p) throw std::invalid_argument("need at least p rows");
    if (h.size() != y.size() * std::size_t(p))
        throw std::invalid_argument("design matrix must be N x p row-major");

    // normal equations G x = b, G = H^T H, b = H^T y
    double g[3][3] = {};
    double b[3] = {};
    for (int r = 0; r < n; ++r) {
        const double* row = &h[std::size_t(r) * p];
        for (int i = 0; i < p; ++i) {
            b[i] += row[i] * y[r];
            for (int j = i; j < p; ++j) g[i][j] += row[i] * row[j];
        }
    }
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < i; ++j) g[i][j] = g[j][i];

    double scale = 0.0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) scale = std::max(scale, std::abs(g[i][j]));
    if (scale == 0.0) throw std::domain_error("normal matrix is singular");

    // partially pivoted Gaussian elimination on the p x p system
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < p; ++col) {
        int piv = col;
        for (int r = col + 1; r < p; ++r)
            if (std::abs(g[perm[r]][col]) > std::abs(g[perm[piv]][col])) piv = r;
        std::swap(perm[col], perm[piv]);
        const int pr = perm[col];
        const double d = g[pr][col];
        if (std::abs(d) <= 1e-12 * scale)
            throw std::domain_error("normal matrix is singular at working precision");
        for (int r = col + 1; r < p; ++r) {
            const double f = g[perm[r]][col] / d;
            for (int j = col; j < p; ++j) g[perm[r]][j] -= f * g[pr][j];
            b[perm[r]] -= f * b[pr];
        }
    }
    std::vector<double> x(p);
    for (int i = p - 1; i >= 0; --i) {
        double v = b[perm[i]];
        for (int j = i + 1; j < p; ++j) v -= g[perm[i]][j] * x[j];
        x[i] = v / g[perm[i]][i];
    }
    return x;
}

}  // namespace quantsine
