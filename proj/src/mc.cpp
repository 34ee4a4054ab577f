#include "quantsine/mc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace quantsine {

namespace {

constexpr double k_two_pi = 2.0 * std::numbers::pi;

// reduction over a replicate-indexed buffer with a fixed pairwise tree; the
// result depends only on the buffer contents, never on scheduling
double pairwise_sum(const double* a, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(a, half) + pairwise_sum(a + half, n - half);
}

void check_mc(const McConfig& cfg) {
    if (cfg.replicates < 2) throw std::invalid_argument("need at least 2 replicates");
    if (!(cfg.noise_sigma >= 0.0) || !std::isfinite(cfg.noise_sigma))
        throw std::invalid_argument("noise sigma must be finite and >= 0");
}

McReport summarize(std::vector<double>& v, double truth) {
    const std::size_t r = v.size();
    const double mean = pairwise_sum(v.data(), r) / double(r);
    for (auto& x : v) {
        const double d = x - mean;
        x = d * d;
    }
    const double variance = pairwise_sum(v.data(), r) / double(r - 1);
    McReport rep;
    rep.mean = mean;
    rep.variance = variance;
    rep.mse = (mean - truth) * (mean - truth) + variance;
    rep.std_error_mean = std::sqrt(variance / double(r));
    rep.std_error_variance = variance * std::sqrt(2.0 / double(r - 1));
    rep.replicates_used = std::int64_t(r);
    return rep;
}

// per-replicate A_hat^2 for the record models
std::vector<double> amp_sq_replicates(const SineSpec& spec, const QuantizerSpec& q,
                                      const McConfig& cfg) {
    spec.validate();
    q.validate();
    check_mc(cfg);
    const int n = spec.n_samples;
    if ((2ll * spec.lambda) % n == 0)
        throw std::invalid_argument(
            "degenerate design: N divides 2*lambda, sine and cosine columns collapse");

    std::vector<double> cosk(n), sink(n);
    for (int u = 0; u < n; ++u) {
        const long long r = (1ll * spec.lambda * u) % n;
        const double k = k_two_pi * double(r) / double(n);
        cosk[u] = std::cos(k);
        sink[u] = std::sin(k);
    }

    const double amp = spec.amplitude;
    const double d = spec.offset;
    const double sigma = cfg.noise_sigma;

    std::vector<double> v(std::size_t(cfg.replicates));
    for (std::int64_t rep = 0; rep < cfg.replicates; ++rep) {
        Rng rng = make_replicate_stream(cfg.seed, std::uint64_t(rep));
        const double phi = k_two_pi * rng.uniform01();
        const double cphi = std::cos(phi), sphi = std::sin(phi);
        double p1 = 0.0, p2 = 0.0;
        for (int u = 0; u < n; ++u) {
            const double s = -amp * (cosk[u] * cphi - sink[u] * sphi) + d;
            double y;
            switch (cfg.model) {
                case McModel::quantizer:
                    y = quantize(q, sigma > 0.0 ? s + sigma * rng.gaussian() : s);
                    break;
                case McModel::simple_uniform:
                    y = s + q.delta * (rng.uniform01() - 0.5);
                    break;
                case McModel::gaussian_no_quant:
                    y = sigma > 0.0 ? s + sigma * rng.gaussian() : s;
                    break;
                default:
                    throw std::invalid_argument("unknown model");
            }
            p1 += y * cosk[u];
            p2 += y * sink[u];
        }
        const double t1 = -2.0 / n * p1;
        const double t2 = 2.0 / n * p2;
        v[std::size_t(rep)] = t1 * t1 + t2 * t2;
    }
    return v;
}

}  // namespace

McReport mc_amp_sq(const SineSpec& spec, const QuantizerSpec& q, const McConfig& cfg) {
    std::vector<double> v = amp_sq_replicates(spec, q, cfg);
    McReport rep = summarize(v, spec.amplitude * spec.amplitude);
    return rep;
}

McReport mc_amp(const SineSpec& spec, const QuantizerSpec& q, const McConfig& cfg) {
    std::vector<double> v = amp_sq_replicates(spec, q, cfg);
    for (auto& x : v) x = std::sqrt(x);
    McReport rep = summarize(v, spec.amplitude);
    return rep;
}

McReport mc_scalar_theta(double theta, const QuantizerSpec& q, int n_samples,
                         const McConfig& cfg) {
    if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
    if (n_samples < 3) throw std::invalid_argument("n_samples must be >= 3");
    q.validate();
    check_mc(cfg);
    if (cfg.model == McModel::gaussian_no_quant)
        throw std::invalid_argument("scalar model supports quantizer and simple_uniform");

    const double sigma = cfg.noise_sigma;
    std::vector<double> v(std::size_t(cfg.replicates));
    for (std::int64_t rep = 0; rep < cfg.replicates; ++rep) {
        Rng rng = make_replicate_stream(cfg.seed, std::uint64_t(rep));
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n_samples; ++i) {
            const double h = std::cos(k_two_pi * rng.uniform01());
            const double x = theta * h;
            double y;
            if (cfg.model == McModel::quantizer)
                y = quantize(q, sigma > 0.0 ? x + sigma * rng.gaussian() : x);
            else
                y = x + q.delta * (rng.uniform01() - 0.5);
            num += y * h;
            den += h * h;
        }
        v[std::size_t(rep)] = num / den;
    }
    return summarize(v, theta);
}

SimpleMoments simple_model_moments(double theta, double delta, int n_samples) {
    if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("delta must be finite and > 0");
    if (n_samples < 3) throw std::invalid_argument("n_samples must be >= 3");
    const double n = double(n_samples);

    // moments of R = (1/N) sum y h and S = (1/N) sum h^2, then the second-order
    // Taylor expansion of the ratio R/S about (E R, E S); the terms cancel to
    // theta and delta^2/(6N) but are kept separate on purpose
    const double er = theta / 2.0;
    const double es = 0.5;
    const double var_r = theta * theta / (8.0 * n) + delta * delta / (24.0 * n);
    const double var_s = 1.0 / (8.0 * n);
    const double cov_rs = theta / (8.0 * n);

    SimpleMoments m;
    m.mean = er / es - cov_rs / (es * es) + er * var_s / (es * es * es);
    m.variance = var_r / (es * es) - 2.0 * er * cov_rs / (es * es * es) +
                 er * er * var_s / (es * es * es * es);
    return m;
}

double gaussian_reference_variance(double amp, double sigma, int n_samples) {
    if (!(amp >= 0.0) || !std::isfinite(amp))
        throw std::invalid_argument("amplitude must be finite and >= 0");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("sigma must be finite and >= 0");
    if (n_samples < 3) throw std::invalid_argument("n_samples must be >= 3");
    if (sigma == 0.0) return 0.0;

    SineSpec spec;
    spec.amplitude = amp;
    spec.lambda = 1;
    spec.n_samples = n_samples;
    QuantizerSpec q;  // unused by the model, but a valid default is required
    McConfig cfg;
    cfg.replicates = 5000;
    cfg.seed = 0x5eedc0defull;  // fixed so the reference curve is reproducible
    cfg.noise_sigma = sigma;
    cfg.model = McModel::gaussian_no_quant;
    return mc_amp_sq(spec, q, cfg).variance;
}

}  // namespace quantsine
