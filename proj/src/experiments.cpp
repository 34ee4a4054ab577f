#include "quantsine/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "quantsine/ada.hpp"
#include "quantsine/fda.hpp"
#include "quantsine/lsfit.hpp"
#include "quantsine/mc.hpp"
#include "quantsine/series.hpp"
#include "quantsine/signal.hpp"

namespace quantsine {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace((unsigned char)s[a])) ++a;
    while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
    return s.substr(a, b - a);
}

long long parse_int(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (errno != 0 || end == v.c_str() || *end != '\0')
        throw std::invalid_argument("bad integer for " + key + ": '" + v + "'");
    return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (errno != 0 || end == v.c_str() || *end != '\0' || v.find('-') != std::string::npos)
        throw std::invalid_argument("bad unsigned integer for " + key + ": '" + v + "'");
    return x;
}

double parse_double(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (errno != 0 || end == v.c_str() || *end != '\0' || !std::isfinite(x))
        throw std::invalid_argument("bad number for " + key + ": '" + v + "'");
    return x;
}

std::vector<double> amp_grid(double lo, double hi, int steps) {
    if (steps < 1) throw std::invalid_argument("amp-steps must be >= 1");
    if (!(lo <= hi)) throw std::invalid_argument("amp-min must not exceed amp-max");
    std::vector<double> g(steps);
    if (steps == 1) {
        g[0] = lo;
        return g;
    }
    for (int i = 0; i < steps; ++i) g[i] = lo + (hi - lo) * double(i) / (steps - 1);
    return g;
}

// resolved scalar parameters; every experiment records the ones it used so a
// CSV's metadata block re-runs to the identical file
struct Params {
    std::string experiment;
    int bits = 0;          // 0 means "sweep the built-in list"
    double delta = 0.0;    // 0 means "derive from bits"
    double amp_min = 0.0;
    double amp_max = 0.0;
    int amp_steps = 0;
    int lambda = 0;
    int n_samples = 0;
    std::int64_t records = 0;
    std::uint64_t seed = 0;
    double sigma = -1.0;   // -1 means "sweep the built-in list"
    double offset = 0.0;
    bool offset_swept = false;
};

constexpr std::uint64_t k_default_seed = 20260816;

double delta_for(const Params& p, int bits) {
    if (p.delta > 0.0) return p.delta;
    return QuantizerSpec::from_bits(bits).delta;
}

struct TableBuilder {
    SweepTable t;
    void meta(const std::string& k, const std::string& v) { t.metadata.push_back({k, v}); }
    void meta(const std::string& k, double v) { meta(k, fmt17(v)); }
    void meta(const std::string& k, std::int64_t v) { meta(k, std::to_string(v)); }
    void meta(const std::string& k, int v) { meta(k, std::to_string(v)); }
    void meta(const std::string& k, std::uint64_t v) { meta(k, std::to_string(v)); }
    void cols(std::vector<std::string> c) { t.columns = std::move(c); }
    void row(std::vector<double> r) {
        if (r.size() != t.columns.size())
            throw std::logic_error("row width disagrees with header");
        t.rows.push_back(std::move(r));
    }
};

void common_meta(TableBuilder& tb, const Params& p) {
    tb.meta("experiment", p.experiment);
    if (p.bits > 0) tb.meta("bits", p.bits);
    if (p.delta > 0.0) tb.meta("delta", p.delta);
    tb.meta("amp-min", p.amp_min);
    tb.meta("amp-max", p.amp_max);
    tb.meta("amp-steps", p.amp_steps);
    if (p.lambda > 0) tb.meta("lambda", p.lambda);
    if (p.n_samples > 0) tb.meta("n", p.n_samples);
    if (p.records > 0) tb.meta("records", p.records);
    tb.meta("seed", p.seed);
    if (p.sigma >= 0.0) tb.meta("sigma", p.sigma);
    if (p.offset_swept) tb.meta("offset", p.offset);
}

void info_meta(TableBuilder& tb, bool used_mc) {
    tb.meta("version", k_version);
    tb.meta("schema", std::int64_t(k_csv_schema));
    if (used_mc) tb.meta("gaussian", k_gaussian_method);
}

Params resolve(const ExperimentConfig& cfg, int def_bits, double def_amp_min,
               double def_amp_max, int def_amp_steps, int def_lambda, int def_n,
               std::int64_t def_records, double def_sigma, bool def_offset_swept) {
    Params p;
    p.experiment = cfg.experiment;
    p.bits = cfg.bits.value_or(def_bits);
    if (p.bits != 0 && (p.bits < 1 || p.bits > 30))
        throw std::invalid_argument("bits must lie in [1, 30]");
    p.delta = cfg.delta.value_or(0.0);
    if (cfg.delta && !(p.delta > 0.0))
        throw std::invalid_argument("delta must be > 0");
    p.amp_min = cfg.amp_min.value_or(def_amp_min);
    p.amp_max = cfg.amp_max.value_or(def_amp_max);
    p.amp_steps = cfg.amp_steps.value_or(def_amp_steps);
    p.lambda = cfg.lambda.value_or(def_lambda);
    p.n_samples = cfg.n_samples.value_or(def_n);
    p.records = cfg.records.value_or(def_records);
    p.seed = cfg.seed.value_or(k_default_seed);
    p.sigma = cfg.sigma.value_or(def_sigma);
    if (cfg.sigma && *cfg.sigma < 0.0)
        throw std::invalid_argument("sigma must be >= 0");
    p.offset = cfg.offset.value_or(0.0);
    p.offset_swept = def_offset_swept || cfg.offset.has_value();
    if (p.lambda > 0 && p.lambda < 1) throw std::invalid_argument("lambda must be >= 1");
    if (p.n_samples > 0 && p.n_samples < 3)
        throw std::invalid_argument("n must be >= 3");
    if (p.records < 0) throw std::invalid_argument("records must be >= 0");
    return p;
}

McConfig mc_config(const Params& p, std::int64_t records, double sigma,
                   McModel model) {
    McConfig c;
    c.replicates = records;
    c.seed = p.seed;
    c.noise_sigma = sigma;
    c.model = model;
    return c;
}

SineSpec sine_for(double amp, const Params& p) {
    SineSpec s;
    s.amplitude = amp;
    s.lambda = p.lambda;
    s.n_samples = p.n_samples;
    s.offset = p.offset;
    return s;
}

// ---- the experiments ----

SweepTable run_scalar_gain_variance(const ExperimentConfig& cfg) {
    const Params p = resolve(cfg, 3, 0.02, 1.0, 50, 0, 200, 15000, 0.0, false);
    const double delta = delta_for(p, p.bits);
    QuantizerSpec q = p.delta > 0.0 ? QuantizerSpec{p.delta} : QuantizerSpec::from_bits(p.bits);
    TableBuilder tb;
    common_meta(tb, p);
    info_meta(tb, true);
    tb.cols({"theta", "theta_over_delta", "var_mc_quantizer", "var_mc_uniform",
             "var_formula_uniform", "var_norm_quantizer", "var_norm_uniform",
             "se_var_quantizer"});
    const double floor_var = delta * delta / (6.0 * p.n_samples);
    for (double theta : amp_grid(p.amp_min, p.amp_max, p.amp_steps)) {
        const McReport mq =
            mc_scalar_theta(theta, q, p.n_samples, mc_config(p, p.records, p.sigma,
                                                             McModel::quantizer));
        const McReport mu =
            mc_scalar_theta(theta, q, p.n_samples, mc_config(p, p.records, 0.0,
                                                             McModel::simple_uniform));
        const SimpleMoments sm = simple_model_moments(theta, delta, p.n_samples);
        tb.row({theta, theta / delta, mq.variance, mu.variance, sm.variance,
                mq.variance / floor_var, mu.variance / floor_var,
                mq.std_error_variance});
    }
    return std::move(tb.t);
}

SweepTable run_coherence_std(const ExperimentConfig& cfg) {
    const Params p = resolve(cfg, 13, 0.04, 0.96, 25, 201, 2000, 5000, 0.0, false);
    QuantizerSpec q = p.delta > 0.0 ? QuantizerSpec{p.delta} : QuantizerSpec::from_bits(p.bits);
    const int lambda_alt = p.lambda - 1;
    if (lambda_alt < 1) throw std::invalid_argument("lambda must be >= 2 here");
    TableBuilder tb;
    common_meta(tb, p);
    tb.meta("lambda-alt", lambda_alt);
    {
        SineSpec probe = sine_for(0.5, p);
        probe.lambda = lambda_alt;
        if (probe.non_coprime())
            tb.meta("warning", "lambda-alt shares a factor with n; phases repeat");
    }
    info_meta(tb, true);
    tb.cols({"amp", "std_quantizer_coherent", "std_quantizer_noncoherent",
             "std_uniform_coherent", "std_uniform_noncoherent"});
    for (double amp : amp_grid(p.amp_min, p.amp_max, p.amp_steps)) {
        SineSpec s1 = sine_for(amp, p);
        SineSpec s2 = s1;
        s2.lambda = lambda_alt;
        const double a = std::sqrt(
            mc_amp_sq(s1, q, mc_config(p, p.records, p.sigma, McModel::quantizer)).variance);
        const double b = std::sqrt(
            mc_amp_sq(s2, q, mc_config(p, p.records, p.sigma, McModel::quantizer)).variance);
        const double c = std::sqrt(
            mc_amp_sq(s1, q, mc_config(p, p.records, 0.0, McModel::simple_uniform)).variance);
        const double d = std::sqrt(
            mc_amp_sq(s2, q, mc_config(p, p.records, 0.0, McModel::simple_uniform)).variance);
        tb.row({amp, a, b, c, d});
    }
    return std::move(tb.t);
}

SweepTable run_bias_curves(const ExperimentConfig& cfg) {
    const Params p = resolve(cfg, 0, 0.02, 0.9, 30, 201, 2000, 0, 0.0, false);
    std::vector<int> bits_list = p.bits > 0 ? std::vector<int>{p.bits}
                                            : std::vector<int>{4, 6, 8, 12};
    TableBuilder tb;
    common_meta(tb, p);
    info_meta(tb, false);
    tb.cols({"bits", "amp", "gamma", "bias_exact", "bias_series", "bias_exact_norm",
             "bias_series_norm", "envelope_norm"});
    SeriesControl ctrl;
    ctrl.abs_tol = 1e-10;
    for (int bits : bits_list) {
        const QuantizerSpec q = QuantizerSpec::from_bits(bits);
        const double norm = std::pow(q.delta, 4.0 / 3.0);
        for (double amp : amp_grid(p.amp_min, p.amp_max, p.amp_steps)) {
            const SineSpec spec = sine_for(amp, p);
            const MomentReport ada =
                exact_moments(build_partition(spec, q), p.lambda, p.n_samples);
            const BiasReport fda = bias_finite_n(amp, q.delta, p.n_samples, p.lambda, ctrl);
            tb.row({double(bits), amp, amp / q.delta, ada.bias, fda.bias_finite_n,
                    ada.bias / norm, fda.bias_finite_n / norm, -fda.bound_b2 / norm});
        }
    }
    return std::move(tb.t);
}

SweepTable run_max_bias_bits(const ExperimentConfig& cfg) {
    const Params p = resolve(cfg, 0, 0.02, 0.98, 400, 539, 2000, 0, 0.0, false);
    std::vector<int> bits_list = p.bits > 0 ? std::vector<int>{p.bits}
                                            : std::vector<int>{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    TableBuilder tb;
    common_meta(tb, p);
    info_meta(tb, p.records > 0);
    std::vector<std::string> cols = {"bits",          "delta",       "max_abs_bias",
                                     "max_abs_bias_norm", "amp_at_max", "b1_at_max",
                                     "abs_b2_at_max"};
    if (p.records > 0) cols.push_back("mc_max_abs_bias");
    tb.cols(cols);
    for (int bits : bits_list) {
        const QuantizerSpec q = QuantizerSpec::from_bits(bits);
        double best = -1.0, amp_at = 0.0;
        for (double amp : amp_grid(p.amp_min, p.amp_max, p.amp_steps)) {
            const double b = std::abs(bias_asymptotic(amp, q.delta));
            if (b > best) {
                best = b;
                amp_at = amp;
            }
        }
        const double norm = std::pow(q.delta, 4.0 / 3.0);
        const long long pp = std::max(1ll, std::llround(amp_at / q.delta + 0.5));
        std::vector<double> row = {double(bits),    q.delta,
                                   best,            best / norm,
                                   amp_at,          bound_b1(amp_at, q.delta),
                                   std::abs(bound_b2(q.delta, int(pp)))};
        if (p.records > 0) {
            double worst = 0.0;
            for (double amp : amp_grid(p.amp_min, p.amp_max, 40)) {
                const SineSpec spec = sine_for(amp, p);
                const McReport mc =
                    mc_amp_sq(spec, q, mc_config(p, p.records, p.sigma, McModel::quantizer));
                worst = std::max(worst, std::abs(mc.mean - amp * amp));
            }
            row.push_back(worst);
        }
        tb.row(row);
    }
    return std::move(tb.t);
}

SweepTable run_bias_vs_n(const ExperimentConfig& cfg) {
    Params p = resolve(cfg, 10, 0.0, 0.0, 1, 1, 0, 0, 0.0, false);
    const QuantizerSpec q = p.delta > 0.0 ? QuantizerSpec{p.delta}
                                          : QuantizerSpec::from_bits(p.bits);
    const double amp = cfg.amp_min.value_or(10.93 * q.delta);
    p.amp_min = amp;
    p.amp_max = amp;
    std::vector<int> n_list = cfg.n_samples
                                  ? std::vector<int>{*cfg.n_samples}
                                  : std::vector<int>{3,  4,  5,  6,  8,   10,  12,  16, 20,
                                                     25, 30, 40, 50, 75, 100, 150, 200, 300};
    TableBuilder tb;
    common_meta(tb, p);
    info_meta(tb, true);
    tb.cols({"n", "records", "bias_mc_norm", "se_mc_norm", "bias_exact_norm",
             "bias_series_norm", "bias_asym_norm"});
    const double norm = q.delta * q.delta;
    SeriesControl ctrl;
    ctrl.abs_tol = 1e-10;
    const double asym = bias_asymptotic(amp, q.delta) / norm;
    for (int n : n_list) {
        const std::int64_t records =
            p.records > 0 ? p.records : std::max<std::int64_t>(5000, 1000000 / n);
        Params pn = p;
        pn.n_samples = n;
        const SineSpec spec = sine_for(amp, pn);
        const McReport mc =
            mc_amp_sq(spec, q, mc_config(p, records, p.sigma, McModel::quantizer));
        const MomentReport ada = exact_moments(build_partition(spec, q), p.lambda, n);
        const BiasReport fda = bias_finite_n(amp, q.delta, n, p.lambda, ctrl);
        tb.row({double(n), double(records), (mc.mean - amp * amp) / norm,
                mc.std_error_mean / norm, ada.bias / norm, fda.bias_finite_n / norm,
                asym});
    }
    return std::move(tb.t);
}

SweepTable run_max_var_bits(const ExperimentConfig& cfg) {
    const Params p = resolve(cfg, 0, 0.02, 0.98, 40, 539, 500, 0, 0.0, false);
    std::vector<int> bits_list = p.bits > 0 ? std::vector<int>{p.bits}
                                            : std::vector<int>{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    TableBuilder tb;
    common_meta(tb, p);
    info_meta(tb, true);
    tb.cols({"bits", "delta", "max_var", "max_bias_sq", "max_mse", "max_var_norm",
             "gauss_ref_var", "closed_var_uniform_noise"});
    for (int bits : bits_list) {
        const QuantizerSpec q = QuantizerSpec::from_bits(bits);
        double vbest = -1.0, amp_at = 0.0, bbest = 0.0, mbest = 0.0;
        for (double amp : amp_grid(p.amp_min, p.amp_max, p.amp_steps)) {
            const SineSpec spec = sine_for(amp, p);
            const MomentReport r =
                exact_moments(build_partition(spec, q), p.lambda, p.n_samples);
            if (r.variance_amp_sq > vbest) {
                vbest = r.variance_amp_sq;
                amp_at = amp;
            }
            bbest = std::max(bbest, r.bias * r.bias);
            mbest = std::max(mbest, r.mse);
        }
        const double sig_eq = q.delta / std::sqrt(12.0);
        const double tau_sq = 2.0 * sig_eq * sig_eq / p.n_samples;
        tb.row({double(bits), q.delta, vbest, bbest, mbest,
                vbest / (q.delta * q.delta),
                gaussian_reference_variance(amp_at, sig_eq, p.n_samples),
                4.0 * tau_sq * (amp_at * amp_at + tau_sq)});
    }
    return std::move(tb.t);
}

SweepTable run_var_vs_n(const ExperimentConfig& cfg) {
    Params p = resolve(cfg, 10, 0.0, 0.0, 1, 7, 0, 5000, 0.0, false);
    const QuantizerSpec q = p.delta > 0.0 ? QuantizerSpec{p.delta}
                                          : QuantizerSpec::from_bits(p.bits);
    const double amp = cfg.amp_min.value_or(10.93 * q.delta);
    p.amp_min = amp;
    p.amp_max = amp;
    std::vector<int> n_list = cfg.n_samples ? std::vector<int>{*cfg.n_samples}
                                            : std::vector<int>{50, 75, 100, 150, 200, 300};
    TableBuilder tb;
    common_meta(tb, p);
    info_meta(tb, true);
    tb.cols({"n", "var_exact", "var_exact_norm", "var_mc", "var_mc_norm",
             "se_var_mc"});
    const double norm = std::pow(q.delta, 4.0);
    for (int n : n_list) {
        Params pn = p;
        pn.n_samples = n;
        const SineSpec spec = sine_for(amp, pn);
        const MomentReport ada = exact_moments(build_partition(spec, q), p.lambda, n);
        const McReport mc =
            mc_amp_sq(spec, q, mc_config(p, p.records, p.sigma, McModel::quantizer));
        tb.row({double(n), ada.variance_amp_sq, ada.variance_amp_sq / norm, mc.variance,
                mc.variance / norm, mc.std_error_variance / norm});
    }
    return std::move(tb.t);
}

SweepTable run_amp_bias(const ExperimentConfig& cfg) {
    const Params p = resolve(cfg, 8, 0.05, 0.95, 40, 137, 500, 5000, 0.0, false);
    const QuantizerSpec q = p.delta > 0.0 ? QuantizerSpec{p.delta}
                                          : QuantizerSpec::from_bits(p.bits);
    TableBuilder tb;
    common_meta(tb, p);
    info_meta(tb, true);
    tb.cols({"amp", "amp_over_delta", "bias_amp_mc_over_delta", "se_amp_mc_over_delta",
             "bias_amp_predicted_over_delta"});
    for (double amp : amp_grid(p.amp_min, p.amp_max, p.amp_steps)) {
        const SineSpec spec = sine_for(amp, p);
        const McReport mc =
            mc_amp(spec, q, mc_config(p, p.records, p.sigma, McModel::quantizer));
        const MomentReport ada =
            exact_moments(build_partition(spec, q), p.lambda, p.n_samples);
        const double predicted =
            amp_bias_delta_method(ada.mean_amp_sq, ada.variance_amp_sq) - amp;
        tb.row({amp, amp / q.delta, (mc.mean - amp) / q.delta,
                mc.std_error_mean / q.delta, predicted / q.delta});
    }
    return std::move(tb.t);
}

SweepTable run_offset_sweep(const ExperimentConfig& cfg) {
    const Params p = resolve(cfg, 0, 0.03, 0.9, 25, 201, 2000, 0, 0.0, false);
    std::vector<int> bits_list = p.bits > 0 ? std::vector<int>{p.bits}
                                            : std::vector<int>{4, 6};
    TableBuilder tb;
    common_meta(tb, p);
    info_meta(tb, false);
    tb.cols({"bits", "offset", "offset_over_delta", "max_abs_bias",
             "max_abs_bias_norm", "amp_at_max"});
    for (int bits : bits_list) {
        const QuantizerSpec q = QuantizerSpec::from_bits(bits);
        std::vector<double> offsets;
        if (cfg.offset) {
            offsets.push_back(*cfg.offset);
        } else {
            for (int j = -5; j <= 5; ++j) offsets.push_back(q.delta * double(j) / 10.0);
        }
        for (double d : offsets) {
            double best = -1.0, amp_at = 0.0;
            for (double amp : amp_grid(p.amp_min, p.amp_max, p.amp_steps)) {
                SineSpec spec = sine_for(amp, p);
                spec.offset = d;
                const MomentReport r =
                    exact_moments(build_partition(spec, q), p.lambda, p.n_samples);
                if (std::abs(r.bias) > best) {
                    best = std::abs(r.bias);
                    amp_at = amp;
                }
            }
            tb.row({double(bits), d, d / q.delta, best,
                    best / std::pow(q.delta, 4.0 / 3.0), amp_at});
        }
    }
    return std::move(tb.t);
}

SweepTable run_noise_sweep(const ExperimentConfig& cfg, bool variance_mode) {
    const Params p = resolve(cfg, 0, 0.05, 0.9, 21, 539, 2000,
                             variance_mode ? 5000 : 2000, -1.0, false);
    std::vector<int> bits_list = p.bits > 0 ? std::vector<int>{p.bits}
                                            : std::vector<int>{6, 8};
    TableBuilder tb;
    common_meta(tb, p);
    info_meta(tb, true);
    if (variance_mode)
        tb.cols({"bits", "sigma", "sigma_over_delta", "max_var_mc", "amp_at_max",
                 "se_var_at_max"});
    else
        tb.cols({"bits", "sigma", "sigma_over_delta", "max_abs_bias_mc", "amp_at_max",
                 "se_at_max"});
    for (int bits : bits_list) {
        const QuantizerSpec q = QuantizerSpec::from_bits(bits);
        std::vector<double> sigmas;
        if (p.sigma >= 0.0) {
            sigmas.push_back(p.sigma);
        } else {
            for (double f : {0.0, 0.2, 0.4, 0.6}) sigmas.push_back(f * q.delta);
        }
        for (double sig : sigmas) {
            double best = -1.0, amp_at = 0.0, se_at = 0.0;
            for (double amp : amp_grid(p.amp_min, p.amp_max, p.amp_steps)) {
                const SineSpec spec = sine_for(amp, p);
                const McReport mc =
                    mc_amp_sq(spec, q, mc_config(p, p.records, sig, McModel::quantizer));
                const double score =
                    variance_mode ? mc.variance : std::abs(mc.mean - amp * amp);
                if (score > best) {
                    best = score;
                    amp_at = amp;
                    se_at = variance_mode ? mc.std_error_variance : mc.std_error_mean;
                }
            }
            tb.row({double(bits), sig, sig / q.delta, best, amp_at, se_at});
        }
    }
    return std::move(tb.t);
}

SweepTable run_custom_sweep(const ExperimentConfig& cfg) {
    const Params p = resolve(cfg, 8, 0.05, 0.95, 20, 7, 256, 0, 0.0, false);
    const QuantizerSpec q = p.delta > 0.0 ? QuantizerSpec{p.delta}
                                          : QuantizerSpec::from_bits(p.bits);
    TableBuilder tb;
    common_meta(tb, p);
    info_meta(tb, p.records > 0);
    std::vector<std::string> cols = {"amp",        "gamma",      "bias_exact",
                                     "var_exact",  "mse_exact",  "bias_series",
                                     "bias_asym",  "h_tail",     "b1",
                                     "b2_nearest"};
    if (p.records > 0) {
        cols.push_back("bias_mc");
        cols.push_back("var_mc");
        cols.push_back("se_mc");
    }
    tb.cols(cols);
    SeriesControl ctrl;
    ctrl.abs_tol = 1e-10;
    for (double amp : amp_grid(p.amp_min, p.amp_max, p.amp_steps)) {
        const SineSpec spec = sine_for(amp, p);
        const MomentReport ada =
            exact_moments(build_partition(spec, q), p.lambda, p.n_samples);
        const BiasReport fda = bias_finite_n(amp, q.delta, p.n_samples, p.lambda, ctrl);
        std::vector<double> row = {amp,
                                   amp / q.delta,
                                   ada.bias,
                                   ada.variance_amp_sq,
                                   ada.mse,
                                   fda.bias_finite_n,
                                   fda.bias_asymptotic,
                                   8.0 * fda.h_tail_estimate,
                                   fda.bound_b1,
                                   fda.bound_b2};
        if (p.records > 0) {
            const McReport mc = mc_amp_sq(
                spec, q, mc_config(p, p.records, p.sigma, McModel::quantizer));
            row.push_back(mc.mean - amp * amp);
            row.push_back(mc.variance);
            row.push_back(mc.std_error_mean);
        }
        tb.row(row);
    }
    return std::move(tb.t);
}

}  // namespace

void apply_config_kv(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value) {
    if (key == "experiment")
        cfg.experiment = value;
    else if (key == "bits")
        cfg.bits = int(parse_int(key, value));
    else if (key == "delta")
        cfg.delta = parse_double(key, value);
    else if (key == "amp-min")
        cfg.amp_min = parse_double(key, value);
    else if (key == "amp-max")
        cfg.amp_max = parse_double(key, value);
    else if (key == "amp-steps")
        cfg.amp_steps = int(parse_int(key, value));
    else if (key == "lambda")
        cfg.lambda = int(parse_int(key, value));
    else if (key == "n")
        cfg.n_samples = int(parse_int(key, value));
    else if (key == "records")
        cfg.records = parse_int(key, value);
    else if (key == "seed")
        cfg.seed = parse_u64(key, value);
    else if (key == "sigma")
        cfg.sigma = parse_double(key, value);
    else if (key == "offset")
        cfg.offset = parse_double(key, value);
    else if (key == "out")
        cfg.out = value;
    else
        throw std::invalid_argument("unknown config key: '" + key + "'");
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        apply_config_kv(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

ExperimentConfig config_from_csv_metadata(std::istream& csv) {
    static const char* informational[] = {"version", "schema", "gaussian",
                                          "warning", "lambda-alt"};
    ExperimentConfig cfg;
    std::string line;
    bool any = false;
    while (csv.peek() == '#' && std::getline(csv, line)) {
        std::string body = trim(line.substr(1));
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("metadata line without '=': " + line);
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        bool skip = false;
        for (const char* k : informational)
            if (key == k) skip = true;
        if (!skip) {
            apply_config_kv(cfg, key, value);
            any = true;
        }
    }
    if (!any || cfg.experiment.empty())
        throw std::invalid_argument("no experiment metadata found in CSV");
    return cfg;
}

std::vector<std::string> list_experiments() {
    return {
        "scalar-gain-variance: random-gain scalar model, estimator variance vs theta",
        "coherence-std: std of the amplitude-power estimate, coherent vs non-coprime lambda",
        "bias-curves: exact and series bias across amplitude for several bit depths",
        "max-bias-bits: worst-case asymptotic bias per bit depth, with bounds",
        "bias-vs-n: bias convergence in record length at fixed amplitude",
        "max-var-bits: worst-case phase-average variance, bias^2 and mse per bit depth",
        "var-vs-n: estimator variance vs record length at fixed amplitude",
        "amp-bias: amplitude-domain bias against the moment-expansion prediction",
        "offset-sweep: worst-case bias as the signal offset walks across one cell",
        "noise-bias: worst-case bias under Gaussian dither of growing sigma",
        "noise-var: worst-case variance under Gaussian dither of growing sigma",
        "custom-sweep: one configuration, all engines side by side",
    };
}

SweepTable run_experiment(const ExperimentConfig& cfg) {
    const std::string& id = cfg.experiment;
    if (id == "scalar-gain-variance") return run_scalar_gain_variance(cfg);
    if (id == "coherence-std") return run_coherence_std(cfg);
    if (id == "bias-curves") return run_bias_curves(cfg);
    if (id == "max-bias-bits") return run_max_bias_bits(cfg);
    if (id == "bias-vs-n") return run_bias_vs_n(cfg);
    if (id == "max-var-bits") return run_max_var_bits(cfg);
    if (id == "var-vs-n") return run_var_vs_n(cfg);
    if (id == "amp-bias") return run_amp_bias(cfg);
    if (id == "offset-sweep") return run_offset_sweep(cfg);
    if (id == "noise-bias") return run_noise_sweep(cfg, false);
    if (id == "noise-var") return run_noise_sweep(cfg, true);
    if (id == "custom-sweep") return run_custom_sweep(cfg);
    throw std::invalid_argument("unknown experiment: '" + id + "'");
}

void write_csv(const SweepTable& table, std::ostream& os) {
    for (const auto& [k, v] : table.metadata) os << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) os << ",";
        os << table.columns[i];
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            os << fmt17(row[i]);
        }
        os << "\n";
    }
}

// ---- verification suites ----

namespace {

struct Verifier {
    std::ostream& out;
    int passed = 0;
    int failed = 0;
    void check(const std::string& name, bool ok, const std::string& detail = "") {
        if (ok) {
            ++passed;
            out << "ok   " << name << "\n";
        } else {
            ++failed;
            out << "FAIL " << name << (detail.empty() ? "" : ": " + detail) << "\n";
        }
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void verify_g_forms(Verifier& v) {
    const double gammas[] = {0.3, 0.49, 0.5, 1.0, 2.3, 10.93, 100.7};
    const double deltas[] = {0.125, 1.0 / 512.0};
    double worst_series = 0.0, worst_gray = 0.0;
    bool tails_ok = true;
    for (double delta : deltas)
        for (double gamma : gammas) {
            const double amp = gamma * delta;
            const double closed = g_closed(amp, delta);
            const GSum s = g_series(amp, delta);
            const double gray = g_gray(amp, delta);
            const double err_s = std::abs(s.value - closed);
            if (err_s > std::max(1e-10, s.tail_estimate) * 1.0 + 1e-15) tails_ok = false;
            worst_series = std::max(worst_series, err_s);
            worst_gray = std::max(worst_gray, std::abs(gray - closed) / delta);
        }
    v.check("g series vs closed", tails_ok, "worst " + num(worst_series));
    v.check("g gray vs closed", worst_gray <= 1e-12, "worst/delta " + num(worst_gray));
}

void verify_sub_bin(Verifier& v) {
    const QuantizerSpec q = QuantizerSpec::from_bits(8);
    bool ok = true;
    std::string detail;
    for (double f : {0.11, 0.37, 0.49}) {
        const double amp = f * q.delta;
        SineSpec spec;
        spec.amplitude = amp;
        spec.lambda = 7;
        spec.n_samples = 64;
        const MomentReport ada = exact_moments(build_partition(spec, q), 7, 64);
        const BiasReport fda = bias_finite_n(amp, q.delta, 64, 7);
        if (ada.mean_amp_sq != 0.0) {
            ok = false;
            detail = "exact mean " + num(ada.mean_amp_sq);
        }
        if (std::abs(fda.bias_finite_n + amp * amp) > 1e-12 * amp * amp) {
            ok = false;
            detail = "series bias " + num(fda.bias_finite_n);
        }
    }
    v.check("sub-bin regime exact", ok, detail);
}

void verify_partition(Verifier& v) {
    SineSpec spec;
    spec.amplitude = 0.8;
    spec.lambda = 3;
    spec.n_samples = 16;
    spec.offset = 0.03;
    QuantizerSpec q = QuantizerSpec::from_bits(3);
    q.offset_c = 0.1;
    const PhasePartition part = build_partition(spec, q);

    bool sorted = std::is_sorted(part.breakpoints.begin(), part.breakpoints.end());
    double total = 0.0;
    for (std::size_t s = 0; s < part.segment_count(); ++s) total += part.measure(s);
    std::vector<long long> net(spec.n_samples, 0);
    for (const auto& ev : part.events) net[ev.sample] += ev.dcode;
    bool net_zero = true;
    for (long long x : net) net_zero = net_zero && x == 0;

    // replaying the full cycle, wrap group included, must land on codes0
    std::vector<std::int32_t> wrapped = part.codes_row(part.segment_count() - 1);
    for (std::uint32_t e = part.event_offset[0]; e < part.event_offset[1]; ++e)
        wrapped[part.events[e].sample] += part.events[e].dcode;
    const bool cycle = wrapped == part.codes0;

    bool labels = true;
    for (std::size_t s = 0; s < part.segment_count(); s += 3) {
        const double mid = part.breakpoints[s] + 0.5 * part.measure(s);
        const auto codes = part.codes_row(s);
        for (int u = 0; u < spec.n_samples; ++u) {
            const long long r = (1ll * spec.lambda * u) % spec.n_samples;
            const double k = 2.0 * std::numbers::pi * double(r) / spec.n_samples;
            const double sig = -spec.amplitude * std::cos(k + mid) + spec.offset;
            if (codes[u] != quantize_code(q, sig)) labels = false;
        }
    }
    v.check("partition invariants",
            sorted && net_zero && cycle && labels &&
                std::abs(total - 2.0 * std::numbers::pi) < 1e-12,
            "total " + num(total));
}

void verify_engine_pair(Verifier& v, int n, int bits, int lambda, double amp_lo,
                        double amp_hi, int steps, const std::string& name) {
    const QuantizerSpec q = QuantizerSpec::from_bits(bits);
    SeriesControl ctrl;
    ctrl.abs_tol = 1e-10;
    ctrl.rel_tol = 0.0;
    double worst = 0.0;
    bool ok = true;
    for (double amp : amp_grid(amp_lo, amp_hi, steps)) {
        SineSpec spec;
        spec.amplitude = amp;
        spec.lambda = lambda;
        spec.n_samples = n;
        const MomentReport ada = exact_moments(build_partition(spec, q), lambda, n);
        const BiasReport fda = bias_finite_n(amp, q.delta, n, lambda, ctrl);
        const double err = std::abs(ada.bias - fda.bias_finite_n);
        const double tol = std::max(1e-8, 8.0 * fda.h_tail_estimate + 1e-10);
        worst = std::max(worst, err);
        if (err > tol) ok = false;
    }
    v.check(name, ok, "worst " + num(worst));
}

void verify_lsfit(Verifier& v) {
    SineSpec spec;
    spec.amplitude = 0.8;
    spec.lambda = 7;
    spec.n_samples = 32;
    spec.phase = 1.0;
    const QuantizerSpec q = QuantizerSpec::from_bits(3);
    Rng rng(7);
    const std::vector<double> y = make_record(spec, q, 0.0, rng);
    const FitResult f = fit(y, 7, 32);
    const double ds = amp_sq_double_sum(y, 7, 32);
    const bool pair_ok = std::abs(f.amp_sq - ds) <= 1e-12 * std::max(1.0, f.amp_sq);

    const std::vector<double> h = {1, 0, 0, 1, 1, 1, 1, -1};
    const std::vector<double> rhs = {1, 2, 3, 0};
    const std::vector<double> x = general_ls_solve(h, rhs, 2);
    const bool sol_ok =
        std::abs(x[0] - 4.0 / 3.0) < 1e-12 && std::abs(x[1] - 5.0 / 3.0) < 1e-12;

    // residual orthogonal to both columns
    double r0 = 0.0, r1 = 0.0, ynorm = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double ri = rhs[i] - (h[2 * i] * x[0] + h[2 * i + 1] * x[1]);
        r0 += ri * h[2 * i];
        r1 += ri * h[2 * i + 1];
        ynorm += rhs[i] * rhs[i];
    }
    ynorm = std::sqrt(ynorm);
    const bool orth_ok = std::abs(r0) <= 1e-10 * ynorm && std::abs(r1) <= 1e-10 * ynorm;
    v.check("least squares identities", pair_ok && sol_ok && orth_ok);
}

void verify_mc(Verifier& v) {
    SineSpec spec;
    spec.amplitude = 0.7;
    spec.lambda = 7;
    spec.n_samples = 100;
    const QuantizerSpec q = QuantizerSpec::from_bits(6);
    McConfig cfg;
    cfg.replicates = 4000;
    cfg.seed = 99;
    const McReport a = mc_amp_sq(spec, q, cfg);
    const McReport b = mc_amp_sq(spec, q, cfg);
    const bool det = a.mean == b.mean && a.variance == b.variance;

    const MomentReport ada = exact_moments(build_partition(spec, q), 7, 100);
    const double gap = std::abs(a.mean - ada.mean_amp_sq);
    const bool close = gap <= 5.0 * a.std_error_mean;
    v.check("mc determinism and agreement", det && close,
            "gap " + num(gap) + " se " + num(a.std_error_mean));
}

void verify_quantizer(Verifier& v) {
    const QuantizerSpec q = QuantizerSpec::from_bits(5);
    bool ok = true;
    for (int i = -40; i <= 40; ++i) {
        const double s = 0.037 * i;
        const double e = quant_error(q, s);
        const double direct = quantize(q, s) - s;
        if (std::abs(e - direct) > 2.0 * std::abs(s) * 2.3e-16 + 1e-18) ok = false;
        if (i > -40) {
            const double prev = quantize(q, 0.037 * (i - 1));
            if (quantize(q, s) < prev) ok = false;
        }
    }
    QuantizerSpec sat = q;
    sat.overload = OverloadPolicy::saturating;
    if (quantize(sat, 37.0) != 1.0 || quantize(sat, -37.0) != -1.0) ok = false;
    v.check("quantizer identities", ok);
}

void verify_csv_roundtrip(Verifier& v) {
    ExperimentConfig cfg;
    cfg.experiment = "custom-sweep";
    cfg.bits = 5;
    cfg.n_samples = 32;
    cfg.lambda = 5;
    cfg.amp_steps = 3;
    cfg.records = 200;
    std::ostringstream first;
    write_csv(run_experiment(cfg), first);
    std::istringstream back(first.str());
    const ExperimentConfig cfg2 = config_from_csv_metadata(back);
    std::ostringstream second;
    write_csv(run_experiment(cfg2), second);
    v.check("csv metadata round-trip", first.str() == second.str());
}

void verify_mutation(Verifier& v) {
    // the exact-vs-series agreement must be sharp enough that a 1e-6 nudge of
    // g breaks it; otherwise the cross-check proves nothing
    const double amp = 0.73, delta = QuantizerSpec::from_bits(6).delta;
    SineSpec spec;
    spec.amplitude = amp;
    spec.lambda = 7;
    spec.n_samples = 50;
    const QuantizerSpec q = QuantizerSpec::from_bits(6);
    SeriesControl ctrl;
    ctrl.abs_tol = 1e-10;
    const MomentReport ada = exact_moments(build_partition(spec, q), 7, 50);
    const BiasReport fda = bias_finite_n(amp, delta, 50, 7, ctrl);
    const double honest = std::abs(ada.bias - fda.bias_finite_n);
    const double mutated =
        std::abs(ada.bias - (4.0 * amp * (fda.g_value + 1e-6) + 8.0 * fda.h_value));
    v.check("mutation sensitivity", honest < 1e-8 && mutated > 1e-7,
            "honest " + num(honest) + " mutated " + num(mutated));
}

void verify_coherence_mini(Verifier& v) {
    const QuantizerSpec q = QuantizerSpec::from_bits(13);
    McConfig cfg;
    cfg.replicates = 1500;
    cfg.seed = 12345;
    SineSpec s1;
    s1.amplitude = 0.5;
    s1.lambda = 201;
    s1.n_samples = 2000;
    SineSpec s2 = s1;
    s2.lambda = 200;
    const double coh = std::sqrt(mc_amp_sq(s1, q, cfg).variance);
    const double non = std::sqrt(mc_amp_sq(s2, q, cfg).variance);
    v.check("coherence penalty", non >= 3.0 * coh,
            "ratio " + num(non / (coh > 0 ? coh : 1e-300)));
}

void verify_var_decreasing(Verifier& v) {
    const QuantizerSpec q = QuantizerSpec::from_bits(10);
    const double amp = 10.93 * q.delta;
    double prev = 1e300;
    bool ok = true;
    for (int n : {50, 100, 300}) {
        SineSpec spec;
        spec.amplitude = amp;
        spec.lambda = 7;
        spec.n_samples = n;
        const MomentReport r = exact_moments(build_partition(spec, q), 7, n);
        if (r.variance_amp_sq >= prev) ok = false;
        prev = r.variance_amp_sq;
    }
    v.check("variance decreases with n", ok);
}

void verify_noise_mini(Verifier& v) {
    const QuantizerSpec q = QuantizerSpec::from_bits(6);
    SineSpec spec;
    spec.amplitude = 0.7;
    spec.lambda = 11;
    spec.n_samples = 400;
    McConfig cfg;
    cfg.replicates = 1500;
    cfg.seed = 54321;
    double prev_b = 1e300, prev_v = -1.0;
    bool bias_down = true, var_up = true;
    for (double f : {0.0, 0.3, 0.6}) {
        cfg.noise_sigma = f * q.delta;
        const McReport r = mc_amp_sq(spec, q, cfg);
        const double b = std::abs(r.mean - spec.amplitude * spec.amplitude);
        if (b > prev_b + 2.0 * r.std_error_mean) bias_down = false;
        if (r.variance + 2.0 * r.std_error_variance < prev_v) var_up = false;
        prev_b = b;
        prev_v = r.variance;
    }
    v.check("dither tradeoff direction", bias_down && var_up);
}

}  // namespace

bool verify(const std::string& suite, std::ostream& report) {
    if (suite != "fast" && suite != "full")
        throw std::invalid_argument("suite must be 'fast' or 'full'");
    Verifier v{report};
    verify_g_forms(v);
    verify_sub_bin(v);
    verify_partition(v);
    verify_engine_pair(v, 50, 4, 7, 0.1, 0.9, 6, "exact vs series bias (small)");
    verify_lsfit(v);
    verify_mc(v);
    verify_quantizer(v);
    verify_csv_roundtrip(v);
    verify_mutation(v);
    if (suite == "full") {
        verify_engine_pair(v, 100, 6, 13, 0.05, 0.95, 10, "exact vs series bias (medium)");
        verify_engine_pair(v, 300, 10, 239, 0.05, 0.95, 8, "exact vs series bias (large)");
        verify_coherence_mini(v);
        verify_var_decreasing(v);
        verify_noise_mini(v);
    }
    report << "verify " << suite << ": " << v.passed << "/" << (v.passed + v.failed)
           << " checks passed\n";
    return v.failed == 0;
}

}  // namespace quantsine
