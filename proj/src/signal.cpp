#include "quantsine/signal.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace quantsine {

bool SineSpec::non_coprime() const {
    return std::gcd(static_cast<long long>(lambda), static_cast<long long>(n_samples)) > 1;
}

void SineSpec::validate() const {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw std::invalid_argument("sine amplitude must be finite and >= 0");
    if (lambda < 1) throw std::invalid_argument("lambda must be >= 1");
    if (n_samples < 3) throw std::invalid_argument("n_samples must be >= 3");
    if (!std::isfinite(phase) || phase < 0.0 || phase >= 2.0 * std::numbers::pi)
        throw std::invalid_argument("phase must lie in [0, 2pi)");
    if (!std::isfinite(offset)) throw std::invalid_argument("offset must be finite");
}

QuantizerSpec QuantizerSpec::from_bits(int bits, double c, OverloadPolicy pol) {
    if (bits < 1 || bits > 62) throw std::invalid_argument("bits must be in [1, 62]");
    QuantizerSpec q;
    q.delta = 2.0 / double(1ull << bits);
    q.offset_c = c;
    q.overload = pol;
    q.bits = bits;
    q.validate();
    return q;
}

void QuantizerSpec::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("quantizer delta must be finite and > 0");
    if (!std::isfinite(offset_c) || offset_c < -0.5 || offset_c > 0.5)
        throw std::invalid_argument("quantizer offset_c must lie in [-1/2, 1/2]");
    if (bits < 0) throw std::invalid_argument("quantizer bits must be >= 0");
}

double sample_sine(const SineSpec& spec, int i) {
    if (i < 0) throw std::invalid_argument("sample index must be >= 0");
    // reduce the angle to (lambda * i mod N) / N exactly in integers first, so
    // samples one period apart give bit-identical doubles
    const long long r =
        (static_cast<long long>(spec.lambda) * i) % spec.n_samples;
    const double k = 2.0 * std::numbers::pi * double(r) / double(spec.n_samples);
    return -spec.amplitude * std::cos(k + spec.phase) + spec.offset;
}

long long quantize_code(const QuantizerSpec& q, double s) {
    if (!std::isfinite(s)) throw std::invalid_argument("quantizer input must be finite");
    const double t = s / q.delta + 0.5 + q.offset_c;
    long long code = static_cast<long long>(std::floor(t));
    if (q.overload == OverloadPolicy::saturating) {
        // largest code whose output stays inside the [-1, 1] full-scale range
        const long long code_max =
            static_cast<long long>(std::floor(1.0 / q.delta + 1e-9));
        if (code > code_max) code = code_max;
        if (code < -code_max) code = -code_max;
    }
    return code;
}

double quantize(const QuantizerSpec& q, double s) {
    return q.delta * double(quantize_code(q, s));
}

double quant_error(const QuantizerSpec& q, double s) {
    if (q.offset_c == 0.0 && q.overload == OverloadPolicy::ideal_infinite) {
        const double x = s / q.delta + 0.5;
        return q.delta * 0.5 - q.delta * (x - std::floor(x));
    }
    return quantize(q, s) - s;
}

std::vector<double> make_record(const SineSpec& spec, const QuantizerSpec& q,
                                double noise_sigma, Rng& rng) {
    spec.validate();
    q.validate();
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
        throw std::invalid_argument("noise sigma must be finite and >= 0");
    std::vector<double> y(static_cast<std::size_t>(spec.n_samples));
    for (int i = 0; i < spec.n_samples; ++i) {
        double s = sample_sine(spec, i);
        if (noise_sigma > 0.0) s += noise_sigma * rng.gaussian();
        y[static_cast<std::size_t>(i)] = quantize(q, s);
    }
    return y;
}

}  // namespace quantsine
