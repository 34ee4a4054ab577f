#pragma once

#include <vector>

#include "quantsine/rng.hpp"

namespace quantsine {

// Sampled sine model s_i = -A cos(2 pi lambda i / N + phi) + d.
struct SineSpec {
    double amplitude = 1.0;  // A >= 0, quantizer full-scale units
    int lambda = 1;          // periods per record, >= 1
    int n_samples = 16;      // N >= 3
    double phase = 0.0;      // phi, radians
    double offset = 0.0;     // d, additive offset

    // true when gcd(lambda, N) > 1, i.e. the record repeats instantaneous phases
    bool non_coprime() const;
    void validate() const;
};

enum class OverloadPolicy { ideal_infinite, saturating };

// Uniform mid-tread quantizer y = delta * floor(s/delta + 1/2 + c), with the
// output optionally saturated to the [-1, 1] code range.
struct QuantizerSpec {
    double delta = 0.25;  // step, > 0
    double offset_c = 0.0;  // c in [-1/2, 1/2]; -1/2 turns the rounder into truncation
    OverloadPolicy overload = OverloadPolicy::ideal_infinite;
    int bits = 0;  // 0 when not constructed from a bit count

    // delta = 2 / 2^bits, exact in binary floating point
    static QuantizerSpec from_bits(int bits, double c = 0.0,
                                   OverloadPolicy pol = OverloadPolicy::ideal_infinite);
    void validate() const;
};

double sample_sine(const SineSpec& spec, int i);

long long quantize_code(const QuantizerSpec& q, double s);
double quantize(const QuantizerSpec& q, double s);

// delta/2 - delta*<s/delta + 1/2>, the c = 0 error law; equals quantize - s
double quant_error(const QuantizerSpec& q, double s);

// y_i = quantize(s_i + n_i), n_i iid N(0, sigma^2); noise skipped when sigma == 0
std::vector<double> make_record(const SineSpec& spec, const QuantizerSpec& q,
                                double noise_sigma, Rng& rng);

}  // namespace quantsine
