#pragma once

#include <cstdint>
#include <string>

#include "quantsine/signal.hpp"

namespace quantsine {

enum class McModel { quantizer, simple_uniform, gaussian_no_quant };

struct McConfig {
    std::int64_t replicates = 5000;  // R >= 2
    std::uint64_t seed = 1;
    double noise_sigma = 0.0;        // >= 0; pre-quantization Gaussian dither
    McModel model = McModel::quantizer;
};

struct McReport {
    double mean = 0.0;
    double variance = 0.0;            // sample variance, /(R-1)
    double mse = 0.0;                 // (mean - truth)^2 + variance
    double std_error_mean = 0.0;      // sqrt(variance / R)
    double std_error_variance = 0.0;  // variance * sqrt(2/(R-1)), normal approx
    std::int64_t replicates_used = 0;
    std::string engine = "mc";
};

// Monte Carlo over records with phase drawn uniformly per replicate (spec.phase
// is ignored here). Reductions run over replicate-indexed buffers with a fixed
// pairwise tree, so results are bit-reproducible for a given seed no matter how
// the replicates would be scheduled.
McReport mc_amp_sq(const SineSpec& spec, const QuantizerSpec& q, const McConfig& cfg);

// same records, statistic A_hat = sqrt(A_hat^2); truth for mse is A
McReport mc_amp(const SineSpec& spec, const QuantizerSpec& q, const McConfig& cfg);

// Scalar gain model: h_i = cos(phi_i) with phi_i iid U(0, 2 pi], x_i = theta h_i,
// theta_hat = sum(y h) / sum(h^2). Models: quantizer or simple_uniform.
McReport mc_scalar_theta(double theta, const QuantizerSpec& q, int n_samples,
                         const McConfig& cfg);

// Ratio-of-moments pipeline for the scalar model with y = theta h + u,
// u iid U[-delta/2, delta/2): returns the Taylor-expanded mean and variance of
// theta_hat (which collapse to exactly theta and delta^2/(6N)).
struct SimpleMoments {
    double mean = 0.0;
    double variance = 0.0;
};
SimpleMoments simple_model_moments(double theta, double delta, int n_samples);

// Var(A_hat^2) under additive Gaussian noise with no quantizer, estimated at a
// fixed internal seed with R = 5000 and lambda = 1; sigma = 0 returns exactly 0.
// Closed form for tests: 4 tau^2 (A^2 + tau^2), tau^2 = 2 sigma^2 / N.
double gaussian_reference_variance(double amp, double sigma, int n_samples);

}  // namespace quantsine
