#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracle_values.hpp"
#include "quantsine/lsfit.hpp"
#include "quantsine/signal.hpp"

using namespace quantsine;

namespace {

std::vector<double> quantized_record(double amp, double phase, int lambda, int n,
                                     const QuantizerSpec& q) {
    SineSpec s;
    s.amplitude = amp;
    s.lambda = lambda;
    s.n_samples = n;
    s.phase = phase;
    Rng rng(1);
    return make_record(s, q, 0.0, rng);
}

}  // namespace

TEST_SUITE("lsfit") {

TEST_CASE("quantized record fit matches the reference values") {
    const auto y = quantized_record(0.8, 1.0, 7, 32, QuantizerSpec::from_bits(3));
    const FitResult f = fit(y, 7, 32);
    CHECK(std::abs(f.theta.theta1 - oracle::k_fit_theta1) < 1e-14);
    CHECK(std::abs(f.theta.theta2 - oracle::k_fit_theta2) < 1e-14);
    CHECK(std::abs(f.amp_sq - oracle::k_fit_ampsq) < 1e-14);
    CHECK(f.amp == std::sqrt(f.amp_sq));
}

TEST_CASE("clean sine is recovered exactly") {
    const int n = 48, lambda = 5;
    const double amp = 0.73, phase = 2.1;
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        const double k = 2.0 * std::numbers::pi * lambda * i / double(n);
        y[i] = -amp * std::cos(k + phase);
    }
    const FitResult f = fit(y, lambda, n);
    CHECK(std::abs(f.theta.theta1 - amp * std::cos(phase)) < 1e-13);
    CHECK(std::abs(f.theta.theta2 - amp * std::sin(phase)) < 1e-13);
    CHECK(std::abs(f.amp_sq - amp * amp) < 1e-13);
}

TEST_CASE("projection is offset-invariant") {
    auto y = quantized_record(0.6, 0.4, 3, 20, QuantizerSpec::from_bits(4));
    const ThetaEstimate t0 = fit_theta(y, 3, 20);
    for (auto& v : y) v += 0.37;
    const ThetaEstimate t1 = fit_theta(y, 3, 20);
    CHECK(std::abs(t0.theta1 - t1.theta1) < 1e-13);
    CHECK(std::abs(t0.theta2 - t1.theta2) < 1e-13);
}

TEST_CASE("double-sum route agrees with the projection route") {
    for (int lambda : {1, 7, 11}) {
        const auto y = quantized_record(0.9, 0.77, lambda, 40, QuantizerSpec::from_bits(5));
        const double a = amp_sq_estimate(fit_theta(y, lambda, 40));
        const double b = amp_sq_double_sum(y, lambda, 40);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
    }
}

TEST_CASE("degenerate designs are rejected") {
    std::vector<double> y(8, 0.0);
    CHECK_THROWS_AS(fit_theta(y, 4, 8), std::invalid_argument);  // 2*lambda = N
    CHECK_THROWS_AS(fit_theta(y, 8, 8), std::invalid_argument);  // constant columns
    std::vector<double> y3(3, 0.0);
    CHECK_THROWS_AS(fit_theta(y3, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(fit_theta(y, 7, 9), std::invalid_argument);  // size mismatch
    CHECK_THROWS_AS(fit_theta(y, 0, 8), std::invalid_argument);
}

TEST_CASE("general solver on the worked 4x2 system") {
    const std::vector<double> h = {1, 0, 0, 1, 1, 1, 1, -1};
    const std::vector<double> y = {1, 2, 3, 0};
    const auto x = general_ls_solve(h, y, 2);
    REQUIRE(x.size() == 2);
    CHECK(std::abs(x[0] - 4.0 / 3.0) < 1e-14);
    CHECK(std::abs(x[1] - 5.0 / 3.0) < 1e-14);
}

TEST_CASE("general solver recovers an exact p=3 model") {
    // y = H x with x = (0.5, -2, 0.25) and small integer design entries
    const std::vector<double> h = {1, 2, 0,  1, 0, 4,  1, 1, 1,
                                   1, 3, 2,  1, 1, 0,  1, 0, 2};
    const std::vector<double> x_true = {0.5, -2.0, 0.25};
    std::vector<double> y(6);
    for (int i = 0; i < 6; ++i)
        y[i] = h[3 * i] * x_true[0] + h[3 * i + 1] * x_true[1] + h[3 * i + 2] * x_true[2];
    const auto x = general_ls_solve(h, y, 3);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(x[j] - x_true[j]) < 1e-13);
}

TEST_CASE("general solver flags a singular design") {
    // second column is twice the first
    const std::vector<double> h = {1, 2, 2, 4, 3, 6};
    const std::vector<double> y = {1, 1, 1};
    CHECK_THROWS_AS(general_ls_solve(h, y, 2), std::domain_error);
}

}  // TEST_SUITE
