#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracle_values.hpp"
#include "quantsine/ada.hpp"
#include "quantsine/lsfit.hpp"

using namespace quantsine;

namespace {

constexpr double k_two_pi = 2.0 * std::numbers::pi;

void check_partition_consistency(const PhasePartition& part, const SineSpec& spec,
                                 const QuantizerSpec& q) {
    REQUIRE(part.segment_count() >= 1);
    double total = 0.0;
    for (std::size_t s = 0; s < part.segment_count(); ++s) {
        CHECK(part.measure(s) > 0.0);
        total += part.measure(s);
    }
    CHECK(std::abs(total - k_two_pi) < 1e-12);

    // replaying every crossing, the wrap group included, returns to codes0
    std::vector<std::int32_t> codes = part.codes_row(part.segment_count() - 1);
    for (std::uint32_t e = part.event_offset[0]; e < part.event_offset[1]; ++e)
        codes[part.events[e].sample] += part.events[e].dcode;
    CHECK(codes == part.codes0);

    // interior labels match direct quantization; probe off-center, since a
    // cancelled tangency can coincide with the exact midpoint
    for (std::size_t s = 0; s < part.segment_count(); ++s) {
        const double hi = s + 1 < part.segment_count() ? part.breakpoints[s + 1]
                                                       : part.breakpoints[0] + k_two_pi;
        const double mid = part.breakpoints[s] + 0.381966011250105 * (hi - part.breakpoints[s]);
        const auto row = part.codes_row(s);
        for (int u = 0; u < spec.n_samples; ++u) {
            const long long r = (1ll * spec.lambda * u) % spec.n_samples;
            const double k = k_two_pi * double(r) / double(spec.n_samples);
            const double sig = -spec.amplitude * std::cos(k + mid) + spec.offset;
            CHECK(row[u] == quantize_code(q, sig));
        }
    }
}

}  // namespace

TEST_SUITE("ada") {

TEST_CASE("level phase set for the reference level") {
    const auto arcs = level_phi_set(0.3, 0.25, 0.0, 0.0, 0.0, 1);
    REQUIRE(arcs.size() == 1);
    CHECK(std::abs(arcs[0].lo - oracle::k_level_lo) < 1e-12);
    CHECK(std::abs(arcs[0].hi - oracle::k_level_hi) < 1e-12);
    CHECK(std::abs(arcs[0].measure() - oracle::k_level_measure) < 1e-12);
}

TEST_CASE("level phase set edge regimes") {
    CHECK(level_phi_set(0.3, 0.25, 0.0, 0.0, 0.0, 3).empty());   // unreachable
    CHECK(level_phi_set(0.3, 0.25, 0.0, 0.0, 0.0, -3).empty());
    const auto full = level_phi_set(0.1, 0.25, 0.0, 0.0, 0.7, 0);  // whole circle
    REQUIRE(full.size() == 1);
    CHECK(full[0].lo == 0.0);
    CHECK(full[0].measure() == doctest::Approx(k_two_pi).epsilon(1e-15));
    // measures over all reachable levels tile the circle
    double covered = 0.0;
    for (long long n = -6; n <= 6; ++n)
        for (const auto& arc : level_phi_set(0.9, 0.25, 0.0, 0.03, 1.1, n))
            covered += arc.measure();
    CHECK(std::abs(covered - k_two_pi) < 1e-12);
    CHECK_THROWS_AS(level_phi_set(0.0, 0.25, 0.0, 0.0, 0.0, 0), std::invalid_argument);
}

TEST_CASE("partition reproduces the bisection-checked moments, config A") {
    SineSpec spec;
    spec.amplitude = 0.9;
    spec.lambda = 1;
    spec.n_samples = 4;
    const QuantizerSpec q = QuantizerSpec::from_bits(2);
    const PhasePartition part = build_partition(spec, q);
    // the reference count treats every crossing as its own boundary; here the
    // quarter-wave symmetry makes crossings coincide pairwise, so half as many
    // distinct breakpoints carry the same 32 events
    CHECK(int(part.events.size()) == oracle::k_ada_a_segments);
    CHECK(part.segment_count() == 16);
    check_partition_consistency(part, spec, q);
    const MomentReport m = exact_moments(part, 1, 4);
    CHECK(std::abs(m.mean_amp_sq - oracle::k_ada_a_mean) < 1e-12);
    CHECK(std::abs(m.second_moment_amp_sq - oracle::k_ada_a_second) < 1e-12);
    CHECK(m.variance_amp_sq >= 0.0);
    CHECK(m.mse == m.bias * m.bias + m.variance_amp_sq);
}

TEST_CASE("partition reproduces the bisection-checked moments, config B") {
    SineSpec spec;
    spec.amplitude = 0.7;
    spec.lambda = 2;
    spec.n_samples = 5;
    spec.offset = 0.07;
    const QuantizerSpec q = QuantizerSpec::from_bits(3);
    const PhasePartition part = build_partition(spec, q);
    CHECK(int(part.segment_count()) == oracle::k_ada_b_segments);
    check_partition_consistency(part, spec, q);
    const MomentReport m = exact_moments(part, 2, 5);
    CHECK(std::abs(m.mean_amp_sq - oracle::k_ada_b_mean) < 1e-12);
    CHECK(std::abs(m.second_moment_amp_sq - oracle::k_ada_b_second) < 1e-12);
}

TEST_CASE("tangent amplitudes cancel cleanly") {
    // A = 1.5 * delta puts the peaks exactly on a decision boundary
    SineSpec spec;
    spec.amplitude = 0.75;
    spec.lambda = 1;
    spec.n_samples = 4;
    const QuantizerSpec q = QuantizerSpec::from_bits(2);
    const PhasePartition part = build_partition(spec, q);
    check_partition_consistency(part, spec, q);
    const MomentReport m = exact_moments(part, 1, 4);
    CHECK(m.variance_amp_sq >= 0.0);
}

TEST_CASE("zero amplitude degenerates to one segment") {
    SineSpec spec;
    spec.amplitude = 0.0;
    spec.lambda = 3;
    spec.n_samples = 8;
    spec.offset = 0.2;
    const QuantizerSpec q = QuantizerSpec::from_bits(3);
    const PhasePartition part = build_partition(spec, q);
    CHECK(part.segment_count() == 1);
    const MomentReport m = exact_moments(part, 3, 8);
    // a constant record projects onto the quadrature pair only through the
    // rounding residue of the trig sums
    CHECK(m.mean_amp_sq >= 0.0);
    CHECK(m.mean_amp_sq < 1e-30);
    CHECK(m.variance_amp_sq >= 0.0);
    CHECK(m.variance_amp_sq < 1e-30);
}

TEST_CASE("sub-bin amplitude gives identically zero estimate") {
    SineSpec spec;
    spec.amplitude = 0.11;
    spec.lambda = 5;
    spec.n_samples = 32;
    const QuantizerSpec q = QuantizerSpec::from_bits(2);  // delta = 0.5
    const PhasePartition part = build_partition(spec, q);
    CHECK(part.segment_count() == 1);
    const MomentReport m = exact_moments(part, 5, 32);
    CHECK(m.mean_amp_sq == 0.0);
    CHECK(m.bias == -spec.amplitude * spec.amplitude);
}

TEST_CASE("moment sweep equals brute-force segment evaluation") {
    SineSpec spec;
    spec.amplitude = 0.83;
    spec.lambda = 3;
    spec.n_samples = 10;
    spec.offset = -0.04;
    QuantizerSpec q = QuantizerSpec::from_bits(4);
    q.offset_c = -0.2;
    const PhasePartition part = build_partition(spec, q);
    check_partition_consistency(part, spec, q);

    double mean = 0.0;
    for (std::size_t s = 0; s < part.segment_count(); ++s) {
        const auto row = part.codes_row(s);
        std::vector<double> y(spec.n_samples);
        for (int u = 0; u < spec.n_samples; ++u) y[u] = q.delta * row[u];
        mean += amp_sq_double_sum(y, spec.lambda, spec.n_samples) * part.measure(s);
    }
    mean /= k_two_pi;
    const MomentReport m = exact_moments(part, spec.lambda, spec.n_samples);
    CHECK(std::abs(m.mean_amp_sq - mean) < 1e-12 * std::max(1.0, std::abs(mean)));
}

TEST_CASE("exact moments validate their inputs") {
    SineSpec spec;
    spec.amplitude = 0.4;
    spec.lambda = 2;
    spec.n_samples = 8;
    const QuantizerSpec q = QuantizerSpec::from_bits(3);
    const PhasePartition part = build_partition(spec, q);
    CHECK_THROWS_AS(exact_moments(part, 2, 10), std::invalid_argument);  // N mismatch
    CHECK_THROWS_AS(exact_moments(part, 4, 8), std::invalid_argument);   // degenerate
    CHECK_NOTHROW(exact_moments(part, 2, 8));
}

TEST_CASE("single-sample joint moments match the reference integrals") {
    SineSpec spec;
    spec.amplitude = 0.875;
    spec.lambda = 1;
    spec.n_samples = 8;
    const QuantizerSpec q = QuantizerSpec::from_bits(3);
    CHECK(std::abs(joint_moment(spec, q, {0}, {2}) - oracle::k_ey2_b3) < 1e-12);

    SineSpec pair = spec;
    pair.amplitude = 1.0;
    CHECK(std::abs(joint_moment(pair, q, {0, 1}, {1, 1}) - oracle::k_pair_b3) < 1e-12);
}

TEST_CASE("pairwise joint moments rebuild the mean estimate") {
    SineSpec spec;
    spec.amplitude = 0.66;
    spec.lambda = 2;
    spec.n_samples = 5;
    const QuantizerSpec q = QuantizerSpec::from_bits(3);
    const int n = spec.n_samples;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int u = 0; u < n; ++u) {
            const long long r = ((1ll * spec.lambda * (i - u)) % n + n) % n;
            const double c = std::cos(k_two_pi * double(r) / double(n));
            const double e =
                i == u ? joint_moment(spec, q, {i}, {2})
                       : joint_moment(spec, q, {i, u}, {1, 1});
            acc += c * e;
        }
    acc *= 4.0 / double(n * n);
    const MomentReport m =
        exact_moments(build_partition(spec, q), spec.lambda, spec.n_samples);
    CHECK(std::abs(acc - m.mean_amp_sq) < 1e-12);
}

TEST_CASE("joint moment input validation") {
    SineSpec spec;
    spec.amplitude = 0.3;
    spec.lambda = 1;
    spec.n_samples = 6;
    const QuantizerSpec q = QuantizerSpec::from_bits(3);
    CHECK_THROWS_AS(joint_moment(spec, q, {0}, {17}), std::invalid_argument);
    CHECK_THROWS_AS(joint_moment(spec, q, {6}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(joint_moment(spec, q, {0, 1}, {1}), std::invalid_argument);
    // symmetric quantizer, zero offset: E[y_u] vanishes over the phase circle
    CHECK(std::abs(joint_moment(spec, q, {2}, {1})) < 1e-12);
}

TEST_CASE("partitions are deterministic") {
    SineSpec spec;
    spec.amplitude = 0.912;
    spec.lambda = 7;
    spec.n_samples = 30;
    spec.offset = 0.013;
    const QuantizerSpec q = QuantizerSpec::from_bits(4);
    const PhasePartition a = build_partition(spec, q);
    const PhasePartition b = build_partition(spec, q);
    CHECK(a.breakpoints == b.breakpoints);
    CHECK(a.codes0 == b.codes0);
    const MomentReport m = exact_moments(a, 7, 30);
    CHECK(m.variance_amp_sq >= 0.0);
}

}  // TEST_SUITE
