#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "oracle_values.hpp"
#include "quantsine/signal.hpp"

using namespace quantsine;

TEST_SUITE("signal") {

TEST_CASE("sample_sine matches the reference point") {
    SineSpec s;
    s.amplitude = 0.5;
    s.lambda = 3;
    s.n_samples = 8;
    s.phase = std::numbers::pi / 3.0;
    s.offset = 0.1;
    CHECK(std::abs(sample_sine(s, 2) - oracle::k_sample_sine_case) < 1e-15);
}

TEST_CASE("samples one period apart are bit-identical") {
    SineSpec s;
    s.amplitude = 0.9;
    s.lambda = 3;
    s.n_samples = 8;
    s.phase = 1.2345;
    for (int i = 0; i < 8; ++i) {
        CHECK(sample_sine(s, i) == sample_sine(s, i + 8));
        CHECK(sample_sine(s, i) == sample_sine(s, i + 8 * 1000));
    }
    CHECK_THROWS_AS(sample_sine(s, -1), std::invalid_argument);
}

TEST_CASE("spec validation") {
    SineSpec s;
    s.phase = 2.0 * std::numbers::pi;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.phase = -0.1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.phase = 0.0;
    s.n_samples = 2;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.n_samples = 16;
    s.lambda = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.lambda = 4;
    CHECK(s.non_coprime());
    s.lambda = 3;
    CHECK(!s.non_coprime());
}

TEST_CASE("from_bits gives the exact binary step") {
    CHECK(QuantizerSpec::from_bits(1).delta == 1.0);
    CHECK(QuantizerSpec::from_bits(3).delta == 0.25);
    CHECK(QuantizerSpec::from_bits(13).delta == 2.0 / 8192.0);
    CHECK_THROWS_AS(QuantizerSpec::from_bits(0), std::invalid_argument);
    CHECK_THROWS_AS(QuantizerSpec::from_bits(63), std::invalid_argument);
    QuantizerSpec q;
    q.offset_c = 0.6;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}

TEST_CASE("mid-tread rounding") {
    QuantizerSpec q;  // delta = 0.25
    CHECK(quantize(q, 0.0) == 0.0);
    CHECK(quantize(q, 0.124) == 0.0);
    CHECK(quantize(q, 0.126) == 0.25);
    CHECK(quantize(q, -0.126) == -0.25);
    CHECK(quantize_code(q, 0.9) == 4);
    // symmetric away from the decision boundaries
    for (double s : {0.03, 0.2, 0.31, 0.49, 0.77}) CHECK(quantize(q, -s) == -quantize(q, s));
}

TEST_CASE("rounder offset c") {
    QuantizerSpec q;
    q.offset_c = -0.5;  // truncation
    CHECK(quantize(q, 0.2499) == 0.0);
    CHECK(quantize(q, 0.2501) == 0.25);
    q.offset_c = 0.5;
    CHECK(quantize(q, 0.2499) == 0.25);
}

TEST_CASE("error law agrees with quantize minus input") {
    QuantizerSpec q = QuantizerSpec::from_bits(5);
    for (int i = -41; i <= 41; ++i) {
        const double s = 0.0371 * i;
        const double e = quant_error(q, s);
        CHECK(std::abs(e) <= q.delta * 0.5 + 1e-15);
        CHECK(std::abs(e - (quantize(q, s) - s)) <= 2.0 * std::abs(s) * 2.3e-16 + 1e-18);
    }
    // with a rounder offset only the direct path exists
    q.offset_c = 0.3;
    CHECK(quant_error(q, 0.11) == quantize(q, 0.11) - 0.11);
}

TEST_CASE("saturating overload clamps to full scale") {
    QuantizerSpec sat = QuantizerSpec::from_bits(4, 0.0, OverloadPolicy::saturating);
    CHECK(quantize(sat, 12.0) == 1.0);
    CHECK(quantize(sat, -12.0) == -1.0);
    QuantizerSpec ideal = QuantizerSpec::from_bits(4);
    CHECK(quantize(ideal, 12.0) > 1.0);
}

TEST_CASE("records are deterministic and noise perturbs them") {
    SineSpec s;
    s.amplitude = 0.8;
    s.lambda = 5;
    s.n_samples = 64;
    const QuantizerSpec q = QuantizerSpec::from_bits(6);
    Rng r1(42), r2(42), r3(42);
    const auto y1 = make_record(s, q, 0.0, r1);
    const auto y2 = make_record(s, q, 0.0, r2);
    CHECK(y1 == y2);
    for (int i = 0; i < s.n_samples; ++i) CHECK(y1[i] == quantize(q, sample_sine(s, i)));
    const auto y3 = make_record(s, q, 0.4 * q.delta, r3);
    CHECK(y3 != y1);
    Rng r4(42);
    CHECK_THROWS_AS(make_record(s, q, -1.0, r4), std::invalid_argument);
}

TEST_CASE("rng streams") {
    Rng a(7), b(7), c(8);
    bool same = true, differ = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t x = a.next_u64();
        same = same && x == b.next_u64();
        differ = differ || x != c.next_u64();
    }
    CHECK(same);
    CHECK(differ);

    Rng u(123);
    double lo = 1.0, hi = 0.0, acc = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = u.uniform01();
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        acc += x;
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(acc / n - 0.5) < 0.01);

    Rng g(5);
    double m = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = g.gaussian();
        m += x;
        m2 += x * x;
    }
    CHECK(std::abs(m / n) < 0.03);
    CHECK(std::abs(m2 / n - 1.0) < 0.05);

    // replicate streams are decorrelated reseedings, not substreams
    Rng s0 = make_replicate_stream(99, 0);
    Rng s1 = make_replicate_stream(99, 1);
    CHECK(s0.next_u64() != s1.next_u64());
}

}  // TEST_SUITE
