#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracle_values.hpp"
#include "quantsine/fda.hpp"
#include "quantsine/signal.hpp"

using namespace quantsine;

TEST_SUITE("fda") {

TEST_CASE("sieve keeps the surviving sign patterns") {
    const auto all_ones = diophantine_sieve(1, 1, 1, 1);
    int count = 0;
    for (const auto& s : all_ones) count += s.satisfied ? 1 : 0;
    CHECK(count == 3);
    CHECK(all_ones[1].satisfied);  // 1 + 1 - 1 - 1
    CHECK(all_ones[6].satisfied);  // 1 - 1 + 1 - 1
    CHECK(all_ones[7].satisfied);  // 1 - 1 - 1 + 1
    CHECK(!all_ones[0].satisfied);

    const auto three = diophantine_sieve(3, 1, 1, 1);
    count = 0;
    for (const auto& s : three) count += s.satisfied ? 1 : 0;
    CHECK(count == 1);
    CHECK(three[5].satisfied);  // 3 - 1 - 1 - 1

    const auto five = diophantine_sieve(5, 3, 1, 1);
    count = 0;
    for (const auto& s : five) count += s.satisfied ? 1 : 0;
    CHECK(count == 1);
    CHECK(five[5].satisfied);

    CHECK_THROWS_AS(diophantine_sieve(2, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(diophantine_sieve(1, 1, -1, 1), std::invalid_argument);
}

TEST_CASE("h for the fixed reference configurations") {
    // the harmonic tail bound decays like 1/terms, so the tolerance has to be
    // config-aware; the reference values carry their own truncation bounds
    const double delta10 = QuantizerSpec::from_bits(10).delta;
    SeriesControl c1;
    c1.abs_tol = 1.3e-14;
    c1.rel_tol = 0.0;
    const HTerm h1 = h_term(10.93 * delta10, delta10, 300, 7, c1);
    CHECK(h1.converged);
    CHECK(std::abs(h1.value - oracle::k_crit1_h) <= c1.abs_tol + oracle::k_crit1_h_tail);
    CHECK(h1.tail_estimate <= 2.0 * oracle::k_crit1_h_tail);
    CHECK(h1.tail_estimate >= 0.1 * oracle::k_crit1_h_tail);

    const double delta6 = QuantizerSpec::from_bits(6).delta;
    SeriesControl c2;
    c2.abs_tol = 4.5e-10;
    c2.rel_tol = 0.0;
    const HTerm h2 = h_term(11.84 * delta6, delta6, 20, 3, c2);
    CHECK(h2.converged);
    CHECK(std::abs(h2.value - oracle::k_h_b6_n20) <=
          h2.tail_estimate + oracle::k_h_b6_n20_tail);
    CHECK(h2.tail_estimate <= 2.0 * oracle::k_h_b6_n20_tail);

    // an unreachable target is reported, not silently declared met
    SeriesControl c3;
    c3.abs_tol = 1e-18;
    c3.rel_tol = 0.0;
    c3.max_terms = 20000;
    const HTerm h3 = h_term(11.84 * delta6, delta6, 20, 3, c3);
    CHECK_FALSE(h3.converged);
    CHECK(h3.tail_estimate > c3.abs_tol);
}

TEST_CASE("h sub-bin regime is closed form") {
    const HTerm h = h_term(0.1, 1.0, 64, 7);
    CHECK(h.converged);
    CHECK(h.tail_estimate == 0.0);
    CHECK(h.value == doctest::Approx(0.1 * 0.1 / 8.0).epsilon(1e-14));
    const HTerm z = h_term(0.0, 1.0, 64, 7);
    CHECK(z.value == 0.0);
}

TEST_CASE("h validates the reduced record length") {
    CHECK_THROWS_AS(h_term(0.5, 0.25, 4, 2, {}), std::invalid_argument);   // N' = 2
    CHECK_THROWS_AS(h_term(0.5, 0.25, 6, 6, {}), std::invalid_argument);   // N' = 1
    CHECK_NOTHROW(h_term(0.5, 0.25, 6, 2, {}));                            // N' = 3
}

TEST_CASE("coherent averages collapse identically for shared residues") {
    // lambda and N with gcd 5: only N/5 distinct phases occur, and h depends
    // on the design through N' alone
    const double delta = QuantizerSpec::from_bits(5).delta;
    const HTerm a = h_term(0.71, delta, 35, 10);  // N' = 7
    const HTerm b = h_term(0.71, delta, 7, 3);    // N' = 7 directly
    CHECK(a.value == b.value);
}

TEST_CASE("slow double-Bessel route agrees with the sparse factorization") {
    const double delta = QuantizerSpec::from_bits(6).delta;
    const double amp = 11.84 * delta;
    const double ref = h_term_j0_reference(amp, delta, 20, 3, 400);
    CHECK(std::abs(ref - oracle::k_h_b6_n20) <= 5e-7);
}

TEST_CASE("finite-N bias report for the reference configuration") {
    const double delta = QuantizerSpec::from_bits(10).delta;
    const double amp = 10.93 * delta;
    const BiasReport r = bias_finite_n(amp, delta, 300, 7);
    CHECK(std::abs(r.g_value - oracle::k_crit1_g) <= 1e-12 * std::abs(oracle::k_crit1_g) + 1e-18);
    CHECK(std::abs(r.bias_finite_n - oracle::k_crit1_bias_finite) <= 1e-13);
    CHECK(std::abs(r.bias_asymptotic - oracle::k_crit1_bias_asym) <= 1e-13);
    CHECK(std::abs(r.bias_asymptotic / (delta * delta) - oracle::k_crit1_bias_asym_norm) <= 1e-10);
    CHECK(bias_asymptotic(amp, delta) == r.bias_asymptotic);
}

TEST_CASE("asymptotic bias identity and sub-bin value") {
    const double amp = 0.11, delta = 0.25;  // sub-bin
    CHECK(std::abs(bias_asymptotic(amp, delta) + amp * amp) <= 1e-15);
    // (A + 2g)^2 structure of the second moment
    const double a2 = 0.73, d2 = QuantizerSpec::from_bits(4).delta;
    const double g = g_closed(a2, d2);
    const double m2 = asymptotic_second_moment(a2, d2);
    CHECK(std::abs(m2 - std::pow((a2 + 2.0 * g) * (a2 + 2.0 * g), 2)) <=
          1e-13 * std::max(1.0, m2));
}

TEST_CASE("amplitude bound dominates the asymptotic bias") {
    for (int bits : {4, 6, 8}) {
        const double delta = QuantizerSpec::from_bits(bits).delta;
        for (int i = 1; i <= 40; ++i) {
            const double amp = 0.9 * i / 40.0 + 0.02;
            CAPTURE(bits);
            CAPTURE(amp);
            CHECK(std::abs(bias_asymptotic(amp, delta)) <= bound_b1(amp, delta) * (1.0 + 1e-12));
        }
    }
    CHECK_THROWS_AS(bound_b(0.0, 0.25), std::invalid_argument);
}

TEST_CASE("envelope bound at the minima abscissas") {
    const double delta = QuantizerSpec::from_bits(6).delta;
    CHECK(bound_b2(delta, 1) == -0.5 * delta * delta);  // 4*(1/2)*delta*(-delta/4)
    // at A = (p - 1/2) delta the true asymptotic bias respects the envelope value
    for (int p : {2, 4, 9}) {
        const double amp = (p - 0.5) * delta;
        CHECK(bias_asymptotic(amp, delta) >= bound_b2(delta, p) - 1e-15);
    }
    CHECK_THROWS_AS(bound_b2(delta, 0), std::invalid_argument);
}

TEST_CASE("delta-method amplitude mean") {
    CHECK(amp_bias_delta_method(1.0, 0.0) == 1.0);
    CHECK(amp_bias_delta_method(4.0, 0.8) == doctest::Approx(2.0 - 0.8 / 64.0).epsilon(1e-15));
    CHECK_THROWS_AS(amp_bias_delta_method(0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(amp_bias_delta_method(1.0, -0.1), std::invalid_argument);
}

}  // TEST_SUITE
