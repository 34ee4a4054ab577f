#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quantsine/signal.hpp"

namespace quantsine {

// half-open [lo, hi) with lo in [0, 2 pi), hi in (0, 2 pi]
struct PhiInterval {
    double lo = 0.0;
    double hi = 0.0;
    double measure() const { return hi - lo; }
};

// The circle [0, 2 pi) of initial phases cut at every phase where any sample's
// code changes. Segment s spans [breakpoints[s], breakpoints[s+1]) (the last
// wraps to breakpoints[0] + 2 pi). Codes are stored as the segment-0 vector
// plus per-breakpoint deltas; replaying all deltas returns to the start.
struct PhasePartition {
    double amplitude = 0.0;
    double delta = 0.0;
    int n_samples = 0;
    std::vector<double> breakpoints;          // sorted, in [0, 2 pi)
    std::vector<std::int32_t> codes0;         // codes on segment 0, midpoint-labeled
    struct Event {
        std::uint32_t sample;
        std::int32_t dcode;
    };
    std::vector<Event> events;                // grouped by crossing breakpoint
    std::vector<std::uint32_t> event_offset;  // size S+1; crossing INTO segment s

    std::size_t segment_count() const { return breakpoints.size(); }
    double measure(std::size_t s) const;
    std::vector<std::int32_t> codes_row(std::size_t s) const;  // replay, O(events)
};

struct MomentReport {
    double mean_amp_sq = 0.0;
    double second_moment_amp_sq = 0.0;
    double variance_amp_sq = 0.0;  // >= 0, tiny negatives clamped
    double bias = 0.0;             // mean - A^2
    double mse = 0.0;              // bias^2 + variance
    std::string engine = "ada";
};

// Phase set {phi : quantize(-A cos(k_u + phi) + d) = n delta} as a union of at
// most two arcs (merged when they touch). A > 0 required.
std::vector<PhiInterval> level_phi_set(double amp, double delta, double c, double d,
                                       double k_u, long long n);

// Collects every code-crossing phase of every sample, sorts, deduplicates
// within 1e-14 rad, and labels segment 0 at its midpoint. A = 0 degenerates to
// the single full-circle segment.
PhasePartition build_partition(const SineSpec& spec, const QuantizerSpec& q);

// Exact E[A_hat^2] and E[(A_hat^2)^2] over the partition: an incremental sweep
// updates the two code projections at each breakpoint, so cost is
// O(events + segments), not O(segments * N). Two passes keep the variance
// nonnegative by construction.
MomentReport exact_moments(const PhasePartition& part, int lambda, int n_samples);

// E[prod_j y_{u_j}^{m_j}] over the random phase, by the same segment sweep
double joint_moment(const SineSpec& spec, const QuantizerSpec& q,
                    const std::vector<int>& indices, const std::vector<int>& powers);

}  // namespace quantsine
