#include "quantsine/ada.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "compensated.hpp"

namespace quantsine {

namespace {

constexpr double k_pi = std::numbers::pi;
constexpr double k_two_pi = 2.0 * std::numbers::pi;
constexpr double k_group_tol = 1e-14;  // rad; crossings closer than this merge

double wrap_phase(double x) {
    double w = std::fmod(x, k_two_pi);
    if (w < 0.0) w += k_two_pi;
    if (w >= k_two_pi) w = 0.0;
    return w;
}

double reduced_k(int lambda, int u, int n_samples) {
    const long long r = (1ll * lambda * u) % n_samples;
    return k_two_pi * double(r) / double(n_samples);
}

double acos_guarded(double v) {
    if (v > 1.0) {
        if (v - 1.0 > 1e-12)
            throw std::logic_error("crossing level escaped [-1, 1]");
        v = 1.0;
    } else if (v < -1.0) {
        if (-1.0 - v > 1e-12)
            throw std::logic_error("crossing level escaped [-1, 1]");
        v = -1.0;
    }
    return std::acos(v);
}

struct RawEvent {
    double phi;
    std::uint32_t sample;
    std::int32_t dcode;
};

}  // namespace

double PhasePartition::measure(std::size_t s) const {
    if (s >= breakpoints.size()) throw std::invalid_argument("segment out of range");
    if (s + 1 < breakpoints.size()) return breakpoints[s + 1] - breakpoints[s];
    return k_two_pi - breakpoints[s] + breakpoints[0];
}

std::vector<std::int32_t> PhasePartition::codes_row(std::size_t s) const {
    if (s >= breakpoints.size()) throw std::invalid_argument("segment out of range");
    std::vector<std::int32_t> codes = codes0;
    for (std::size_t g = 1; g <= s; ++g)
        for (std::uint32_t e = event_offset[g]; e < event_offset[g + 1]; ++e)
            codes[events[e].sample] += events[e].dcode;
    return codes;
}

std::vector<PhiInterval> level_phi_set(double amp, double delta, double c, double d,
                                       double k_u, long long n) {
    if (!(amp > 0.0) || !std::isfinite(amp))
        throw std::invalid_argument("level set needs amplitude > 0");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("delta must be finite and > 0");
    if (!std::isfinite(c) || c < -0.5 || c > 0.5)
        throw std::invalid_argument("offset c must lie in [-1/2, 1/2]");
    if (!std::isfinite(d)) throw std::invalid_argument("offset must be finite");
    if (!std::isfinite(k_u)) throw std::invalid_argument("k_u must be finite");

    // code n occupied iff cos(k_u + phi) in (R, L]
    const double gamma = amp / delta;
    const double c_eff = c + d / delta;
    const double l = (0.5 + c_eff - double(n)) / gamma;
    const double r = l - 1.0 / gamma;

    if (l <= -1.0 || r >= 1.0) return {};
    if (l >= 1.0 && r <= -1.0) return {{0.0, k_two_pi}};

    const double a_l = l >= 1.0 ? 0.0 : acos_guarded(l);
    const double a_r = r <= -1.0 ? k_pi : acos_guarded(r);

    // theta-space arcs, then shifted by -k_u and split at the wrap
    std::vector<PhiInterval> theta_arcs;
    if (r <= -1.0) {
        theta_arcs.push_back({a_l, k_two_pi - a_l});
    } else {
        theta_arcs.push_back({a_l, a_r});
        theta_arcs.push_back({k_two_pi - a_r, k_two_pi - a_l});
    }

    std::vector<PhiInterval> out;
    for (const auto& arc : theta_arcs) {
        const double width = arc.hi - arc.lo;
        if (width <= 0.0) continue;
        const double lo = wrap_phase(arc.lo - k_u);
        const double hi = lo + width;
        if (hi <= k_two_pi) {
            out.push_back({lo, hi});
        } else {
            out.push_back({lo, k_two_pi});
            out.push_back({0.0, hi - k_two_pi});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const PhiInterval& a, const PhiInterval& b) { return a.lo < b.lo; });
    std::vector<PhiInterval> merged;
    for (const auto& iv : out) {
        if (iv.hi - iv.lo < 1e-15) continue;
        if (!merged.empty() && iv.lo - merged.back().hi <= k_group_tol)
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        else
            merged.push_back(iv);
    }
    return merged;
}

PhasePartition build_partition(const SineSpec& spec, const QuantizerSpec& q) {
    spec.validate();
    q.validate();
    PhasePartition part;
    part.amplitude = spec.amplitude;
    part.delta = q.delta;
    part.n_samples = spec.n_samples;

    const int n = spec.n_samples;
    const double amp = spec.amplitude;
    const double d = spec.offset;

    auto single_segment = [&](double phi_mid) {
        part.breakpoints = {0.0};
        part.codes0.resize(n);
        for (int u = 0; u < n; ++u) {
            const double s = -amp * std::cos(reduced_k(spec.lambda, u, n) + phi_mid) + d;
            part.codes0[u] = std::int32_t(quantize_code(q, s));
        }
        part.event_offset = {0, 0};
    };

    if (amp == 0.0) {
        single_segment(k_pi);
        return part;
    }

    const double t_lo = (d - amp) / q.delta + 0.5 + q.offset_c;
    const double t_hi = (d + amp) / q.delta + 0.5 + q.offset_c;
    long long m_first = (long long)std::floor(t_lo) + 1;
    long long m_last = (long long)std::floor(t_hi);
    if (q.overload == OverloadPolicy::saturating) {
        // crossings outside the clamp range leave the output unchanged
        const long long code_max = (long long)std::floor(1.0 / q.delta + 1e-9);
        m_first = std::max(m_first, -code_max + 1);
        m_last = std::min(m_last, code_max);
    }

    std::vector<RawEvent> raw;
    raw.reserve(std::size_t(std::max(0ll, m_last - m_first + 1)) * 2 * n);
    for (int u = 0; u < n; ++u) {
        const double k_u = reduced_k(spec.lambda, u, n);
        for (long long m = m_first; m <= m_last; ++m) {
            const double v = (d - q.delta * (double(m) - 0.5 - q.offset_c)) / amp;
            const double alpha = acos_guarded(v);
            // s rises through level m at theta = alpha, falls back at 2pi - alpha
            raw.push_back({wrap_phase(alpha - k_u), std::uint32_t(u), +1});
            raw.push_back({wrap_phase(k_two_pi - alpha - k_u), std::uint32_t(u), -1});
        }
    }

    if (raw.empty()) {
        single_segment(k_pi);
        return part;
    }

    std::sort(raw.begin(), raw.end(), [](const RawEvent& a, const RawEvent& b) {
        if (a.phi != b.phi) return a.phi < b.phi;
        if (a.sample != b.sample) return a.sample < b.sample;
        return a.dcode < b.dcode;
    });

    // group crossings into breakpoints, anchored at each group's first phase;
    // runs are marked by index so no per-group storage is needed
    std::vector<std::size_t> run_start;
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (run_start.empty() || raw[i].phi - raw[run_start.back()].phi > k_group_tol)
            run_start.push_back(i);
    run_start.push_back(raw.size());

    std::size_t n_groups = run_start.size() - 1;
    bool wrap_merge = false;
    if (n_groups >= 2) {
        const double gap =
            k_two_pi - raw[run_start[n_groups - 1]].phi + raw[run_start[0]].phi;
        if (gap <= k_group_tol) {
            wrap_merge = true;  // fold the last run into group 0
            --n_groups;
        }
    }

    // per group: cancel tangency pairs, drop groups with no net code change
    std::vector<RawEvent> scratch;
    auto emit_group = [&](std::size_t g) {
        scratch.clear();
        scratch.insert(scratch.end(), raw.begin() + run_start[g],
                       raw.begin() + run_start[g + 1]);
        if (g == 0 && wrap_merge)
            scratch.insert(scratch.end(), raw.begin() + run_start[n_groups],
                           raw.begin() + run_start[n_groups + 1]);
        std::sort(scratch.begin(), scratch.end(),
                  [](const RawEvent& a, const RawEvent& b) { return a.sample < b.sample; });
        const std::size_t before = part.events.size();
        std::size_t i = 0;
        while (i < scratch.size()) {
            std::int32_t net = 0;
            const std::uint32_t u = scratch[i].sample;
            for (; i < scratch.size() && scratch[i].sample == u; ++i)
                net += scratch[i].dcode;
            if (net != 0) part.events.push_back({u, net});
        }
        if (part.events.size() != before) {
            part.breakpoints.push_back(raw[run_start[g]].phi);
            part.event_offset.push_back(std::uint32_t(part.events.size()));
        }
    };

    part.event_offset.push_back(0);
    for (std::size_t g = 0; g < n_groups; ++g) emit_group(g);

    if (part.breakpoints.empty()) {
        part.events.clear();
        part.event_offset.clear();
        single_segment(k_pi);
        return part;
    }

    const double width = part.breakpoints.size() >= 2
                             ? part.breakpoints[1] - part.breakpoints[0]
                             : k_two_pi;
    // label at an off-center interior point: a cancelled tangency can sit at
    // the exact arithmetic midpoint in symmetric configurations
    const double phi_mid = part.breakpoints[0] + 0.381966011250105 * width;
    part.codes0.resize(n);
    for (int u = 0; u < n; ++u) {
        const double s = -amp * std::cos(reduced_k(spec.lambda, u, n) + phi_mid) + d;
        part.codes0[u] = std::int32_t(quantize_code(q, s));
    }
    return part;
}

namespace {

void check_moment_args(const PhasePartition& part, int lambda, int n_samples) {
    if (part.breakpoints.empty()) throw std::invalid_argument("empty partition");
    if (n_samples != part.n_samples)
        throw std::invalid_argument("n_samples disagrees with the partition");
    if (lambda < 1) throw std::invalid_argument("lambda must be >= 1");
    if ((2ll * lambda) % n_samples == 0)
        throw std::invalid_argument(
            "degenerate design: N divides 2*lambda, sine and cosine columns collapse");
}

}  // namespace

MomentReport exact_moments(const PhasePartition& part, int lambda, int n_samples) {
    check_moment_args(part, lambda, n_samples);
    const int n = n_samples;
    const std::size_t nseg = part.segment_count();

    std::vector<double> cosk(n), sink(n);
    for (int u = 0; u < n; ++u) {
        const double k = reduced_k(lambda, u, n);
        cosk[u] = std::cos(k);
        sink[u] = std::sin(k);
    }

    const double unit = 2.0 * part.delta / double(n);

    // one sweep over the partition; the projections are updated per event and
    // refreshed from the exact integer codes every few thousand events
    auto sweep = [&](auto&& per_segment) {
        std::vector<std::int32_t> codes = part.codes0;
        CompSum p1, p2;
        for (int u = 0; u < n; ++u) {
            p1.add(double(codes[u]) * cosk[u]);
            p2.add(double(codes[u]) * sink[u]);
        }
        std::size_t since_refresh = 0;
        for (std::size_t s = 0; s < nseg; ++s) {
            if (s > 0) {
                for (std::uint32_t e = part.event_offset[s]; e < part.event_offset[s + 1];
                     ++e) {
                    const auto& ev = part.events[e];
                    codes[ev.sample] += ev.dcode;
                    p1.add(double(ev.dcode) * cosk[ev.sample]);
                    p2.add(double(ev.dcode) * sink[ev.sample]);
                }
                since_refresh += part.event_offset[s + 1] - part.event_offset[s];
                if (since_refresh >= 4096) {
                    since_refresh = 0;
                    p1 = CompSum{};
                    p2 = CompSum{};
                    for (int u = 0; u < n; ++u) {
                        p1.add(double(codes[u]) * cosk[u]);
                        p2.add(double(codes[u]) * sink[u]);
                    }
                }
            }
            const double t1 = unit * p1.value();
            const double t2 = unit * p2.value();
            per_segment(s, t1 * t1 + t2 * t2);
        }
    };

    CompSum m1;
    sweep([&](std::size_t s, double q) { m1.add(q * part.measure(s)); });
    const double mean = m1.value() / k_two_pi;

    CompSum m2c;
    sweep([&](std::size_t s, double q) {
        m2c.add((q - mean) * (q - mean) * part.measure(s));
    });
    const double variance = m2c.value() / k_two_pi;

    MomentReport rep;
    rep.mean_amp_sq = mean;
    rep.variance_amp_sq = variance;
    rep.second_moment_amp_sq = variance + mean * mean;
    rep.bias = mean - part.amplitude * part.amplitude;
    rep.mse = rep.bias * rep.bias + variance;
    return rep;
}

double joint_moment(const SineSpec& spec, const QuantizerSpec& q,
                    const std::vector<int>& indices, const std::vector<int>& powers) {
    if (indices.empty() || indices.size() != powers.size())
        throw std::invalid_argument("indices and powers must be nonempty and equal-sized");
    for (int u : indices)
        if (u < 0 || u >= spec.n_samples)
            throw std::invalid_argument("sample index out of range");
    for (int m : powers)
        if (m < 1 || m > 16) throw std::invalid_argument("powers must lie in [1, 16]");

    const PhasePartition part = build_partition(spec, q);
    std::vector<std::int32_t> codes = part.codes0;
    CompSum acc;
    for (std::size_t s = 0; s < part.segment_count(); ++s) {
        if (s > 0)
            for (std::uint32_t e = part.event_offset[s]; e < part.event_offset[s + 1]; ++e)
                codes[part.events[e].sample] += part.events[e].dcode;
        double prod = 1.0;
        for (std::size_t j = 0; j < indices.size(); ++j) {
            const double y = q.delta * double(codes[indices[j]]);
            for (int t = 0; t < powers[j]; ++t) prod *= y;
        }
        acc.add(prod * part.measure(s));
    }
    return acc.value() / k_two_pi;
}

}  // namespace quantsine
