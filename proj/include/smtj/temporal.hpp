#pragma once

// Temporal-logic algebra: information lives in rising-edge arrival times.
// Delay cells produce edges, the inhibit gate races them, and the one-hot
// race network selects the first arrival.

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "smtj/device.hpp"
#include "smtj/rng.hpp"

namespace smtj {

// A rising-edge arrival time, or NEVER. NEVER is +infinity, so it compares
// greater than every finite time.
struct EdgeEvent {
    double time_s = std::numeric_limits<double>::infinity();

    static EdgeEvent at(double t) { return EdgeEvent{t}; }
    static EdgeEvent never() { return EdgeEvent{}; }
    bool is_never() const { return !std::isfinite(time_s); }

    friend bool operator==(const EdgeEvent& a, const EdgeEvent& b) {
        return a.time_s == b.time_s || (a.is_never() && b.is_never());
    }
};

struct RaceOutcome {
    std::size_t winner = 0;
    bool has_winner = false;
    EdgeEvent winner_time = EdgeEvent::never();
    std::vector<bool> one_hot;
};

// Deterministic delay cell: edge at t0 + delay.
inline EdgeEvent ddc(double t0, double delay_s) {
    if (delay_s < 0.0) throw std::invalid_argument("ddc: delay must be >= 0");
    return EdgeEvent::at(t0 + delay_s);
}

// Probabilistic delay cell: edge after an Exp(lambda) delay.
inline EdgeEvent pdc(double t0, double lambda, RandomStream& rng) {
    return EdgeEvent::at(t0 + sample_dwell(lambda, rng));
}

// Inhibit gate: I passes iff it is strictly earlier than B. Ties block
// (a gate already closing cannot pass the edge).
inline EdgeEvent inhibit(EdgeEvent i_edge, EdgeEvent b_edge) {
    return (i_edge.time_s < b_edge.time_s) ? i_edge : EdgeEvent::never();
}

// OR of rising edges: first arrival wins; NEVER iff all inputs are NEVER.
EdgeEvent or_race(const std::vector<EdgeEvent>& edges);

// n-way one-hot race: winner is the argmin of arrival times, finite ties
// broken by lowest index. All-NEVER input yields has_winner = false and an
// all-false one_hot.
RaceOutcome one_hot_race(const std::vector<EdgeEvent>& edges);

} // namespace smtj
