#pragma once

// Clocked measurement of the interval between the reference edge and the
// latched signal edge: floor quantization, chained 16-bit counter range,
// path-mismatch systematic offset, and saturating overflow.

#include <cstdint>

#include "smtj/temporal.hpp"

namespace smtj {

struct ClockConfig {
    double period_s = 500e-9;
    double path_offset_s = 625e-9;  // signal-path minus reference-path delay
    int counter_bits = 16;
    double start_phase_s = 0.0;     // clock phase at the reference edge

    void validate() const;
    std::uint64_t max_count() const { return (1ULL << counter_bits) - 1ULL; }
};

struct CountResult {
    std::uint64_t count = 0;
    bool overflowed = false;
    double inferred_time_s = 0.0;  // count * period, exactly
};

// floor(t / period)
std::uint64_t quantize(double t_s, double period_s);

// Counted interval = (latched + path_offset) - reference, floor-quantized.
// Saturates at 2^bits - 1 with overflowed=true; a never-latching signal also
// saturates. Throws if the offset-shifted interval is negative.
CountResult measure_window(EdgeEvent reference, EdgeEvent latched, const ClockConfig& cfg);

// The clock period: dwells shorter than this are invisible to the counter.
double min_detectable_dwell(const ClockConfig& cfg);

} // namespace smtj
