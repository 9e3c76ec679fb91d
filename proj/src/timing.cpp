#include "smtj/timing.hpp"

#include <cmath>
#include <stdexcept>

namespace smtj {

void ClockConfig::validate() const {
    if (!(period_s > 0.0)) throw std::invalid_argument("ClockConfig: period must be > 0");
    if (counter_bits < 1 || counter_bits > 64)
        throw std::invalid_argument("ClockConfig: counter_bits must be in [1, 64]");
    if (start_phase_s < 0.0 || start_phase_s >= period_s)
        throw std::invalid_argument("ClockConfig: start_phase must be in [0, period)");
}

std::uint64_t quantize(double t_s, double period_s) {
    if (t_s < 0.0) throw std::invalid_argument("quantize: t must be >= 0");
    if (!(period_s > 0.0)) throw std::invalid_argument("quantize: period must be > 0");
    return static_cast<std::uint64_t>(std::floor(t_s / period_s));
}

CountResult measure_window(EdgeEvent reference, EdgeEvent latched, const ClockConfig& cfg) {
    cfg.validate();
    if (reference.is_never())
        throw std::invalid_argument("measure_window: reference edge never arrived");

    CountResult result;
    const std::uint64_t max = cfg.max_count();
    if (latched.is_never()) {
        result.count = max;
        result.overflowed = true;
    } else {
        const double interval = latched.time_s + cfg.path_offset_s - reference.time_s;
        if (interval < 0.0)
            throw std::runtime_error("measure_window: negative interval after path offset "
                                     "(paths misconfigured)");
        const std::uint64_t raw = quantize(interval + cfg.start_phase_s, cfg.period_s);
        if (raw > max) {
            result.count = max;
            result.overflowed = true;
        } else {
            result.count = raw;
        }
    }
    result.inferred_time_s = static_cast<double>(result.count) * cfg.period_s;
    return result;
}

double min_detectable_dwell(const ClockConfig& cfg) {
    cfg.validate();
    return cfg.period_s;
}

} // namespace smtj
