#include "smtj/frontend.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace smtj {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kMicro = 1e-6;
} // namespace

void TransconductanceConfig::validate() const {
    if (!(r_tc_ohm > 0.0)) throw std::invalid_argument("TransconductanceConfig: r_tc must be > 0");
    if (v_power < v_in)
        throw std::invalid_argument("TransconductanceConfig: v_power must be >= v_in (forward current only)");
}

void HysteresisConfig::validate() const {
    if (!(r_f_ohm > 0.0 && r_hth_ohm > 0.0))
        throw std::invalid_argument("HysteresisConfig: resistances must be > 0");
    if (!(v_dd > 0.0)) throw std::invalid_argument("HysteresisConfig: v_dd must be > 0");
    if (response_time_s < 0.0)
        throw std::invalid_argument("HysteresisConfig: response_time must be >= 0");
}

double transconductance_current(const TransconductanceConfig& cfg) {
    cfg.validate();
    return (cfg.v_power - cfg.v_in) / cfg.r_tc_ohm / kMicro;
}

std::pair<double, double> device_resistances(double tmr, double ra_product_ohm_um2,
                                             double diameter_nm) {
    if (!(tmr >= 0.0 && ra_product_ohm_um2 > 0.0 && diameter_nm > 0.0))
        throw std::invalid_argument("device_resistances: invalid inputs");
    const double radius_um = diameter_nm * 1e-3 / 2.0;
    const double area_um2 = kPi * radius_um * radius_um;
    const double r_p = ra_product_ohm_um2 / area_um2;
    return {r_p, r_p * (1.0 + tmr)};
}

std::pair<double, double> hysteresis_thresholds(const HysteresisConfig& cfg) {
    cfg.validate();
    const double total = cfg.r_hth_ohm + cfg.r_f_ohm;
    const double v_tl = cfg.r_f_ohm / total * cfg.v_ref;
    const double v_th = cfg.r_hth_ohm / total * cfg.v_dd + v_tl;
    return {v_th, v_tl};
}

DigitalEdgeTrace digitize(const TelegraphTrace& trace, double i_ua, double r_p_ohm,
                          double r_ap_ohm, const HysteresisConfig& cfg) {
    const auto [v_th, v_tl] = hysteresis_thresholds(cfg);
    const double v_p = i_ua * kMicro * r_p_ohm;
    const double v_ap = i_ua * kMicro * r_ap_ohm;
    if (!(v_p < v_tl && v_ap > v_th)) {
        std::ostringstream msg;
        msg << "digitize: no-signal, device levels (" << v_p << " V, " << v_ap
            << " V) do not straddle hysteresis window [" << v_tl << ", " << v_th << "] V";
        throw std::runtime_error(msg.str());
    }

    DigitalEdgeTrace out;
    out.initial_level = (trace.start_state == MagState::AP) ? 1 : 0;

    double t = 0.0;
    const std::size_t n = trace.dwells_s.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double dwell = trace.dwells_s[k];
        if (trace.state_of(k) == MagState::AP) {
            const bool bounded_left = (k > 0);
            const bool bounded_right = (k + 1 < n);
            if (bounded_left && dwell < cfg.response_time_s) {
                // comparator too slow: the whole excursion is invisible
            } else {
                if (bounded_left) out.transition_times_s.push_back(t);
                if (bounded_right) out.transition_times_s.push_back(t + dwell);
            }
        }
        t += dwell;
    }
    return out;
}

HysteresisConfig retune_reference(HysteresisConfig cfg, double v_low, double v_high) {
    cfg.validate();
    if (!(v_high > v_low)) throw std::invalid_argument("retune_reference: need v_high > v_low");
    const double total = cfg.r_hth_ohm + cfg.r_f_ohm;
    const double f = cfg.r_f_ohm / total;
    const double g = cfg.r_hth_ohm / total;
    cfg.v_ref = ((v_low + v_high) / 2.0 - g * cfg.v_dd / 2.0) / f;
    return cfg;
}

DigitalEdgeTrace filter_short_pulses(const DigitalEdgeTrace& trace, double min_width_s) {
    DigitalEdgeTrace out;
    out.initial_level = trace.initial_level;
    const auto& ts = trace.transition_times_s;
    std::size_t k = 0;
    // first transition is a falling edge when the line starts high
    if (trace.initial_level == 1 && !ts.empty()) {
        out.transition_times_s.push_back(ts[0]);
        k = 1;
    }
    for (; k < ts.size(); k += 2) {
        if (k + 1 < ts.size()) {
            if (ts[k + 1] - ts[k] >= min_width_s) {
                out.transition_times_s.push_back(ts[k]);
                out.transition_times_s.push_back(ts[k + 1]);
            }
        } else {
            out.transition_times_s.push_back(ts[k]);  // still high at trace end
        }
    }
    return out;
}

EdgeEvent sr_latch(const DigitalEdgeTrace& edges) {
    for (std::size_t k = 0; k < edges.transition_times_s.size(); ++k)
        if (edges.level_after(k) == 1) return EdgeEvent::at(edges.transition_times_s[k]);
    return EdgeEvent::never();
}

} // namespace smtj
