#pragma once

// Behavioral model of the analog signal path: voltage-controlled current
// source, device-voltage synthesis, programmable hysteresis comparator with
// finite response time, and the SR latch that captures the first rising edge.

#include <utility>
#include <vector>

#include "smtj/device.hpp"
#include "smtj/temporal.hpp"

namespace smtj {

struct TransconductanceConfig {
    double v_power = 10.0;
    double r_tc_ohm = 4900.0;
    double v_in = 5.5018;

    void validate() const;
};

struct HysteresisConfig {
    double r_f_ohm = 50e3;
    double r_hth_ohm = 1e3;
    double v_ref = 0.54;
    double v_dd = 5.0;
    double response_time_s = 100e-9;

    void validate() const;
};

// A digital waveform as a list of transitions. The line sits at
// initial_level before the first transition; levels alternate after that.
struct DigitalEdgeTrace {
    int initial_level = 0;
    std::vector<double> transition_times_s;

    int level_after(std::size_t k) const {
        return (initial_level + static_cast<int>(k) + 1) % 2;
    }
};

// I = (v_power - v_in) / r_tc, in microamps. Throws on negative current.
double transconductance_current(const TransconductanceConfig& cfg);

// (r_p, r_ap) from TMR fraction, RA product (ohm um^2) and diameter (nm).
std::pair<double, double> device_resistances(double tmr, double ra_product_ohm_um2,
                                             double diameter_nm);

// (v_th, v_tl) of the hysteresis window.
std::pair<double, double> hysteresis_thresholds(const HysteresisConfig& cfg);

// Comparator output for a telegraph trace under current i_ua: rising edge at
// each P->AP transition and falling edge at each AP->P transition, except
// that AP dwells shorter than response_time are invisible (both edges
// suppressed). Throws a "no-signal" error if the two voltage levels do not
// straddle the hysteresis window.
DigitalEdgeTrace digitize(const TelegraphTrace& trace, double i_ua, double r_p_ohm,
                          double r_ap_ohm, const HysteresisConfig& cfg);

// Re-program the reference voltage so the hysteresis window is centered
// between the two device voltage levels (the digital potentiometer's job
// when the operating current moves).
HysteresisConfig retune_reference(HysteresisConfig cfg, double v_low, double v_high);

// Remove high pulses narrower than min_width (both edges). Used to apply the
// clock-period dwell filter on top of the comparator dead time.
DigitalEdgeTrace filter_short_pulses(const DigitalEdgeTrace& trace, double min_width_s);

// Time of the first rising edge, or NEVER.
EdgeEvent sr_latch(const DigitalEdgeTrace& edges);

} // namespace smtj
