#pragma once

// Stochastic model of a superparamagnetic tunnel junction (SMTJ):
// current-dependent switching rates, exponential dwell sampling, telegraph
// trace generation, and an optional slow drift process on the log-rate.

#include <cstddef>
#include <vector>

#include "smtj/rng.hpp"

namespace smtj {

enum class MagState { P, AP };

inline MagState other(MagState s) { return s == MagState::P ? MagState::AP : MagState::P; }

struct DeviceParams {
    double tau0_s = 1e-9;     // characteristic time
    double delta = 20.0;      // energy barrier over kT
    double i_c_ua = -3000.0;  // critical current, signed
    double alpha = 1.0;
    double r_p_ohm = 566.0;
    double r_ap_ohm = 1245.0;
    double i_min_ua = 600.0;  // operating current range
    double i_max_ua = 1300.0;

    // Throws std::invalid_argument on a bad parameter set, including any
    // set where the P-state mean dwell time fails to decrease strictly
    // with current over [i_min_ua, i_max_ua].
    void validate() const;
};

struct TelegraphTrace {
    MagState start_state = MagState::P;
    std::vector<double> dwells_s;  // alternating states, all > 0
    double total_s = 0.0;

    MagState state_of(std::size_t k) const {
        return (k % 2 == 0) ? start_state : other(start_state);
    }
};

struct DriftModel {
    bool enabled = false;
    double correlation_time_s = 10.0;
    double log_amplitude = 0.075;  // stationary stddev of the log-rate offset

    void validate() const;
};

// Mean P-state dwell time at current i (seconds).
double tau_p_from_current(double i_ua, const DeviceParams& params);

// Switching rate lambda = 1/tau_P(i). Throws std::domain_error if the
// exponential overflows or underflows at the given current.
double rate_from_current(double i_ua, const DeviceParams& params);

// AP-state rate: mirrored parameter set, current sign flipped.
double rate_from_current_ap(double i_ua, const DeviceParams& params);

// One exponential dwell, t = -ln(U)/lambda with U uniform on (0,1].
double sample_dwell(double lambda, RandomStream& rng);

// One step of the mean-reverting Gaussian (Ornstein-Uhlenbeck) log-rate
// offset: decays toward 0 with time constant correlation_time and has
// stationary standard deviation log_amplitude.
double drift_log_rate(const DriftModel& drift, double previous, double elapsed_s,
                      RandomStream& rng);

// Telegraph trace with per-state rates given directly. The drift offset
// multiplies both rates by exp(offset) and is resampled at each transition.
TelegraphTrace generate_telegraph_rates(double rate_p, double rate_ap, double duration_s,
                                        const DriftModel& drift, RandomStream& rng);

// Telegraph trace under a constant applied current: P rate from the switching
// law, AP rate from the mirrored parameter set.
TelegraphTrace generate_telegraph(const DeviceParams& params, double i_ua, double duration_s,
                                  const DriftModel& drift, RandomStream& rng);

} // namespace smtj
