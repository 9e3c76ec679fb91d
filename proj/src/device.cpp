#include "smtj/device.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace smtj {

void DeviceParams::validate() const {
    if (!(tau0_s > 0.0)) throw std::invalid_argument("DeviceParams: tau0 must be > 0");
    if (!(delta >= 0.0)) throw std::invalid_argument("DeviceParams: delta must be >= 0");
    if (i_c_ua == 0.0) throw std::invalid_argument("DeviceParams: i_c must be nonzero");
    if (!(r_ap_ohm > r_p_ohm && r_p_ohm > 0.0))
        throw std::invalid_argument("DeviceParams: need r_ap > r_p > 0");
    if (!(i_min_ua < i_max_ua))
        throw std::invalid_argument("DeviceParams: operating range is empty");
    // tau_P must be strictly decreasing in I over the operating range
    const int n = 17;
    double prev = tau_p_from_current(i_min_ua, *this);
    for (int k = 1; k < n; ++k) {
        const double i = i_min_ua + (i_max_ua - i_min_ua) * k / (n - 1);
        const double t = tau_p_from_current(i, *this);
        if (!(t < prev))
            throw std::invalid_argument(
                "DeviceParams: tau_P(I) not strictly decreasing over operating range "
                "(check sign convention of i_c)");
        prev = t;
    }
}

void DriftModel::validate() const {
    if (enabled && !(correlation_time_s > 0.0))
        throw std::invalid_argument("DriftModel: correlation_time must be > 0");
    if (!(log_amplitude >= 0.0))
        throw std::invalid_argument("DriftModel: log_amplitude must be >= 0");
}

double tau_p_from_current(double i_ua, const DeviceParams& params) {
    return params.tau0_s * std::exp(params.delta * std::pow(1.0 + i_ua / params.i_c_ua, params.alpha));
}

double rate_from_current(double i_ua, const DeviceParams& params) {
    const double tau = tau_p_from_current(i_ua, params);
    const double rate = 1.0 / tau;
    if (!std::isfinite(rate) || !(rate > 0.0)) {
        std::ostringstream msg;
        msg << "rate_from_current: non-finite rate at I = " << i_ua << " uA";
        throw std::domain_error(msg.str());
    }
    return rate;
}

double rate_from_current_ap(double i_ua, const DeviceParams& params) {
    DeviceParams mirrored = params;
    mirrored.i_min_ua = -params.i_max_ua;
    mirrored.i_max_ua = -params.i_min_ua;
    return rate_from_current(-i_ua, mirrored);
}

double sample_dwell(double lambda, RandomStream& rng) {
    if (!(lambda > 0.0)) throw std::invalid_argument("sample_dwell: lambda must be > 0");
    return rng.exponential(lambda);
}

double drift_log_rate(const DriftModel& drift, double previous, double elapsed_s,
                      RandomStream& rng) {
    if (!drift.enabled) throw std::logic_error("drift_log_rate: drift not enabled");
    if (drift.log_amplitude == 0.0) return 0.0;
    const double decay = std::exp(-elapsed_s / drift.correlation_time_s);
    const double innovation = drift.log_amplitude * std::sqrt(1.0 - decay * decay);
    return previous * decay + innovation * rng.normal();
}

TelegraphTrace generate_telegraph_rates(double rate_p, double rate_ap, double duration_s,
                                        const DriftModel& drift, RandomStream& rng) {
    if (!(duration_s > 0.0)) throw std::invalid_argument("generate_telegraph: duration must be > 0");
    if (!(rate_p > 0.0 && rate_ap > 0.0))
        throw std::invalid_argument("generate_telegraph: rates must be > 0");
    drift.validate();

    TelegraphTrace trace;
    trace.start_state = MagState::P;
    trace.total_s = duration_s;

    double t = 0.0;
    double offset = 0.0;
    MagState state = MagState::P;
    while (t < duration_s) {
        const double base = (state == MagState::P) ? rate_p : rate_ap;
        const double lambda = drift.enabled ? base * std::exp(offset) : base;
        double dwell = sample_dwell(lambda, rng);
        while (dwell == 0.0) dwell = sample_dwell(lambda, rng);
        if (t + dwell >= duration_s) {
            trace.dwells_s.push_back(duration_s - t);
            break;
        }
        trace.dwells_s.push_back(dwell);
        t += dwell;
        if (drift.enabled) offset = drift_log_rate(drift, offset, dwell, rng);
        state = other(state);
    }
    if (trace.dwells_s.empty()) trace.dwells_s.push_back(duration_s);
    return trace;
}

TelegraphTrace generate_telegraph(const DeviceParams& params, double i_ua, double duration_s,
                                  const DriftModel& drift, RandomStream& rng) {
    params.validate();
    return generate_telegraph_rates(rate_from_current(i_ua, params),
                                    rate_from_current_ap(i_ua, params), duration_s, drift, rng);
}

} // namespace smtj
