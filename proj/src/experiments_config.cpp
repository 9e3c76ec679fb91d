// Config file (de)serialization. The config is a single JSON document with
// one section per module; every field has a default, so an empty object is a
// valid config.

#include "smtj/experiments.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace smtj {

using nlohmann::json;

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

json section(const json& j, const char* key) {
    return j.contains(key) ? j.at(key) : json::object();
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig cfg;
    get_if(j, "seed", cfg.seed);
    get_if(j, "format", cfg.format);
    get_if(j, "trial_reset_time_s", cfg.trial_reset_time_s);

    const json dev = section(j, "device");
    get_if(dev, "tau0_s", cfg.device.tau0_s);
    get_if(dev, "delta", cfg.device.delta);
    get_if(dev, "i_c_ua", cfg.device.i_c_ua);
    get_if(dev, "alpha", cfg.device.alpha);
    get_if(dev, "r_p_ohm", cfg.device.r_p_ohm);
    get_if(dev, "r_ap_ohm", cfg.device.r_ap_ohm);
    get_if(dev, "i_min_ua", cfg.device.i_min_ua);
    get_if(dev, "i_max_ua", cfg.device.i_max_ua);

    const json fe = section(j, "frontend");
    const json tc = section(fe, "transconductance");
    get_if(tc, "v_power", cfg.transconductance.v_power);
    get_if(tc, "r_tc_ohm", cfg.transconductance.r_tc_ohm);
    get_if(tc, "v_in", cfg.transconductance.v_in);
    auto read_hyst = [](const json& h, HysteresisConfig& out) {
        get_if(h, "r_f_ohm", out.r_f_ohm);
        get_if(h, "r_hth_ohm", out.r_hth_ohm);
        get_if(h, "v_ref", out.v_ref);
        get_if(h, "v_dd", out.v_dd);
        get_if(h, "response_time_s", out.response_time_s);
    };
    read_hyst(section(fe, "signal"), cfg.signal_hysteresis);
    read_hyst(section(fe, "reference"), cfg.reference_hysteresis);

    const json tm = section(j, "timing");
    get_if(tm, "period_s", cfg.timing.period_s);
    get_if(tm, "path_offset_s", cfg.timing.path_offset_s);
    get_if(tm, "counter_bits", cfg.timing.counter_bits);
    get_if(tm, "start_phase_s", cfg.timing.start_phase_s);

    const json dr = section(j, "drift");
    get_if(dr, "enabled", cfg.drift.enabled);
    get_if(dr, "correlation_time_s", cfg.drift.correlation_time_s);
    get_if(dr, "log_amplitude", cfg.drift.log_amplitude);

    const json pdc = section(j, "pdc");
    get_if(pdc, "current_ua", cfg.pdc.current_ua);
    get_if(pdc, "n_trials", cfg.pdc.n_trials);
    get_if(pdc, "n_bins", cfg.pdc.n_bins);

    const json cdf = section(j, "cdf");
    get_if(cdf, "currents_ua", cfg.cdf.currents_ua);
    get_if(cdf, "n_trials", cfg.cdf.n_trials);

    const json sweep = section(j, "sweep");
    get_if(sweep, "currents_ua", cfg.sweep.currents_ua);
    get_if(sweep, "n_trials", cfg.sweep.n_trials);
    get_if(sweep, "period_s", cfg.sweep.period_s);

    const json weighted = section(j, "weighted");
    get_if(weighted, "rates_hz", cfg.weighted.rates_hz);
    get_if(weighted, "n_draws", cfg.weighted.n_draws);

    const json ising = section(j, "ising");
    get_if(ising, "rows", cfg.ising.rows);
    get_if(ising, "cols", cfg.ising.cols);
    get_if(ising, "j", cfg.ising.j);
    get_if(ising, "h", cfg.ising.h);
    get_if(ising, "beta", cfg.ising.beta);
    get_if(ising, "w", cfg.ising.w);
    get_if(ising, "n_steps", cfg.ising.n_steps);
    get_if(ising, "burn_in", cfg.ising.burn_in);

    const json drun = section(j, "drift_run");
    get_if(drun, "rate_p_hz", cfg.drift_run.rate_p_hz);
    get_if(drun, "rate_ap_hz", cfg.drift_run.rate_ap_hz);
    get_if(drun, "n_bins", cfg.drift_run.n_bins);
    get_if(drun, "events_per_bin", cfg.drift_run.events_per_bin);

    cfg.validate();
    return cfg;
}

json ExperimentConfig::to_json() const {
    json j;
    j["seed"] = seed;
    j["format"] = format;
    j["trial_reset_time_s"] = trial_reset_time_s;
    j["device"] = {{"tau0_s", device.tau0_s},       {"delta", device.delta},
                   {"i_c_ua", device.i_c_ua},       {"alpha", device.alpha},
                   {"r_p_ohm", device.r_p_ohm},     {"r_ap_ohm", device.r_ap_ohm},
                   {"i_min_ua", device.i_min_ua},   {"i_max_ua", device.i_max_ua}};
    auto hyst_json = [](const HysteresisConfig& h) {
        return json{{"r_f_ohm", h.r_f_ohm},
                    {"r_hth_ohm", h.r_hth_ohm},
                    {"v_ref", h.v_ref},
                    {"v_dd", h.v_dd},
                    {"response_time_s", h.response_time_s}};
    };
    j["frontend"] = {{"transconductance",
                      json{{"v_power", transconductance.v_power},
                           {"r_tc_ohm", transconductance.r_tc_ohm},
                           {"v_in", transconductance.v_in}}},
                     {"signal", hyst_json(signal_hysteresis)},
                     {"reference", hyst_json(reference_hysteresis)}};
    j["timing"] = {{"period_s", timing.period_s},
                   {"path_offset_s", timing.path_offset_s},
                   {"counter_bits", timing.counter_bits},
                   {"start_phase_s", timing.start_phase_s}};
    j["drift"] = {{"enabled", drift.enabled},
                  {"correlation_time_s", drift.correlation_time_s},
                  {"log_amplitude", drift.log_amplitude}};
    j["pdc"] = {{"current_ua", pdc.current_ua}, {"n_trials", pdc.n_trials}, {"n_bins", pdc.n_bins}};
    j["cdf"] = {{"currents_ua", cdf.currents_ua}, {"n_trials", cdf.n_trials}};
    j["sweep"] = {{"currents_ua", sweep.currents_ua},
                  {"n_trials", sweep.n_trials},
                  {"period_s", sweep.period_s}};
    j["weighted"] = {{"rates_hz", weighted.rates_hz}, {"n_draws", weighted.n_draws}};
    j["ising"] = {{"rows", ising.rows},     {"cols", ising.cols}, {"j", ising.j},
                  {"h", ising.h},           {"beta", ising.beta}, {"w", ising.w},
                  {"n_steps", ising.n_steps}, {"burn_in", ising.burn_in}};
    j["drift_run"] = {{"rate_p_hz", drift_run.rate_p_hz},
                      {"rate_ap_hz", drift_run.rate_ap_hz},
                      {"n_bins", drift_run.n_bins},
                      {"events_per_bin", drift_run.events_per_bin}};
    return j;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open config file " + file.string());
    json j = json::parse(in);
    // a manifest is also accepted as a config: use its embedded echo
    if (j.contains("config") && j.contains("version")) j = j.at("config");
    return from_json(j);
}

} // namespace smtj
