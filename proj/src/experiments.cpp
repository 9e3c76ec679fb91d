#include "smtj/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace smtj {

namespace {

constexpr const char* kVersion = "smtj-temporal 0.1.0";
constexpr std::uint64_t kDriftStreamTag = 0x5D21F7A6B3C4E9ULL;
constexpr double kMicro = 1e-6;

using nlohmann::json;

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

// Rows are pre-formatted cells; every CSV gets a header row.
void write_table(const std::filesystem::path& out_dir, const std::string& stem,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows, const std::string& format) {
    if (format == "json") {
        json arr = json::array();
        for (const auto& row : rows) {
            json obj;
            for (std::size_t c = 0; c < header.size(); ++c) obj[header[c]] = row[c];
            arr.push_back(obj);
        }
        write_json(out_dir / (stem + ".json"), arr);
        return;
    }
    std::ostringstream csv;
    for (std::size_t c = 0; c < header.size(); ++c)
        csv << (c ? "," : "") << header[c];
    csv << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            csv << (c ? "," : "") << row[c];
        csv << "\n";
    }
    write_text(out_dir / (stem + ".csv"), csv.str());
}

void write_manifest(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                    const std::string& subcommand) {
    json manifest;
    manifest["version"] = kVersion;
    manifest["subcommand"] = subcommand;
    manifest["seed"] = cfg.seed;
    manifest["config"] = cfg.to_json();
    write_json(out_dir / "manifest.json", manifest);
}

json fit_report_to_json(const FitReport& report) {
    json j;
    for (const auto& p : report.params)
        j["params"][p.name] = {{"value", p.value}, {"stderr", p.stderr_}};
    j["reduced_chi_squared"] = report.reduced_chi_squared;
    j["n_points"] = report.n_points;
    j["n_dof"] = report.n_dof;
    return j;
}

double trial_window_s(const ClockConfig& clock) {
    return static_cast<double>(clock.max_count() + 1) * clock.period_s + clock.path_offset_s;
}

// Measured switching times; overflowed trials and zero counts (a switch
// faster than the first clock edge is unmeasurable) are dropped.
std::vector<double> inferred_times(const std::vector<TrialRecord>& records) {
    std::vector<double> times;
    for (const auto& r : records)
        if (!r.count.overflowed && r.count.count > 0) times.push_back(r.count.inferred_time_s);
    return times;
}

} // namespace

void ExperimentConfig::validate() const {
    device.validate();
    signal_hysteresis.validate();
    reference_hysteresis.validate();
    timing.validate();
    drift.validate();
    if (trial_reset_time_s < 0.0)
        throw std::invalid_argument("config: trial_reset_time must be >= 0");
    if (pdc.n_trials < 1 || cdf.n_trials < 1 || sweep.n_trials < 1 || weighted.n_draws < 1)
        throw std::invalid_argument("config: trial counts must be >= 1");
    if (format != "csv" && format != "json")
        throw std::invalid_argument("config: format must be csv or json");
}

TrialRecord run_pdc_trial(const ExperimentConfig& cfg, double current_ua,
                          std::size_t trial_index, double drift_offset) {
    RandomStream rng = RandomStream::for_trial(cfg.seed, trial_index);

    // the function generator voltage realizes the requested current step
    TransconductanceConfig tc = cfg.transconductance;
    tc.v_in = tc.v_power - current_ua * kMicro * tc.r_tc_ohm;
    const double i_ua = transconductance_current(tc);

    const double scale = std::exp(drift_offset);
    const double rate_p = rate_from_current(i_ua, cfg.device) * scale;
    const double rate_ap = rate_from_current_ap(i_ua, cfg.device) * scale;
    const double dead_time = std::max(cfg.signal_hysteresis.response_time_s,
                                      min_detectable_dwell(cfg.timing));
    const double window = trial_window_s(cfg.timing);

    // generate only until an AP excursion can survive both dead-time filters
    TelegraphTrace trace;
    trace.start_state = MagState::P;
    double t = 0.0;
    while (t < window) {
        const double p_dwell = sample_dwell(rate_p, rng);
        const double ap_dwell = sample_dwell(rate_ap, rng);
        trace.dwells_s.push_back(p_dwell);
        trace.dwells_s.push_back(ap_dwell);
        t += p_dwell + ap_dwell;
        if (ap_dwell >= dead_time) break;
    }
    trace.total_s = t;

    const DigitalEdgeTrace digital =
        digitize(trace, i_ua, cfg.device.r_p_ohm, cfg.device.r_ap_ohm, cfg.signal_hysteresis);
    const DigitalEdgeTrace filtered =
        filter_short_pulses(digital, min_detectable_dwell(cfg.timing));
    EdgeEvent latched = sr_latch(filtered);
    if (!latched.is_never() && latched.time_s + cfg.timing.path_offset_s > window)
        latched = EdgeEvent::never();  // switch landed beyond the counter range

    TrialRecord record;
    record.trial_index = trial_index;
    record.true_time_s = latched.is_never() ? std::nan("") : latched.time_s;
    record.count = measure_window(EdgeEvent::at(0.0), latched, cfg.timing);
    return record;
}

std::vector<TrialRecord> run_pdc_batch(const ExperimentConfig& cfg, double current_ua,
                                       std::size_t n_trials, std::uint64_t batch_tag,
                                       double* drift_offset, RandomStream* drift_rng) {
    double local_offset = 0.0;
    RandomStream local_rng(cfg.seed ^ splitmix64(kDriftStreamTag));
    double* offset = drift_offset ? drift_offset : &local_offset;
    RandomStream* rng = drift_rng ? drift_rng : &local_rng;

    const double window = trial_window_s(cfg.timing);
    std::vector<TrialRecord> records;
    records.reserve(n_trials);
    for (std::size_t k = 0; k < n_trials; ++k) {
        const std::uint64_t stream_index = (batch_tag << 32) | k;
        records.push_back(
            run_pdc_trial(cfg, current_ua, stream_index, cfg.drift.enabled ? *offset : 0.0));
        records.back().trial_index = k;
        if (cfg.drift.enabled) {
            const double duration = std::isnan(records.back().true_time_s)
                                        ? window
                                        : records.back().true_time_s;
            *offset = drift_log_rate(cfg.drift, *offset, duration + cfg.trial_reset_time_s, *rng);
        }
    }
    return records;
}

SweepResult sweep_mean_vs_current(const ExperimentConfig& cfg,
                                  const std::vector<double>& currents_ua) {
    if (currents_ua.size() < 4)
        throw std::invalid_argument("sweep_mean_vs_current: need at least 4 currents");
    ExperimentConfig sweep_cfg = cfg;
    sweep_cfg.timing.period_s = cfg.sweep.period_s;
    sweep_cfg.validate();

    double drift_offset = 0.0;
    RandomStream drift_rng(cfg.seed ^ splitmix64(kDriftStreamTag));

    SweepResult result;
    for (double current : currents_ua) {
        // the hysteresis reference tracks the device levels across the sweep
        sweep_cfg.signal_hysteresis =
            retune_reference(cfg.signal_hysteresis, current * kMicro * cfg.device.r_p_ohm,
                             current * kMicro * cfg.device.r_ap_ohm);
        const auto records = run_pdc_batch(sweep_cfg, current, cfg.sweep.n_trials,
                                           result.points.size() + 1, &drift_offset, &drift_rng);
        const auto times = inferred_times(records);
        if (times.size() < 10)
            throw std::runtime_error("sweep: nearly all trials overflowed, clock too fast");
        FitReport fit;
        try {
            fit = fit_exponential(times);
        } catch (const std::exception& e) {
            std::cerr << "sweep: per-current fit failed at " << current << " uA: " << e.what()
                      << "\n";
        }
        result.per_current.push_back(fit);
        const double mean = fit.params.empty()
                                ? std::accumulate(times.begin(), times.end(), 0.0) /
                                      static_cast<double>(times.size())
                                : fit.value("tau");
        const double stderr_s = fit.params.empty()
                                    ? mean / std::sqrt(static_cast<double>(times.size()))
                                    : fit.stderr_of("tau");
        result.points.push_back({current, mean, stderr_s});
    }
    result.combined = fit_tau_vs_current(result.points, cfg.device.delta);
    return result;
}

void run_pdc_histogram_experiment(const ExperimentConfig& cfg,
                                  const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto records = run_pdc_batch(cfg, cfg.pdc.current_ua, cfg.pdc.n_trials);
    const auto times = inferred_times(records);

    const Histogram hist = histogram_counting_errors(times, cfg.pdc.n_bins);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
        rows.push_back({fmt_g(hist.bin_centers_s[i]), fmt_g(hist.counts[i]), fmt_g(hist.errors[i])});
    write_table(out_dir, "histogram", {"bin_center_s", "count", "error"}, rows, cfg.format);

    const FitReport fit = fit_exponential(times, cfg.pdc.n_bins);
    const KsResult ks = ks_test(times, fit.value("lambda"));
    json fit_json = fit_report_to_json(fit);
    fit_json["ks"] = {{"statistic", ks.statistic}, {"p_value", ks.p_value}};
    fit_json["current_ua"] = cfg.pdc.current_ua;
    fit_json["n_trials"] = cfg.pdc.n_trials;
    fit_json["n_overflowed"] = cfg.pdc.n_trials - times.size();
    write_json(out_dir / "fit.json", fit_json);
    write_manifest(cfg, out_dir, "pdc-histogram");
}

void run_cdf_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    json fits = json::array();
    for (std::size_t c = 0; c < cfg.cdf.currents_ua.size(); ++c) {
        const double current = cfg.cdf.currents_ua[c];
        const auto records = run_pdc_batch(cfg, current, cfg.cdf.n_trials, c + 1);
        const auto times = inferred_times(records);
        const CdfTable table = empirical_cdf(times);
        const FitReport fit = fit_cdf(times);
        const double lambda = fit.value("lambda");
        const KsResult ks = ks_test(times, lambda);

        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < table.t_s.size(); ++i)
            rows.push_back({fmt_g(table.t_s[i]), fmt_g(table.f[i]),
                            fmt_g(1.0 - std::exp(-lambda * table.t_s[i]))});
        write_table(out_dir, "cdf_" + std::to_string(c), {"t_s", "F_empirical", "F_fit"}, rows,
                    cfg.format);

        json entry = fit_report_to_json(fit);
        entry["current_ua"] = current;
        entry["ks"] = {{"statistic", ks.statistic}, {"p_value", ks.p_value}};
        fits.push_back(entry);
    }
    write_json(out_dir / "fit.json", json{{"per_current", fits}});
    write_manifest(cfg, out_dir, "cdf");
}

void run_sweep_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const SweepResult result = sweep_mean_vs_current(cfg, cfg.sweep.currents_ua);

    std::vector<std::vector<std::string>> rows;
    for (const auto& p : result.points)
        rows.push_back({fmt_g(p.current_ua), fmt_g(p.mean_s), fmt_g(p.stderr_s)});
    write_table(out_dir, "sweep", {"current_uA", "mean_s", "stderr_s"}, rows, cfg.format);

    json fit_json;
    fit_json["combined"] = fit_report_to_json(result.combined);
    json per = json::array();
    for (const auto& f : result.per_current) per.push_back(fit_report_to_json(f));
    fit_json["per_current"] = per;
    fit_json["drift_enabled"] = cfg.drift.enabled;
    write_json(out_dir / "fit.json", fit_json);
    write_manifest(cfg, out_dir, "mean-vs-current");
}

void run_weighted_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    WeightedDie die{cfg.weighted.rates_hz};
    die.validate();
    const auto probs = die.probabilities();

    std::vector<double> counts(die.rates.size(), 0.0);
    for (std::size_t k = 0; k < cfg.weighted.n_draws; ++k) {
        RandomStream rng = RandomStream::for_trial(cfg.seed, k);
        counts[weighted_sample(die, rng)] += 1.0;
    }

    std::vector<std::vector<std::string>> rows;
    for (std::size_t j = 0; j < counts.size(); ++j)
        rows.push_back({std::to_string(j), fmt_g(counts[j]), fmt_g(probs[j])});
    write_table(out_dir, "frequencies", {"index", "count", "expected_p"}, rows, cfg.format);

    const ChiSquaredResult gof = chi_squared_gof(counts, probs);
    json fit_json;
    fit_json["chi_squared"] = {{"statistic", gof.statistic}, {"dof", gof.dof},
                               {"p_value", gof.p_value}};
    fit_json["rates_hz"] = cfg.weighted.rates_hz;
    fit_json["expected_p"] = probs;
    fit_json["n_draws"] = cfg.weighted.n_draws;
    write_json(out_dir / "fit.json", fit_json);
    write_manifest(cfg, out_dir, "weighted-sample");
}

void run_ising_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const IsingProblem problem = IsingProblem::ferromagnet_grid(
        cfg.ising.rows, cfg.ising.cols, cfg.ising.j, cfg.ising.h, cfg.ising.beta, cfg.ising.w);
    RandomStream rng(cfg.seed);
    const auto counts = ising_mh_histogram(problem, SpinState::all_up(problem.n_spins),
                                           cfg.ising.n_steps, cfg.ising.burn_in, rng);
    const auto expected = enumerate_boltzmann(problem);

    const double n_kept = static_cast<double>(cfg.ising.n_steps - cfg.ising.burn_in);
    double tv = 0.0;
    for (std::size_t s = 0; s < counts.size(); ++s)
        tv += std::abs(static_cast<double>(counts[s]) / n_kept - expected[s]);
    tv /= 2.0;

    json stats;
    stats["tv_distance"] = tv;
    stats["n_steps"] = cfg.ising.n_steps;
    stats["burn_in"] = cfg.ising.burn_in;
    stats["n_spins"] = problem.n_spins;
    stats["counts"] = counts;
    stats["expected_p"] = expected;
    write_json(out_dir / "chain_stats.json", stats);
    write_manifest(cfg, out_dir, "mh-ising");
}

void run_drift_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::size_t n_events = cfg.drift_run.n_bins * cfg.drift_run.events_per_bin;
    const double cycle = 1.0 / cfg.drift_run.rate_p_hz + 1.0 / cfg.drift_run.rate_ap_hz;
    const double duration = 1.2 * static_cast<double>(n_events) * cycle;

    RandomStream rng(cfg.seed);
    const TelegraphTrace trace = generate_telegraph_rates(
        cfg.drift_run.rate_p_hz, cfg.drift_run.rate_ap_hz, duration, cfg.drift, rng);

    std::vector<double> ap_dwells;
    for (std::size_t k = 0; k + 1 < trace.dwells_s.size(); ++k)
        if (trace.state_of(k) == MagState::AP) ap_dwells.push_back(trace.dwells_s[k]);
    if (ap_dwells.size() < n_events)
        throw std::runtime_error("drift run: telegraph trace too short for requested bins");
    ap_dwells.resize(n_events);

    const DriftReport report = drift_analysis(ap_dwells, cfg.drift_run.n_bins);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t b = 0; b < report.bin_means_s.size(); ++b)
        rows.push_back({std::to_string(b), fmt_g(report.bin_means_s[b]),
                        fmt_g(report.bin_stderrs_s[b])});
    write_table(out_dir, "drift", {"bin_index", "mean_s", "stderr_s"}, rows, cfg.format);

    json drift_json;
    drift_json["spread_of_means_s"] = report.spread_of_means_s;
    drift_json["mean_of_standard_errors_s"] = report.mean_of_standard_errors_s;
    drift_json["ratio"] = report.ratio;
    drift_json["drift_enabled"] = cfg.drift.enabled;
    drift_json["n_bins"] = cfg.drift_run.n_bins;
    drift_json["events_per_bin"] = cfg.drift_run.events_per_bin;
    write_json(out_dir / "drift.json", drift_json);
    write_manifest(cfg, out_dir, "drift");
}

} // namespace smtj
