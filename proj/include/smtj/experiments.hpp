#pragma once

// End-to-end experiment orchestration: composes device -> frontend -> timing
// into the measurement pipeline, runs the sweep and application demos, and
// writes CSV/JSON outputs plus a run manifest.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "smtj/device.hpp"
#include "smtj/frontend.hpp"
#include "smtj/samplers.hpp"
#include "smtj/stats.hpp"
#include "smtj/timing.hpp"

#include <nlohmann/json_fwd.hpp>

namespace smtj {

struct PdcSettings {
    double current_ua = 918.0;
    std::size_t n_trials = 10000;
    std::size_t n_bins = 50;
};

struct CdfSettings {
    std::vector<double> currents_ua = {918.0, 924.0, 930.0};
    std::size_t n_trials = 10000;
};

struct SweepSettings {
    std::vector<double> currents_ua = {600, 700, 800, 900, 1000, 1100, 1200, 1300};
    std::size_t n_trials = 10000;
    double period_s = 1e-6;  // slower clock so the 16-bit window covers long tails
};

struct WeightedSettings {
    std::vector<double> rates_hz = {1.0, 2.0, 3.0};
    std::size_t n_draws = 100000;
};

struct IsingSettings {
    std::size_t rows = 2;
    std::size_t cols = 2;
    double j = 1.0;
    double h = 0.0;
    double beta = 0.5;
    double w = 1.0;
    std::size_t n_steps = 1000000;
    std::size_t burn_in = 100000;
};

struct DriftRunSettings {
    double rate_p_hz = 600.0;
    double rate_ap_hz = 600.0;
    std::size_t n_bins = 30;
    std::size_t events_per_bin = 2000;
};

struct ExperimentConfig {
    std::uint64_t seed = 1;
    DeviceParams device;
    TransconductanceConfig transconductance;  // v_in is derived per target current
    HysteresisConfig signal_hysteresis;
    HysteresisConfig reference_hysteresis{24.9e3, 100.0, 5.5, 5.0, 0.0};
    ClockConfig timing;
    DriftModel drift;
    double trial_reset_time_s = 0.01;  // wall time between trials, drives drift
    PdcSettings pdc;
    CdfSettings cdf;
    SweepSettings sweep;
    WeightedSettings weighted;
    IsingSettings ising;
    DriftRunSettings drift_run;
    std::string format = "csv";

    void validate() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    static ExperimentConfig load(const std::filesystem::path& file);
};

struct TrialRecord {
    std::size_t trial_index = 0;
    double true_time_s = 0.0;  // ground-truth latch time; NaN when no switch
    CountResult count;
};

// One measurement trial: derive the trial RNG stream, synthesize the
// telegraph signal under the stepped current, digitize, filter dwells
// shorter than the clock period, latch, and count against the reference edge
// at t = 0. drift_offset (log-rate) applies for the whole trial.
TrialRecord run_pdc_trial(const ExperimentConfig& cfg, double current_ua,
                          std::size_t trial_index, double drift_offset = 0.0);

// A batch of trials at one current. Trial k of batch b uses the stream for
// index (b << 32) | k, so batches are mutually independent. With drift
// enabled the offset evolves across trials by the trial duration plus the
// reset time, which couples the trials sequentially.
std::vector<TrialRecord> run_pdc_batch(const ExperimentConfig& cfg, double current_ua,
                                       std::size_t n_trials, std::uint64_t batch_tag = 0,
                                       double* drift_offset = nullptr,
                                       RandomStream* drift_rng = nullptr);

struct SweepResult {
    std::vector<TauCurrentPoint> points;
    std::vector<FitReport> per_current;
    FitReport combined;  // mean-vs-current law fit
};

SweepResult sweep_mean_vs_current(const ExperimentConfig& cfg,
                                  const std::vector<double>& currents_ua);

// Experiment runners used by the CLI; each writes its outputs plus
// manifest.json into out_dir.
void run_pdc_histogram_experiment(const ExperimentConfig& cfg,
                                  const std::filesystem::path& out_dir);
void run_cdf_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
void run_sweep_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
void run_weighted_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
void run_ising_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
void run_drift_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// CLI entry point; returns the process exit code.
int cli_dispatch(int argc, const char* const* argv);

} // namespace smtj
