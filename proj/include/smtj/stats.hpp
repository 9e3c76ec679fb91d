#pragma once

// Analysis pipeline: exponential fitting, CDF comparison, histogramming with
// counting errors, reduced chi-squared, KS testing, mean-vs-current fitting,
// and drift analysis.

#include <cstddef>
#include <string>
#include <vector>

namespace smtj {

struct FitParam {
    std::string name;
    double value = 0.0;
    double stderr_ = 0.0;  // one standard deviation
};

struct FitReport {
    std::vector<FitParam> params;
    double reduced_chi_squared = 0.0;
    int n_points = 0;
    int n_dof = 0;

    double value(const std::string& name) const;
    double stderr_of(const std::string& name) const;
};

struct Histogram {
    std::vector<double> bin_centers_s;
    std::vector<double> counts;
    std::vector<double> errors;  // sqrt(count), floor of 1 for empty bins
    double bin_width_s = 0.0;
    std::size_t n_used = 0;      // samples inside the histogram domain
};

struct CdfTable {
    std::vector<double> t_s;  // sorted sample values
    std::vector<double> f;    // empirical CDF at each value
};

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

struct DriftReport {
    std::vector<double> bin_means_s;
    std::vector<double> bin_stderrs_s;
    double mean_of_standard_errors_s = 0.0;
    double spread_of_means_s = 0.0;
    double ratio = 0.0;  // spread / mean standard error
};

// Maximum-likelihood exponential fit: lambda = 1/mean with standard error
// lambda/sqrt(N). Also runs the log-histogram straight-line fit (weighted
// least squares on log counts) and reports its reduced chi-squared.
// Parameters: "lambda", "tau", plus the line fit's "log_slope" and
// "log_intercept".
FitReport fit_exponential(const std::vector<double>& samples_s, std::size_t n_bins = 50);

CdfTable empirical_cdf(std::vector<double> samples_s);

// Least-squares fit of F(t) = 1 - exp(-lambda t) to the empirical CDF.
FitReport fit_cdf(const std::vector<double>& samples_s);

// Uniform bins over [0, 0.99-quantile]; per-bin error sqrt(count), 1 if empty.
Histogram histogram_counting_errors(const std::vector<double>& samples_s, std::size_t n_bins);

// One-sample Kolmogorov-Smirnov against Exp(lambda), asymptotic p-value.
KsResult ks_test(std::vector<double> samples_s, double lambda);

struct TauCurrentPoint {
    double current_ua = 0.0;
    double mean_s = 0.0;
    double stderr_s = 0.0;
};

// Weighted fit of the mean-switching-time law with the exponent alpha fixed
// at 1, where log tau is linear in current. The three physical constants are
// degenerate along that line, so the barrier ratio is pinned at delta_pin and
// the other two are solved from the fitted slope and intercept.
// Parameters: "tau0", "delta", "i_c", "log_slope", "log_intercept".
FitReport fit_tau_vs_current(const std::vector<TauCurrentPoint>& points,
                             double delta_pin = 20.0);

// Contiguous equal-count binning of a chronological dwell stream; reports the
// spread of bin means relative to the average statistical uncertainty.
DriftReport drift_analysis(const std::vector<double>& dwells_s, std::size_t n_bins);

// Quantile by linear interpolation of order statistics, q in [0, 1].
double quantile(std::vector<double> samples, double q);

struct ChiSquaredResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

// Pearson goodness-of-fit of observed counts against expected probabilities.
ChiSquaredResult chi_squared_gof(const std::vector<double>& counts,
                                 const std::vector<double>& probabilities);

// Two-sample chi-squared homogeneity test on two count vectors.
ChiSquaredResult chi_squared_two_sample(const std::vector<double>& counts_a,
                                        const std::vector<double>& counts_b);

// Survival function of the chi-squared distribution (regularized upper
// incomplete gamma Q(dof/2, x/2)).
double chi_squared_sf(double x, int dof);

} // namespace smtj
