#include "smtj/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace smtj {

namespace {

void check_positive_samples(const std::vector<double>& samples, std::size_t min_n) {
    if (samples.size() < min_n)
        throw std::invalid_argument("stats: need at least " + std::to_string(min_n) + " samples");
    for (double s : samples)
        if (!(s > 0.0)) throw std::invalid_argument("stats: non-positive sample");
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Asymptotic Kolmogorov survival function Q_KS(x) = 2 sum (-1)^{k-1} e^{-2k^2x^2}.
double kolmogorov_q(double x) {
    if (x < 1e-3) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 101; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct LineFit {
    double intercept = 0.0, slope = 0.0;
    double var_intercept = 0.0, var_slope = 0.0;
    double chi2 = 0.0;
    int n = 0;
};

// Weighted least squares of y = a + b x with per-point standard deviations.
LineFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& sigma) {
    LineFit fit;
    fit.n = static_cast<int>(x.size());
    double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = 1.0 / (sigma[i] * sigma[i]);
        s += w;
        sx += w * x[i];
        sy += w * y[i];
        sxx += w * x[i] * x[i];
        sxy += w * x[i] * y[i];
    }
    const double denom = s * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0) || !std::isfinite(denom))
        throw std::runtime_error("weighted_line_fit: degenerate abscissae");
    fit.slope = (s * sxy - sx * sy) / denom;
    fit.intercept = (sxx * sy - sx * sxy) / denom;
    fit.var_slope = s / denom;
    fit.var_intercept = sxx / denom;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = (y[i] - fit.intercept - fit.slope * x[i]) / sigma[i];
        fit.chi2 += r * r;
    }
    return fit;
}

} // namespace

double FitReport::value(const std::string& name) const {
    for (const auto& p : params)
        if (p.name == name) return p.value;
    throw std::out_of_range("FitReport: no parameter named " + name);
}

double FitReport::stderr_of(const std::string& name) const {
    for (const auto& p : params)
        if (p.name == name) return p.stderr_;
    throw std::out_of_range("FitReport: no parameter named " + name);
}

double quantile(std::vector<double> samples, double q) {
    if (samples.empty()) throw std::invalid_argument("quantile: empty sample set");
    std::sort(samples.begin(), samples.end());
    const double pos = q * static_cast<double>(samples.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= samples.size()) return samples.back();
    const double frac = pos - static_cast<double>(lo);
    return samples[lo] * (1.0 - frac) + samples[lo + 1] * frac;
}

FitReport fit_exponential(const std::vector<double>& samples_s, std::size_t n_bins) {
    check_positive_samples(samples_s, 10);
    const double n = static_cast<double>(samples_s.size());
    const double mean = mean_of(samples_s);
    const double lambda = 1.0 / mean;
    const double lambda_err = lambda / std::sqrt(n);

    FitReport report;
    report.params.push_back({"lambda", lambda, lambda_err});
    report.params.push_back({"tau", mean, mean / std::sqrt(n)});

    // Straight-line fit to log bin counts, weighted by sqrt(count) errors.
    const Histogram hist = histogram_counting_errors(samples_s, n_bins);
    std::vector<double> x, y, sigma;
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        if (hist.counts[i] > 0.0) {
            x.push_back(hist.bin_centers_s[i]);
            y.push_back(std::log(hist.counts[i]));
            sigma.push_back(hist.errors[i] / hist.counts[i]);
        }
    }
    if (x.size() >= 3) {
        const LineFit line = weighted_line_fit(x, y, sigma);
        report.params.push_back({"log_slope", line.slope, std::sqrt(line.var_slope)});
        report.params.push_back({"log_intercept", line.intercept, std::sqrt(line.var_intercept)});
        report.n_points = line.n;
        report.n_dof = line.n - 2;
        report.reduced_chi_squared = line.chi2 / static_cast<double>(report.n_dof);
    } else {
        // degenerate histogram (e.g. identical samples): MLE only
        report.n_points = static_cast<int>(samples_s.size());
        report.n_dof = report.n_points - 1;
        report.reduced_chi_squared = 0.0;
    }
    return report;
}

CdfTable empirical_cdf(std::vector<double> samples_s) {
    check_positive_samples(samples_s, 10);
    std::sort(samples_s.begin(), samples_s.end());
    CdfTable table;
    table.t_s = std::move(samples_s);
    table.f.resize(table.t_s.size());
    const double n = static_cast<double>(table.t_s.size());
    for (std::size_t i = 0; i < table.f.size(); ++i)
        table.f[i] = static_cast<double>(i + 1) / n;
    return table;
}

FitReport fit_cdf(const std::vector<double>& samples_s) {
    const CdfTable table = empirical_cdf(samples_s);
    const std::size_t n = table.t_s.size();

    double lambda = 1.0 / mean_of(samples_s);  // MLE as starting point
    double jtj = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
        double jtr = 0.0;
        jtj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(-lambda * table.t_s[i]);
            const double r = table.f[i] - (1.0 - e);
            const double j = table.t_s[i] * e;  // d(model)/d(lambda)
            jtr += j * r;
            jtj += j * j;
        }
        const double step = jtr / jtj;
        lambda += step;
        if (std::abs(step) < 1e-12 * std::abs(lambda)) break;
    }

    double rss = 0.0;
    double chi2 = 0.0;
    int n_chi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double model = 1.0 - std::exp(-lambda * table.t_s[i]);
        const double r = table.f[i] - model;
        rss += r * r;
        const double var = model * (1.0 - model) / static_cast<double>(n);
        if (var > 0.0) {
            chi2 += r * r / var;
            ++n_chi;
        }
    }
    const double s2 = rss / static_cast<double>(n - 1);
    FitReport report;
    report.params.push_back({"lambda", lambda, std::sqrt(s2 / jtj)});
    report.params.push_back({"tau", 1.0 / lambda, std::sqrt(s2 / jtj) / (lambda * lambda)});
    report.n_points = static_cast<int>(n);
    report.n_dof = static_cast<int>(n) - 1;
    report.reduced_chi_squared = (n_chi > 1) ? chi2 / static_cast<double>(n_chi - 1) : 0.0;
    return report;
}

Histogram histogram_counting_errors(const std::vector<double>& samples_s, std::size_t n_bins) {
    if (n_bins < 2) throw std::invalid_argument("histogram: need at least 2 bins");
    check_positive_samples(samples_s, 1);

    const double cut = quantile(samples_s, 0.99);
    Histogram hist;
    hist.bin_width_s = cut / static_cast<double>(n_bins);
    hist.counts.assign(n_bins, 0.0);
    if (!(hist.bin_width_s > 0.0))
        throw std::invalid_argument("histogram: degenerate sample range");
    for (double s : samples_s) {
        if (s <= cut) {
            auto idx = static_cast<std::size_t>(s / hist.bin_width_s);
            if (idx >= n_bins) idx = n_bins - 1;
            hist.counts[idx] += 1.0;
            ++hist.n_used;
        }
    }
    hist.bin_centers_s.resize(n_bins);
    hist.errors.resize(n_bins);
    for (std::size_t i = 0; i < n_bins; ++i) {
        hist.bin_centers_s[i] = (static_cast<double>(i) + 0.5) * hist.bin_width_s;
        hist.errors[i] = hist.counts[i] > 0.0 ? std::sqrt(hist.counts[i]) : 1.0;
    }
    return hist;
}

KsResult ks_test(std::vector<double> samples_s, double lambda) {
    check_positive_samples(samples_s, 10);
    if (!(lambda > 0.0)) throw std::invalid_argument("ks_test: lambda must be > 0");
    std::sort(samples_s.begin(), samples_s.end());
    const double n = static_cast<double>(samples_s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples_s.size(); ++i) {
        const double model = 1.0 - std::exp(-lambda * samples_s[i]);
        const double above = static_cast<double>(i + 1) / n - model;
        const double below = model - static_cast<double>(i) / n;
        d = std::max({d, above, below});
    }
    const double sqrt_n = std::sqrt(n);
    KsResult result;
    result.statistic = d;
    result.p_value = kolmogorov_q((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
    return result;
}

FitReport fit_tau_vs_current(const std::vector<TauCurrentPoint>& points, double delta_pin) {
    if (points.size() < 4)
        throw std::invalid_argument("fit_tau_vs_current: need at least 4 points");
    std::vector<double> x, y, sigma;
    for (const auto& p : points) {
        if (!(p.mean_s > 0.0 && p.stderr_s > 0.0))
            throw std::invalid_argument("fit_tau_vs_current: invalid point");
        x.push_back(p.current_ua);
        y.push_back(std::log(p.mean_s));
        sigma.push_back(p.stderr_s / p.mean_s);
    }
    const LineFit line = weighted_line_fit(x, y, sigma);
    if (!(line.slope < 0.0))
        throw std::runtime_error("fit_tau_vs_current: fitted mean time does not decrease "
                                 "with current");

    // log tau(I) = (log tau0 + delta) + (delta / i_c) I; the three constants
    // are degenerate along this line, so delta is pinned.
    const double tau0 = std::exp(line.intercept - delta_pin);
    const double i_c = delta_pin / line.slope;
    const double sig_a = std::sqrt(line.var_intercept);
    const double sig_b = std::sqrt(line.var_slope);

    FitReport report;
    report.params.push_back({"tau0", tau0, tau0 * sig_a});
    report.params.push_back({"delta", delta_pin, 0.0});
    report.params.push_back({"i_c", i_c, std::abs(delta_pin / (line.slope * line.slope)) * sig_b});
    report.params.push_back({"log_slope", line.slope, sig_b});
    report.params.push_back({"log_intercept", line.intercept, sig_a});
    report.n_points = line.n;
    report.n_dof = line.n - 2;
    report.reduced_chi_squared = line.chi2 / static_cast<double>(report.n_dof);
    return report;
}

namespace {

// Regularized upper incomplete gamma Q(a, x); series for x < a+1, continued
// fraction otherwise (Numerical Recipes style).
double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

} // namespace

double chi_squared_sf(double x, int dof) {
    if (dof < 1) throw std::invalid_argument("chi_squared_sf: dof must be >= 1");
    return gamma_q(static_cast<double>(dof) / 2.0, x / 2.0);
}

ChiSquaredResult chi_squared_gof(const std::vector<double>& counts,
                                 const std::vector<double>& probabilities) {
    if (counts.size() != probabilities.size() || counts.size() < 2)
        throw std::invalid_argument("chi_squared_gof: need matching vectors, >= 2 cells");
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    ChiSquaredResult result;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = total * probabilities[i];
        if (!(expected > 0.0)) throw std::invalid_argument("chi_squared_gof: zero expected count");
        const double d = counts[i] - expected;
        result.statistic += d * d / expected;
    }
    result.dof = static_cast<int>(counts.size()) - 1;
    result.p_value = chi_squared_sf(result.statistic, result.dof);
    return result;
}

ChiSquaredResult chi_squared_two_sample(const std::vector<double>& counts_a,
                                        const std::vector<double>& counts_b) {
    if (counts_a.size() != counts_b.size() || counts_a.size() < 2)
        throw std::invalid_argument("chi_squared_two_sample: need matching vectors, >= 2 cells");
    const double na = std::accumulate(counts_a.begin(), counts_a.end(), 0.0);
    const double nb = std::accumulate(counts_b.begin(), counts_b.end(), 0.0);
    ChiSquaredResult result;
    for (std::size_t i = 0; i < counts_a.size(); ++i) {
        const double pooled = (counts_a[i] + counts_b[i]) / (na + nb);
        const double ea = na * pooled;
        const double eb = nb * pooled;
        if (!(ea > 0.0 && eb > 0.0))
            throw std::invalid_argument("chi_squared_two_sample: empty pooled cell");
        result.statistic += (counts_a[i] - ea) * (counts_a[i] - ea) / ea +
                            (counts_b[i] - eb) * (counts_b[i] - eb) / eb;
    }
    result.dof = static_cast<int>(counts_a.size()) - 1;
    result.p_value = chi_squared_sf(result.statistic, result.dof);
    return result;
}

DriftReport drift_analysis(const std::vector<double>& dwells_s, std::size_t n_bins) {
    if (n_bins < 2) throw std::invalid_argument("drift_analysis: need at least 2 bins");
    const std::size_t per_bin = dwells_s.size() / n_bins;
    if (per_bin < 30)
        throw std::invalid_argument("drift_analysis: need at least 30 events per bin");

    DriftReport report;
    std::size_t pos = 0;
    const std::size_t remainder = dwells_s.size() % n_bins;
    for (std::size_t b = 0; b < n_bins; ++b) {
        const std::size_t count = per_bin + (b < remainder ? 1 : 0);
        double sum = 0.0;
        for (std::size_t i = pos; i < pos + count; ++i) sum += dwells_s[i];
        const double mean = sum / static_cast<double>(count);
        double ss = 0.0;
        for (std::size_t i = pos; i < pos + count; ++i) {
            const double d = dwells_s[i] - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(count - 1));
        report.bin_means_s.push_back(mean);
        report.bin_stderrs_s.push_back(sd / std::sqrt(static_cast<double>(count)));
        pos += count;
    }

    report.mean_of_standard_errors_s = mean_of(report.bin_stderrs_s);
    const double grand = mean_of(report.bin_means_s);
    double ss = 0.0;
    for (double m : report.bin_means_s) ss += (m - grand) * (m - grand);
    report.spread_of_means_s = std::sqrt(ss / static_cast<double>(n_bins - 1));
    report.ratio = report.spread_of_means_s / report.mean_of_standard_errors_s;
    return report;
}

} // namespace smtj
