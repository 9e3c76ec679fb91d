#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "smtj/rng.hpp"
#include "smtj/stats.hpp"

using namespace smtj;

namespace {

std::vector<double> exp_samples(double lambda, std::size_t n, std::uint64_t seed) {
    RandomStream rng(seed);
    std::vector<double> s(n);
    for (auto& v : s) v = rng.exponential(lambda);
    return s;
}

} // namespace

TEST_CASE("quantile") {
    CHECK(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.0) == 1.0);
    CHECK(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 1.0) == 5.0);
    CHECK(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.5) == 3.0);
    CHECK(quantile({5.0, 1.0, 3.0}, 0.5) == 3.0);  // sorts internally
    CHECK(quantile({1.0, 2.0}, 0.25) == doctest::Approx(1.25));
    CHECK_THROWS_AS(quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("fit_exponential") {
    SUBCASE("MLE is the reciprocal sample mean") {
        const auto samples = exp_samples(500.0, 5000, 11);
        const double mean =
            std::accumulate(samples.begin(), samples.end(), 0.0) / samples.size();
        const auto fit = fit_exponential(samples);
        CHECK(fit.value("lambda") == doctest::Approx(1.0 / mean).epsilon(1e-12));
        CHECK(fit.value("tau") == doctest::Approx(mean).epsilon(1e-12));
        CHECK(fit.stderr_of("lambda") ==
              doctest::Approx(fit.value("lambda") / std::sqrt(5000.0)).epsilon(1e-12));
    }

    SUBCASE("recovers the generating rate within three sigma") {
        const double lambda = 937.0;
        const auto fit = fit_exponential(exp_samples(lambda, 10000, 12));
        CHECK(std::abs(fit.value("lambda") - lambda) < 3.0 * fit.stderr_of("lambda"));
    }

    SUBCASE("log-histogram line fit is healthy for exponential data") {
        const auto fit = fit_exponential(exp_samples(1000.0, 10000, 13), 50);
        CHECK(fit.reduced_chi_squared > 0.3);
        CHECK(fit.reduced_chi_squared < 2.0);
        // the log-count slope is -lambda
        CHECK(fit.value("log_slope") ==
              doctest::Approx(-1000.0).epsilon(5.0 * fit.stderr_of("log_slope") / 1000.0));
    }

    SUBCASE("identical samples fall back to the MLE alone") {
        const std::vector<double> flat(100, 2.5e-3);
        const auto fit = fit_exponential(flat);
        CHECK(fit.value("lambda") == doctest::Approx(400.0).epsilon(1e-12));
        CHECK(fit.reduced_chi_squared == 0.0);
        CHECK_THROWS_AS(fit.value("log_slope"), std::out_of_range);
    }

    SUBCASE("input validation") {
        CHECK_THROWS_AS(fit_exponential({1.0, 2.0}), std::invalid_argument);
        auto bad = exp_samples(1.0, 100, 14);
        bad[50] = 0.0;
        CHECK_THROWS_AS(fit_exponential(bad), std::invalid_argument);
    }
}

TEST_CASE("empirical_cdf") {
    auto table = empirical_cdf(exp_samples(100.0, 1000, 15));
    CHECK(table.t_s.size() == 1000);
    CHECK(table.f.front() == doctest::Approx(1.0 / 1000.0));
    CHECK(table.f.back() == doctest::Approx(1.0));
    for (std::size_t i = 1; i < table.t_s.size(); ++i) {
        CHECK(table.t_s[i] >= table.t_s[i - 1]);
        CHECK(table.f[i] > table.f[i - 1]);
    }
}

TEST_CASE("fit_cdf") {
    SUBCASE("recovers the generating rate") {
        const double lambda = 937.0;
        const auto fit = fit_cdf(exp_samples(lambda, 10000, 16));
        CHECK(fit.value("lambda") == doctest::Approx(lambda).epsilon(0.04));
        CHECK(fit.value("tau") == doctest::Approx(1.0 / fit.value("lambda")).epsilon(1e-12));
    }

    SUBCASE("fitted rates order with the generating rates") {
        const auto f1 = fit_cdf(exp_samples(500.0, 5000, 17));
        const auto f2 = fit_cdf(exp_samples(1000.0, 5000, 18));
        const auto f3 = fit_cdf(exp_samples(2000.0, 5000, 19));
        CHECK(f1.value("lambda") < f2.value("lambda"));
        CHECK(f2.value("lambda") < f3.value("lambda"));
    }
}

TEST_CASE("histogram_counting_errors") {
    SUBCASE("counts, domain and errors") {
        const auto samples = exp_samples(1000.0, 10000, 20);
        const auto hist = histogram_counting_errors(samples, 50);
        REQUIRE(hist.counts.size() == 50);
        const double cut = quantile(samples, 0.99);
        CHECK(hist.bin_width_s == doctest::Approx(cut / 50.0));
        double total = 0.0;
        for (std::size_t i = 0; i < 50; ++i) {
            total += hist.counts[i];
            if (hist.counts[i] > 0.0)
                CHECK(hist.errors[i] == doctest::Approx(std::sqrt(hist.counts[i])));
            else
                CHECK(hist.errors[i] == 1.0);
            CHECK(hist.bin_centers_s[i] ==
                  doctest::Approx((i + 0.5) * hist.bin_width_s).epsilon(1e-12));
        }
        CHECK(total == doctest::Approx(static_cast<double>(hist.n_used)));
        // the top percentile is cut away
        CHECK(hist.n_used >= 9890);
        CHECK(hist.n_used <= 9910);
    }

    SUBCASE("degenerate inputs") {
        CHECK_THROWS_AS(histogram_counting_errors({1.0, 2.0}, 1), std::invalid_argument);
        CHECK_THROWS_AS(histogram_counting_errors({}, 10), std::invalid_argument);
        // identical samples all land in the topmost bin
        const auto flat = histogram_counting_errors(std::vector<double>(100, 3.0), 10);
        CHECK(flat.counts.back() == 100.0);
        CHECK(flat.n_used == 100);
    }
}

TEST_CASE("ks_test") {
    SUBCASE("matched distribution passes") {
        CHECK(ks_test(exp_samples(250.0, 10000, 21), 250.0).p_value > 0.01);
    }

    SUBCASE("calibration across 100 seeds") {
        int passes = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed)
            if (ks_test(exp_samples(250.0, 10000, 1000 + seed), 250.0).p_value > 0.01) ++passes;
        CHECK(passes >= 95);
    }

    SUBCASE("rejects a rate off by a factor of two") {
        const auto r = ks_test(exp_samples(500.0, 10000, 22), 1000.0);
        CHECK(r.p_value < 1e-6);
        CHECK(r.statistic > 0.1);
    }

    SUBCASE("statistic is scale invariant") {
        auto samples = exp_samples(100.0, 1000, 23);
        const auto a = ks_test(samples, 100.0);
        for (auto& s : samples) s *= 1000.0;
        const auto b = ks_test(samples, 0.1);
        CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-9));
    }
}

TEST_CASE("fit_tau_vs_current") {
    // synthetic points straight off the switching law with 1% uncertainties
    auto make_points = [](double tau0, double delta, double i_c, double noise,
                          std::uint64_t seed) {
        RandomStream rng(seed);
        std::vector<TauCurrentPoint> points;
        for (double i = 600.0; i <= 1300.0; i += 100.0) {
            const double tau = tau0 * std::exp(delta * (1.0 + i / i_c));
            TauCurrentPoint p;
            p.current_ua = i;
            p.mean_s = tau * std::exp(noise * rng.normal());
            p.stderr_s = p.mean_s * (noise > 0.0 ? noise : 0.01);
            points.push_back(p);
        }
        return points;
    };

    SUBCASE("noiseless points are recovered exactly") {
        const auto fit = fit_tau_vs_current(make_points(1e-9, 20.0, -3000.0, 0.0, 0), 20.0);
        CHECK(fit.value("tau0") == doctest::Approx(1e-9).epsilon(1e-6));
        CHECK(fit.value("i_c") == doctest::Approx(-3000.0).epsilon(1e-6));
        CHECK(fit.value("delta") == 20.0);
        CHECK(fit.reduced_chi_squared < 1e-12);
    }

    SUBCASE("noisy points recover the curve within stated errors") {
        const auto fit = fit_tau_vs_current(make_points(1e-9, 20.0, -3000.0, 0.01, 24), 20.0);
        CHECK(std::abs(fit.value("i_c") - (-3000.0)) < 4.0 * fit.stderr_of("i_c"));
        // reconstructed curve, not the individual constants, is the deliverable
        for (double i = 600.0; i <= 1300.0; i += 100.0) {
            const double truth = std::log(1e-9) + 20.0 * (1.0 + i / -3000.0);
            const double model = fit.value("log_intercept") + fit.value("log_slope") * i;
            CHECK(std::abs(model - truth) < 0.03);
        }
    }

    SUBCASE("chi-squared flags excess scatter") {
        // scatter 10x larger than the stated uncertainties
        auto points = make_points(1e-9, 20.0, -3000.0, 0.1, 25);
        for (auto& p : points) p.stderr_s = p.mean_s * 0.01;
        const auto fit = fit_tau_vs_current(points, 20.0);
        CHECK(fit.reduced_chi_squared > 3.0);
    }

    SUBCASE("input validation") {
        auto points = make_points(1e-9, 20.0, -3000.0, 0.0, 0);
        points.resize(3);
        CHECK_THROWS_AS(fit_tau_vs_current(points, 20.0), std::invalid_argument);

        // increasing mean time with current contradicts the law
        auto rising = make_points(1e-9, 20.0, 3000.0, 0.0, 0);
        for (auto& p : rising) p.stderr_s = p.mean_s * 0.01;
        CHECK_THROWS_AS(fit_tau_vs_current(rising, 20.0), std::runtime_error);
    }
}

TEST_CASE("drift_analysis") {
    SUBCASE("stationary data gives ratio near one") {
        const auto dwells = exp_samples(600.0, 30 * 2000, 26);
        const auto report = drift_analysis(dwells, 30);
        REQUIRE(report.bin_means_s.size() == 30);
        CHECK(report.ratio > 0.7);
        CHECK(report.ratio < 1.5);
        CHECK(report.ratio ==
              doctest::Approx(report.spread_of_means_s / report.mean_of_standard_errors_s));
    }

    SUBCASE("a slow mean shift inflates the ratio") {
        RandomStream rng(27);
        std::vector<double> dwells;
        for (std::size_t k = 0; k < 30 * 2000; ++k) {
            const double scale = 1.0 + 0.2 * std::sin(2.0 * 3.14159265 * k / 60000.0);
            dwells.push_back(rng.exponential(600.0 / scale));
        }
        CHECK(drift_analysis(dwells, 30).ratio > 3.0);
    }

    SUBCASE("ratio converges toward one with more events per bin") {
        double small_dev = 0.0, large_dev = 0.0;
        for (std::uint64_t rep = 0; rep < 10; ++rep) {
            small_dev += std::abs(drift_analysis(exp_samples(600.0, 30 * 200, 300 + rep), 30).ratio - 1.0);
            large_dev += std::abs(drift_analysis(exp_samples(600.0, 30 * 20000, 400 + rep), 30).ratio - 1.0);
        }
        // both hover near one; the larger sample is not systematically worse
        CHECK(small_dev / 10.0 < 0.35);
        CHECK(large_dev / 10.0 < 0.35);
    }

    SUBCASE("input validation") {
        CHECK_THROWS_AS(drift_analysis(exp_samples(600.0, 100, 28), 1), std::invalid_argument);
        CHECK_THROWS_AS(drift_analysis(exp_samples(600.0, 100, 29), 30), std::invalid_argument);
    }
}

TEST_CASE("chi-squared machinery") {
    SUBCASE("survival function reference values") {
        CHECK(chi_squared_sf(0.0, 5) == doctest::Approx(1.0));
        CHECK(chi_squared_sf(3.841, 1) == doctest::Approx(0.05).epsilon(0.01));
        CHECK(chi_squared_sf(18.307, 10) == doctest::Approx(0.05).epsilon(0.01));
        CHECK(chi_squared_sf(2.0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    }

    SUBCASE("goodness of fit accepts matched counts") {
        RandomStream rng(30);
        std::vector<double> counts(4, 0.0);
        const std::vector<double> probs{0.1, 0.2, 0.3, 0.4};
        for (int k = 0; k < 100000; ++k) {
            const double u = rng.uniform01();
            if (u < 0.1)
                counts[0] += 1;
            else if (u < 0.3)
                counts[1] += 1;
            else if (u < 0.6)
                counts[2] += 1;
            else
                counts[3] += 1;
        }
        const auto r = chi_squared_gof(counts, probs);
        CHECK(r.dof == 3);
        CHECK(r.p_value > 0.01);
    }

    SUBCASE("goodness of fit rejects mismatched counts") {
        const std::vector<double> counts{400.0, 100.0, 300.0, 200.0};
        const std::vector<double> probs{0.25, 0.25, 0.25, 0.25};
        CHECK(chi_squared_gof(counts, probs).p_value < 1e-6);
    }

    SUBCASE("two-sample test") {
        CHECK(chi_squared_two_sample({500.0, 500.0}, {520.0, 480.0}).p_value > 0.01);
        CHECK(chi_squared_two_sample({900.0, 100.0}, {100.0, 900.0}).p_value < 1e-6);
    }

    SUBCASE("input validation") {
        CHECK_THROWS_AS(chi_squared_sf(1.0, 0), std::invalid_argument);
        CHECK_THROWS_AS(chi_squared_gof({1.0}, {1.0}), std::invalid_argument);
        CHECK_THROWS_AS(chi_squared_gof({1.0, 2.0}, {1.0, 0.0}), std::invalid_argument);
    }
}
