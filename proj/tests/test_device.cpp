#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "smtj/device.hpp"
#include "smtj/stats.hpp"

using namespace smtj;

namespace {

DeviceParams defaults() { return DeviceParams{}; }

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

TEST_CASE("DeviceParams validation") {
    CHECK_NOTHROW(defaults().validate());

    DeviceParams p = defaults();
    p.tau0_s = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = defaults();
    p.i_c_ua = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = defaults();
    p.r_ap_ohm = p.r_p_ohm;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    // flipping the critical-current sign makes tau increase with current
    p = defaults();
    p.i_c_ua = 3000.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("rate_from_current evaluates the switching law") {
    DeviceParams p = defaults();

    SUBCASE("zero barrier ratio gives 1/tau0 at any current") {
        p.delta = 0.0;
        for (double i : {600.0, 918.0, 1300.0})
            CHECK(rate_from_current(i, p) == doctest::Approx(1.0 / p.tau0_s).epsilon(1e-12));
    }

    SUBCASE("default parameters near 918 uA") {
        // independent scalar evaluation of the law
        const double tau = 1e-9 * std::exp(20.0 * (1.0 + 918.0 / -3000.0));
        CHECK(tau == doctest::Approx(1.07e-3).epsilon(0.01));
        CHECK(rate_from_current(918.0, p) == doctest::Approx(1.0 / tau).epsilon(1e-12));
        CHECK(rate_from_current(918.0, p) == doctest::Approx(937.0).epsilon(0.01));
    }

    SUBCASE("exponent cancels at I = -i_c") {
        CHECK(tau_p_from_current(-p.i_c_ua, p) == doctest::Approx(p.tau0_s).epsilon(1e-12));
    }

    SUBCASE("overflow raises a domain error naming the current") {
        p.delta = 5000.0;  // tau overflows to inf, rate to 0
        CHECK_THROWS_AS(rate_from_current(600.0, p), std::domain_error);
    }

    SUBCASE("strictly increasing over the operating range") {
        double prev = rate_from_current(p.i_min_ua, p);
        for (int k = 1; k <= 100; ++k) {
            const double i = p.i_min_ua + (p.i_max_ua - p.i_min_ua) * k / 100.0;
            const double r = rate_from_current(i, p);
            CHECK(r > prev);
            prev = r;
        }
    }
}

TEST_CASE("sample_dwell draws Exp(lambda)") {
    RandomStream rng(1234);
    const double lambda = 937.0;

    SUBCASE("sample mean matches 1/lambda") {
        const std::size_t n = 100000;
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) sum += sample_dwell(lambda, rng);
        const double mean = sum / static_cast<double>(n);
        const double tol = 3.0 * (1.0 / lambda) / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(mean - 1.0 / lambda) < tol);
    }

    SUBCASE("distribution passes KS against the generating law") {
        std::vector<double> samples(10000);
        for (auto& s : samples) s = sample_dwell(lambda, rng);
        CHECK(ks_test(samples, lambda).p_value > 0.01);
    }

    SUBCASE("invalid rate") { CHECK_THROWS_AS(sample_dwell(0.0, rng), std::invalid_argument); }
}

TEST_CASE("telegraph traces") {
    DriftModel no_drift;

    SUBCASE("transition count matches Poisson expectation at symmetric rates") {
        RandomStream rng(7);
        const auto trace = generate_telegraph_rates(1000.0, 1000.0, 0.2, no_drift, rng);
        const double transitions = static_cast<double>(trace.dwells_s.size()) - 1.0;
        CHECK(std::abs(transitions - 200.0) < 3.0 * std::sqrt(200.0));
    }

    SUBCASE("dwells sum to total and are positive") {
        RandomStream rng(8);
        const auto trace = generate_telegraph_rates(500.0, 1500.0, 1.0, no_drift, rng);
        double sum = 0.0;
        for (double d : trace.dwells_s) {
            CHECK(d > 0.0);
            sum += d;
        }
        CHECK(sum == doctest::Approx(trace.total_s).epsilon(1e-9));
    }

    SUBCASE("duration shorter than the first dwell yields one truncated dwell") {
        RandomStream rng(9);
        const auto trace = generate_telegraph_rates(1e-3, 1e-3, 1e-6, no_drift, rng);
        REQUIRE(trace.dwells_s.size() >= 1);
        CHECK(trace.dwells_s[0] == doctest::Approx(1e-6));
    }

    SUBCASE("long-run AP occupancy is lambda_p / (lambda_p + lambda_ap)") {
        RandomStream rng(10);
        const double lambda_ap = 1000.0, lambda_p = 2000.0;
        const auto trace = generate_telegraph_rates(lambda_p, lambda_ap, 20.0, no_drift, rng);
        double ap_time = 0.0;
        for (std::size_t k = 0; k < trace.dwells_s.size(); ++k)
            if (trace.state_of(k) == MagState::AP) ap_time += trace.dwells_s[k];
        CHECK(ap_time / trace.total_s == doctest::Approx(2.0 / 3.0).epsilon(0.03));
    }

    SUBCASE("per-state dwells pass KS with drift off") {
        RandomStream rng(11);
        const auto trace = generate_telegraph_rates(800.0, 300.0, 40.0, no_drift, rng);
        std::vector<double> p_dwells, ap_dwells;
        for (std::size_t k = 0; k + 1 < trace.dwells_s.size(); ++k) {
            if (trace.state_of(k) == MagState::P)
                p_dwells.push_back(trace.dwells_s[k]);
            else
                ap_dwells.push_back(trace.dwells_s[k]);
        }
        CHECK(ks_test(p_dwells, 800.0).p_value > 0.01);
        CHECK(ks_test(ap_dwells, 300.0).p_value > 0.01);
    }

    SUBCASE("dwell sequence has no lag-1 autocorrelation with drift off") {
        RandomStream rng(12);
        const auto trace = generate_telegraph_rates(1000.0, 1000.0, 20.0, no_drift, rng);
        std::vector<double> dwells(trace.dwells_s.begin(), trace.dwells_s.end() - 1);
        const double m = mean_of(dwells);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k + 1 < dwells.size(); ++k)
            num += (dwells[k] - m) * (dwells[k + 1] - m);
        for (double d : dwells) den += (d - m) * (d - m);
        const double r1 = num / den;
        CHECK(std::abs(r1) < 3.0 / std::sqrt(static_cast<double>(dwells.size())));
    }

    SUBCASE("identical seeds give bit-identical traces") {
        RandomStream a(99), b(99);
        const auto ta = generate_telegraph_rates(700.0, 900.0, 5.0, no_drift, a);
        const auto tb = generate_telegraph_rates(700.0, 900.0, 5.0, no_drift, b);
        REQUIRE(ta.dwells_s.size() == tb.dwells_s.size());
        for (std::size_t k = 0; k < ta.dwells_s.size(); ++k)
            CHECK(ta.dwells_s[k] == tb.dwells_s[k]);
    }

    SUBCASE("current-addressed generator uses mirrored AP law") {
        DeviceParams p = defaults();
        RandomStream rng(13);
        // at 918 uA the AP state is essentially stable, so the first AP dwell
        // should dwarf the P dwells
        const auto trace = generate_telegraph(p, 918.0, 5.0, no_drift, rng);
        REQUIRE(trace.dwells_s.size() >= 2);
        CHECK(trace.state_of(1) == MagState::AP);
        CHECK(trace.dwells_s[1] > 100.0 * trace.dwells_s[0]);
    }
}

TEST_CASE("empirical dwell CDF calibration across seeds") {
    // KS against the generating law should pass at the 1% level in >= 95%
    // of repetitions
    int passes = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RandomStream rng = RandomStream::for_trial(555, seed);
        std::vector<double> samples(10000);
        for (auto& s : samples) s = sample_dwell(250.0, rng);
        if (ks_test(samples, 250.0).p_value > 0.01) ++passes;
    }
    CHECK(passes >= 95);
}

TEST_CASE("drift process") {
    DriftModel drift;
    drift.enabled = true;

    SUBCASE("disabled model throws") {
        DriftModel off;
        RandomStream rng(1);
        CHECK_THROWS_AS(drift_log_rate(off, 0.0, 1.0, rng), std::logic_error);
    }

    SUBCASE("zero amplitude stays at zero") {
        drift.log_amplitude = 0.0;
        RandomStream rng(2);
        double offset = 0.0;
        for (int k = 0; k < 100; ++k) offset = drift_log_rate(drift, offset, 1.0, rng);
        CHECK(offset == 0.0);
    }

    SUBCASE("stationary standard deviation matches log_amplitude") {
        drift.log_amplitude = 0.3;
        drift.correlation_time_s = 10.0;
        RandomStream rng(3);
        double offset = 0.0;
        double ss = 0.0;
        const int n = 10000;
        for (int k = 0; k < n; ++k) {
            offset = drift_log_rate(drift, offset, 50.0, rng);  // elapsed >> tau_c
            ss += offset * offset;
        }
        const double sd = std::sqrt(ss / n);
        CHECK(sd == doctest::Approx(0.3).epsilon(0.05));
    }

    SUBCASE("mean reversion over short steps") {
        drift.log_amplitude = 0.2;
        drift.correlation_time_s = 10.0;
        RandomStream rng(4);
        double offset = 0.0;
        double ss = 0.0;
        const int n = 200000;
        for (int k = 0; k < n; ++k) {
            offset = drift_log_rate(drift, offset, 1.0, rng);
            ss += offset * offset;
        }
        CHECK(std::sqrt(ss / n) == doctest::Approx(0.2).epsilon(0.1));
    }
}
