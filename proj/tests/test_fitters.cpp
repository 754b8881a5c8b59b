#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mdl/errors.hpp"
#include "mdl/fitters.hpp"
#include "mdl/rng.hpp"
#include "oracles.hpp"

using namespace mdl;

namespace {

// Synthetic sweep with hits = round(p * trials) at each grid point.
SweepResult synthetic_sweep(const std::vector<double>& snr_db,
                            const std::vector<double>& p, std::uint64_t trials) {
    SweepResult s;
    for (std::size_t i = 0; i < snr_db.size(); ++i) {
        SweepPoint pt;
        pt.snr_db = snr_db[i];
        pt.rho = std::pow(10.0, snr_db[i] / 10.0);
        pt.trials = trials;
        pt.hits = static_cast<std::uint64_t>(std::llround(p[i] * trials));
        pt.p_hat = static_cast<double>(pt.hits) / static_cast<double>(trials);
        const WilsonInterval ci = wilson(pt.hits, trials);
        pt.ci_low = ci.low;
        pt.ci_high = ci.high;
        s.points.push_back(pt);
    }
    return s;
}

} // namespace

TEST_CASE("exact power law is recovered exactly") {
    std::vector<double> snr{10, 20, 30, 40};
    std::vector<double> p;
    for (double db : snr) p.push_back(std::pow(10.0, -2.0 * db / 10.0));
    const SweepResult s = synthetic_sweep(snr, p, 1000000000000ULL);
    const SlopeEstimate est = estimate_slope(s, 10, 40);
    CHECK(est.d_hat == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(est.std_error == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    CHECK(est.points_used == 4);
}

TEST_CASE("five percent multiplicative noise keeps the slope near one") {
    SplitMix64 rng(0x601);
    std::vector<double> snr{10, 15, 20, 25, 30, 35, 40};
    for (int resample = 0; resample < 20; ++resample) {
        std::vector<double> p;
        for (double db : snr) {
            const double clean = 0.7 * std::pow(10.0, -db / 10.0);
            const double noise = 1.0 + 0.05 * (2.0 * rng.uniform01() - 1.0);
            p.push_back(clean * noise);
        }
        const SweepResult s = synthetic_sweep(snr, p, 1000000000000ULL);
        const SlopeEstimate est = estimate_slope(s, 10, 40);
        CHECK(est.d_hat >= 0.85);
        CHECK(est.d_hat <= 1.15);
    }
}

TEST_CASE("scalar Rayleigh closed-form sweep fits to diversity one") {
    std::vector<double> snr{20, 24, 28, 32, 36, 40};
    std::vector<double> p;
    for (double db : snr)
        p.push_back(oracle::rayleigh_outage(1.0, std::pow(10.0, db / 10.0)));
    const SweepResult s = synthetic_sweep(snr, p, 1000000000000ULL);
    const SlopeEstimate est = estimate_slope(s, 20, 40);
    CHECK(est.d_hat >= 0.9);
    CHECK(est.d_hat <= 1.1);
}

TEST_CASE("hit floor excludes sparse points and names itself on failure") {
    std::vector<double> snr{10, 20, 30, 40, 50};
    std::vector<double> p{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    const SweepResult s = synthetic_sweep(snr, p, 100000); // last point: 1 hit

    const SlopeEstimate est = estimate_slope(s, 10, 50);
    CHECK(est.points_used == 3); // the 10- and 1-hit tail points drop

    try {
        estimate_slope(s, 45, 50);
        FAIL("expected numeric_error");
    } catch (const numeric_error& e) {
        CHECK(std::string(e.what()).find("100") != std::string::npos);
    }
}

TEST_CASE("dropping low-hit points does not inflate the fit error") {
    // Interior points with a few dozen hits carry ~1/sqrt(hits) sampling
    // noise; the floor removes them without shrinking the window span.
    SplitMix64 rng(0x602);
    std::vector<double> snr{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    for (int resample = 0; resample < 10; ++resample) {
        SweepResult s;
        for (double db : snr) {
            const bool sparse = db == 20 || db == 30 || db == 40;
            const double rel = sparse ? 0.5 : 0.05;
            const double noise = 1.0 + rel * (2.0 * rng.uniform01() - 1.0);
            const double p = std::pow(10.0, -db / 10.0) * noise;
            SweepPoint pt;
            pt.snr_db = db;
            pt.rho = std::pow(10.0, db / 10.0);
            // sparse points collect ~30 hits, well under the floor of 100
            pt.trials = sparse ? static_cast<std::uint64_t>(30.0 * pt.rho) : 100000000;
            pt.hits = std::max<std::uint64_t>(
                1, static_cast<std::uint64_t>(std::llround(
                       p * static_cast<double>(pt.trials))));
            pt.p_hat = static_cast<double>(pt.hits) / static_cast<double>(pt.trials);
            s.points.push_back(pt);
        }
        const SlopeEstimate floored = estimate_slope(s, 5, 50, 100);
        const SlopeEstimate raw = estimate_slope(s, 5, 50, 1);
        CHECK(floored.points_used == 7);
        CHECK(raw.points_used == 10);
        CHECK(floored.std_error <= raw.std_error + 1e-12);
    }
}

TEST_CASE("compare produces the documented verdicts") {
    SlopeEstimate est;
    est.d_hat = 1.05;
    est.window_lo_db = 10;
    est.window_hi_db = 40;
    const Verdict pass = compare(est, DiversityValue{1, "flat_mmse_joint", ""}, 0.25);
    CHECK(pass.pass);
    CHECK(pass.delta == doctest::Approx(0.05));

    est.d_hat = 2.6;
    const Verdict fail = compare(est, DiversityValue{4, "flat_mmse_joint", ""}, 0.25);
    CHECK_FALSE(fail.pass);
    CHECK(fail.delta == doctest::Approx(1.4));

    CHECK_THROWS_AS(compare(est, DiversityValue{1, "", ""}, 0.0), config_error);
}
