#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "photonlab/errors.hpp"
#include "photonlab/snspd.hpp"

using namespace photonlab;
using snspd::CalibrationRun;
using snspd::DetectorModel;

TEST_CASE("sde at the operating bias and at zero") {
    const DetectorModel m;
    CHECK(snspd::sde(m, 1.8) == doctest::Approx(0.93).epsilon(0.011));
    CHECK(snspd::sde(m, 0.0) < 1e-3);
    CHECK(snspd::sde(m, 1.9) >= snspd::sde(m, 1.8));
    CHECK(snspd::sde(m, 1.8) >= snspd::sde(m, 1.5));
}

TEST_CASE("sde is monotone and bounded by the plateau") {
    const DetectorModel m;
    double previous = -1.0;
    for (double bias = 0.0; bias < m.switching_current_ua; bias += 0.01) {
        const double eff = snspd::sde(m, bias);
        CHECK(eff >= previous);
        CHECK(eff <= m.plateau_efficiency);
        previous = eff;
    }
}

TEST_CASE("latched detector errors at or above the switching current") {
    const DetectorModel m;
    CHECK_THROWS_AS(snspd::sde(m, m.switching_current_ua), Error);
    CHECK_THROWS_AS(snspd::dark_rate(m, 2.5), Error);
    CHECK_THROWS_AS(snspd::sde(m, -0.1), Error);
}

TEST_CASE("dark rate: 3 cps at the bias point, rapid rise near switching") {
    const DetectorModel m;
    CHECK(snspd::dark_rate(m, 1.8) == doctest::Approx(3.0).epsilon(0.34));
    CHECK(snspd::dark_rate(m, 0.995 * m.switching_current_ua) >=
          100.0 * snspd::dark_rate(m, 1.8));
    double previous = 0.0;
    for (double bias = 0.0; bias < m.switching_current_ua; bias += 0.02) {
        const double d = snspd::dark_rate(m, bias);
        CHECK(d >= previous);
        previous = d;
    }
}

TEST_CASE("calibration of a dead detector reads exactly zero") {
    DetectorModel m;
    m.plateau_efficiency = 0.0;
    m.dark_base_cps = 0.0;
    const auto r = snspd::simulate_calibration(m, CalibrationRun{}, 1.8);
    CHECK(r.sde_estimate == 0.0);
    CHECK(r.counts == 0);
}

TEST_CASE("seeded calibration reproduces the reference point and uncertainty") {
    const DetectorModel m;
    CalibrationRun run;
    run.seed = 1;
    const auto r = snspd::simulate_calibration(m, run, 1.8);
    CHECK(r.sde_estimate == doctest::Approx(0.93).epsilon(0.035));
    CHECK(r.total_rel_uncertainty == doctest::Approx(0.03).epsilon(0.02));
    CHECK(r.total_rel_uncertainty >= run.power_meter_rel_uncertainty);

    const auto again = snspd::simulate_calibration(m, run, 1.8);
    CHECK(again.sde_estimate == r.sde_estimate);
    CHECK(again.counts == r.counts);
}

TEST_CASE("doubling the duration halves the Poisson variance term") {
    const DetectorModel m;
    CalibrationRun run;
    run.seed = 5;
    const auto r1 = snspd::simulate_calibration(m, run, 1.8);
    run.duration_s *= 2.0;
    const auto r2 = snspd::simulate_calibration(m, run, 1.8);
    const double v1 = r1.poisson_rel_uncertainty * r1.poisson_rel_uncertainty;
    const double v2 = r2.poisson_rel_uncertainty * r2.poisson_rel_uncertainty;
    CHECK(v2 / v1 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("monte-carlo mean of the calibration counts") {
    const DetectorModel m;
    CalibrationRun run;
    run.duration_s = 1.0;
    const double expected = (run.photon_flux_per_s * snspd::sde(m, 1.8) +
                             snspd::dark_rate(m, 1.8)) * run.duration_s;
    const int n_runs = 10000;
    double mean = 0.0;
    for (int i = 0; i < n_runs; ++i) {
        run.seed = static_cast<std::uint64_t>(i) + 1;
        mean += static_cast<double>(snspd::simulate_calibration(m, run, 1.8).counts);
    }
    mean /= n_runs;
    const double sigma = std::sqrt(expected / n_runs);
    CHECK(std::abs(mean - expected) < 2.0 * sigma);
}

TEST_CASE("fit recovers the generating model from synthetic curve points") {
    const DetectorModel truth;
    std::vector<snspd::CurvePoint> sde_pts, dark_pts;
    for (double bias = 0.2; bias < 1.99; bias += 0.05) {
        sde_pts.push_back({bias, snspd::sde(truth, bias)});
        dark_pts.push_back({bias, snspd::dark_rate(truth, bias)});
    }
    DetectorModel start = truth;
    start.plateau_efficiency = 0.8;
    start.inflection_current_ua = 1.2;
    start.transition_width_ua = 0.1;
    start.dark_base_cps = 1.0;
    start.dark_exponent_per_ua = 10.0;
    const DetectorModel fit = snspd::fit_detector_model(start, sde_pts, dark_pts);
    CHECK(fit.plateau_efficiency == doctest::Approx(truth.plateau_efficiency).epsilon(1e-3));
    CHECK(fit.inflection_current_ua == doctest::Approx(truth.inflection_current_ua).epsilon(1e-3));
    CHECK(fit.transition_width_ua == doctest::Approx(truth.transition_width_ua).epsilon(1e-2));
    CHECK(snspd::sde(fit, 1.8) == doctest::Approx(snspd::sde(truth, 1.8)).epsilon(1e-3));
    CHECK(snspd::dark_rate(fit, 1.8) == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("model validation") {
    DetectorModel m;
    m.inflection_current_ua = 2.5;
    CHECK_THROWS_AS(m.validate(), Error);
    m = DetectorModel{};
    m.plateau_efficiency = 1.2;
    CHECK_THROWS_AS(m.validate(), Error);
    CalibrationRun run;
    run.duration_s = 0.0;
    CHECK_THROWS_AS(run.validate(), Error);
}
