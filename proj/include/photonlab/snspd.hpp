#pragma once

#include <cstdint>
#include <vector>

#include "photonlab/config.hpp"

namespace photonlab::snspd {

/// Phenomenological bias-current response: logistic efficiency curve below
/// the switching current plus an exponential dark-count law.
struct DetectorModel {
    double switching_current_ua = 2.0;
    double plateau_efficiency = 0.9303;
    double inflection_current_ua = 1.40;
    double transition_width_ua = 0.05;
    double dark_base_cps = 2.4946e-6;
    double dark_exponent_per_ua = 35.0;

    void validate() const;
    static DetectorModel from_config(const Config& cfg);
};

struct CalibrationRun {
    double photon_flux_per_s = 1e5;
    double duration_s = 10.0;
    double power_meter_rel_uncertainty = 0.03;
    std::uint64_t seed = 1;

    void validate() const;
    static CalibrationRun from_config(const Config& cfg);
};

struct CalibrationResult {
    double sde_estimate = 0.0;
    double total_rel_uncertainty = 0.0;
    double poisson_rel_uncertainty = 0.0;
    std::uint64_t counts = 0;
};

/// System detection efficiency at the given bias. Errors with
/// "detector-latched" at or above the switching current.
double sde(const DetectorModel& model, double bias_ua);

/// Dark counts per second at the given bias.
double dark_rate(const DetectorModel& model, double bias_ua);

/// One simulated efficiency calibration: Poisson counts against a
/// power-meter-limited flux estimate.
CalibrationResult simulate_calibration(const DetectorModel& model, const CalibrationRun& run,
                                       double bias_ua);

struct CurvePoint {
    double bias_ua;
    double value;
};

/// Least-squares fit of (plateau, inflection, width) to efficiency points and
/// (base, exponent) to dark-count points. switching_current is taken from the
/// seed model.
DetectorModel fit_detector_model(const DetectorModel& start,
                                 const std::vector<CurvePoint>& sde_points,
                                 const std::vector<CurvePoint>& dark_points);

}  // namespace photonlab::snspd
