#include "photonlab/snspd.hpp"

#include <cmath>
#include <random>

#include "photonlab/errors.hpp"
#include "photonlab/optim.hpp"

namespace photonlab::snspd {

void DetectorModel::validate() const {
    require(switching_current_ua > 0.0, "invalid-parameter", "switching current must be positive");
    require(inflection_current_ua > 0.0 && inflection_current_ua < switching_current_ua,
            "invalid-parameter", "inflection current must lie below the switching current");
    require(plateau_efficiency >= 0.0 && plateau_efficiency <= 1.0, "invalid-parameter",
            "plateau efficiency must lie in [0, 1]");
    require(transition_width_ua > 0.0, "invalid-parameter", "transition width must be positive");
    require(dark_base_cps >= 0.0, "invalid-parameter", "dark base rate must be nonnegative");
}

DetectorModel DetectorModel::from_config(const Config& cfg) {
    DetectorModel m;
    m.switching_current_ua = cfg.get_double("snspd", "switching_current_ua", m.switching_current_ua);
    m.plateau_efficiency = cfg.get_double("snspd", "plateau_efficiency", m.plateau_efficiency);
    m.inflection_current_ua = cfg.get_double("snspd", "inflection_current_ua", m.inflection_current_ua);
    m.transition_width_ua = cfg.get_double("snspd", "transition_width_ua", m.transition_width_ua);
    m.dark_base_cps = cfg.get_double("snspd", "dark_base_cps", m.dark_base_cps);
    m.dark_exponent_per_ua = cfg.get_double("snspd", "dark_exponent_per_ua", m.dark_exponent_per_ua);
    m.validate();
    return m;
}

void CalibrationRun::validate() const {
    require(photon_flux_per_s > 0.0, "invalid-parameter", "photon flux must be positive");
    require(duration_s > 0.0, "invalid-parameter", "duration must be positive");
    require(power_meter_rel_uncertainty >= 0.0, "invalid-parameter",
            "power meter uncertainty must be nonnegative");
}

CalibrationRun CalibrationRun::from_config(const Config& cfg) {
    CalibrationRun r;
    r.photon_flux_per_s = cfg.get_double("snspd", "calib_flux_per_s", r.photon_flux_per_s);
    r.duration_s = cfg.get_double("snspd", "calib_duration_s", r.duration_s);
    r.power_meter_rel_uncertainty =
        cfg.get_double("snspd", "power_meter_rel_uncertainty", r.power_meter_rel_uncertainty);
    r.seed = static_cast<std::uint64_t>(cfg.get_int("run", "seed", 1));
    r.validate();
    return r;
}

namespace {

void check_bias(const DetectorModel& model, double bias_ua) {
    require(bias_ua >= 0.0, "invalid-parameter", "bias current must be nonnegative");
    require(bias_ua < model.switching_current_ua, "detector-latched",
            "bias at or above the switching current drives the nanowire normal");
}

}  // namespace

double sde(const DetectorModel& model, double bias_ua) {
    model.validate();
    check_bias(model, bias_ua);
    const double z = (bias_ua - model.inflection_current_ua) / model.transition_width_ua;
    return model.plateau_efficiency / (1.0 + std::exp(-z));
}

double dark_rate(const DetectorModel& model, double bias_ua) {
    model.validate();
    check_bias(model, bias_ua);
    return model.dark_base_cps *
           std::exp(model.dark_exponent_per_ua * (bias_ua - model.inflection_current_ua));
}

CalibrationResult simulate_calibration(const DetectorModel& model, const CalibrationRun& run,
                                       double bias_ua) {
    model.validate();
    run.validate();
    const double efficiency = sde(model, bias_ua);
    const double dark = dark_rate(model, bias_ua);

    std::mt19937_64 rng(run.seed);
    const double mean_counts = (run.photon_flux_per_s * efficiency + dark) * run.duration_s;
    std::uint64_t counts = 0;
    if (mean_counts > 0.0) {
        std::poisson_distribution<std::uint64_t> poisson(mean_counts);
        counts = poisson(rng);
    }

    std::normal_distribution<double> gauss(0.0, 1.0);
    const double flux_estimate =
        run.photon_flux_per_s * (1.0 + run.power_meter_rel_uncertainty * gauss(rng));
    require(flux_estimate > 0.0, "invalid-state", "perturbed flux estimate is nonpositive");

    CalibrationResult r;
    r.counts = counts;
    r.sde_estimate =
        (static_cast<double>(counts) / run.duration_s - dark) / flux_estimate;
    r.poisson_rel_uncertainty = counts > 0 ? 1.0 / std::sqrt(static_cast<double>(counts)) : 0.0;
    r.total_rel_uncertainty = std::sqrt(run.power_meter_rel_uncertainty * run.power_meter_rel_uncertainty +
                                        r.poisson_rel_uncertainty * r.poisson_rel_uncertainty);
    return r;
}

DetectorModel fit_detector_model(const DetectorModel& start,
                                 const std::vector<CurvePoint>& sde_points,
                                 const std::vector<CurvePoint>& dark_points) {
    start.validate();
    require(sde_points.size() >= 3, "invalid-parameter", "need at least 3 efficiency points");
    require(dark_points.size() >= 2, "invalid-parameter", "need at least 2 dark-count points");

    auto residual = [&](const std::vector<double>& p) {
        const double plateau = p[0], inflection = p[1], width = p[2];
        if (plateau <= 0.0 || plateau > 1.0 || width <= 0.0 || inflection <= 0.0) return 1e12;
        double s = 0.0;
        for (const CurvePoint& pt : sde_points) {
            const double model = plateau / (1.0 + std::exp(-(pt.bias_ua - inflection) / width));
            s += (model - pt.value) * (model - pt.value);
        }
        return s;
    };
    optim::NelderMeadOptions opts;
    opts.max_iters = 4000;
    opts.initial_step = 0.05;
    const optim::NelderMeadResult best = optim::nelder_mead(
        residual,
        {start.plateau_efficiency, start.inflection_current_ua, start.transition_width_ua}, opts);

    DetectorModel fit = start;
    fit.plateau_efficiency = best.x[0];
    fit.inflection_current_ua = best.x[1];
    fit.transition_width_ua = best.x[2];

    // Dark law is linear in log space: ln d = ln base + k (b - inflection).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (const CurvePoint& pt : dark_points) {
        if (pt.value <= 0.0) continue;
        const double x = pt.bias_ua - fit.inflection_current_ua;
        const double y = std::log(pt.value);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    require(n >= 2, "invalid-parameter", "need at least 2 positive dark-count points");
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    require(std::abs(denom) > 1e-30, "degenerate-data", "dark-count points share one bias");
    fit.dark_exponent_per_ua = (static_cast<double>(n) * sxy - sx * sy) / denom;
    fit.dark_base_cps = std::exp((sy - fit.dark_exponent_per_ua * sx) / static_cast<double>(n));
    fit.validate();
    return fit;
}

}  // namespace photonlab::snspd
