#include "photonlab/source.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "photonlab/errors.hpp"

namespace photonlab::source {

void OpoParams::validate() const {
    require(output_coupler_T > 0.0 && output_coupler_T < 1.0, "invalid-parameter",
            "output coupler transmission must lie in (0, 1)");
    require(intracavity_loss_L >= 0.0 && intracavity_loss_L < 1.0, "invalid-parameter",
            "intracavity loss must lie in [0, 1)");
    require(output_coupler_T + intracavity_loss_L < 1.0, "invalid-parameter",
            "T + L must stay below one");
    require(bandwidth_mhz > 0.0, "invalid-parameter", "bandwidth must be positive");
    require(pump_power_mw >= 0.0, "invalid-parameter", "pump power must be nonnegative");
    require(pair_rate_per_mw >= 0.0, "invalid-parameter", "pair rate must be nonnegative");
    require(lambda_sq_cap > 0.0 && lambda_sq_cap < 1.0, "invalid-parameter",
            "lambda^2 cap must lie in (0, 1)");
}

OpoParams OpoParams::from_config(const Config& cfg) {
    OpoParams p;
    p.output_coupler_T = cfg.get_double("opo", "output_coupler_T", p.output_coupler_T);
    p.intracavity_loss_L = cfg.get_double("opo", "intracavity_loss_L", p.intracavity_loss_L);
    p.bandwidth_mhz = cfg.get_double("opo", "bandwidth_mhz", p.bandwidth_mhz);
    p.pump_power_mw = cfg.get_double("opo", "pump_power_mw", p.pump_power_mw);
    p.pair_rate_per_mw = cfg.get_double("opo", "pair_rate_per_mw", p.pair_rate_per_mw);
    p.lambda_sq_cap = cfg.get_double("opo", "lambda_sq_cap", p.lambda_sq_cap);
    p.validate();
    return p;
}

void HeraldChain::validate() const {
    require(filter_transmission >= 0.0 && filter_transmission <= 1.0, "invalid-parameter",
            "filter transmission must lie in [0, 1]");
    require(detector_efficiency >= 0.0 && detector_efficiency <= 1.0, "invalid-parameter",
            "detector efficiency must lie in [0, 1]");
    require(polarization_factor >= 0.0 && polarization_factor <= 1.0, "invalid-parameter",
            "polarization factor must lie in [0, 1]");
    require(dark_rate_cps >= 0.0, "invalid-parameter", "dark rate must be nonnegative");
    require(herald_window_s > 0.0, "invalid-parameter", "herald window must be positive");
}

HeraldChain HeraldChain::from_config(const Config& cfg) {
    HeraldChain c;
    c.filter_transmission = cfg.get_double("herald_chain", "filter_transmission", c.filter_transmission);
    c.detector_efficiency = cfg.get_double("herald_chain", "detector_efficiency", c.detector_efficiency);
    c.polarization_factor = cfg.get_double("herald_chain", "polarization_factor", c.polarization_factor);
    c.dark_rate_cps = cfg.get_double("herald_chain", "dark_rate_cps", c.dark_rate_cps);
    c.herald_window_s = cfg.get_double("herald_chain", "herald_window_s", c.herald_window_s);
    c.validate();
    return c;
}

double escape_efficiency(double output_coupler_T, double intracavity_loss_L) {
    require(output_coupler_T >= 0.0 && intracavity_loss_L >= 0.0, "invalid-parameter",
            "T and L must be nonnegative");
    require(output_coupler_T + intracavity_loss_L > 0.0, "invalid-parameter",
            "escape efficiency undefined for T = L = 0");
    return output_coupler_T / (output_coupler_T + intracavity_loss_L);
}

double herald_efficiency(const HeraldChain& chain) {
    return chain.filter_transmission * chain.detector_efficiency * chain.polarization_factor;
}

double mode_rate_hz(double bandwidth_mhz) {
    require(bandwidth_mhz > 0.0, "invalid-parameter", "bandwidth must be positive");
    return std::numbers::pi * bandwidth_mhz * 1e6 / 2.0;
}

double pair_amplitude(double pump_power_mw, const OpoParams& opo) {
    opo.validate();
    require(pump_power_mw >= 0.0, "invalid-parameter", "pump power must be nonnegative");
    const double lambda_sq =
        pump_power_mw * opo.pair_rate_per_mw / mode_rate_hz(opo.bandwidth_mhz);
    require(lambda_sq < 1.0, "invalid-parameter", "pump power puts lambda^2 above one");
    require(lambda_sq <= opo.lambda_sq_cap, "pump-too-high",
            "lambda^2 = " + std::to_string(lambda_sq) +
                " violates the far-below-threshold cap " + std::to_string(opo.lambda_sq_cap));
    return std::sqrt(lambda_sq);
}

double implied_pump_mw(double lambda, const OpoParams& opo) {
    opo.validate();
    return lambda * lambda * mode_rate_hz(opo.bandwidth_mhz) / opo.pair_rate_per_mw;
}

HeraldResult herald(const OpoParams& opo, const HeraldChain& chain, double lambda,
                    int truncation, double deficit_threshold) {
    opo.validate();
    chain.validate();
    require(lambda >= 0.0 && lambda < 1.0, "invalid-parameter", "lambda must lie in [0, 1)");

    const double eta_opo = escape_efficiency(opo.output_coupler_T, opo.intracavity_loss_L);
    const double eta_herald = herald_efficiency(chain);
    const double p_dark = chain.dark_rate_cps * chain.herald_window_s;

    const fock::JointDistribution joint = fock::tmsv_joint(lambda, truncation, deficit_threshold);
    const fock::JointDistribution lossy = fock::apply_loss_marginal(joint, eta_opo, eta_herald);

    // P(click | i idler photons) = 1 - (1 - p_dark) [i == 0]
    const int N = lossy.truncation();
    std::vector<double> joint_click(static_cast<std::size_t>(N) + 1, 0.0);
    double p_click = 0.0;
    for (int s = 0; s <= N; ++s) {
        double acc = lossy.prob(s, 0) * p_dark;
        for (int i = 1; i <= N; ++i) acc += lossy.prob(s, i);
        joint_click[static_cast<std::size_t>(s)] = acc;
        p_click += acc;
    }
    require(p_click > 0.0, "no-herald", "click probability is zero; nothing to herald");

    for (double& v : joint_click) v /= p_click;
    // Conditioning renormalizes; any truncation deficit was already recorded upstream.
    fock::PhotonDistribution conditional = fock::PhotonDistribution::from_weights(
        std::move(joint_click), 1e-9);

    HeraldResult r{std::move(conditional)};
    r.click_probability = p_click;

    const double rate_hz = lambda * lambda * mode_rate_hz(opo.bandwidth_mhz) * eta_herald +
                           chain.dark_rate_cps;
    r.heralding_rate_hz = rate_hz;

    const double pump = implied_pump_mw(lambda, opo);
    r.brightness = pump > 0.0 ? rate_hz / (pump * opo.bandwidth_mhz)
                              : std::numeric_limits<double>::quiet_NaN();

    if (fock::mean_photon(r.conditional_state) > 0.0) {
        r.g2_exact = fock::g2_zero(r.conditional_state);
        r.g2_approx = fock::g2_zero_approx(r.conditional_state);
    } else {
        r.g2_exact = std::numeric_limits<double>::quiet_NaN();
        r.g2_approx = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

HeraldResult herald(const OpoParams& opo, const HeraldChain& chain, int truncation) {
    return herald(opo, chain, pair_amplitude(opo.pump_power_mw, opo), truncation);
}

double brightness_ceiling(double brightness, const HeraldChain& chain) {
    chain.validate();
    const double eta = herald_efficiency(chain);
    require(eta > 0.0, "invalid-parameter", "brightness ceiling undefined for eta_herald = 0");
    return brightness / eta;
}

double temporal_mode(double t_s, double bandwidth_mhz) {
    require(bandwidth_mhz > 0.0, "invalid-parameter", "bandwidth must be positive");
    const double gamma = std::numbers::pi * bandwidth_mhz * 1e6;
    return std::sqrt(gamma) * std::exp(-gamma * std::abs(t_s));
}

}  // namespace photonlab::source
