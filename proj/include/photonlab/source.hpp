#pragma once

#include "photonlab/config.hpp"
#include "photonlab/fock.hpp"

namespace photonlab::source {

/// Below-threshold OPO parameters. pair_rate_per_mw calibrates the pump to
/// pair-flux law; the pump to pair-amplitude law follows from it through the
/// temporal-mode rate (see pair_amplitude).
struct OpoParams {
    double output_coupler_T = 0.10;
    double intracavity_loss_L = 0.0042;
    double bandwidth_mhz = 53.0;
    double pump_power_mw = 1.0;
    double pair_rate_per_mw = 683871.0;
    double lambda_sq_cap = 0.1;

    void validate() const;
    static OpoParams from_config(const Config& cfg);
};

/// Idler (conditioning) path: frequency filters, fiber coupling and the
/// heralding detector, plus its dark counts within the herald window.
struct HeraldChain {
    double filter_transmission = 0.5;
    double detector_efficiency = 0.93;
    double polarization_factor = 1.0;
    double dark_rate_cps = 3.0;
    double herald_window_s = 6.0056e-9;

    void validate() const;
    static HeraldChain from_config(const Config& cfg);
};

struct HeraldResult {
    fock::PhotonDistribution conditional_state;  // at the OPO output
    double click_probability = 0.0;              // per herald window
    double heralding_rate_hz = 0.0;
    double g2_exact = 0.0;   // NaN when the conditional state is vacuum
    double g2_approx = 0.0;  // NaN when the conditional state is vacuum
    double brightness = 0.0; // photons/(s mW MHz)
};

/// eta_OPO = T / (T + L).
double escape_efficiency(double output_coupler_T, double intracavity_loss_L);

/// Composite idler-path transmission filter * detector * polarization.
double herald_efficiency(const HeraldChain& chain);

/// Effective rate of temporal modes for the double-exponential profile,
/// 1 / T_eff = gamma / 2 with gamma = pi * bandwidth.
double mode_rate_hz(double bandwidth_mhz);

/// Pair amplitude lambda with lambda^2 = pump * pair_rate_per_mw / mode_rate.
/// Errors when lambda^2 exceeds the far-below-threshold cap.
double pair_amplitude(double pump_power_mw, const OpoParams& opo);

/// Pump power implied by a given pair amplitude under the same law.
double implied_pump_mw(double lambda, const OpoParams& opo);

/// Conditional single-photon state and rates for a given pair amplitude.
/// deficit_threshold bounds the acceptable truncated probability mass.
HeraldResult herald(const OpoParams& opo, const HeraldChain& chain, double lambda,
                    int truncation,
                    double deficit_threshold = fock::PhotonDistribution::kDefaultDeficitThreshold);

/// Same, with lambda derived from opo.pump_power_mw.
HeraldResult herald(const OpoParams& opo, const HeraldChain& chain, int truncation);

/// Brightness with a perfect detector and lossless heralding path.
double brightness_ceiling(double brightness, const HeraldChain& chain);

/// Normalized double-decaying exponential temporal mode,
/// f(t) = sqrt(gamma) exp(-gamma |t|), gamma = pi * bandwidth (angular
/// half-width at half-maximum of the Lorentzian line).
double temporal_mode(double t_s, double bandwidth_mhz);

}  // namespace photonlab::source
