#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "photonlab/config.hpp"

namespace photonlab::cli {

/// Runs `photonlab <subcommand> ...`. Returns the process exit code; errors
/// are printed as a single `error: <code>: <message>` line on stderr.
int run(const std::vector<std::string>& args);

struct TomoPipelineResult {
    std::vector<double> uncorrected;  // reconstructed P_n after detection losses
    std::vector<double> corrected;    // loss-inverted P_n
    double detection_efficiency = 1.0;
    int mle_iterations = 0;
    bool mle_converged = false;
};

/// herald -> homodyne sampling -> MLE -> loss correction; writes
/// samples.csv(+.meta), distribution_uncorrected.csv, distribution_corrected.csv
/// and report.txt under out_dir.
TomoPipelineResult run_tomo_pipeline(const Config& cfg, const std::filesystem::path& out_dir,
                                     std::size_t n_samples, std::uint64_t seed);

}  // namespace photonlab::cli
