#ifndef GMOPG_SIMULATION_HPP
#define GMOPG_SIMULATION_HPP

#include <cstdint>
#include <vector>

#include "gmopg/inference.hpp"

namespace gmopg {

/// One (parameter, sample size) cell of a Monte Carlo study.
struct SimulationCell {
    std::size_t n = 0;
    double bias = 0.0;
    double mse = 0.0;
    int converged = 0;
    int failed = 0;
    bool flagged = false;  // > 20% of replicates failed to fit
};

struct SimulationReport {
    GmopgParams truth;
    std::vector<std::size_t> sample_sizes;
    int replicates = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> param_names;        // theta, alpha, lambda, beta[, delta]
    std::vector<std::vector<SimulationCell>> cells;  // [param][sample size]
    /// bias magnitude and MSE nonincreasing along the sample-size ladder
    /// for a majority of parameters
    bool monotone_trend = false;
};

struct SimulationOptions {
    int replicates = 500;
    std::uint64_t seed = 20200606;
    /// Skip fitting and force every estimate to the truth; exercises the
    /// aggregation path (bias = MSE = 0 by construction).
    bool diagnostic_truth = false;
    OptimizerSettings optimizer;
};

SimulationReport mc_study(const GmopgParams& truth,
                          std::span<const std::size_t> sample_sizes,
                          const SimulationOptions& options);

}  // namespace gmopg

#endif
