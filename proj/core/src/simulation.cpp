#include "gmopg/simulation.hpp"

#include <cmath>
#include <stdexcept>

namespace gmopg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-replicate stream seed; replicates are independent of iteration order.
std::uint64_t replicate_seed(std::uint64_t seed, std::size_t n, int r) {
    return splitmix64(splitmix64(splitmix64(seed) ^ std::uint64_t(n)) ^
                      std::uint64_t(r));
}

std::vector<double> truth_vector(const GmopgParams& truth) {
    std::vector<double> v{truth.theta, truth.alpha, truth.lambda,
                          truth.baseline.beta};
    if (truth.baseline.kind == BaselineKind::Weibull)
        v.push_back(truth.baseline.delta);
    return v;
}

}  // namespace

SimulationReport mc_study(const GmopgParams& truth,
                          std::span<const std::size_t> sample_sizes,
                          const SimulationOptions& options) {
    truth.validate();
    if (options.replicates < 1)
        throw std::invalid_argument("mc_study: need at least one replicate");
    if (sample_sizes.empty())
        throw std::invalid_argument("mc_study: need at least one sample size");
    for (std::size_t n : sample_sizes)
        if (n < 5)
            throw std::invalid_argument("mc_study: sample sizes must be >= 5");

    const ModelTag tag = truth.baseline.kind == BaselineKind::Weibull
                             ? ModelTag::GMOPW
                             : ModelTag::GMOPE;
    const auto truth_v = truth_vector(truth);
    const std::size_t k = truth_v.size();

    ModelConfig cfg = default_config(tag);
    cfg.optimizer = options.optimizer;
    cfg.optimizer.warm_starts.push_back(truth_v);

    SimulationReport rep;
    rep.truth = truth;
    rep.sample_sizes.assign(sample_sizes.begin(), sample_sizes.end());
    rep.replicates = options.replicates;
    rep.seed = options.seed;
    rep.param_names = model_param_names(tag);
    rep.cells.assign(k, std::vector<SimulationCell>(sample_sizes.size()));

    for (std::size_t si = 0; si < sample_sizes.size(); ++si) {
        const std::size_t n = sample_sizes[si];
        std::vector<double> sum(k, 0.0), sumsq(k, 0.0);
        int converged = 0, failed = 0;
        for (int r = 0; r < options.replicates; ++r) {
            const auto data =
                sample(truth, n, replicate_seed(options.seed, n, r));
            std::vector<double> est;
            if (options.diagnostic_truth) {
                est = truth_v;
            } else {
                try {
                    const FitResult f = fit(data, cfg);
                    if (!f.convergence.converged) {
                        ++failed;
                        continue;
                    }
                    est = f.estimates;
                } catch (const std::exception&) {
                    ++failed;
                    continue;
                }
            }
            ++converged;
            for (std::size_t j = 0; j < k; ++j) {
                const double d = est[j] - truth_v[j];
                sum[j] += d;
                sumsq[j] += d * d;
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            auto& cell = rep.cells[j][si];
            cell.n = n;
            cell.converged = converged;
            cell.failed = failed;
            cell.flagged =
                failed > 0 && 5 * failed > options.replicates;  // > 20%
            if (converged > 0) {
                cell.bias = sum[j] / double(converged);
                cell.mse = sumsq[j] / double(converged);
            }
        }
    }

    std::size_t trending = 0;
    for (std::size_t j = 0; j < k; ++j) {
        bool mono = true;
        for (std::size_t si = 1; si < rep.sample_sizes.size(); ++si) {
            const auto& a = rep.cells[j][si - 1];
            const auto& b = rep.cells[j][si];
            if (std::abs(b.bias) > std::abs(a.bias) || b.mse > a.mse)
                mono = false;
        }
        if (mono) ++trending;
    }
    rep.monotone_trend = 2 * trending > k;
    return rep;
}

}  // namespace gmopg
