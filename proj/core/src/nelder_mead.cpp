#include "gmopg/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gmopg {

namespace {

std::vector<double> project(std::vector<double> x, const std::vector<double>& lo,
                            const std::vector<double>& hi) {
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
}

double diameter(const std::vector<std::vector<double>>& pts) {
    double d = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts[i].size(); ++j)
            d = std::max(d, std::abs(pts[i][j] - pts[0][j]));
    return d;
}

}  // namespace

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> start, const std::vector<double>& lower,
    const std::vector<double>& upper, const NelderMeadOptions& opts) {
    const std::size_t n = start.size();
    start = project(std::move(start), lower, upper);

    std::vector<std::vector<double>> simplex;
    simplex.push_back(start);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = start;
        const double step =
            opts.initial_step * std::max(1.0, std::abs(start[i])) *
            (p[i] + opts.initial_step > upper[i] ? -1.0 : 1.0);
        p[i] += step;
        simplex.push_back(project(std::move(p), lower, upper));
    }
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    NelderMeadResult res;
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        {
            std::vector<std::vector<double>> s2;
            std::vector<double> v2;
            for (auto k : order) {
                s2.push_back(simplex[k]);
                v2.push_back(values[k]);
            }
            simplex = std::move(s2);
            values = std::move(v2);
        }
        if (diameter(simplex) < opts.diameter_tol) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / double(n);

        const auto blend = [&](double coeff) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + coeff * (simplex[n][j] - centroid[j]);
            return project(std::move(p), lower, upper);
        };

        const auto reflected = blend(-1.0);
        const double fr = f(reflected);
        if (fr < values[0]) {
            const auto expanded = blend(-2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if (fr < values[n - 1]) {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        const auto contracted = blend(fr < values[n] ? -0.5 : 0.5);
        const double fc = f(contracted);
        if (fc < std::min(fr, values[n])) {
            simplex[n] = contracted;
            values[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
            simplex[i] = project(std::move(simplex[i]), lower, upper);
            values[i] = f(simplex[i]);
        }
    }
    res.x = simplex[0];
    res.value = values[0];
    res.iterations = iter;
    res.simplex_diameter = diameter(simplex);
    res.converged = res.simplex_diameter < opts.diameter_tol;
    return res;
}

}  // namespace gmopg
