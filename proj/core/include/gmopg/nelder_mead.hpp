#ifndef GMOPG_NELDER_MEAD_HPP
#define GMOPG_NELDER_MEAD_HPP

#include <functional>
#include <vector>

namespace gmopg {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    double simplex_diameter = 0.0;
};

struct NelderMeadOptions {
    int max_iterations = 10000;
    double diameter_tol = 1e-8;
    double initial_step = 0.5;
};

/// Minimizes f over a box. Iterates are projected onto [lower, upper]
/// componentwise; convergence when the simplex diameter drops below tol.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start,
                             const std::vector<double>& lower,
                             const std::vector<double>& upper,
                             const NelderMeadOptions& opts = {});

}  // namespace gmopg

#endif
