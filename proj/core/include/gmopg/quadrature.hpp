#ifndef GMOPG_QUADRATURE_HPP
#define GMOPG_QUADRATURE_HPP

#include <cstddef>
#include <functional>

namespace gmopg {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
    std::size_t evaluations = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    std::size_t max_intervals = 4000;
};

/// Adaptive Gauss-Kronrod 7/15 on a finite interval, worst-interval-first.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& opts = {});

/// As integrate(), but throws std::runtime_error with diagnostics when the
/// error estimate does not reach tolerance.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadratureOptions& opts = {});

}  // namespace gmopg

#endif
