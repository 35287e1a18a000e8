#ifndef GMOPG_DETAIL_PG_EVAL_HPP
#define GMOPG_DETAIL_PG_EVAL_HPP

#include <cmath>

#include "gmopg/baseline.hpp"

namespace gmopg::detail {

// One-point evaluation of the Poisson-G layer, with the lambda -> 0 GMO
// limit folded in. For |lambda| < eps the survival is Gbar(1 - lambda G / 2)
// and the density g (1 + lambda (1/2 - G)), both second-order accurate.
struct PgEval {
    double G;         // baseline cdf
    double S;         // P-G survival
    double log_S;     // log of the above
    double log_g;     // log P-G density
    double ratio;     // pg density / pg survival (hazard of the P-G layer)
};

inline PgEval pg_eval(double lambda, const BaselineSpec& baseline, double t,
                      double eps) {
    PgEval e{};
    const double G = baseline_cdf(baseline, t);
    const double Gbar = baseline_sf(baseline, t);
    const double log_g = baseline_log_pdf(baseline, t);
    // log Gbar without going through 1 - G
    const double log_Gbar =
        baseline.kind == BaselineKind::Exponential
            ? -baseline.beta * t
            : -baseline.beta * std::pow(t, baseline.delta);
    e.G = G;
    if (std::abs(lambda) < eps) {
        e.S = Gbar * (1.0 - 0.5 * lambda * G);
        e.log_S = log_Gbar + std::log1p(-0.5 * lambda * G);
        e.log_g = log_g + std::log1p(lambda * (0.5 - G));
        e.ratio = std::exp(log_g - log_Gbar) * (1.0 + 0.5 * lambda * Gbar);
        return e;
    }
    const double em1_lG = std::expm1(-lambda * Gbar);  // e^{-lambda Gbar} - 1
    const double em1_l = std::expm1(-lambda);
    e.S = std::exp(-lambda * G) * em1_lG / em1_l;
    e.log_S = -lambda * G + std::log(em1_lG / em1_l);
    e.log_g = log_g - lambda * G + std::log(lambda / -em1_l);
    e.ratio = lambda * std::exp(log_g) / -em1_lG;
    return e;
}

// Inverse of the P-G survival: the baseline cdf level G with S_PG(G) = s.
inline double pg_survival_inverse(double lambda, double s, double eps) {
    if (std::abs(lambda) < eps)
        return 1.0 - s - 0.5 * lambda * s * (1.0 - s);
    return -std::log1p((1.0 - s) * std::expm1(-lambda)) / lambda;
}

// Complement of the inverse: the baseline survival level Gbar with
// S_PG(1 - Gbar) = s, computed without the 1 - G cancellation. Derived
// from e^{-lambda Gbar} = 1 / (1 + s (e^lambda - 1)).
inline double pg_survival_inverse_sf(double lambda, double s, double eps) {
    if (std::abs(lambda) < eps) return s * (1.0 + 0.5 * lambda * (1.0 - s));
    if (lambda > 30.0)  // avoid overflow / loss in s * expm1(lambda)
        return 1.0 + std::log(s + std::exp(-lambda) * (1.0 - s)) / lambda;
    return std::log1p(s * std::expm1(lambda)) / lambda;
}

}  // namespace gmopg::detail

#endif
