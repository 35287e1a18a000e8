#ifndef GMOPG_BASELINE_HPP
#define GMOPG_BASELINE_HPP

#include <stdexcept>
#include <string>

namespace gmopg {

enum class BaselineKind { Exponential, Weibull };

/// Baseline lifetime distribution G(t) on (0, inf).
///
/// Exponential: G(t) = 1 - exp(-beta t), beta > 0.
/// Weibull:     G(t) = 1 - exp(-beta t^delta), beta > 0, delta > 0
/// (beta multiplies t^delta; this is not the scale parameterization).
struct BaselineSpec {
    BaselineKind kind = BaselineKind::Exponential;
    double beta = 1.0;
    double delta = 1.0;  // Weibull shape; unused for Exponential

    static BaselineSpec exponential(double beta) {
        return BaselineSpec{BaselineKind::Exponential, beta, 1.0};
    }
    static BaselineSpec weibull(double beta, double delta) {
        return BaselineSpec{BaselineKind::Weibull, beta, delta};
    }

    void validate() const;
    std::string name() const;
};

double baseline_pdf(const BaselineSpec& spec, double t);
double baseline_log_pdf(const BaselineSpec& spec, double t);
double baseline_cdf(const BaselineSpec& spec, double t);
/// 1 - cdf, computed without cancellation.
double baseline_sf(const BaselineSpec& spec, double t);
double baseline_quantile(const BaselineSpec& spec, double p);
/// d/dt log g(t), used by the critical-point equations.
double baseline_dlog_pdf(const BaselineSpec& spec, double t);

}  // namespace gmopg

#endif
