#ifndef GMOPG_FAMILY_HPP
#define GMOPG_FAMILY_HPP

#include <cstdint>
#include <vector>

#include "gmopg/baseline.hpp"

namespace gmopg {

/// Parameters of the GMOP-G(theta, alpha, lambda) transform of a baseline.
///
/// theta > 0 (shape), alpha > 0 (tilt, abar = 1 - alpha), lambda real.
/// lambda = 0 is accepted and routed through the GMO limit; |lambda| below
/// kLambdaEps is evaluated by a second-order series to avoid 0/0.
struct GmopgParams {
    double theta = 1.0;
    double alpha = 1.0;
    double lambda = 1.0;
    BaselineSpec baseline;

    void validate() const;
};

inline constexpr double kLambdaEps = 1e-8;

enum class SpecialCase { MopG, PG, Gmo, Mo, None };
enum class Classification { LocalMax, LocalMin, Inflexion };
enum class CurveTarget { Density, Hazard };
enum class Regime { SmallT, LargeT };

struct CriticalPoint {
    double location;
    Classification classification;
    CurveTarget target;
};

// Poisson-G layer of the construction. lambda must be
// nonzero here; the lambda -> 0 limit belongs to the GMO route.
double pg_survival(double lambda, const BaselineSpec& baseline, double t);
double pg_cdf(double lambda, const BaselineSpec& baseline, double t);
double pg_pdf(double lambda, const BaselineSpec& baseline, double t);
double pg_log_pdf(double lambda, const BaselineSpec& baseline, double t);

// Full family. All evaluators are pure and reentrant.
double survival(const GmopgParams& params, double t);
double log_survival(const GmopgParams& params, double t);
double cdf(const GmopgParams& params, double t);
double pdf(const GmopgParams& params, double t);
double log_pdf(const GmopgParams& params, double t);
double hazard(const GmopgParams& params, double t);
double quantile(const GmopgParams& params, double p);

/// Inverse-cdf draws from a private seeded stream. Same seed, same output.
std::vector<double> sample(const GmopgParams& params, std::size_t n,
                           std::uint64_t seed);

SpecialCase reduce_special_case(const GmopgParams& params);

/// d/dt log f(t); its roots are the density critical points.
double dlog_pdf(const GmopgParams& params, double t);
/// d/dt log h(t); its roots are the hazard critical points.
double dlog_hazard(const GmopgParams& params, double t);

std::vector<CriticalPoint> density_critical_points(const GmopgParams& params,
                                                   double lo, double hi);
std::vector<CriticalPoint> hazard_critical_points(const GmopgParams& params,
                                                  double lo, double hi);

/// f_X(t) / f_Y(t) for two models sharing theta, lambda and baseline.
double likelihood_ratio(const GmopgParams& x, const GmopgParams& y, double t);

double asymptotic_pdf(const GmopgParams& params, double t, Regime regime);
double asymptotic_cdf(const GmopgParams& params, double t, Regime regime);
double asymptotic_hazard(const GmopgParams& params, double t, Regime regime);

}  // namespace gmopg

#endif
