#ifndef GMOPG_PROPERTIES_HPP
#define GMOPG_PROPERTIES_HPP

#include <cstddef>
#include <vector>

#include "gmopg/family.hpp"
#include "gmopg/quadrature.hpp"

namespace gmopg {

/// Truncated mixture weights eta'_j = C(j+theta-1, j) (1-alpha)^j alpha^theta
/// and eta_j = (j+theta) eta'_j. Valid for alpha in (0,1), where the eta'_j
/// are nonnegative and sum to one.
struct SeriesExpansion {
    std::size_t truncation = 0;  // J; coefficients run j = 0..J
    std::vector<double> eta_prime;
    std::vector<double> eta;
    double tail_mass = 0.0;  // 1 - sum eta'_j
};

struct MomentSummary {
    double mean;
    double variance;
    double skewness;  // mu3 / sigma^3
    double kurtosis;  // mu4 / sigma^4
};

struct QuantileShape {
    double galton_skewness;
    double moors_kurtosis;
};

SeriesExpansion series_coefficients(double theta, double alpha, std::size_t J);

/// Smallest J with tail mass below tol (capped at 10^4).
SeriesExpansion series_coefficients_adaptive(double theta, double alpha,
                                             double tol = 1e-10);

double truncated_mixture_sf(const GmopgParams& params, double t, std::size_t J);
double truncated_mixture_pdf(const GmopgParams& params, double t, std::size_t J);

double raw_moment(const GmopgParams& params, int s);
MomentSummary moment_summary(const GmopgParams& params);
double mgf(const GmopgParams& params, double s);

QuantileShape quantile_shape(const GmopgParams& params);

double renyi_entropy(const GmopgParams& params, double delta);
/// Series cross-check of the entropy integral, alpha in (0,1) only.
double renyi_entropy_series(const GmopgParams& params, double delta,
                            std::size_t J);

double order_statistic_pdf(const GmopgParams& params, int i, int n, double t);
/// Truncated series form of the order-statistic pdf, alpha in (0,1) only.
double order_statistic_pdf_series(const GmopgParams& params, int i, int n,
                                  double t, std::size_t J);

/// P-G probability weighted moment: E[T^p F^q (1-F)^r] under P-G(lambda).
/// r may be any nonnegative real (the mixture sums need r = j + theta - 1).
double pwm_pg(double lambda, const BaselineSpec& baseline, double p, double q,
              double r);

/// E[T^s] through the eta_j / PWM mixture identity; alpha in (0,1) only.
double moment_via_pwm(const GmopgParams& params, int s);

/// Quantile at 1 - p_tail; integration cutoff used by the moment routines.
double upper_cutoff(const GmopgParams& params, double p_tail = 1e-13);

}  // namespace gmopg

#endif
