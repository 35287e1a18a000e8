#include "gmopg/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gmopg/detail/pg_eval.hpp"

namespace gmopg {

void GmopgParams::validate() const {
    baseline.validate();
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw std::invalid_argument("gmopg: theta must be a positive real");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("gmopg: alpha must be a positive real");
    if (!std::isfinite(lambda))
        throw std::invalid_argument("gmopg: lambda must be finite");
}

namespace {

void check_support(double t) {
    if (!(t > 0.0)) throw std::domain_error("gmopg: t must be in (0, inf)");
}

void check_lambda_nonzero(double lambda) {
    if (lambda == 0.0)
        throw std::domain_error(
            "pg: lambda = 0 is the GMO limit, not a P-G member");
    if (!std::isfinite(lambda))
        throw std::invalid_argument("pg: lambda must be finite");
}

}  // namespace

double pg_survival(double lambda, const BaselineSpec& baseline, double t) {
    check_lambda_nonzero(lambda);
    check_support(t);
    return detail::pg_eval(lambda, baseline, t, kLambdaEps).S;
}

double pg_cdf(double lambda, const BaselineSpec& baseline, double t) {
    return 1.0 - pg_survival(lambda, baseline, t);
}

double pg_log_pdf(double lambda, const BaselineSpec& baseline, double t) {
    check_lambda_nonzero(lambda);
    check_support(t);
    return detail::pg_eval(lambda, baseline, t, kLambdaEps).log_g;
}

double pg_pdf(double lambda, const BaselineSpec& baseline, double t) {
    return std::exp(pg_log_pdf(lambda, baseline, t));
}

double log_survival(const GmopgParams& params, double t) {
    params.validate();
    check_support(t);
    const auto e = detail::pg_eval(params.lambda, params.baseline, t, kLambdaEps);
    const double abar = 1.0 - params.alpha;
    // [alpha S / (1 - abar S)]^theta
    return params.theta *
           (std::log(params.alpha) + e.log_S - std::log1p(-abar * e.S));
}

double survival(const GmopgParams& params, double t) {
    return std::exp(log_survival(params, t));
}

double cdf(const GmopgParams& params, double t) {
    return -std::expm1(log_survival(params, t));
}

double log_pdf(const GmopgParams& params, double t) {
    params.validate();
    check_support(t);
    const auto e = detail::pg_eval(params.lambda, params.baseline, t, kLambdaEps);
    const double abar = 1.0 - params.alpha;
    return std::log(params.theta) + params.theta * std::log(params.alpha) +
           e.log_g + (params.theta - 1.0) * e.log_S -
           (params.theta + 1.0) * std::log1p(-abar * e.S);
}

double pdf(const GmopgParams& params, double t) {
    return std::exp(log_pdf(params, t));
}

double hazard(const GmopgParams& params, double t) {
    return std::exp(log_pdf(params, t) - log_survival(params, t));
}

double quantile(const GmopgParams& params, double p) {
    params.validate();
    if (!(p > 0.0) || !(p < 1.0))
        throw std::domain_error("gmopg: quantile requires p in (0,1)");
    const double w = std::exp(std::log1p(-p) / params.theta);  // (1-p)^{1/theta}
    const double abar = 1.0 - params.alpha;
    const double s = w / (params.alpha + abar * w);  // target P-G survival
    const double gbar =
        detail::pg_survival_inverse_sf(params.lambda, s, kLambdaEps);
    if (gbar < 0.5) {
        // right tail: invert the baseline through its survival level, so
        // the 1 - G cancellation never enters
        const double h = -std::log(
            std::max(gbar, std::numeric_limits<double>::min()));
        const auto& b = params.baseline;
        return b.kind == BaselineKind::Exponential
                   ? h / b.beta
                   : std::pow(h / b.beta, 1.0 / b.delta);
    }
    double g_level = detail::pg_survival_inverse(params.lambda, s, kLambdaEps);
    g_level = std::clamp(g_level, std::numeric_limits<double>::min(),
                         1.0 - std::numeric_limits<double>::epsilon() / 2);
    return baseline_quantile(params.baseline, g_level);
}

std::vector<double> sample(const GmopgParams& params, std::size_t n,
                           std::uint64_t seed) {
    params.validate();
    std::vector<double> out;
    out.reserve(n);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        // strictly inside (0,1); distribution-independent bit mapping
        const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        out.push_back(quantile(params, u));
    }
    return out;
}

SpecialCase reduce_special_case(const GmopgParams& params) {
    params.validate();
    const bool theta1 = params.theta == 1.0;
    const bool alpha1 = params.alpha == 1.0;
    const bool lambda0 = params.lambda == 0.0;
    if (lambda0) return theta1 ? SpecialCase::Mo : SpecialCase::Gmo;
    if (theta1) return alpha1 ? SpecialCase::PG : SpecialCase::MopG;
    return SpecialCase::None;
}

double dlog_pdf(const GmopgParams& params, double t) {
    params.validate();
    check_support(t);
    const auto e = detail::pg_eval(params.lambda, params.baseline, t, kLambdaEps);
    const double abar = 1.0 - params.alpha;
    const double g = baseline_pdf(params.baseline, t);
    const double pg_density = std::exp(e.log_g);
    const double q = pg_density / (1.0 - abar * e.S);
    return baseline_dlog_pdf(params.baseline, t) - params.lambda * g -
           (params.theta - 1.0) * e.ratio - (params.theta + 1.0) * abar * q;
}

double dlog_hazard(const GmopgParams& params, double t) {
    params.validate();
    check_support(t);
    const auto e = detail::pg_eval(params.lambda, params.baseline, t, kLambdaEps);
    const double abar = 1.0 - params.alpha;
    const double g = baseline_pdf(params.baseline, t);
    const double pg_density = std::exp(e.log_g);
    const double q = pg_density / (1.0 - abar * e.S);
    return baseline_dlog_pdf(params.baseline, t) - params.lambda * g + e.ratio -
           abar * q;
}

namespace {

constexpr int kScanPoints = 512;
constexpr double kInflexionTol = 1e-6;

double second_log_derivative(const GmopgParams& params, double t,
                             CurveTarget target) {
    const double h = 1e-5 * std::max(1.0, t);
    const auto d = [&](double x) {
        return target == CurveTarget::Density ? dlog_pdf(params, x)
                                              : dlog_hazard(params, x);
    };
    return (d(t + h) - d(std::max(t - h, t / 2))) /
           (t + h - std::max(t - h, t / 2));
}

std::vector<CriticalPoint> find_critical_points(const GmopgParams& params,
                                                double lo, double hi,
                                                CurveTarget target) {
    params.validate();
    if (!(lo > 0.0) || !(hi > lo))
        throw std::domain_error("gmopg: search interval must satisfy 0 < lo < hi");
    const auto d = [&](double x) {
        return target == CurveTarget::Density ? dlog_pdf(params, x)
                                              : dlog_hazard(params, x);
    };
    std::vector<CriticalPoint> roots;
    const double llo = std::log(lo), lhi = std::log(hi);
    double t_prev = lo, f_prev = d(lo);
    for (int i = 1; i < kScanPoints; ++i) {
        const double t_cur =
            std::exp(llo + (lhi - llo) * i / double(kScanPoints - 1));
        const double f_cur = d(t_cur);
        if (std::isfinite(f_prev) && std::isfinite(f_cur) &&
            ((f_prev < 0.0) != (f_cur < 0.0))) {
            double a = t_prev, b = t_cur, fa = f_prev;
            while (b - a > 1e-12) {
                const double m = 0.5 * (a + b);
                const double fm = d(m);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            const double t0 = 0.5 * (a + b);
            const double psi = second_log_derivative(params, t0, target);
            Classification cls = Classification::Inflexion;
            if (psi < -kInflexionTol)
                cls = Classification::LocalMax;
            else if (psi > kInflexionTol)
                cls = Classification::LocalMin;
            roots.push_back({t0, cls, target});
        }
        t_prev = t_cur;
        f_prev = f_cur;
    }
    return roots;
}

}  // namespace

std::vector<CriticalPoint> density_critical_points(const GmopgParams& params,
                                                   double lo, double hi) {
    return find_critical_points(params, lo, hi, CurveTarget::Density);
}

std::vector<CriticalPoint> hazard_critical_points(const GmopgParams& params,
                                                  double lo, double hi) {
    return find_critical_points(params, lo, hi, CurveTarget::Hazard);
}

double likelihood_ratio(const GmopgParams& x, const GmopgParams& y, double t) {
    x.validate();
    y.validate();
    if (x.theta != y.theta || x.lambda != y.lambda ||
        x.baseline.kind != y.baseline.kind || x.baseline.beta != y.baseline.beta ||
        (x.baseline.kind == BaselineKind::Weibull &&
         x.baseline.delta != y.baseline.delta))
        throw std::invalid_argument(
            "likelihood_ratio: models must share theta, lambda and baseline");
    check_support(t);
    const auto e = detail::pg_eval(x.lambda, x.baseline, t, kLambdaEps);
    const double a1 = x.alpha, a2 = y.alpha;
    // (a1/a2)^theta [(1 - abar2 S)/(1 - abar1 S)]^{theta+1}
    return std::exp(
        x.theta * std::log(a1 / a2) +
        (x.theta + 1.0) * (std::log1p(-(1.0 - a2) * e.S) -
                           std::log1p(-(1.0 - a1) * e.S)));
}

namespace {

// lambda / (1 - e^{-lambda}), continuous through lambda = 0
double poisson_norm(double lambda) {
    if (std::abs(lambda) < kLambdaEps) return 1.0 + 0.5 * lambda;
    return lambda / -std::expm1(-lambda);
}

}  // namespace

double asymptotic_pdf(const GmopgParams& params, double t, Regime regime) {
    params.validate();
    check_support(t);
    const double log_g = baseline_log_pdf(params.baseline, t);
    const double c = poisson_norm(params.lambda);
    if (regime == Regime::SmallT)
        return std::exp(std::log(params.theta) + std::log(c) + log_g -
                        std::log(params.alpha));
    const auto e = detail::pg_eval(params.lambda, params.baseline, t, kLambdaEps);
    return std::exp(std::log(params.theta) + params.theta * std::log(params.alpha) -
                    params.lambda + std::log(c) + log_g +
                    (params.theta - 1.0) * e.log_S);
}

double asymptotic_cdf(const GmopgParams& params, double t, Regime regime) {
    params.validate();
    check_support(t);
    if (regime == Regime::SmallT) return 0.0;
    const auto e = detail::pg_eval(params.lambda, params.baseline, t, kLambdaEps);
    return -std::expm1(params.theta * (std::log(params.alpha) + e.log_S));
}

double asymptotic_hazard(const GmopgParams& params, double t, Regime regime) {
    params.validate();
    check_support(t);
    const double log_g = baseline_log_pdf(params.baseline, t);
    const double c = poisson_norm(params.lambda);
    if (regime == Regime::SmallT)
        return std::exp(std::log(params.theta) + std::log(c) + log_g -
                        std::log(params.alpha));
    const auto e = detail::pg_eval(params.lambda, params.baseline, t, kLambdaEps);
    return std::exp(std::log(params.theta) + std::log(c) - params.lambda + log_g -
                    e.log_S);
}

}  // namespace gmopg
