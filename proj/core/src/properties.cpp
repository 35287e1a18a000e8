#include "gmopg/properties.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gmopg/detail/pg_eval.hpp"

namespace gmopg {

namespace {

constexpr std::size_t kMaxTruncation = 10000;

void require_expandable_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error(
            "series expansion requires alpha in (0,1); got alpha=" +
            std::to_string(alpha));
}

// Integrate f over (lo, inf): fixed part up to t0, then doubling tail
// segments until they stop contributing. Throws on a divergent tail.
double integrate_with_tail(const std::function<double(double)>& f, double lo,
                           double t0, const QuadratureOptions& opts = {}) {
    double total = integrate_or_throw(f, lo, t0, opts);
    double T = t0;
    double prev_seg = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 48; ++k) {
        const double seg = integrate_or_throw(f, T, 2.0 * T, opts);
        total += seg;
        const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
        if (std::abs(seg) <= 0.5 * tol) return total;
        if (k >= 2 && std::abs(seg) > std::abs(prev_seg))
            throw std::domain_error(
                "integral appears divergent: tail segments grow past t=" +
                std::to_string(T));
        prev_seg = seg;
        T *= 2.0;
    }
    throw std::runtime_error("integral tail did not settle within 48 doublings");
}

}  // namespace

double upper_cutoff(const GmopgParams& params, double p_tail) {
    return quantile(params, 1.0 - p_tail);
}

SeriesExpansion series_coefficients(double theta, double alpha, std::size_t J) {
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
    require_expandable_alpha(alpha);
    SeriesExpansion s;
    s.truncation = J;
    s.eta_prime.reserve(J + 1);
    s.eta.reserve(J + 1);
    double coeff = std::pow(alpha, theta);  // eta'_0
    double partial = 0.0;
    for (std::size_t j = 0; j <= J; ++j) {
        if (j > 0) coeff *= (1.0 - alpha) * (double(j) + theta - 1.0) / double(j);
        s.eta_prime.push_back(coeff);
        s.eta.push_back((double(j) + theta) * coeff);
        partial += coeff;
    }
    s.tail_mass = 1.0 - partial;
    return s;
}

SeriesExpansion series_coefficients_adaptive(double theta, double alpha,
                                             double tol) {
    require_expandable_alpha(alpha);
    double coeff = std::pow(alpha, theta);
    double partial = coeff;
    std::size_t J = 0;
    while (1.0 - partial > tol && J < kMaxTruncation) {
        ++J;
        coeff *= (1.0 - alpha) * (double(J) + theta - 1.0) / double(J);
        partial += coeff;
    }
    return series_coefficients(theta, alpha, J);
}

double truncated_mixture_sf(const GmopgParams& params, double t, std::size_t J) {
    params.validate();
    require_expandable_alpha(params.alpha);
    const auto e = detail::pg_eval(params.lambda, params.baseline, t, kLambdaEps);
    const SeriesExpansion s = series_coefficients(params.theta, params.alpha, J);
    double acc = 0.0;
    for (std::size_t j = 0; j <= J; ++j)
        acc += s.eta_prime[j] *
               std::exp((double(j) + params.theta) * e.log_S);
    return acc;
}

double truncated_mixture_pdf(const GmopgParams& params, double t, std::size_t J) {
    params.validate();
    require_expandable_alpha(params.alpha);
    const auto e = detail::pg_eval(params.lambda, params.baseline, t, kLambdaEps);
    const SeriesExpansion s = series_coefficients(params.theta, params.alpha, J);
    double acc = 0.0;
    for (std::size_t j = 0; j <= J; ++j)
        acc += s.eta[j] *
               std::exp((double(j) + params.theta - 1.0) * e.log_S);
    return std::exp(e.log_g) * acc;
}

double raw_moment(const GmopgParams& params, int s) {
    params.validate();
    if (s < 1) throw std::invalid_argument("raw_moment: s must be >= 1");
    const double hi = upper_cutoff(params);
    const auto integrand = [&](double t) {
        return std::pow(t, double(s)) * pdf(params, t);
    };
    return integrate_with_tail(integrand, 0.0, hi,
                               {1e-14, 1e-11, 8000});
}

MomentSummary moment_summary(const GmopgParams& params) {
    const double m1 = raw_moment(params, 1);
    const double m2 = raw_moment(params, 2);
    const double m3 = raw_moment(params, 3);
    const double m4 = raw_moment(params, 4);
    const double var = m2 - m1 * m1;
    if (!(var > 0.0))
        throw std::runtime_error("moment_summary: degenerate (zero variance)");
    const double mu3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
    const double mu4 =
        m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
    return {m1, var, mu3 / std::pow(var, 1.5), mu4 / (var * var)};
}

double mgf(const GmopgParams& params, double s) {
    params.validate();
    if (s == 0.0) return 1.0;
    const double hi = upper_cutoff(params);
    const auto integrand = [&](double t) {
        return std::exp(s * t + log_pdf(params, t));
    };
    return integrate_with_tail(integrand, 0.0, hi, {1e-12, 1e-10, 8000});
}

QuantileShape quantile_shape(const GmopgParams& params) {
    const auto q = [&](double p) { return quantile(params, p); };
    const double denom = q(6.0 / 8) - q(2.0 / 8);
    return {(q(6.0 / 8) - 2.0 * q(4.0 / 8) + q(2.0 / 8)) / denom,
            (q(7.0 / 8) - q(5.0 / 8) + q(3.0 / 8) - q(1.0 / 8)) / denom};
}

double renyi_entropy(const GmopgParams& params, double delta) {
    params.validate();
    if (!(delta > 0.0) || delta == 1.0)
        throw std::domain_error("renyi_entropy: delta must be > 0 and != 1");
    const double hi = upper_cutoff(params);
    const auto integrand = [&](double t) {
        return std::exp(delta * log_pdf(params, t));
    };
    const double integral =
        integrate_with_tail(integrand, 0.0, hi, {1e-13, 1e-10, 8000});
    return std::log(integral) / (1.0 - delta);
}

double renyi_entropy_series(const GmopgParams& params, double delta,
                            std::size_t J) {
    params.validate();
    require_expandable_alpha(params.alpha);
    if (!(delta > 0.0) || delta == 1.0)
        throw std::domain_error("renyi_entropy: delta must be > 0 and != 1");
    const double theta = params.theta, alpha = params.alpha;
    const double hi = upper_cutoff(params);
    const double k = delta * (theta + 1.0);
    double sum = 0.0;
    // mu_j = theta^delta alpha^{delta theta} (1-alpha)^j Gamma(k+j)/(Gamma(k) j!)
    double mu = std::pow(theta, delta) * std::pow(alpha, delta * theta);
    for (std::size_t j = 0; j <= J; ++j) {
        if (j > 0) mu *= (1.0 - alpha) * (k + double(j) - 1.0) / double(j);
        const double jj = double(j);
        const auto integrand = [&](double t) {
            const auto e =
                detail::pg_eval(params.lambda, params.baseline, t, kLambdaEps);
            return std::exp(delta * (e.log_g + (theta - 1.0) * e.log_S) +
                            jj * e.log_S);
        };
        sum += mu * integrate_with_tail(integrand, 0.0, hi, {1e-13, 1e-9, 8000});
    }
    return std::log(sum) / (1.0 - delta);
}

double order_statistic_pdf(const GmopgParams& params, int i, int n, double t) {
    params.validate();
    if (i < 1 || n < 1 || i > n)
        throw std::invalid_argument("order_statistic_pdf: need 1 <= i <= n");
    const double log_sf = log_survival(params, t);
    const double F = -std::expm1(log_sf);
    if (i > 1 && F <= 0.0) return 0.0;
    const double log_comb = std::lgamma(double(n) + 1.0) -
                            std::lgamma(double(i)) -
                            std::lgamma(double(n - i) + 1.0);
    double acc = log_comb + log_pdf(params, t) + double(n - i) * log_sf;
    if (i > 1) acc += double(i - 1) * std::log(F);
    return std::exp(acc);
}

double order_statistic_pdf_series(const GmopgParams& params, int i, int n,
                                  double t, std::size_t J) {
    params.validate();
    require_expandable_alpha(params.alpha);
    if (i < 1 || n < 1 || i > n)
        throw std::invalid_argument("order_statistic_pdf: need 1 <= i <= n");
    const auto e = detail::pg_eval(params.lambda, params.baseline, t, kLambdaEps);
    const SeriesExpansion s = series_coefficients(params.theta, params.alpha, J);
    // density factor: g_PG sum_j eta_j S^{j+theta-1}
    double dens = 0.0;
    for (std::size_t j = 0; j <= J; ++j)
        dens += s.eta[j] * std::exp((double(j) + params.theta - 1.0) * e.log_S);
    dens *= std::exp(e.log_g);
    // sf powers: F^{i-1} = sum_l (-1)^l C(i-1,l) sf^l, and each
    // sf^m = [alpha S/(1 - abar S)]^{theta m} expands with theta -> theta m
    double outer = 0.0;
    double binom = 1.0;  // C(i-1, l)
    for (int l = 0; l <= i - 1; ++l) {
        if (l > 0) binom *= double(i - l) / double(l);
        const int m = n - i + l;
        double inner = 1.0;  // sf^0
        if (m > 0) {
            const double theta_m = params.theta * double(m);
            const SeriesExpansion sm =
                series_coefficients(theta_m, params.alpha, J);
            inner = 0.0;
            for (std::size_t kk = 0; kk <= J; ++kk)
                inner += sm.eta_prime[kk] *
                         std::exp((double(kk) + theta_m) * e.log_S);
        }
        outer += (l % 2 == 0 ? 1.0 : -1.0) * binom * inner;
    }
    const double log_comb = std::lgamma(double(n) + 1.0) -
                            std::lgamma(double(i)) -
                            std::lgamma(double(n - i) + 1.0);
    return std::exp(log_comb) * dens * outer;
}

double pwm_pg(double lambda, const BaselineSpec& baseline, double p, double q,
              double r) {
    baseline.validate();
    if (p < 0.0 || q < 0.0 || r < 0.0)
        throw std::invalid_argument("pwm_pg: p, q, r must be nonnegative");
    if (!std::isfinite(lambda))
        throw std::invalid_argument("pwm_pg: lambda must be finite");
    // integration cutoff at the P-G survival level 1e-13
    const double g_level =
        detail::pg_survival_inverse(lambda, 1e-13, kLambdaEps);
    const double hi = baseline_quantile(
        baseline, std::min(g_level, 1.0 - 1e-16));
    const auto integrand = [&](double t) {
        const auto e = detail::pg_eval(lambda, baseline, t, kLambdaEps);
        double v = std::exp(e.log_g + r * e.log_S);
        if (p > 0.0) v *= std::pow(t, p);
        if (q > 0.0) v *= std::pow(1.0 - e.S, q);
        return v;
    };
    return integrate_with_tail(integrand, 0.0, hi, {1e-14, 1e-11, 8000});
}

double moment_via_pwm(const GmopgParams& params, int s) {
    params.validate();
    require_expandable_alpha(params.alpha);
    if (s < 1) throw std::invalid_argument("moment_via_pwm: s must be >= 1");
    const SeriesExpansion coeffs =
        series_coefficients_adaptive(params.theta, params.alpha, 1e-10);
    double acc = 0.0;
    for (std::size_t j = 0; j <= coeffs.truncation; ++j)
        acc += coeffs.eta[j] *
               pwm_pg(params.lambda, params.baseline, double(s), 0.0,
                      double(j) + params.theta - 1.0);
    return acc;
}

}  // namespace gmopg
