#include "gmopg/baseline.hpp"

#include <cmath>

namespace gmopg {

void BaselineSpec::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("baseline: beta must be a positive real");
    if (kind == BaselineKind::Weibull && (!(delta > 0.0) || !std::isfinite(delta)))
        throw std::invalid_argument("baseline: delta must be a positive real");
}

std::string BaselineSpec::name() const {
    return kind == BaselineKind::Exponential ? "Exponential" : "Weibull";
}

namespace {

void check_t(double t) {
    if (!(t > 0.0)) throw std::domain_error("baseline: t must be > 0");
}

}  // namespace

double baseline_log_pdf(const BaselineSpec& spec, double t) {
    spec.validate();
    check_t(t);
    if (spec.kind == BaselineKind::Exponential)
        return std::log(spec.beta) - spec.beta * t;
    // log(delta beta t^{delta-1} e^{-beta t^delta})
    return std::log(spec.delta) + std::log(spec.beta) +
           (spec.delta - 1.0) * std::log(t) - spec.beta * std::pow(t, spec.delta);
}

double baseline_pdf(const BaselineSpec& spec, double t) {
    return std::exp(baseline_log_pdf(spec, t));
}

double baseline_cdf(const BaselineSpec& spec, double t) {
    spec.validate();
    check_t(t);
    if (spec.kind == BaselineKind::Exponential)
        return -std::expm1(-spec.beta * t);
    return -std::expm1(-spec.beta * std::pow(t, spec.delta));
}

double baseline_sf(const BaselineSpec& spec, double t) {
    spec.validate();
    check_t(t);
    if (spec.kind == BaselineKind::Exponential)
        return std::exp(-spec.beta * t);
    return std::exp(-spec.beta * std::pow(t, spec.delta));
}

double baseline_quantile(const BaselineSpec& spec, double p) {
    spec.validate();
    if (!(p > 0.0) || !(p < 1.0))
        throw std::domain_error("baseline: quantile requires p in (0,1)");
    const double h = -std::log1p(-p);  // beta * t^delta
    if (spec.kind == BaselineKind::Exponential) return h / spec.beta;
    return std::pow(h / spec.beta, 1.0 / spec.delta);
}

double baseline_dlog_pdf(const BaselineSpec& spec, double t) {
    spec.validate();
    check_t(t);
    if (spec.kind == BaselineKind::Exponential) return -spec.beta;
    return (spec.delta - 1.0) / t -
           spec.delta * spec.beta * std::pow(t, spec.delta - 1.0);
}

}  // namespace gmopg
