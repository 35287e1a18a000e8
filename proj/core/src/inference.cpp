#include "gmopg/inference.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "gmopg/nelder_mead.hpp"

namespace gmopg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_data(std::span<const double> data) {
    if (data.empty()) throw std::invalid_argument("data must be nonempty");
    for (double t : data)
        if (!(t > 0.0) || !std::isfinite(t))
            throw std::invalid_argument("data must be positive reals");
}

double me_log_likelihood(double beta, std::span<const double> data) {
    if (!(beta > 0.0)) return kNegInf;
    double acc = -2.0 * double(data.size()) * std::log(beta);
    for (double t : data) acc += std::log(t) - t / beta;
    return acc;
}

double me_cdf(double beta, double t) {
    const double x = t / beta;
    // 1 - (1 + x) e^{-x}, stable for small x
    return -std::expm1(std::log1p(x) - x);
}

}  // namespace

std::string model_name(ModelTag tag) {
    switch (tag) {
        case ModelTag::Exp: return "Exp";
        case ModelTag::ME: return "ME";
        case ModelTag::PE: return "P-E";
        case ModelTag::MOE: return "MO-E";
        case ModelTag::GMOE: return "GMO-E";
        case ModelTag::MOPE: return "MOP-E";
        case ModelTag::GMOPE: return "GMOP-E";
        case ModelTag::GMOPW: return "GMOP-W";
    }
    return "?";
}

std::optional<ModelTag> parse_model_tag(std::string_view s) {
    std::string key;
    for (char c : s)
        if (c != '-' && c != '_') key.push_back(char(std::tolower(c)));
    if (key == "exp") return ModelTag::Exp;
    if (key == "me") return ModelTag::ME;
    if (key == "pe") return ModelTag::PE;
    if (key == "moe") return ModelTag::MOE;
    if (key == "gmoe") return ModelTag::GMOE;
    if (key == "mope") return ModelTag::MOPE;
    if (key == "gmope") return ModelTag::GMOPE;
    if (key == "gmopw") return ModelTag::GMOPW;
    return std::nullopt;
}

std::vector<std::string> model_param_names(ModelTag tag) {
    switch (tag) {
        case ModelTag::Exp: return {"beta"};
        case ModelTag::ME: return {"beta"};
        case ModelTag::PE: return {"lambda", "beta"};
        case ModelTag::MOE: return {"alpha", "beta"};
        case ModelTag::GMOE: return {"theta", "alpha", "beta"};
        case ModelTag::MOPE: return {"alpha", "lambda", "beta"};
        case ModelTag::GMOPE: return {"theta", "alpha", "lambda", "beta"};
        case ModelTag::GMOPW:
            return {"theta", "alpha", "lambda", "beta", "delta"};
    }
    return {};
}

int model_param_count(ModelTag tag) {
    return int(model_param_names(tag).size());
}

GmopgParams model_params(ModelTag tag, std::span<const double> p) {
    const auto k = std::size_t(model_param_count(tag));
    if (p.size() != k)
        throw std::invalid_argument("model_params: wrong parameter count for " +
                                    model_name(tag));
    GmopgParams params;
    switch (tag) {
        case ModelTag::Exp:
            params = {1.0, 1.0, 0.0, BaselineSpec::exponential(p[0])};
            break;
        case ModelTag::ME:
            throw std::invalid_argument("ME is not a GMOP family member");
        case ModelTag::PE:
            params = {1.0, 1.0, p[0], BaselineSpec::exponential(p[1])};
            break;
        case ModelTag::MOE:
            params = {1.0, p[0], 0.0, BaselineSpec::exponential(p[1])};
            break;
        case ModelTag::GMOE:
            params = {p[0], p[1], 0.0, BaselineSpec::exponential(p[2])};
            break;
        case ModelTag::MOPE:
            params = {1.0, p[0], p[1], BaselineSpec::exponential(p[2])};
            break;
        case ModelTag::GMOPE:
            params = {p[0], p[1], p[2], BaselineSpec::exponential(p[3])};
            break;
        case ModelTag::GMOPW:
            params = {p[0], p[1], p[2], BaselineSpec::weibull(p[3], p[4])};
            break;
    }
    return params;
}

double log_likelihood(const GmopgParams& params, std::span<const double> data) {
    check_data(data);
    params.validate();
    double acc = 0.0;
    for (double t : data) {
        const double lp = log_pdf(params, t);
        if (!std::isfinite(lp)) return kNegInf;
        acc += lp;
    }
    return acc;
}

double model_log_likelihood(ModelTag tag, std::span<const double> p,
                            std::span<const double> data) {
    check_data(data);
    if (tag == ModelTag::ME) {
        if (p.size() != 1)
            throw std::invalid_argument("ME takes a single parameter");
        return me_log_likelihood(p[0], data);
    }
    GmopgParams params;
    try {
        params = model_params(tag, p);
        params.validate();
    } catch (const std::invalid_argument&) {
        return kNegInf;
    }
    return log_likelihood(params, data);
}

double model_cdf(ModelTag tag, std::span<const double> p, double t) {
    if (tag == ModelTag::ME) {
        if (p.size() != 1)
            throw std::invalid_argument("ME takes a single parameter");
        return me_cdf(p[0], t);
    }
    return cdf(model_params(tag, p), t);
}

void ModelConfig::validate() const {
    if (free_params.size() != std::size_t(model_param_count(tag)))
        throw std::invalid_argument(
            "config: free parameter list does not cover the model exactly");
    const auto names = model_param_names(tag);
    for (std::size_t i = 0; i < free_params.size(); ++i) {
        if (free_params[i].name != names[i])
            throw std::invalid_argument("config: parameter order must be " +
                                        names[i]);
        if (!(free_params[i].lower < free_params[i].upper))
            throw std::invalid_argument("config: bounds must satisfy lower < upper");
        if (free_params[i].log_scale && !(free_params[i].lower > 0.0))
            throw std::invalid_argument(
                "config: log-scale parameters need positive lower bound");
    }
    if (optimizer.multistarts < 1 || optimizer.max_iterations < 1)
        throw std::invalid_argument("config: optimizer settings out of range");
}

ModelConfig default_config(ModelTag tag) {
    ModelConfig cfg;
    cfg.tag = tag;
    for (const auto& name : model_param_names(tag)) {
        if (name == "theta" || name == "alpha")
            cfg.free_params.push_back({name, 0.05, 50.0, true});
        else if (name == "lambda")
            cfg.free_params.push_back({name, -10.0, 10.0, false});
        else  // beta, delta
            cfg.free_params.push_back({name, 0.05, 10.0, true});
    }
    return cfg;
}

namespace {

double to_internal(const FreeParam& fp, double raw) {
    return fp.log_scale ? std::log(raw) : raw;
}

double to_raw(const FreeParam& fp, double internal) {
    return fp.log_scale ? std::exp(internal) : internal;
}

// Latin hypercube over the internal-space box.
std::vector<std::vector<double>> latin_hypercube(
    const std::vector<FreeParam>& fps, int m, std::uint64_t seed) {
    const std::size_t k = fps.size();
    std::mt19937_64 rng(seed);
    const auto unif = [&rng] {
        return ((rng() >> 11) + 0.5) * 0x1.0p-53;
    };
    std::vector<std::vector<double>> pts(std::size_t(m),
                                         std::vector<double>(k, 0.0));
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<int> strata(std::size_t(m), 0);
        std::iota(strata.begin(), strata.end(), 0);
        std::shuffle(strata.begin(), strata.end(), rng);
        const double lo = to_internal(fps[j], fps[j].lower);
        const double hi = to_internal(fps[j], fps[j].upper);
        for (int i = 0; i < m; ++i) {
            const double frac = (double(strata[std::size_t(i)]) + unif()) / double(m);
            pts[std::size_t(i)][j] = lo + frac * (hi - lo);
        }
    }
    return pts;
}

}  // namespace

FitResult fit(std::span<const double> data, const ModelConfig& config) {
    check_data(data);
    config.validate();
    const auto& fps = config.free_params;
    const std::size_t k = fps.size();

    std::vector<double> lower(k), upper(k);
    for (std::size_t j = 0; j < k; ++j) {
        lower[j] = to_internal(fps[j], fps[j].lower);
        upper[j] = to_internal(fps[j], fps[j].upper);
    }

    const auto objective = [&](const std::vector<double>& z) {
        std::vector<double> raw(k);
        for (std::size_t j = 0; j < k; ++j) raw[j] = to_raw(fps[j], z[j]);
        const double ll = model_log_likelihood(config.tag, raw, data);
        return std::isfinite(ll) ? -ll : 1e300;
    };

    auto starts = latin_hypercube(fps, config.optimizer.multistarts,
                                  config.optimizer.seed);
    for (const auto& w : config.optimizer.warm_starts) {
        if (w.size() != k) continue;
        std::vector<double> z(k);
        for (std::size_t j = 0; j < k; ++j)
            z[j] = std::clamp(to_internal(fps[j], w[j]), lower[j], upper[j]);
        starts.push_back(std::move(z));
    }

    NelderMeadOptions nm_opts;
    nm_opts.max_iterations = config.optimizer.max_iterations;
    nm_opts.diameter_tol = config.optimizer.tolerance;

    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    int best_index = -1;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const auto r = nelder_mead(objective, starts[i], lower, upper, nm_opts);
        if (r.value < best.value) {
            best = r;
            best_index = int(i);
        }
    }
    if (best_index < 0 || !(best.value < 1e300))
        throw std::runtime_error("fit: no start produced a finite likelihood (" +
                                 model_name(config.tag) + ", " +
                                 std::to_string(starts.size()) + " starts)");

    FitResult res;
    res.model = config.tag;
    res.param_names = model_param_names(config.tag);
    res.estimates.resize(k);
    for (std::size_t j = 0; j < k; ++j)
        res.estimates[j] = to_raw(fps[j], best.x[j]);
    res.log_likelihood = -best.value;
    res.criteria = information_criteria(res.log_likelihood, int(k), data.size());
    res.convergence = {best.iterations, int(starts.size()), best.converged,
                       best.simplex_diameter, best_index};

    res.standard_errors.assign(k, std::numeric_limits<double>::quiet_NaN());
    res.ci95.assign(k, {std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN()});
    try {
        const auto info = observed_information(config.tag, res.estimates, data);
        res.standard_errors = standard_errors(info);
        for (std::size_t j = 0; j < k; ++j)
            res.ci95[j] = {res.estimates[j] - 1.959963984540054 * res.standard_errors[j],
                           res.estimates[j] + 1.959963984540054 * res.standard_errors[j]};
        res.se_valid = true;
    } catch (const std::exception& e) {
        res.se_valid = false;
        res.se_message = e.what();
    }

    const auto cdf_at = [&](double t) {
        return model_cdf(config.tag, res.estimates, t);
    };
    res.gof = gof_statistics(cdf_at, data);
    return res;
}

SymmetricMatrix observed_information(
    const std::function<double(std::span<const double>)>& loglik,
    std::span<const double> params) {
    const std::size_t k = params.size();
    std::vector<double> p(params.begin(), params.end());
    std::vector<double> h(k);
    for (std::size_t i = 0; i < k; ++i)
        h[i] = 1e-4 * std::max(std::abs(p[i]), 1.0);

    const auto eval = [&](std::vector<double> q) { return loglik(q); };
    SymmetricMatrix hess(k);
    const double f0 = eval(p);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            double v;
            auto q = p;
            if (i == j) {
                q[i] = p[i] + h[i];
                const double fp = eval(q);
                q[i] = p[i] - h[i];
                const double fm = eval(q);
                v = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
            } else {
                q[i] = p[i] + h[i]; q[j] = p[j] + h[j];
                const double fpp = eval(q);
                q[j] = p[j] - h[j];
                const double fpm = eval(q);
                q[i] = p[i] - h[i]; q[j] = p[j] + h[j];
                const double fmp = eval(q);
                q[j] = p[j] - h[j];
                const double fmm = eval(q);
                v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            }
            if (!std::isfinite(v))
                throw std::runtime_error(
                    "observed_information: non-finite Hessian entry");
            hess.at(i, j) = hess.at(j, i) = -v;  // already symmetric by fill
        }
    }
    return hess;
}

SymmetricMatrix observed_information(ModelTag tag,
                                     std::span<const double> params,
                                     std::span<const double> data) {
    return observed_information(
        [&](std::span<const double> p) {
            return model_log_likelihood(tag, p, data);
        },
        params);
}

std::vector<double> SymmetricMatrix::eigenvalues() const {
    // cyclic Jacobi; n here is at most 5
    auto a = a_;
    const std::size_t n = n_;
    const auto at = [&](std::size_t i, std::size_t j) -> double& {
        return a[i * n + j];
    };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (at(p, q) == 0.0) continue;
                const double phi =
                    0.5 * std::atan2(2.0 * at(p, q), at(q, q) - at(p, p));
                const double c = std::cos(phi), s = std::sin(phi);
                for (std::size_t r = 0; r < n; ++r) {
                    const double arp = at(r, p), arq = at(r, q);
                    at(r, p) = c * arp - s * arq;
                    at(r, q) = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double apr = at(p, r), aqr = at(q, r);
                    at(p, r) = c * apr - s * aqr;
                    at(q, r) = s * apr + c * aqr;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

SymmetricMatrix SymmetricMatrix::inverse() const {
    const std::size_t n = n_;
    // Cholesky factorization; failure means not positive definite.
    std::vector<double> L(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = at(i, j);
            for (std::size_t m = 0; m < j; ++m) s -= L[i * n + m] * L[j * n + m];
            if (i == j) {
                if (!(s > 0.0)) {
                    const auto ev = eigenvalues();
                    throw std::runtime_error(
                        "matrix not positive definite (smallest eigenvalue " +
                        std::to_string(ev.front()) + ")");
                }
                L[i * n + i] = std::sqrt(s);
            } else {
                L[i * n + j] = s / L[j * n + j];
            }
        }
    }
    // invert by solving A x = e_k columnwise
    SymmetricMatrix inv(n);
    std::vector<double> y(n), x(n);
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = (i == col) ? 1.0 : 0.0;
            for (std::size_t m = 0; m < i; ++m) s -= L[i * n + m] * y[m];
            y[i] = s / L[i * n + i];
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = y[ii];
            for (std::size_t m = ii + 1; m < n; ++m) s -= L[m * n + ii] * x[m];
            x[ii] = s / L[ii * n + ii];
        }
        for (std::size_t i = 0; i < n; ++i) inv.at(i, col) = x[i];
    }
    return inv;
}

std::vector<double> standard_errors(const SymmetricMatrix& info) {
    const auto cov = info.inverse();
    std::vector<double> se(info.size());
    for (std::size_t i = 0; i < info.size(); ++i) se[i] = std::sqrt(cov.at(i, i));
    return se;
}

InformationCriteria information_criteria(double loglik, int k, std::size_t n) {
    if (n < 2 || k < 1)
        throw std::invalid_argument("information_criteria: need n > 1, k >= 1");
    const double m2l = -2.0 * loglik;
    const double ln_n = std::log(double(n));
    return {m2l + 2.0 * k, m2l + k * ln_n, m2l + k * (ln_n + 1.0),
            m2l + 2.0 * k * std::log(ln_n)};
}

double kolmogorov_p_value(double x) {
    if (!(x > 0.0)) return 1.0;
    double q = 0.0;
    for (int j = 1; j <= 100; ++j)
        q += (j % 2 == 1 ? 2.0 : -2.0) * std::exp(-2.0 * double(j) * double(j) * x * x);
    return std::clamp(q, 0.0, 1.0);
}

GofStatistics gof_statistics(const std::function<double(double)>& cdf_fn,
                             std::span<const double> data) {
    check_data(data);
    const std::size_t n = data.size();
    std::vector<double> u(n);
    bool clamped = false;
    {
        std::vector<double> sorted(data.begin(), data.end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < n; ++i) {
            double v = cdf_fn(sorted[i]);
            if (v <= 0.0 || v >= 1.0) {
                v = std::clamp(v, 1e-15, 1.0 - 1e-15);
                clamped = true;
            }
            u[i] = v;
        }
    }
    const double dn = double(n);
    double ks = 0.0, a2 = 0.0, w2 = 1.0 / (12.0 * dn);
    for (std::size_t i = 0; i < n; ++i) {
        const double fi = double(i + 1);
        ks = std::max(ks, std::max(fi / dn - u[i], u[i] - (fi - 1.0) / dn));
        a2 += (2.0 * fi - 1.0) * (std::log(u[i]) + std::log1p(-u[n - 1 - i]));
        const double d = u[i] - (2.0 * fi - 1.0) / (2.0 * dn);
        w2 += d * d;
    }
    a2 = -dn - a2 / dn;
    return {ks, kolmogorov_p_value(std::sqrt(dn) * ks), a2, w2, clamped};
}

GofStatistics gof_statistics(const GmopgParams& params,
                             std::span<const double> data) {
    return gof_statistics([&](double t) { return cdf(params, t); }, data);
}

std::vector<std::pair<double, double>> ttt_curve(std::span<const double> data) {
    check_data(data);
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    std::vector<std::pair<double, double>> out;
    out.reserve(n + 1);
    out.emplace_back(0.0, 0.0);
    double partial = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        partial += sorted[i];
        const double T = (partial + double(n - i - 1) * sorted[i]) / total;
        out.emplace_back(double(i + 1) / double(n), T);
    }
    return out;
}

namespace {

double interpolated_quantile(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = p * double(n - 1);
    const auto lo = std::size_t(std::floor(h));
    if (lo + 1 >= n) return sorted[n - 1];
    return sorted[lo] + (h - double(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

DescriptiveStats descriptive(std::span<const double> data) {
    check_data(data);
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / double(n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : sorted) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double sd = n > 1 ? std::sqrt(m2 / double(n - 1)) : 0.0;
    m2 /= double(n);
    m3 /= double(n);
    m4 /= double(n);
    const double skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    const double kurt = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
    return {n,
            sorted.front(),
            mean,
            interpolated_quantile(sorted, 0.5),
            sd,
            skew,
            kurt,
            interpolated_quantile(sorted, 0.25),
            interpolated_quantile(sorted, 0.75),
            sorted.back()};
}

DataValidation validate_reference_stats(std::span<const double> data) {
    const auto d = descriptive(data);
    std::string msg;
    const auto check = [&](const char* name, double got, double want) {
        if (std::abs(got - want) > 0.005)
            msg += std::string(name) + "=" + std::to_string(got) + " (want " +
                   std::to_string(want) + " +/- 0.005); ";
    };
    if (d.n != 72) msg += "n=" + std::to_string(d.n) + " (want 72); ";
    check("mean", d.mean, 1.851);
    check("median", d.median, 1.560);
    check("sd", d.sd, 1.200);
    check("min", d.min, 0.100);
    check("max", d.max, 7.000);
    if (msg.empty()) return {true, "reference statistics matched"};
    return {false, "reference data validation failed: " + msg};
}

}  // namespace gmopg
