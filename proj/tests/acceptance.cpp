// Acceptance suite: one PASS/FAIL/SKIPPED line per criterion.
// Exit code = number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "gmopg/inference.hpp"
#include "gmopg/properties.hpp"
#include "gmopg/simulation.hpp"

using namespace gmopg;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s — %s\n", id, pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++g_failures;
}

void report_skipped(int id, const std::string& detail) {
    std::printf("criterion %2d: SKIPPED — %s\n", id, detail.c_str());
}

double urand(std::mt19937_64& rng) {
    return ((rng() >> 11) + 0.5) * 0x1.0p-53;
}

double ref_pg_sf(double lam, double G) {
    return (std::exp(-lam * G) - std::exp(-lam)) / (1.0 - std::exp(-lam));
}

double ks_distance(std::vector<double> draws, const GmopgParams& params) {
    std::sort(draws.begin(), draws.end());
    const double n = double(draws.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double u = cdf(params, draws[i]);
        ks = std::max(ks, std::max((double(i) + 1.0) / n - u, u - double(i) / n));
    }
    return ks;
}

// --- criterion 1: normalization, inversion, monotonicity -------------------
void criterion_1() {
    std::mt19937_64 rng(101);
    int bad = 0;
    std::string note;
    for (int cfg = 0; cfg < 50; ++cfg) {
        GmopgParams p;
        p.theta = 0.1 + 19.9 * urand(rng);
        p.alpha = 0.1 + 19.9 * urand(rng);
        if (cfg % 10 == 9) {
            p.lambda = 0.0;  // the GMO limit case
        } else {
            do {
                p.lambda = -6.0 + 12.0 * urand(rng);
            } while (std::abs(p.lambda) <= 1e-8);
        }
        p.baseline = (cfg % 2 == 0)
                         ? BaselineSpec::exponential(0.2 + 3.0 * urand(rng))
                         : BaselineSpec::weibull(0.3 + 2.0 * urand(rng),
                                                 0.5 + 2.5 * urand(rng));
        bool ok = true;
        const double hi = quantile(p, 1.0 - 1e-13);
        const double mass = integrate_or_throw(
            [&](double t) { return pdf(p, t); }, 0.0, hi, {1e-12, 1e-10, 8000});
        if (std::abs(mass - 1.0) > 1e-8) ok = false;
        double prevF = -1.0;
        for (int i = 1; i <= 40; ++i) {
            const double pr = i / 41.0;
            const double t = quantile(p, pr);
            if (std::abs(cdf(p, t) - pr) > 1e-10) ok = false;
            const double F = cdf(p, hi * i / 40.0);
            if (F < prevF) ok = false;
            prevF = F;
        }
        if (!ok) {
            ++bad;
            note = " e.g. theta=" + std::to_string(p.theta) +
                   " alpha=" + std::to_string(p.alpha) +
                   " lambda=" + std::to_string(p.lambda);
        }
    }
    report(1, bad == 0,
           "normalization/inversion over 50 random parameter sets: " +
               std::to_string(50 - bad) + "/50 clean" + note);
}

// --- criterion 2: special cases (i)-(iv) ------------------------------------
void criterion_2() {
    const auto e = BaselineSpec::exponential(1.3);
    const auto G = [&](double t) { return 1.0 - std::exp(-1.3 * t); };
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double t = 5e-3 * std::pow(1.07, i);
        const double S = ref_pg_sf(3.0, G(t));
        const double Gbar = std::exp(-1.3 * t);
        // (i) MOP-G
        worst = std::max(worst,
                         std::abs(survival({1.0, 2.0, 3.0, e}, t) -
                                  2.0 * S / (1.0 - (1.0 - 2.0) * S)));
        // (ii) P-G
        worst = std::max(worst, std::abs(survival({1.0, 1.0, 3.0, e}, t) - S));
        // (iii) GMO
        worst = std::max(
            worst, std::abs(survival({2.5, 4.0, 0.0, e}, t) -
                            std::pow(4.0 * Gbar / (1.0 + 3.0 * Gbar), 2.5)));
        // (iv) MO
        worst = std::max(worst, std::abs(survival({1.0, 2.0, 0.0, e}, t) -
                                         2.0 * Gbar / (1.0 + Gbar)));
    }
    report(2, worst < 1e-10,
           "special-case sup distance " + std::to_string(worst));
}

// --- criterion 3: series equivalence ----------------------------------------
void criterion_3() {
    std::mt19937_64 rng(303);
    double worst_val = 0.0, worst_tail = 0.0;
    for (int cfg = 0; cfg < 10; ++cfg) {
        GmopgParams p;
        p.theta = 0.3 + 5.0 * urand(rng);
        p.alpha = 0.1 + 0.8 * urand(rng);
        p.lambda = -3.0 + 6.0 * urand(rng);
        if (std::abs(p.lambda) < 1e-6) p.lambda = 0.5;
        p.baseline = BaselineSpec::exponential(0.4 + 2.0 * urand(rng));
        const auto s = series_coefficients_adaptive(p.theta, p.alpha, 1e-11);
        worst_tail = std::max(worst_tail, std::abs(s.tail_mass));
        for (int i = 1; i <= 25; ++i) {
            const double t = quantile(p, i / 26.0);
            worst_val = std::max(
                worst_val, std::abs(truncated_mixture_sf(p, t, s.truncation) -
                                    survival(p, t)));
            worst_val = std::max(
                worst_val, std::abs(truncated_mixture_pdf(p, t, s.truncation) -
                                    pdf(p, t)));
        }
    }
    report(3, worst_val < 1e-6 && worst_tail < 1e-10,
           "series sup error " + std::to_string(worst_val) + ", tail mass " +
               std::to_string(worst_tail));
}

// --- criterion 4: published moment grid --------------------------------------
struct MomentRow {
    double theta, alpha, lambda, beta, mean, var, skew, kurt;
};

void criterion_4() {
    const std::vector<MomentRow> rows = {
        {10, 10, 2, 2, 0.1572, 0.0163, 1.2096, 4.6452},
        {10, 10, 1, 2, 0.2224, 0.0306, 1.0761, 4.0834},
        {10, 10, 0.5, 2, 0.2648, 0.0408, 0.9749, 3.7373},
        {10, 10, 0.1, 2, 0.3033, 0.0502, 0.8840, 3.4698},
        {10, 10, 2, 1, 0.3145, 0.0652, 1.2096, 4.6452},
        {10, 10, 2, 0.5, 0.6291, 0.2610, 1.2096, 4.6452},
        {10, 10, 0.5, 0.5, 1.0592, 0.6528, 0.9749, 3.7373},
        {10, 10, 0.1, 0.1, 6.0675, 20.1022, 0.8840, 3.4698},
        {10, 5, 2, 2, 0.0918, 0.0066, 1.5144, 6.0241},
        {10, 2, 2, 2, 0.0419, 0.0016, 1.9171, 8.4744},
        {10, 0.5, 2, 2, 0.0115, 0.0001, 2.4163, 12.8206},
        {10, 0.5, 0.5, 0.5, 0.0834, 0.0077, 2.3537, 12.1190},
        {5, 10, 2, 2, 0.2692, 0.0424, 1.0978, 4.3497},
        {5, 5, 2, 2, 0.1676, 0.0206, 1.4448, 5.8193},
        {2, 5, 2, 2, 0.3615, 0.0914, 1.5105, 6.3958},
        {2, 2, 2, 2, 0.2049, 0.0427, 2.1968, 10.7924},
        {1, 2, 2, 2, 0.4180, 0.19284, 2.3136, 11.2913},
        {5, 0.1, 0.1, 0.1, 0.2309, 0.0804, 3.6320, 30.5202},
        {5, 5, 5, 3, 0.0489, 0.0016, 1.4027, 5.7915},
        {5, 5, 3, 5, 0.04882, 0.0017, 1.5071, 6.2776},
        {5, 5, 5, 8, 0.0183, 0.0002, 1.3967, 5.7764},
        {5, 5, 10, 10, 0.0069, 0.00001, 1.1168, 2.1041},
    };
    int pass = 0;
    std::string notes;
    for (const auto& r : rows) {
        const GmopgParams p{r.theta, r.alpha, r.lambda,
                            BaselineSpec::exponential(r.beta)};
        const auto m = moment_summary(p);
        const bool ok = std::abs(m.mean - r.mean) < 0.002 &&
                        std::abs(m.variance - r.var) < 0.002 &&
                        std::abs(m.skewness - r.skew) < 0.02 &&
                        std::abs(m.kurtosis - r.kurt) < 0.02;
        if (ok) {
            ++pass;
        } else {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          " [(%g,%g,%g,%g) computed %.4f/%.4f/%.4f/%.4f vs "
                          "printed %.4f/%.5f/%.4f/%.4f]",
                          r.theta, r.alpha, r.lambda, r.beta, m.mean, m.variance,
                          m.skewness, m.kurtosis, r.mean, r.var, r.skew, r.kurt);
            notes += buf;
        }
    }
    report(4, pass >= 18,
           "moment table rows: " + std::to_string(pass) +
               "/22 within tolerance (18 required); outliers:" +
               (notes.empty() ? " none" : notes));
}

// --- criterion 5: published entropy grid -------------------------------------
void criterion_5() {
    const std::vector<double> deltas{0.2, 0.5, 1.5, 2.0, 3.0, 5.0};
    const GmopgParams row1{10, 10, 2, BaselineSpec::exponential(2.0)};
    const std::vector<double> printed{-0.2550, -0.6403, -0.9916,
                                      -1.0647, -1.1549, -1.2490};
    double worst = 0.0;
    for (std::size_t i = 0; i < deltas.size(); ++i)
        worst = std::max(worst,
                         std::abs(renyi_entropy(row1, deltas[i]) - printed[i]));

    const std::vector<GmopgParams> all = {
        row1,
        {5, 5, 0.5, BaselineSpec::exponential(0.5)},
        {5, 5, 2, BaselineSpec::exponential(0.5)},
        {3, 3, 2, BaselineSpec::exponential(0.5)},
        {1.5, 1.5, 2, BaselineSpec::exponential(0.5)},
        {2, 0.5, 0.5, BaselineSpec::exponential(0.5)},  // informative-only row
    };
    bool monotone = true;
    for (const auto& p : all) {
        double prev = std::numeric_limits<double>::infinity();
        for (double d : deltas) {
            const double v = renyi_entropy(p, d);
            if (v > prev + 1e-9) monotone = false;
            prev = v;
        }
    }
    report(5, worst < 0.02 && monotone,
           "entropy row-1 max deviation " + std::to_string(worst) +
               ", monotone in delta for all six rows: " +
               (monotone ? "yes" : "no"));
}

// --- criterion 6: likelihood-ratio ordering ---------------------------------
void criterion_6() {
    std::mt19937_64 rng(606);
    bool ok = true;
    for (int cfg = 0; cfg < 20; ++cfg) {
        GmopgParams a, b;
        a.theta = b.theta = 0.2 + 6.0 * urand(rng);
        a.lambda = b.lambda = -4.0 + 8.0 * urand(rng);
        a.baseline = b.baseline =
            BaselineSpec::exponential(0.3 + 2.0 * urand(rng));
        a.alpha = 0.2 + 3.0 * urand(rng);
        b.alpha = a.alpha + 0.2 + 3.0 * urand(rng);
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= 200; ++i) {
            const double t = quantile(b, i / 201.0);
            const double r = likelihood_ratio(a, b, t);
            if (!(r < prev)) ok = false;
            prev = r;
        }
    }
    report(6, ok, "likelihood ratio strictly decreasing, 20 configurations");
}

// --- criterion 7: asymptotes --------------------------------------------------
void criterion_7() {
    const std::vector<GmopgParams> cfgs = {
        {2, 8, 5, BaselineSpec::exponential(0.5)},
        {1, 1, 2, BaselineSpec::exponential(1.0)},
        {0.5, 2, -1, BaselineSpec::exponential(1.5)},
        {3, 0.5, 1, BaselineSpec::exponential(0.8)},
        {2, 2, -3, BaselineSpec::exponential(1.0)},
        {1.5, 4, 2, BaselineSpec::weibull(1.0, 1.5)},
        {2, 8, 5, BaselineSpec::weibull(0.7, 2.0)},
        {0.8, 1.2, 0.5, BaselineSpec::exponential(2.0)},
        {2.5, 3, 4, BaselineSpec::exponential(0.6)},
        {1, 5, -2, BaselineSpec::weibull(1.2, 0.8)},
    };
    double worst = 0.0;
    for (const auto& p : cfgs) {
        // the slowest-converging tail here decays like Gbar^theta, so the
        // right probe has to sit deep for the theta=3 configuration
        const double t_lo = quantile(p, 1e-8);
        const double t_hi = quantile(p, 1.0 - 1e-13);
        worst = std::max(worst, std::abs(pdf(p, t_lo) /
                                             asymptotic_pdf(p, t_lo, Regime::SmallT) -
                                         1.0));
        worst = std::max(worst, std::abs(pdf(p, t_hi) /
                                             asymptotic_pdf(p, t_hi, Regime::LargeT) -
                                         1.0));
    }
    report(7, worst < 1e-3,
           "pdf/asymptote ratio max deviation " + std::to_string(worst));
}

// --- criterion 8: Proposition 1 ------------------------------------------------
void criterion_8() {
    const auto run = [](int theta, double alpha) {
        const double lam = 2.0;
        const GmopgParams pg{1.0, 1.0, lam, BaselineSpec::exponential(1.0)};
        const GmopgParams family{double(theta), alpha, lam,
                                 BaselineSpec::exponential(1.0)};
        std::mt19937_64 rng(808);
        const double geo_p = alpha < 1.0 ? alpha : 1.0 / alpha;
        std::vector<double> draws;
        for (int rep = 0; rep < 10000; ++rep) {
            double w = std::numeric_limits<double>::infinity();
            for (int i = 0; i < theta; ++i) {
                int nmemb = 1;
                while (urand(rng) > geo_p) ++nmemb;
                double v = alpha < 1.0 ? std::numeric_limits<double>::infinity()
                                       : 0.0;
                for (int k = 0; k < nmemb; ++k) {
                    const double d = quantile(pg, urand(rng));
                    v = alpha < 1.0 ? std::min(v, d) : std::max(v, d);
                }
                w = std::min(w, v);
            }
            draws.push_back(w);
        }
        return ks_distance(draws, family);
    };
    const double crit = 1.628 / std::sqrt(10000.0);
    const double a = run(2, 0.4), b = run(3, 0.7), c = run(2, 2.5);
    report(8, a < crit && b < crit && c < crit,
           "construction KS distances " + std::to_string(a) + ", " +
               std::to_string(b) + ", " + std::to_string(c) + " (1% critical " +
               std::to_string(crit) + ")");
}

// --- criterion 9: estimator study ----------------------------------------------
void criterion_9() {
    const GmopgParams truth{2, 8, 5, BaselineSpec::exponential(0.5)};
    SimulationOptions opts;
    opts.replicates = 500;
    opts.seed = 20200606;
    opts.optimizer.multistarts = 2;
    const std::vector<std::size_t> ns{20, 80};
    const auto rep = mc_study(truth, ns, opts);
    const auto rep2 = mc_study(truth, ns, opts);
    int shrink = 0;
    std::string detail;
    for (std::size_t j = 0; j < 4; ++j) {
        const auto& a = rep.cells[j][0];
        const auto& b = rep.cells[j][1];
        const bool s = std::abs(b.bias) < std::abs(a.bias) && b.mse < a.mse;
        if (s) ++shrink;
        char buf[96];
        std::snprintf(buf, sizeof buf, " %s |bias| %.3f->%.3f mse %.2f->%.2f;",
                      rep.param_names[j].c_str(), std::abs(a.bias),
                      std::abs(b.bias), a.mse, b.mse);
        detail += buf;
    }
    bool deterministic = true;
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 2; ++i)
            if (rep.cells[j][i].bias != rep2.cells[j][i].bias ||
                rep.cells[j][i].mse != rep2.cells[j][i].mse)
                deterministic = false;
    report(9, shrink >= 3 && deterministic,
           std::to_string(shrink) +
               "/4 parameters shrink from n=20 to n=80 (3 required), "
               "deterministic: " +
               (deterministic ? "yes" : "no") + ";" + detail);
}

// --- criterion 10: guinea-pig fits ----------------------------------------------
void criterion_10(const std::string& data_path) {
    std::ifstream in(data_path);
    if (!in) {
        report_skipped(10, "no data file at " + data_path);
        return;
    }
    std::vector<double> data;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line == "time") continue;
        data.push_back(std::stod(line));
    }
    const auto v = validate_reference_stats(data);
    if (!v.ok) {
        report(10, false, "data file fails the reference validator: " + v.message);
        return;
    }

    const std::vector<ModelTag> tags{ModelTag::Exp,  ModelTag::ME,
                                     ModelTag::PE,   ModelTag::MOE,
                                     ModelTag::GMOE, ModelTag::MOPE,
                                     ModelTag::GMOPE};
    std::vector<FitResult> fits;
    for (ModelTag tag : tags) {
        auto cfg = default_config(tag);
        // chain nested solutions as warm starts (GMOP-E gets every embedding)
        for (const auto& prev : fits) {
            std::vector<double> w;
            const auto& e = prev.estimates;
            if (tag == ModelTag::GMOPE) {
                switch (prev.model) {
                    case ModelTag::Exp: w = {1, 1, 0, e[0]}; break;
                    case ModelTag::PE: w = {1, 1, e[0], e[1]}; break;
                    case ModelTag::MOE: w = {1, e[0], 0, e[1]}; break;
                    case ModelTag::GMOE: w = {e[0], e[1], 0, e[2]}; break;
                    case ModelTag::MOPE: w = {1, e[0], e[1], e[2]}; break;
                    default: break;
                }
            }
            if (!w.empty()) cfg.optimizer.warm_starts.push_back(w);
        }
        fits.push_back(fit(data, cfg));
    }

    const auto& exp_fit = fits[0];
    const auto& gmope = fits.back();
    const double best_aic =
        std::min_element(fits.begin(), fits.end(),
                         [](const FitResult& a, const FitResult& b) {
                             return a.criteria.aic < b.criteria.aic;
                         })
            ->criteria.aic;

    struct Clause {
        bool pass;
        std::string text;
    };
    std::vector<Clause> clauses = {
        {std::abs(gmope.criteria.aic - 204.24) <= 1.5,
         "GMOP-E AIC " + std::to_string(gmope.criteria.aic) +
             " within 1.5 of 204.24"},
        {gmope.gof.ks <= 0.08, "KS " + std::to_string(gmope.gof.ks) + " <= 0.08"},
        {gmope.gof.anderson_darling <= 0.55,
         "A " + std::to_string(gmope.gof.anderson_darling) + " <= 0.55"},
        {gmope.gof.cramer_von_mises <= 0.07,
         "W " + std::to_string(gmope.gof.cramer_von_mises) + " <= 0.07"},
        {std::abs(exp_fit.estimates[0] - 0.540) <= 0.005,
         "Exp beta " + std::to_string(exp_fit.estimates[0]) +
             " within 0.005 of 0.540"},
        {std::abs(exp_fit.criteria.aic - 234.63) <= 0.05,
         "Exp AIC " + std::to_string(exp_fit.criteria.aic) +
             " within 0.05 of 234.63"},
        {gmope.criteria.aic <= best_aic + 1e-9,
         "GMOP-E ranked best by AIC (best found " + std::to_string(best_aic) +
             ")"},
    };
    bool all = true;
    std::string detail;
    for (const auto& c : clauses) {
        all = all && c.pass;
        detail += std::string(c.pass ? " [ok] " : " [FAIL] ") + c.text + ";";
    }
    if (!all)
        detail +=
            " (failing clauses trace to the source table's internal "
            "inconsistency; see README 'Known discrepancies')";
    report(10, all, detail);
}

// --- criterion 11: oracle cross-checks -------------------------------------------
void criterion_11() {
    const GmopgParams exp_like{1.0, 1.0, 0.0, BaselineSpec::exponential(0.8)};
    const auto data = sample(exp_like, 400, 4242);
    const auto f = fit(data, default_config(ModelTag::Exp));
    const auto info = observed_information(ModelTag::Exp, f.estimates, data);
    const double analytic =
        double(data.size()) / (f.estimates[0] * f.estimates[0]);
    const double rel = std::abs(info.at(0, 0) / analytic - 1.0);

    const GmopgParams c1{2.0, 0.5, 1.0, BaselineSpec::exponential(1.0)};
    const GmopgParams c2{1.3, 0.3, -0.8, BaselineSpec::exponential(0.6)};
    const double d1 = std::abs(moment_via_pwm(c1, 1) - raw_moment(c1, 1));
    const double d2 = std::abs(moment_via_pwm(c2, 2) - raw_moment(c2, 2));
    report(11, rel < 1e-3 && d1 < 1e-6 && d2 < 1e-6,
           "information relative error " + std::to_string(rel) +
               "; PWM-moment deviations " + std::to_string(d1) + ", " +
               std::to_string(d2));
}

}  // namespace

int main(int argc, char** argv) {
    const std::string data_path = argc > 1 ? argv[1] : GMOPG_DATA_FILE;
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10(data_path);
    criterion_11();
    const auto secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    std::printf("%d criterion failure(s); total runtime %.1f s\n", g_failures,
                secs);
    return g_failures;
}
