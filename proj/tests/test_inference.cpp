#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "gmopg/inference.hpp"

using namespace gmopg;

namespace {

std::vector<double> load_guinea_pigs() {
    std::ifstream in(GMOPG_DATA_FILE);
    REQUIRE(bool(in));
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line == "time") continue;
        v.push_back(std::stod(line));
    }
    return v;
}

}  // namespace

TEST_CASE("log_likelihood equals the sum of log pdfs") {
    const GmopgParams p{2.0, 8.0, 5.0, BaselineSpec::exponential(0.5)};
    const auto data = sample(p, 200, 3);
    double direct = 0.0;
    for (double t : data) direct += std::log(pdf(p, t));
    CHECK(log_likelihood(p, data) == doctest::Approx(direct).epsilon(1e-10));

    // single observation, exponential reduction
    const GmopgParams exp_like{1.0, 1.0, 0.0, BaselineSpec::exponential(0.7)};
    const std::vector<double> one{1.3};
    CHECK(log_likelihood(exp_like, one) ==
          doctest::Approx(std::log(0.7) - 0.7 * 1.3).epsilon(1e-12));

    CHECK_THROWS_AS(log_likelihood(p, std::vector<double>{}),
                    std::invalid_argument);
    const std::vector<double> bad{1.0, -2.0};
    CHECK_THROWS_AS(log_likelihood(p, bad), std::invalid_argument);
}

TEST_CASE("model tags, parameter orders, ME likelihood") {
    CHECK(parse_model_tag("gmop-e") == ModelTag::GMOPE);
    CHECK(parse_model_tag("GMOPE") == ModelTag::GMOPE);
    CHECK(parse_model_tag("mo_e") == ModelTag::MOE);
    CHECK(!parse_model_tag("nope").has_value());
    CHECK(model_param_count(ModelTag::GMOPW) == 5);
    CHECK(model_param_names(ModelTag::MOPE) ==
          std::vector<std::string>{"alpha", "lambda", "beta"});

    // ME density t e^{-t/beta} / beta^2
    const std::vector<double> data{0.5, 1.5, 2.0};
    const double beta = 1.2;
    double direct = 0.0;
    for (double t : data)
        direct += std::log(t) - t / beta - 2.0 * std::log(beta);
    const std::vector<double> bv{beta};
    CHECK(model_log_likelihood(ModelTag::ME, bv, data) ==
          doctest::Approx(direct).epsilon(1e-12));
    CHECK(model_cdf(ModelTag::ME, bv, 1.0) ==
          doctest::Approx(1.0 - (1.0 + 1.0 / beta) * std::exp(-1.0 / beta))
              .epsilon(1e-12));
    CHECK_THROWS_AS(model_params(ModelTag::ME, bv), std::invalid_argument);
}

TEST_CASE("information criteria arithmetic") {
    const auto ic = information_criteria(-98.12, 4, 72);
    CHECK(ic.aic == doctest::Approx(204.24).epsilon(1e-12));
    CHECK(ic.bic == doctest::Approx(-2.0 * -98.12 + 4.0 * std::log(72.0)).epsilon(1e-12));
    CHECK(ic.bic == doctest::Approx(213.35).epsilon(1e-3));
    CHECK(ic.caic == doctest::Approx(ic.bic + 4.0).epsilon(1e-12));
    const auto ic2 = information_criteria(0.0, 1, 15);
    CHECK(ic2.hqic ==
          doctest::Approx(2.0 * std::log(std::log(15.0))).epsilon(1e-12));
    // AIC < BIC whenever n > e^2
    CHECK(ic.aic < ic.bic);
    CHECK_THROWS_AS(information_criteria(0.0, 0, 10), std::invalid_argument);
}

TEST_CASE("gof statistics plug-in values") {
    // data at exact model quantiles p_i = (i - 0.5)/n gives KS = 0.5/n
    const GmopgParams p{2.0, 8.0, 5.0, BaselineSpec::exponential(0.5)};
    const int n = 40;
    std::vector<double> data;
    for (int i = 1; i <= n; ++i)
        data.push_back(quantile(p, (i - 0.5) / double(n)));
    const auto g = gof_statistics(p, data);
    CHECK(g.ks == doctest::Approx(0.5 / n).epsilon(1e-9));
    CHECK(g.cramer_von_mises == doctest::Approx(1.0 / (12.0 * n)).epsilon(1e-9));
    CHECK(!g.clamped);

    // u values outside (0,1) get clamped with the flag set
    const auto clamped = gof_statistics([](double) { return 1.0; },
                                        std::vector<double>{1.0, 2.0});
    CHECK(clamped.clamped);

    CHECK(kolmogorov_p_value(0.0) == 1.0);
    CHECK(kolmogorov_p_value(0.5) > kolmogorov_p_value(1.0));
    CHECK(kolmogorov_p_value(1.0) ==
          doctest::Approx(0.26999967167735).epsilon(1e-9));
}

TEST_CASE("gof p-value is usually large under the true model") {
    const GmopgParams p{2.0, 8.0, 5.0, BaselineSpec::exponential(0.5)};
    int ok = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto data = sample(p, 300, 1000 + std::uint64_t(rep));
        if (gof_statistics(p, data).ks_p_value > 0.01) ++ok;
    }
    CHECK(ok >= 190);
}

TEST_CASE("ttt curve hand values and endpoints") {
    // constant data: every partial total already covers the whole sum, so
    // T jumps to 1 at the first order statistic and stays there
    const std::vector<double> c{2.0, 2.0, 2.0};
    const auto flat = ttt_curve(c);
    REQUIRE(flat.size() == 4);
    CHECK(flat[0].second == doctest::Approx(0.0));
    for (std::size_t i = 1; i < 4; ++i) {
        CHECK(flat[i].first == doctest::Approx(i / 3.0));
        CHECK(flat[i].second == doctest::Approx(1.0).epsilon(1e-12));
    }
    const std::vector<double> d{1.0, 2.0, 3.0};
    const auto t = ttt_curve(d);
    CHECK(t[1].second == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t[2].second == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(t[3].second == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("descriptive statistics") {
    const std::vector<double> ones{1.0, 1.0, 1.0};
    const auto d1 = descriptive(ones);
    CHECK(d1.sd == 0.0);
    CHECK(d1.min == 1.0);
    CHECK(d1.mean == 1.0);
    CHECK(d1.max == 1.0);

    const auto gp = load_guinea_pigs();
    const auto d = descriptive(gp);
    CHECK(d.n == 72);
    CHECK(std::abs(d.min - 0.100) < 0.005);
    CHECK(std::abs(d.mean - 1.851) < 0.005);
    CHECK(std::abs(d.median - 1.560) < 0.005);
    CHECK(std::abs(d.sd - 1.200) < 0.005);
    CHECK(std::abs(d.max - 7.000) < 0.005);
    CHECK(std::abs(d.skewness - 1.788) < 0.05);

    const auto v = validate_reference_stats(gp);
    CHECK(v.ok);
    auto off = gp;
    off[0] = 0.2;
    CHECK(!validate_reference_stats(off).ok);
}

TEST_CASE("standard errors from simple matrices") {
    SymmetricMatrix eye(3);
    for (int i = 0; i < 3; ++i) eye.at(i, i) = 1.0;
    const auto se = standard_errors(eye);
    for (double s : se) CHECK(s == doctest::Approx(1.0));

    SymmetricMatrix diag(2);
    diag.at(0, 0) = 4.0;
    diag.at(1, 1) = 25.0;
    const auto se2 = standard_errors(diag);
    CHECK(se2[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(se2[1] == doctest::Approx(0.2).epsilon(1e-12));

    SymmetricMatrix indef(2);
    indef.at(0, 0) = 1.0;
    indef.at(1, 1) = -2.0;
    CHECK_THROWS_WITH_AS(standard_errors(indef),
                         doctest::Contains("eigenvalue"), std::runtime_error);
}

TEST_CASE("observed information matches the exponential analytic form") {
    const GmopgParams exp_like{1.0, 1.0, 0.0, BaselineSpec::exponential(0.8)};
    const auto data = sample(exp_like, 500, 77);
    auto cfg = default_config(ModelTag::Exp);
    const auto f = fit(data, cfg);
    const double beta_hat = f.estimates[0];
    double mean = 0.0;
    for (double t : data) mean += t;
    mean /= double(data.size());
    CHECK(beta_hat == doctest::Approx(1.0 / mean).epsilon(1e-5));

    const auto info = observed_information(ModelTag::Exp, f.estimates, data);
    const double analytic = double(data.size()) / (beta_hat * beta_hat);
    CHECK(info.at(0, 0) == doctest::Approx(analytic).epsilon(1e-3));
    REQUIRE(f.se_valid);
    CHECK(f.standard_errors[0] ==
          doctest::Approx(beta_hat / std::sqrt(double(data.size()))).epsilon(1e-2));
}

TEST_CASE("fit recovers synthetic parameters and dominates the truth") {
    const GmopgParams truth{2.0, 8.0, 5.0, BaselineSpec::exponential(0.5)};
    const auto data = sample(truth, 5000, 20200606);
    auto cfg = default_config(ModelTag::GMOPE);
    cfg.optimizer.warm_starts.push_back({2.0, 8.0, 5.0, 0.5});
    const auto f = fit(data, cfg);
    CHECK(f.convergence.converged);
    const double ll_truth = log_likelihood(truth, data);
    CHECK(f.log_likelihood >= ll_truth - 1e-8);
    CHECK(f.log_likelihood ==
          doctest::Approx(model_log_likelihood(ModelTag::GMOPE, f.estimates, data))
              .epsilon(1e-12));
    CHECK(f.criteria.aic ==
          doctest::Approx(-2.0 * f.log_likelihood + 8.0).epsilon(1e-12));
    // determinism
    const auto g = fit(data, cfg);
    CHECK(g.estimates == f.estimates);
    CHECK(g.log_likelihood == f.log_likelihood);
}

TEST_CASE("nesting: the full model dominates warm-started sub-models") {
    const auto gp = load_guinea_pigs();
    std::vector<FitResult> fits;
    std::vector<ModelTag> order{ModelTag::Exp, ModelTag::PE, ModelTag::MOE,
                                ModelTag::GMOE, ModelTag::MOPE};
    for (ModelTag tag : order) {
        auto cfg = default_config(tag);
        fits.push_back(fit(gp, cfg));
    }
    auto full_cfg = default_config(ModelTag::GMOPE);
    for (const auto& f : fits) {
        // embed each sub-model at theta=1 / alpha=1 / lambda=0 as needed
        std::vector<double> w{1.0, 1.0, 0.0, 0.0};
        const auto& e = f.estimates;
        switch (f.model) {
            case ModelTag::Exp: w[3] = e[0]; break;
            case ModelTag::PE: w[2] = e[0]; w[3] = e[1]; break;
            case ModelTag::MOE: w[1] = e[0]; w[3] = e[1]; break;
            case ModelTag::GMOE: w[0] = e[0]; w[1] = e[1]; w[3] = e[2]; break;
            case ModelTag::MOPE: w[1] = e[0]; w[2] = e[1]; w[3] = e[2]; break;
            default: break;
        }
        full_cfg.optimizer.warm_starts.push_back(w);
    }
    const auto full = fit(gp, full_cfg);
    for (const auto& f : fits) CHECK(full.log_likelihood >= f.log_likelihood - 1e-6);
}

TEST_CASE("config validation") {
    auto cfg = default_config(ModelTag::GMOPE);
    CHECK_NOTHROW(cfg.validate());
    cfg.free_params[0].lower = cfg.free_params[0].upper;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    auto cfg2 = default_config(ModelTag::GMOPE);
    cfg2.free_params.pop_back();
    CHECK_THROWS_AS(cfg2.validate(), std::invalid_argument);
}
