// gmopg: evaluation, sampling, fitting, and Monte Carlo studies for the
// GMOP-G lifetime family. JSON report on stdout; exit 0 on success, 1 on
// numerical non-convergence, 2 on input/usage errors.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmopg/inference.hpp"
#include "gmopg/simulation.hpp"

using nlohmann::json;
using namespace gmopg;

namespace {

constexpr const char* kVersion = "1.0.0";

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

struct DataFile {
    std::vector<double> values;
    std::string checksum;
};

// Single-column CSV of positive reals; optional header; '#' comments.
DataFile read_data(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError("cannot open data file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();

    DataFile df;
    df.checksum = fnv1a_hex(bytes);
    std::istringstream lines(bytes);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(line.substr(first), &pos);
            const auto rest = line.find_first_not_of(" \t", first + pos);
            if (rest != std::string::npos)
                throw std::invalid_argument("trailing characters");
            if (!(v > 0.0) || !std::isfinite(v))
                throw CliError(path + ":" + std::to_string(lineno) +
                               ": values must be positive reals");
            df.values.push_back(v);
        } catch (const std::invalid_argument&) {
            if (df.values.empty() && lineno <= 2) continue;  // header line
            throw CliError(path + ":" + std::to_string(lineno) +
                           ": cannot parse '" + line + "'");
        }
    }
    if (df.values.empty()) throw CliError(path + ": no data rows");
    return df;
}

struct ParamFlags {
    double theta = 1.0, alpha = 1.0, lambda = 1.0;
    double beta = 1.0, delta = 1.0;
    bool weibull = false;

    GmopgParams build() const {
        return {theta, alpha, lambda,
                weibull ? BaselineSpec::weibull(beta, delta)
                        : BaselineSpec::exponential(beta)};
    }
};

void add_param_flags(CLI::App* cmd, ParamFlags& p) {
    cmd->add_option("--theta", p.theta, "shape theta > 0");
    cmd->add_option("--alpha", p.alpha, "tilt alpha > 0");
    cmd->add_option("--lambda", p.lambda, "Poisson rate lambda (0 = GMO limit)");
    cmd->add_option("--beta", p.beta, "baseline rate beta > 0");
    cmd->add_option("--delta", p.delta, "Weibull shape delta > 0");
    cmd->add_flag("--weibull", p.weibull, "Weibull baseline (default exponential)");
}

json report_skeleton(const std::string& command, std::uint64_t seed) {
    json r;
    r["tool"] = "gmopg";
    r["version"] = kVersion;
    r["command"] = command;
    r["seed"] = seed;
    return r;
}

json input_digest(const std::string& path, const DataFile& df) {
    return {{"file", path}, {"n", df.values.size()}, {"checksum", df.checksum}};
}

json params_json(const std::vector<std::string>& names,
                 const std::vector<double>& vals) {
    json j = json::object();
    for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = vals[i];
    return j;
}

double finite_or(double v, double fallback) {
    return std::isfinite(v) ? v : fallback;
}

json fit_json(const FitResult& f) {
    json j;
    j["model"] = model_name(f.model);
    j["estimates"] = params_json(f.param_names, f.estimates);
    if (f.se_valid) {
        j["standard_errors"] = params_json(f.param_names, f.standard_errors);
        json ci = json::object();
        for (std::size_t i = 0; i < f.param_names.size(); ++i)
            ci[f.param_names[i]] = {f.ci95[i].first, f.ci95[i].second};
        j["ci95"] = ci;
    } else {
        j["standard_errors"] = "failed";
        j["se_message"] = f.se_message;
    }
    j["log_likelihood"] = f.log_likelihood;
    j["criteria"] = {{"aic", f.criteria.aic},
                     {"bic", f.criteria.bic},
                     {"caic", f.criteria.caic},
                     {"hqic", f.criteria.hqic}};
    j["gof"] = {{"ks", f.gof.ks},
                {"ks_p_value", f.gof.ks_p_value},
                {"anderson_darling", f.gof.anderson_darling},
                {"cramer_von_mises", f.gof.cramer_von_mises},
                {"clamped", f.gof.clamped}};
    j["convergence"] = {{"converged", f.convergence.converged},
                        {"iterations", f.convergence.iterations},
                        {"restarts", f.convergence.restarts},
                        {"simplex_diameter", f.convergence.simplex_diameter},
                        {"best_start_index", f.convergence.best_start_index}};
    return j;
}

void emit(const json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw CliError("cannot write report: " + out_path);
    out << report.dump(2) << "\n";
}

void write_plot_csv(const std::string& path, const std::string& header,
                    const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw CliError("cannot write plot file: " + path);
    out << header << "\n";
    out.precision(17);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

// Embeds a fitted sub-model into a larger model's raw parameter vector,
// so nested fits can only improve on their sub-models.
std::optional<std::vector<double>> embed(ModelTag sub,
                                         const std::vector<double>& est,
                                         ModelTag super) {
    double theta = 1.0, alpha = 1.0, lambda = 0.0, beta = 0.0;
    switch (sub) {
        case ModelTag::Exp: beta = est[0]; break;
        case ModelTag::PE: lambda = est[0]; beta = est[1]; break;
        case ModelTag::MOE: alpha = est[0]; beta = est[1]; break;
        case ModelTag::GMOE: theta = est[0]; alpha = est[1]; beta = est[2]; break;
        case ModelTag::MOPE: alpha = est[0]; lambda = est[1]; beta = est[2]; break;
        case ModelTag::GMOPE:
            theta = est[0]; alpha = est[1]; lambda = est[2]; beta = est[3];
            break;
        default: return std::nullopt;  // ME / GMOPW are not nested here
    }
    switch (super) {
        case ModelTag::PE:
            return sub == ModelTag::Exp
                       ? std::optional<std::vector<double>>({lambda, beta})
                       : std::nullopt;
        case ModelTag::MOE:
            return sub == ModelTag::Exp
                       ? std::optional<std::vector<double>>({alpha, beta})
                       : std::nullopt;
        case ModelTag::GMOE:
            if (lambda != 0.0) return std::nullopt;
            return std::vector<double>{theta, alpha, beta};
        case ModelTag::MOPE:
            if (theta != 1.0) return std::nullopt;
            return std::vector<double>{alpha, lambda, beta};
        case ModelTag::GMOPE:
            return std::vector<double>{theta, alpha, lambda, beta};
        case ModelTag::GMOPW:
            return std::vector<double>{theta, alpha, lambda, beta, 1.0};
        default:
            return std::nullopt;
    }
}

int cmd_fit(const std::string& data_path, const std::string& models_csv,
            std::uint64_t seed, bool check_ref_stats, const std::string& out_path) {
    const DataFile df = read_data(data_path);
    if (check_ref_stats) {
        const auto v = validate_reference_stats(df.values);
        if (!v.ok) throw CliError(v.message);
    }

    std::vector<ModelTag> tags;
    {
        std::istringstream ss(models_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const auto tag = parse_model_tag(tok);
            if (!tag) throw CliError("unknown model tag: " + tok);
            tags.push_back(*tag);
        }
    }
    if (tags.empty()) throw CliError("no models requested");
    // fit sub-models first so their solutions can warm-start supersets
    std::stable_sort(tags.begin(), tags.end(), [](ModelTag a, ModelTag b) {
        return model_param_count(a) < model_param_count(b);
    });

    json report = report_skeleton("fit", seed);
    report["input"] = input_digest(data_path, df);

    std::vector<FitResult> fits;
    bool all_converged = true;
    json models = json::array();
    for (ModelTag tag : tags) {
        ModelConfig cfg = default_config(tag);
        cfg.optimizer.seed = seed;
        for (const auto& prev : fits)
            if (auto w = embed(prev.model, prev.estimates, tag))
                cfg.optimizer.warm_starts.push_back(*w);
        try {
            FitResult f = fit(df.values, cfg);
            all_converged = all_converged && f.convergence.converged;
            models.push_back(fit_json(f));
            fits.push_back(std::move(f));
        } catch (const std::exception& e) {
            all_converged = false;
            models.push_back({{"model", model_name(tag)},
                              {"failed", true},
                              {"message", e.what()}});
        }
    }
    report["models"] = models;

    std::sort(fits.begin(), fits.end(), [](const FitResult& a, const FitResult& b) {
        return a.criteria.aic < b.criteria.aic;
    });
    json table = json::array();
    for (const auto& f : fits)
        table.push_back({{"model", model_name(f.model)},
                         {"log_likelihood", f.log_likelihood},
                         {"aic", f.criteria.aic},
                         {"bic", f.criteria.bic},
                         {"caic", f.criteria.caic},
                         {"hqic", f.criteria.hqic},
                         {"ks", f.gof.ks},
                         {"ks_p_value", f.gof.ks_p_value},
                         {"anderson_darling", f.gof.anderson_darling},
                         {"cramer_von_mises", f.gof.cramer_von_mises}});
    report["comparison"] = table;

    const auto d = descriptive(df.values);
    report["descriptive"] = {{"n", d.n},       {"min", d.min},
                             {"q1", d.q1},     {"median", d.median},
                             {"q3", d.q3},     {"max", d.max},
                             {"mean", d.mean}, {"sd", d.sd},
                             {"skewness", d.skewness},
                             {"kurtosis", finite_or(d.kurtosis, 0.0)}};
    emit(report, out_path);
    return all_converged ? 0 : 1;
}

int cmd_eval(const ParamFlags& pf, double t_min, double t_max, std::size_t points,
             const std::string& plot_csv, const std::string& out_path) {
    if (points < 2) throw CliError("--points must be at least 2");
    if (!(t_min > 0.0) || !(t_max > t_min))
        throw CliError("grid requires 0 < t-min < t-max");
    GmopgParams params;
    try {
        params = pf.build();
        params.validate();
    } catch (const std::exception& e) {
        throw CliError(e.what());
    }

    json report = report_skeleton("eval", 0);
    report["params"] = {{"theta", params.theta},
                        {"alpha", params.alpha},
                        {"lambda", params.lambda},
                        {"baseline", pf.weibull ? "weibull" : "exponential"},
                        {"beta", params.baseline.beta},
                        {"delta", params.baseline.delta}};
    std::vector<std::vector<double>> rows;
    json grid = json::array();
    for (std::size_t i = 0; i < points; ++i) {
        const double t =
            t_min + (t_max - t_min) * double(i) / double(points - 1);
        const double F = cdf(params, t);
        const double S = survival(params, t);
        const double f = pdf(params, t);
        rows.push_back({t, f, F, S, hazard(params, t)});
        grid.push_back({{"t", t},
                        {"pdf", f},
                        {"cdf", F},
                        {"survival", S},
                        {"hazard", rows.back()[4]}});
    }
    report["grid"] = grid;
    if (!plot_csv.empty())
        write_plot_csv(plot_csv, "t,pdf,cdf,survival,hazard", rows);
    emit(report, out_path);
    return 0;
}

int cmd_sample(const ParamFlags& pf, std::size_t n, std::uint64_t seed,
               const std::string& out_file) {
    GmopgParams params;
    try {
        params = pf.build();
        params.validate();
    } catch (const std::exception& e) {
        throw CliError(e.what());
    }
    const auto draws = sample(params, n, seed);
    std::ofstream out(out_file);
    if (!out) throw CliError("cannot write output: " + out_file);
    out.precision(17);
    for (double t : draws) out << t << "\n";
    if (!out) throw CliError("write failed: " + out_file);
    return 0;
}

int cmd_simulate(const ParamFlags& pf, const std::vector<std::size_t>& ns,
                 int replicates, std::uint64_t seed, bool diagnostic_truth,
                 int multistarts, const std::string& plot_csv,
                 const std::string& out_path) {
    GmopgParams truth;
    try {
        truth = pf.build();
        truth.validate();
    } catch (const std::exception& e) {
        throw CliError(e.what());
    }
    SimulationOptions opts;
    opts.replicates = replicates;
    opts.seed = seed;
    opts.diagnostic_truth = diagnostic_truth;
    opts.optimizer.multistarts = multistarts;
    opts.optimizer.seed = seed;
    const auto rep = mc_study(truth, ns, opts);

    json report = report_skeleton("simulate", seed);
    report["truth"] = {{"theta", truth.theta},
                       {"alpha", truth.alpha},
                       {"lambda", truth.lambda},
                       {"baseline", pf.weibull ? "weibull" : "exponential"},
                       {"beta", truth.baseline.beta},
                       {"delta", truth.baseline.delta}};
    report["replicates"] = rep.replicates;
    report["sample_sizes"] = rep.sample_sizes;
    report["monotone_trend"] = rep.monotone_trend;
    json cells = json::array();
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < rep.param_names.size(); ++j) {
        for (const auto& c : rep.cells[j]) {
            cells.push_back({{"parameter", rep.param_names[j]},
                             {"n", c.n},
                             {"bias", c.bias},
                             {"mse", c.mse},
                             {"converged", c.converged},
                             {"failed", c.failed},
                             {"flagged", c.flagged}});
            rows.push_back({double(j), double(c.n), c.bias, c.mse,
                            double(c.converged)});
        }
    }
    report["cells"] = cells;
    if (!plot_csv.empty())
        write_plot_csv(plot_csv, "param_index,n,bias,mse,converged", rows);
    emit(report, out_path);
    return 0;
}

int cmd_ttt(const std::string& data_path, const std::string& plot_csv,
            const std::string& out_path) {
    const DataFile df = read_data(data_path);
    const auto curve = ttt_curve(df.values);
    const auto d = descriptive(df.values);

    json report = report_skeleton("ttt", 0);
    report["input"] = input_digest(data_path, df);
    json pairs = json::array();
    std::vector<std::vector<double>> rows;
    for (const auto& [u, T] : curve) {
        pairs.push_back({u, T});
        rows.push_back({u, T});
    }
    report["ttt"] = pairs;
    report["five_number"] = {{"min", d.min},
                             {"q1", d.q1},
                             {"median", d.median},
                             {"q3", d.q3},
                             {"max", d.max}};
    report["descriptive"] = {{"n", d.n},       {"mean", d.mean},
                             {"sd", d.sd},     {"skewness", d.skewness},
                             {"kurtosis", d.kurtosis}};
    if (!plot_csv.empty()) write_plot_csv(plot_csv, "u,ttt", rows);
    emit(report, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GMOP-G lifetime family toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string data_path, out_path, plot_csv, out_file, models = "gmop-e";
    std::uint64_t seed = 20200606;
    std::size_t n = 100, points = 200;
    double t_min = 1e-3, t_max = 10.0;
    bool check_ref_stats = false, diagnostic_truth = false;
    int replicates = 500, multistarts = 2;
    std::vector<std::size_t> ns{10, 20, 40, 80};
    ParamFlags pf;

    auto* fit_cmd = app.add_subcommand("fit", "fit models to a data file");
    fit_cmd->add_option("data", data_path, "single-column CSV")->required();
    fit_cmd->add_option("--models", models, "comma-separated model tags");
    fit_cmd->add_option("--seed", seed, "optimizer seed");
    fit_cmd->add_flag("--check-reference-stats", check_ref_stats,
                      "validate reference summary statistics before fitting");
    fit_cmd->add_option("--out", out_path, "report file (default stdout)");

    auto* eval_cmd = app.add_subcommand("eval", "tabulate pdf/cdf/sf/hrf");
    add_param_flags(eval_cmd, pf);
    eval_cmd->add_option("--t-min", t_min, "grid start (> 0)");
    eval_cmd->add_option("--t-max", t_max, "grid end");
    eval_cmd->add_option("--points", points, "grid size (>= 2)");
    eval_cmd->add_option("--plot-csv", plot_csv, "side CSV for the grid");
    eval_cmd->add_option("--out", out_path, "report file (default stdout)");

    auto* sample_cmd = app.add_subcommand("sample", "draw from the family");
    add_param_flags(sample_cmd, pf);
    sample_cmd->add_option("-n,--n", n, "number of draws");
    sample_cmd->add_option("--seed", seed, "stream seed");
    sample_cmd->add_option("--out", out_file, "output file, one draw per line")
        ->required();

    auto* sim_cmd = app.add_subcommand("simulate", "bias/MSE Monte Carlo study");
    add_param_flags(sim_cmd, pf);
    sim_cmd->add_option("--ns", ns, "sample-size ladder");
    sim_cmd->add_option("--replicates", replicates, "replicates per cell");
    sim_cmd->add_option("--seed", seed, "study seed");
    sim_cmd->add_flag("--diagnostic-truth", diagnostic_truth,
                      "force estimates to the truth (aggregation check)");
    sim_cmd->add_option("--multistarts", multistarts,
                        "optimizer starts per replicate");
    sim_cmd->add_option("--plot-csv", plot_csv, "side CSV of the cells");
    sim_cmd->add_option("--out", out_path, "report file (default stdout)");

    auto* ttt_cmd = app.add_subcommand("ttt", "total time on test transform");
    ttt_cmd->add_option("data", data_path, "single-column CSV")->required();
    ttt_cmd->add_option("--plot-csv", plot_csv, "side CSV of the pairs");
    ttt_cmd->add_option("--out", out_path, "report file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fit_cmd->parsed())
            return cmd_fit(data_path, models, seed, check_ref_stats, out_path);
        if (eval_cmd->parsed())
            return cmd_eval(pf, t_min, t_max, points, plot_csv, out_path);
        if (sample_cmd->parsed()) return cmd_sample(pf, n, seed, out_file);
        if (sim_cmd->parsed())
            return cmd_simulate(pf, ns, replicates, seed, diagnostic_truth,
                                multistarts, plot_csv, out_path);
        if (ttt_cmd->parsed()) return cmd_ttt(data_path, plot_csv, out_path);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
