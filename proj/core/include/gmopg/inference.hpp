#ifndef GMOPG_INFERENCE_HPP
#define GMOPG_INFERENCE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gmopg/family.hpp"

namespace gmopg {

/// The GMOP-E model and its nested sub-models, plus the Weibull-baseline
/// variant. ME is the one-parameter moment (length-biased) exponential,
/// f(t) = t e^{-t/beta} / beta^2; it is not a member of the GMOP family.
enum class ModelTag { Exp, ME, PE, MOE, GMOE, MOPE, GMOPE, GMOPW };

std::string model_name(ModelTag tag);
std::optional<ModelTag> parse_model_tag(std::string_view s);
std::vector<std::string> model_param_names(ModelTag tag);
int model_param_count(ModelTag tag);

struct FreeParam {
    std::string name;
    double lower;
    double upper;
    bool log_scale;  // optimize log(param) instead of the raw value
};

struct OptimizerSettings {
    int multistarts = 16;
    int max_iterations = 10000;
    double tolerance = 1e-8;
    std::uint64_t seed = 20200606;
    /// Extra raw-space starting points appended after the Latin-hypercube
    /// draws (used to chain nested fits).
    std::vector<std::vector<double>> warm_starts;
};

struct ModelConfig {
    ModelTag tag = ModelTag::GMOPE;
    std::vector<FreeParam> free_params;
    OptimizerSettings optimizer;

    void validate() const;
};

ModelConfig default_config(ModelTag tag);

struct InformationCriteria {
    double aic, bic, caic, hqic;
};

struct GofStatistics {
    double ks;
    double ks_p_value;
    double anderson_darling;   // A^2
    double cramer_von_mises;   // W^2
    bool clamped = false;      // some u_i hit {0,1} and were clamped
};

struct ConvergenceInfo {
    int iterations = 0;   // iterations of the winning start
    int restarts = 0;     // number of starts attempted
    bool converged = false;
    double simplex_diameter = 0.0;
    int best_start_index = -1;
};

struct FitResult {
    ModelTag model;
    std::vector<std::string> param_names;
    std::vector<double> estimates;
    std::vector<double> standard_errors;                 // NaN when invalid
    std::vector<std::pair<double, double>> ci95;
    double log_likelihood = 0.0;
    InformationCriteria criteria{};
    GofStatistics gof{};
    ConvergenceInfo convergence{};
    bool se_valid = false;
    std::string se_message;
};

/// Dense symmetric matrix just big enough for the information matrices here.
class SymmetricMatrix {
  public:
    explicit SymmetricMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
    std::size_t size() const { return n_; }
    double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    std::vector<double> eigenvalues() const;  // cyclic Jacobi
    /// Inverse via Cholesky; throws std::runtime_error (listing the
    /// offending eigenvalue) when not positive definite.
    SymmetricMatrix inverse() const;

  private:
    std::size_t n_;
    std::vector<double> a_;
};

double log_likelihood(const GmopgParams& params, std::span<const double> data);

/// Log-likelihood of a tagged model at a raw parameter vector. Returns
/// -infinity when the likelihood is undefined at that point.
double model_log_likelihood(ModelTag tag, std::span<const double> params,
                            std::span<const double> data);
double model_cdf(ModelTag tag, std::span<const double> params, double t);
/// GmopgParams for the tagged model; throws for ME (not a family member).
GmopgParams model_params(ModelTag tag, std::span<const double> params);

FitResult fit(std::span<const double> data, const ModelConfig& config);

SymmetricMatrix observed_information(
    const std::function<double(std::span<const double>)>& loglik,
    std::span<const double> params);
SymmetricMatrix observed_information(ModelTag tag,
                                     std::span<const double> params,
                                     std::span<const double> data);

std::vector<double> standard_errors(const SymmetricMatrix& info);

InformationCriteria information_criteria(double loglik, int k, std::size_t n);

GofStatistics gof_statistics(const std::function<double(double)>& cdf,
                             std::span<const double> data);
GofStatistics gof_statistics(const GmopgParams& params,
                             std::span<const double> data);

/// Asymptotic Kolmogorov tail probability Q(x) = 2 sum (-1)^{j-1} e^{-2 j^2 x^2}.
double kolmogorov_p_value(double x);

/// Scaled total time on test transform, (i/n, T(i/n)) for i = 0..n.
std::vector<std::pair<double, double>> ttt_curve(std::span<const double> data);

struct DescriptiveStats {
    std::size_t n;
    double min, mean, median, sd, skewness, kurtosis, q1, q3, max;
};

DescriptiveStats descriptive(std::span<const double> data);

struct DataValidation {
    bool ok;
    std::string message;
};

/// Gate for the guinea-pig survival data: refuses a candidate file unless
/// its summary statistics match the published reference values.
DataValidation validate_reference_stats(std::span<const double> data);

}  // namespace gmopg

#endif
