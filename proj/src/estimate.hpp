#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dataset.hpp"
#include "identify.hpp"

namespace causal {

struct EstimationConfig {
    std::string method;
    int bootstrap_reps = 200;
    double ci_level = 0.95;
    int permutation_reps = 100;
    std::uint64_t seed = 0;
    int strata = 10;
    double propensity_clip = 0.01;
    std::optional<double> rdd_cutoff;
    std::optional<double> rdd_bandwidth;
    std::optional<std::string> rdd_running_variable;
};

struct EffectEstimate {
    double value = 0.0;  // average treatment effect in outcome units
    std::string method;
    Estimand estimand;
    std::optional<std::pair<double, double>> ci;
    double ci_level = 0.95;
    std::optional<double> p_value;
    std::map<std::string, double> diagnostics;
};

// Diagnostics/warnings sink shared by the estimators.
struct EstimatorOutput {
    std::map<std::string, double> diagnostics;
    std::vector<std::string> warnings;
};

// Method registry. Method names follow the dotted convention; each maps to
// the estimand kind it requires.
EstimandKind required_kind_for_method(const std::string& method);
const std::vector<std::string>& known_methods();
std::string default_method_for_kind(EstimandKind kind);

// --- point estimators ---

// OLS of outcome on [1, T, adjustment]; returns T's coefficient.
double backdoor_linear_regression(const Dataset& d, const Estimand& e,
                                  const EstimationConfig& cfg, EstimatorOutput* out = nullptr);

// Propensity quantile bins; bin-size-weighted average of within-bin
// treated/control mean differences over bins containing both groups.
double propensity_score_stratification(const Dataset& d, const Estimand& e,
                                       const EstimationConfig& cfg,
                                       EstimatorOutput* out = nullptr);

// 1-NN matching with replacement on the propensity score, both directions;
// ties broken by lowest row index.
double propensity_score_matching(const Dataset& d, const Estimand& e,
                                 const EstimationConfig& cfg, EstimatorOutput* out = nullptr);

// Horvitz-Thompson: mean(T*Y/p) - mean((1-T)*Y/(1-p)) with p clipped to
// [clip, 1-clip].
double inverse_propensity_weighting(const Dataset& d, const Estimand& e,
                                    const EstimationConfig& cfg, EstimatorOutput* out = nullptr);

// (E[Y|Z=1]-E[Y|Z=0]) / (E[T|Z=1]-E[T|Z=0]) using the estimand's first
// instrument, which must be binary and non-constant.
double iv_wald(const Dataset& d, const Estimand& e, const EstimationConfig& cfg,
               EstimatorOutput* out = nullptr);

// Stage 1: T on [1, instruments]; stage 2: Y on [1, T_hat].
double iv_two_stage_least_squares(const Dataset& d, const Estimand& e,
                                  const EstimationConfig& cfg, EstimatorOutput* out = nullptr);

// Local linear fits on both sides of the cutoff within the bandwidth;
// effect = right intercept - left intercept.
double regression_discontinuity(const Dataset& d, const Estimand& e,
                                const EstimationConfig& cfg, EstimatorOutput* out = nullptr);

// a = T coefficient in OLS(M ~ 1, T); b = M coefficient in OLS(Y ~ 1, M, T);
// returns a*b. Single mediator only.
double frontdoor_two_stage(const Dataset& d, const Estimand& e, const EstimationConfig& cfg,
                           EstimatorOutput* out = nullptr);

struct MediationEffects {
    double nde = 0.0;  // natural direct effect (T coefficient)
    double nie = 0.0;  // natural indirect effect (a*b)
};

// Two-stage linear mediation with the estimand's adjustment set in both
// regressions. Single mediator only.
MediationEffects mediation_two_stage(const Dataset& d, const Estimand& e,
                                     const EstimationConfig& cfg,
                                     EstimatorOutput* out = nullptr);

// Dispatches cfg.method to the estimator above. For the mediation method
// the reported value is the indirect effect; nde/nie land in diagnostics.
double point_estimate(const Dataset& d, const Estimand& e, const EstimationConfig& cfg,
                      EstimatorOutput* out = nullptr);

using PointEstimator =
    std::function<double(const Dataset&, const Estimand&, const EstimationConfig&)>;

struct BootstrapInterval {
    double low = 0.0;
    double high = 0.0;
    int failures = 0;
};

// Percentile interval at cfg.ci_level over cfg.bootstrap_reps re-estimates
// on bootstrap_resample(d, seed + i). Errors when more than half of the
// replications fail.
BootstrapInterval bootstrap_ci(const Dataset& d, const Estimand& e,
                               const EstimationConfig& cfg, const PointEstimator& estimator);

// Permutation test of the sharp null: treatment permuted uniformly at
// random per replication; p = (1 + #{|perm| >= |observed|}) / (R + 1).
double permutation_pvalue(const Dataset& d, const Estimand& e, const EstimationConfig& cfg,
                          const PointEstimator& estimator);

// Point estimate plus (optionally) bootstrap CI and permutation p-value,
// per the config's replication counts.
EffectEstimate estimate_effect(const Dataset& d, const Estimand& e,
                               const EstimationConfig& cfg,
                               std::vector<std::string>* warnings = nullptr);

}  // namespace causal
