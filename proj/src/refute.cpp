#include "refute.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "error.hpp"
#include "numerics.hpp"

namespace causal {

namespace {

const std::vector<std::string> kRefuterNames = {
    "random_common_cause",        // 0
    "placebo_treatment",          // 1
    "dummy_outcome",              // 2
    "simulated_outcome",          // 3
    "add_unobserved_common_cause",// 4
    "data_subset",                // 5
    "bootstrap",                  // 6
};

constexpr double kDegenerateTolerance = 1e-9;

EstimationConfig reestimation_config(const EffectEstimate& est, const RefuterConfig& cfg) {
    EstimationConfig out = cfg.estimation;
    out.method = est.method;
    out.bootstrap_reps = 0;     // refuters need point estimates only
    out.permutation_reps = 0;
    return out;
}

// Re-identify on the (possibly perturbed) graph and re-estimate with the
// original estimand kind and method.
double reestimate(const Dataset& d, const CausalGraph& g, EstimandKind kind,
                  const EstimationConfig& est_cfg) {
    IdentificationResult ident = identify_effect(g, d.treatment(), d.outcome());
    for (const auto& candidate : ident.estimands) {
        if (candidate.kind == kind) return point_estimate(d, candidate, est_cfg);
    }
    throw Error(ErrorCode::kNotIdentified,
                "no " + to_string(kind) + " estimand after perturbation");
}

std::string unique_column_name(const std::string& base, const Dataset& d,
                               const CausalGraph& g) {
    std::string name = base;
    int suffix = 1;
    while (d.has_column(name) || g.has_node(name)) {
        name = base + "_" + std::to_string(suffix++);
    }
    return name;
}

double two_sided_normal_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

// Replication loop shared by the resampling-style refuters; make_problem
// produces the perturbed (dataset, graph) pair for one replication seed.
template <typename MakeProblem>
RefutationResult run_replications(const std::string& name, const Estimand& e,
                                  const EffectEstimate& est, const RefuterConfig& cfg,
                                  double expected_under_null, MakeProblem make_problem) {
    if (cfg.replications < 1) {
        throw Error(ErrorCode::kInvalidArgument, "refuter needs at least one replication");
    }
    EstimationConfig est_cfg = reestimation_config(est, cfg);

    RefutationResult result;
    result.refuter = name;
    result.original_effect = est.value;
    int skipped = 0;
    for (int i = 0; i < cfg.replications; ++i) {
        std::uint64_t rep_seed = cfg.seed + static_cast<std::uint64_t>(i);
        try {
            auto [data, graph] = make_problem(rep_seed);
            result.replication_effects.push_back(reestimate(data, graph, e.kind, est_cfg));
        } catch (const Error&) {
            ++skipped;
        }
    }
    if (skipped * 2 > cfg.replications) {
        throw Error(ErrorCode::kNumeric, name + ": more than half of the replications failed (" +
                                             std::to_string(skipped) + " of " +
                                             std::to_string(cfg.replications) + ")");
    }

    auto [mean, variance] = mean_and_variance(result.replication_effects);
    double sd = std::sqrt(variance);
    result.new_effect = mean;
    if (sd == 0.0) {
        // Degenerate distribution: exact-match comparison instead of a z-test.
        result.passed = std::abs(mean - expected_under_null) <= kDegenerateTolerance;
    } else {
        double z = (expected_under_null - mean) / sd;
        result.p_value = two_sided_normal_p(z);
        result.passed = *result.p_value > cfg.significance_level;
    }
    result.detail["replications_requested"] = static_cast<double>(cfg.replications);
    result.detail["replications_skipped"] = static_cast<double>(skipped);
    result.detail["expected_under_null"] = expected_under_null;
    result.detail["significance_level"] = cfg.significance_level;
    return result;
}

void apply_placebo_band(RefutationResult& result, const RefuterConfig& cfg) {
    double band = cfg.placebo_band * std::max(std::abs(result.original_effect), 1.0);
    result.detail["placebo_band_abs"] = band;
    result.passed = result.passed && std::abs(result.new_effect) < band;
}

std::vector<double> standardized(const std::vector<double>& values) {
    auto [mean, variance] = mean_and_variance(values);
    double sd = std::sqrt(variance);
    std::vector<double> out(values.size(), 0.0);
    if (sd == 0.0) return out;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mean) / sd;
    return out;
}

std::string grid_key(double strength_t, double strength_y) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "effect[st=%g,sy=%g]", strength_t, strength_y);
    return buffer;
}

}  // namespace

const std::vector<std::string>& refuter_names() { return kRefuterNames; }

RefutationResult refute_random_common_cause(const Dataset& d, const CausalGraph& g,
                                            const Estimand& e, const EffectEstimate& est,
                                            const RefuterConfig& cfg) {
    std::string name = unique_column_name("random_cc", d, g);
    return run_replications(
        "random_common_cause", e, est, cfg, est.value, [&](std::uint64_t rep_seed) {
            std::mt19937_64 engine(rep_seed);
            std::normal_distribution<double> normal(0.0, 1.0);
            std::vector<double> values(d.n_rows());
            for (auto& v : values) v = normal(engine);
            Dataset data = d.with_extra_column(name, values);
            CausalGraph graph = augment_with_dataset_columns(g, data.column_names(),
                                                             e.treatment, e.outcome);
            return std::make_pair(std::move(data), std::move(graph));
        });
}

RefutationResult refute_placebo_treatment(const Dataset& d, const CausalGraph& g,
                                          const Estimand& e, const EffectEstimate& est,
                                          const RefuterConfig& cfg) {
    RefutationResult result = run_replications(
        "placebo_treatment", e, est, cfg, 0.0, [&](std::uint64_t rep_seed) {
            std::mt19937_64 engine(rep_seed);
            std::vector<double> permuted = d.treatment_values();
            std::shuffle(permuted.begin(), permuted.end(), engine);
            return std::make_pair(d.with_column_replaced(d.treatment(), std::move(permuted)), g);
        });
    apply_placebo_band(result, cfg);
    return result;
}

RefutationResult refute_dummy_outcome(const Dataset& d, const CausalGraph& g, const Estimand& e,
                                      const EffectEstimate& est, const RefuterConfig& cfg) {
    RefutationResult result = run_replications(
        "dummy_outcome", e, est, cfg, 0.0, [&](std::uint64_t rep_seed) {
            std::mt19937_64 engine(rep_seed);
            std::normal_distribution<double> normal(0.0, 1.0);
            std::vector<double> noise(d.n_rows());
            for (auto& v : noise) v = normal(engine);
            return std::make_pair(d.with_column_replaced(d.outcome(), std::move(noise)), g);
        });
    apply_placebo_band(result, cfg);
    return result;
}

RefutationResult refute_simulated_outcome(const Dataset& d, const CausalGraph& g,
                                          const Estimand& e, const EffectEstimate& est,
                                          const RefuterConfig& cfg) {
    if (e.kind != EstimandKind::kBackdoor) {
        throw Error(ErrorCode::kInvalidArgument,
                    "simulated_outcome needs a backdoor estimand (an adjustment-set outcome "
                    "model)");
    }
    double simulated_beta = cfg.simulated_beta.value_or(est.value);

    // One outcome model on the original data; replications resample its
    // residuals.
    std::vector<std::string> cols{d.treatment()};
    cols.insert(cols.end(), e.adjustment.begin(), e.adjustment.end());
    const auto n = static_cast<Eigen::Index>(d.n_rows());
    Matrix X(n, static_cast<Eigen::Index>(cols.size() + 1));
    X.col(0).setOnes();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto& values = d.column(cols[c]);
        X.col(static_cast<Eigen::Index>(c + 1)) =
            Eigen::Map<const Vector>(values.data(), n);
    }
    const auto& outcome = d.outcome_values();
    LinearFit fit = fit_ols(X, Eigen::Map<const Vector>(outcome.data(), n));
    Vector fitted = X * fit.coefficients;
    const auto& treatment = d.treatment_values();

    // fitted value minus the treatment term = intercept + adjustment part
    std::vector<double> adjusted_part(d.n_rows());
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        adjusted_part[i] =
            fitted[static_cast<Eigen::Index>(i)] - fit.coefficients[1] * treatment[i];
    }

    RefutationResult result = run_replications(
        "simulated_outcome", e, est, cfg, simulated_beta, [&](std::uint64_t rep_seed) {
            std::mt19937_64 engine(rep_seed);
            std::uniform_int_distribution<std::size_t> pick(0, d.n_rows() - 1);
            std::vector<double> synthetic(d.n_rows());
            for (std::size_t i = 0; i < d.n_rows(); ++i) {
                synthetic[i] = adjusted_part[i] + simulated_beta * treatment[i] +
                               fit.residuals[static_cast<Eigen::Index>(pick(engine))];
            }
            return std::make_pair(d.with_column_replaced(d.outcome(), std::move(synthetic)), g);
        });
    result.detail["simulated_beta"] = simulated_beta;
    return result;
}

RefutationResult refute_unobserved_common_cause(const Dataset& d, const CausalGraph& g,
                                                const Estimand& e, const EffectEstimate& est,
                                                const RefuterConfig& cfg) {
    std::vector<std::pair<double, double>> grid = cfg.sensitivity_grid;
    if (grid.empty()) {
        for (double st : {0.1, 0.2, 0.5}) {
            for (double sy : {0.1, 0.2, 0.5}) grid.emplace_back(st, sy);
        }
    }
    EstimationConfig est_cfg = reestimation_config(est, cfg);
    std::string name = unique_column_name("unobserved_cc", d, g);
    std::vector<double> t_std = standardized(d.treatment_values());
    std::vector<double> y_std = standardized(d.outcome_values());

    RefutationResult result;
    result.refuter = "add_unobserved_common_cause";
    result.original_effect = est.value;
    double max_deviation = 0.0;
    for (std::size_t cell = 0; cell < grid.size(); ++cell) {
        auto [strength_t, strength_y] = grid[cell];
        std::mt19937_64 engine(cfg.seed + static_cast<std::uint64_t>(cell));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> confounder(d.n_rows());
        for (std::size_t i = 0; i < d.n_rows(); ++i) {
            confounder[i] = strength_t * t_std[i] + strength_y * y_std[i] + normal(engine);
        }
        Dataset data = d.with_extra_column(name, confounder);
        CausalGraph graph =
            augment_with_dataset_columns(g, data.column_names(), e.treatment, e.outcome);
        double effect = reestimate(data, graph, e.kind, est_cfg);
        result.replication_effects.push_back(effect);
        result.detail[grid_key(strength_t, strength_y)] = effect;
        max_deviation = std::max(max_deviation, std::abs(effect - est.value));
    }
    auto [mean, variance] = mean_and_variance(result.replication_effects);
    (void)variance;
    result.new_effect = mean;
    double band = cfg.sensitivity_band * std::max(std::abs(est.value), 1.0);
    result.passed = max_deviation < band;
    result.detail["max_abs_deviation"] = max_deviation;
    result.detail["sensitivity_band_abs"] = band;
    result.detail["replications_requested"] = static_cast<double>(grid.size());
    result.detail["replications_skipped"] = 0.0;
    return result;
}

RefutationResult refute_data_subset(const Dataset& d, const CausalGraph& g, const Estimand& e,
                                    const EffectEstimate& est, const RefuterConfig& cfg) {
    if (!(cfg.subset_fraction > 0.0) || cfg.subset_fraction > 1.0) {
        throw Error(ErrorCode::kInvalidArgument, "subset_fraction must be in (0, 1]");
    }
    if (cfg.subset_fraction * static_cast<double>(d.n_rows()) < 10.0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "data_subset needs subset_fraction * n_rows >= 10");
    }
    RefutationResult result = run_replications(
        "data_subset", e, est, cfg, est.value, [&](std::uint64_t rep_seed) {
            return std::make_pair(random_subset(d, cfg.subset_fraction, rep_seed), g);
        });
    result.detail["subset_fraction"] = cfg.subset_fraction;
    return result;
}

RefutationResult refute_bootstrap(const Dataset& d, const CausalGraph& g, const Estimand& e,
                                  const EffectEstimate& est, const RefuterConfig& cfg) {
    return run_replications("bootstrap", e, est, cfg, est.value,
                            [&](std::uint64_t rep_seed) {
                                return std::make_pair(bootstrap_resample(d, rep_seed), g);
                            });
}

RefutationResult run_refuter(const std::string& name, const Dataset& d, const CausalGraph& g,
                             const Estimand& e, const EffectEstimate& est,
                             const RefuterConfig& cfg) {
    if (name == "random_common_cause") return refute_random_common_cause(d, g, e, est, cfg);
    if (name == "placebo_treatment") return refute_placebo_treatment(d, g, e, est, cfg);
    if (name == "dummy_outcome") return refute_dummy_outcome(d, g, e, est, cfg);
    if (name == "simulated_outcome") return refute_simulated_outcome(d, g, e, est, cfg);
    if (name == "add_unobserved_common_cause") {
        return refute_unobserved_common_cause(d, g, e, est, cfg);
    }
    if (name == "data_subset") return refute_data_subset(d, g, e, est, cfg);
    if (name == "bootstrap") return refute_bootstrap(d, g, e, est, cfg);
    std::ostringstream msg;
    msg << "unknown refuter '" << name << "'; valid refuters:";
    for (const auto& known : kRefuterNames) msg << " " << known;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
}

std::vector<RefutationResult> run_refuters(const std::vector<std::string>& names,
                                           const Dataset& d, const CausalGraph& g,
                                           const Estimand& e, const EffectEstimate& est,
                                           const RefuterConfig& cfg) {
    // Validate every name up front so nothing runs on a bad list.
    for (const auto& name : names) {
        if (std::find(kRefuterNames.begin(), kRefuterNames.end(), name) == kRefuterNames.end()) {
            run_refuter(name, d, g, e, est, cfg);  // throws with the valid-name list
        }
    }
    std::vector<RefutationResult> results;
    results.reserve(names.size());
    for (const auto& name : names) {
        RefuterConfig derived = cfg;
        auto it = std::find(kRefuterNames.begin(), kRefuterNames.end(), name);
        derived.seed = cfg.seed + static_cast<std::uint64_t>(it - kRefuterNames.begin());
        results.push_back(run_refuter(name, d, g, e, est, derived));
    }
    return results;
}

}  // namespace causal
