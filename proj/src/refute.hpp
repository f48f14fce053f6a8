#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dataset.hpp"
#include "estimate.hpp"
#include "graph.hpp"
#include "identify.hpp"

namespace causal {

struct RefuterConfig {
    int replications = 100;
    std::uint64_t seed = 0;
    double subset_fraction = 0.8;
    std::vector<std::pair<double, double>> sensitivity_grid;  // empty -> default grid
    std::optional<double> simulated_beta;                     // default: original effect
    EstimationConfig estimation;  // method/params used when re-estimating

    // Pass thresholds. The p-value rule compares the expected value under
    // the refuter's null against the replication distribution.
    double significance_level = 0.05;
    double placebo_band = 0.1;      // |mean| < band * max(|original|, 1)
    double sensitivity_band = 0.2;  // max |grid effect - original| < band * max(|original|, 1)
};

struct RefutationResult {
    std::string refuter;
    double original_effect = 0.0;
    double new_effect = 0.0;  // mean over replications (or over the grid)
    std::vector<double> replication_effects;
    std::optional<double> p_value;
    bool passed = false;
    std::map<std::string, double> detail;
};

// Canonical refuter names in their stable order; run_refuters derives the
// per-refuter seed as cfg.seed + index into this list.
const std::vector<std::string>& refuter_names();

// Every refuter perturbs copies of its inputs, re-runs identification on
// the (possibly modified) graph, and re-estimates with the original method.
// Replications that fail are skipped and counted; more than half failing is
// an error.
RefutationResult refute_random_common_cause(const Dataset& d, const CausalGraph& g,
                                            const Estimand& e, const EffectEstimate& est,
                                            const RefuterConfig& cfg);
RefutationResult refute_placebo_treatment(const Dataset& d, const CausalGraph& g,
                                          const Estimand& e, const EffectEstimate& est,
                                          const RefuterConfig& cfg);
RefutationResult refute_dummy_outcome(const Dataset& d, const CausalGraph& g, const Estimand& e,
                                      const EffectEstimate& est, const RefuterConfig& cfg);
RefutationResult refute_simulated_outcome(const Dataset& d, const CausalGraph& g,
                                          const Estimand& e, const EffectEstimate& est,
                                          const RefuterConfig& cfg);
RefutationResult refute_unobserved_common_cause(const Dataset& d, const CausalGraph& g,
                                                const Estimand& e, const EffectEstimate& est,
                                                const RefuterConfig& cfg);
RefutationResult refute_data_subset(const Dataset& d, const CausalGraph& g, const Estimand& e,
                                    const EffectEstimate& est, const RefuterConfig& cfg);
RefutationResult refute_bootstrap(const Dataset& d, const CausalGraph& g, const Estimand& e,
                                  const EffectEstimate& est, const RefuterConfig& cfg);

RefutationResult run_refuter(const std::string& name, const Dataset& d, const CausalGraph& g,
                             const Estimand& e, const EffectEstimate& est,
                             const RefuterConfig& cfg);

std::vector<RefutationResult> run_refuters(const std::vector<std::string>& names,
                                           const Dataset& d, const CausalGraph& g,
                                           const Estimand& e, const EffectEstimate& est,
                                           const RefuterConfig& cfg);

}  // namespace causal
