#pragma once

#include <string>
#include <vector>

#include "graph.hpp"

namespace causal {

enum class EstimandKind { kBackdoor, kFrontdoor, kInstrumentalVariable, kMediation };

std::string to_string(EstimandKind kind);
EstimandKind estimand_kind_from_string(const std::string& name);

// One identified estimation strategy for a (treatment, outcome) query.
struct Estimand {
    EstimandKind kind = EstimandKind::kBackdoor;
    std::string treatment;
    std::string outcome;
    NodeSet adjustment;   // back-door set, or mediation confounders
    NodeSet mediators;    // frontdoor/mediation only
    NodeSet instruments;  // iv only
    std::string expression;

    bool operator==(const Estimand& other) const = default;
};

struct IdentificationResult {
    std::vector<Estimand> estimands;  // identified ⇔ nonempty
    bool identified = false;
    std::vector<std::string> warnings;
};

// Deterministic one-line formula for reports.
std::string describe_estimand(const Estimand& e);

// Applies every supported criterion and returns the estimands in priority
// order: minimal back-door sets (canonical set first), then front-door,
// then one instrumental-variable estimand listing all instruments, then
// mediation when both of its regression legs admit a back-door set.
IdentificationResult identify_effect(const CausalGraph& g, const std::string& treatment,
                                     const std::string& outcome);

}  // namespace causal
