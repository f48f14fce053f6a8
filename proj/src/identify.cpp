#include "identify.hpp"

#include <algorithm>
#include <sstream>

#include "error.hpp"

namespace causal {

namespace {

// Rule (a) + (b) of the back-door criterion for set-valued endpoints, used
// to certify the two regression legs of a mediation estimand.
bool leg_backdoor_valid(const CausalGraph& g, const NodeSet& xs, const NodeSet& ys,
                        const NodeSet& z) {
    for (const auto& name : z) {
        if (!g.is_observed(name)) return false;
    }
    NodeSet below = descendants_of_set(g, xs);
    for (const auto& name : z) {
        if (below.count(name)) return false;
    }
    return d_separated(remove_outgoing_edges(g, xs), xs, ys, z);
}

bool mediation_legs_valid(const CausalGraph& g, const std::string& t, const std::string& y,
                          const NodeSet& mediators, const NodeSet& adjustment) {
    if (adjustment.count(t) || adjustment.count(y)) return false;
    for (const auto& m : mediators) {
        if (adjustment.count(m)) return false;
    }
    if (!leg_backdoor_valid(g, {t}, mediators, adjustment)) return false;
    NodeSet z = adjustment;
    z.insert(t);
    return leg_backdoor_valid(g, mediators, {y}, z);
}

}  // namespace

std::string to_string(EstimandKind kind) {
    switch (kind) {
        case EstimandKind::kBackdoor:
            return "backdoor";
        case EstimandKind::kFrontdoor:
            return "frontdoor";
        case EstimandKind::kInstrumentalVariable:
            return "iv";
        case EstimandKind::kMediation:
            return "mediation";
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown estimand kind");
}

EstimandKind estimand_kind_from_string(const std::string& name) {
    if (name == "backdoor") return EstimandKind::kBackdoor;
    if (name == "frontdoor") return EstimandKind::kFrontdoor;
    if (name == "iv") return EstimandKind::kInstrumentalVariable;
    if (name == "mediation") return EstimandKind::kMediation;
    throw Error(ErrorCode::kInvalidArgument, "unknown estimand kind '" + name + "'");
}

std::string describe_estimand(const Estimand& e) {
    const std::string& t = e.treatment;
    const std::string& y = e.outcome;
    std::ostringstream out;
    switch (e.kind) {
        case EstimandKind::kBackdoor:
            if (e.adjustment.empty()) {
                out << "E[" << y << "|" << t << "=1] - E[" << y << "|" << t
                    << "=0] with W = {} (no adjustment needed)";
            } else {
                out << "E_W[ E[" << y << "|" << t << "=1,W] - E[" << y << "|" << t
                    << "=0,W] ] with W = " << format_node_set(e.adjustment);
            }
            break;
        case EstimandKind::kFrontdoor:
            out << "stage 1: E[M|" << t << "] (effect of " << t
                << " on the mediators); stage 2: E[" << y << "|M," << t << "] (effect of the "
                << "mediators on " << y << "); effect = product of stage coefficients, M = "
                << format_node_set(e.mediators);
            break;
        case EstimandKind::kInstrumentalVariable:
            out << "Wald ratio Cov(" << y << ",Z)/Cov(" << t
                << ",Z) with instruments Z = " << format_node_set(e.instruments);
            break;
        case EstimandKind::kMediation:
            out << "NDE: coefficient of " << t << " in E[" << y << "|" << t
                << ",M,W]; NIE: (coefficient of " << t << " in E[M|" << t
                << ",W]) x (coefficient of M in E[" << y << "|" << t
                << ",M,W]); M = " << format_node_set(e.mediators)
                << ", W = " << format_node_set(e.adjustment);
            break;
    }
    return out.str();
}

IdentificationResult identify_effect(const CausalGraph& g, const std::string& treatment,
                                     const std::string& outcome) {
    if (!g.has_node(treatment)) {
        throw Error(ErrorCode::kUnknownVariable, "unknown treatment '" + treatment + "'");
    }
    if (!g.has_node(outcome)) {
        throw Error(ErrorCode::kUnknownVariable, "unknown outcome '" + outcome + "'");
    }
    if (treatment == outcome) {
        throw Error(ErrorCode::kInvalidArgument, "treatment and outcome must differ");
    }
    if (!g.is_observed(treatment) || !g.is_observed(outcome)) {
        throw Error(ErrorCode::kInvalidArgument, "treatment and outcome must be observed");
    }

    IdentificationResult result;
    NodeSet above_t = relatives(g, treatment, Relation::kAncestors);
    if (above_t.count(outcome)) {
        result.warnings.push_back("outcome '" + outcome + "' is an ancestor of treatment '" +
                                  treatment + "': the causal effect is structurally zero");
    }

    auto make = [&](EstimandKind kind) {
        Estimand e;
        e.kind = kind;
        e.treatment = treatment;
        e.outcome = outcome;
        return e;
    };

    // Back-door estimands: every minimal set, canonical set first.
    NodeSet canonical = canonical_backdoor_set(g, treatment, outcome);
    try {
        std::vector<NodeSet> sets =
            enumerate_backdoor_sets(g, treatment, outcome, g.node_count());
        for (const auto& set : sets) {
            Estimand e = make(EstimandKind::kBackdoor);
            e.adjustment = set;
            e.expression = describe_estimand(e);
            result.estimands.push_back(std::move(e));
        }
    } catch (const Error& err) {
        if (err.code() != ErrorCode::kSearchCap) throw;
        result.warnings.push_back(std::string(err.what()) +
                                  "; falling back to the canonical adjustment set");
        if (is_valid_backdoor_set(g, treatment, outcome, canonical)) {
            Estimand e = make(EstimandKind::kBackdoor);
            e.adjustment = canonical;
            e.expression = describe_estimand(e);
            result.estimands.push_back(std::move(e));
        }
    }

    // Front-door estimand.
    if (auto mediators = find_frontdoor_set(g, treatment, outcome, g.node_count())) {
        Estimand e = make(EstimandKind::kFrontdoor);
        e.mediators = *mediators;
        e.expression = describe_estimand(e);
        result.estimands.push_back(std::move(e));
    }

    // Instrumental-variable estimand listing every instrument.
    NodeSet instruments = find_instruments(g, treatment, outcome);
    if (!instruments.empty()) {
        Estimand e = make(EstimandKind::kInstrumentalVariable);
        e.instruments = instruments;
        e.expression = describe_estimand(e);
        result.estimands.push_back(std::move(e));
    }

    // Mediation estimand: only when both regression legs admit a back-door
    // set; try the empty adjustment first, then the canonical set.
    NodeSet mediators = find_mediation(g, treatment, outcome);
    if (!mediators.empty()) {
        for (const NodeSet& candidate : {NodeSet{}, canonical}) {
            if (!mediation_legs_valid(g, treatment, outcome, mediators, candidate)) continue;
            Estimand e = make(EstimandKind::kMediation);
            e.mediators = mediators;
            e.adjustment = candidate;
            e.expression = describe_estimand(e);
            result.estimands.push_back(std::move(e));
            break;
        }
    }

    result.identified = !result.estimands.empty();
    return result;
}

}  // namespace causal
