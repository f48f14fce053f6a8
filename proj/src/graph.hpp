#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace causal {

// A conditioning/adjustment set of variable names. std::set keeps members
// unique and lexicographically ordered, which makes every collection the
// library returns deterministic.
using NodeSet = std::set<std::string>;

std::string format_node_set(const NodeSet& set);

// Directed acyclic graph over named variables with an observed/latent flag
// per node. Immutable after construction; build one through GraphBuilder or
// the parsers in graph_parse.cpp.
class CausalGraph {
public:
    const std::vector<std::string>& nodes() const { return node_list_; }
    std::size_t node_count() const { return node_list_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    bool has_node(const std::string& name) const { return parents_.count(name) != 0; }
    bool has_edge(const std::string& from, const std::string& to) const;
    bool is_observed(const std::string& name) const;

    const NodeSet& parents(const std::string& name) const;
    const NodeSet& children(const std::string& name) const;

    // Edges as sorted (parent, child) pairs.
    std::vector<std::pair<std::string, std::string>> edges() const;

    NodeSet observed_nodes() const;
    NodeSet latent_nodes() const;

    bool operator==(const CausalGraph& other) const;
    bool operator!=(const CausalGraph& other) const { return !(*this == other); }

private:
    friend class GraphBuilder;
    std::vector<std::string> node_list_;  // sorted
    std::map<std::string, NodeSet> parents_;
    std::map<std::string, NodeSet> children_;
    std::map<std::string, bool> observed_;
    std::size_t edge_count_ = 0;
};

// Accumulates nodes/edges and validates the DAG invariants on build():
// acyclicity, no self-loops, consistent observed flags.
class GraphBuilder {
public:
    GraphBuilder& node(const std::string& name);
    GraphBuilder& node(const std::string& name, bool observed);
    GraphBuilder& edge(const std::string& from, const std::string& to);
    CausalGraph build() const;

private:
    std::map<std::string, std::optional<bool>> observed_;
    std::set<std::pair<std::string, std::string>> edges_;
};

enum class Relation { kParents, kChildren, kAncestors, kDescendants };

// Standard reachability semantics; ancestors/descendants exclude x itself.
NodeSet relatives(const CausalGraph& g, const std::string& x, Relation relation);

NodeSet ancestors_of_set(const CausalGraph& g, const NodeSet& xs);
NodeSet descendants_of_set(const CausalGraph& g, const NodeSet& xs);

// Copy of g with every edge leaving a member of xs removed.
CausalGraph remove_outgoing_edges(const CausalGraph& g, const NodeSet& xs);

// d-separation via the moralized-ancestral-graph reduction: restrict to the
// ancestral closure of x∪y∪z, moralize, drop z, and test undirected
// connectivity. x, y, z must be pairwise disjoint subsets of the nodes.
bool d_separated(const CausalGraph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z);

// Back-door criterion for t -> y: no member of z descends from t, every
// member is observed, and z blocks t and y once t's outgoing edges are gone.
bool is_valid_backdoor_set(const CausalGraph& g, const std::string& t, const std::string& y,
                           const NodeSet& z);

// The default adjustment set: observed ancestors of t or y, minus
// descendants of t, minus {t, y}. Not guaranteed valid; callers check.
NodeSet canonical_backdoor_set(const CausalGraph& g, const std::string& t, const std::string& y);

// Subset search above this candidate-pool size raises ErrorCode::kSearchCap.
inline constexpr std::size_t kExhaustiveSearchCap = 12;

// All minimal valid back-door sets with |z| <= max_size, sorted by size then
// lexicographically; the canonical set is placed first whenever it is valid.
std::vector<NodeSet> enumerate_backdoor_sets(const CausalGraph& g, const std::string& t,
                                             const std::string& y, std::size_t max_size);

// Front-door criterion: m intercepts every directed t->...->y path, the
// empty set is a valid back-door set for (t, m), and {t} is a valid
// back-door set for (m, y).
bool is_valid_frontdoor_set(const CausalGraph& g, const std::string& t, const std::string& y,
                            const NodeSet& m);

// Smallest observed front-door set within max_size, or nullopt.
std::optional<NodeSet> find_frontdoor_set(const CausalGraph& g, const std::string& t,
                                          const std::string& y, std::size_t max_size);

// z is an instrument for t -> y when it is observed, d-connected to t, and
// d-separated from y (given nothing) once t's outgoing edges are removed.
bool is_instrument(const CausalGraph& g, const std::string& t, const std::string& y,
                   const std::string& z);

NodeSet find_instruments(const CausalGraph& g, const std::string& t, const std::string& y);

// Observed variables lying on at least one directed path t -> ... -> y.
NodeSet find_mediation(const CausalGraph& g, const std::string& t, const std::string& y);

// Every dataset column missing from the graph becomes an observed common
// cause of t and y; declared nodes are left untouched. A column that names
// a latent node is an error.
CausalGraph augment_with_dataset_columns(const CausalGraph& g,
                                         const std::vector<std::string>& columns,
                                         const std::string& t, const std::string& y);

// --- text formats (graph_parse.cpp) ---

// DOT subset: digraph ID? { stmt* }. See README for the exact grammar.
CausalGraph parse_dot(const std::string& text, std::vector<std::string>* warnings = nullptr);

// GML subset: graph [ directed 1 node[...]* edge[...]* ].
CausalGraph parse_gml(const std::string& text, std::vector<std::string>* warnings = nullptr);

std::string render_dot(const CausalGraph& g);
std::string render_gml(const CausalGraph& g);

}  // namespace causal
