#include "graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "error.hpp"

namespace causal {

namespace {

void require_node(const CausalGraph& g, const std::string& name) {
    if (!g.has_node(name)) {
        throw Error(ErrorCode::kUnknownVariable, "unknown variable '" + name + "'");
    }
}

void require_nodes(const CausalGraph& g, const NodeSet& set) {
    for (const auto& name : set) require_node(g, name);
}

NodeSet reachable(const CausalGraph& g, const NodeSet& start,
                  const NodeSet& (CausalGraph::*step)(const std::string&) const) {
    NodeSet seen = start;
    std::deque<std::string> frontier(start.begin(), start.end());
    while (!frontier.empty()) {
        std::string current = frontier.front();
        frontier.pop_front();
        for (const auto& next : (g.*step)(current)) {
            if (seen.insert(next).second) frontier.push_back(next);
        }
    }
    for (const auto& name : start) seen.erase(name);
    return seen;
}

}  // namespace

std::string format_node_set(const NodeSet& set) {
    std::string out = "{";
    bool first = true;
    for (const auto& name : set) {
        if (!first) out += ", ";
        out += name;
        first = false;
    }
    out += "}";
    return out;
}

bool CausalGraph::has_edge(const std::string& from, const std::string& to) const {
    auto it = children_.find(from);
    return it != children_.end() && it->second.count(to) != 0;
}

bool CausalGraph::is_observed(const std::string& name) const {
    auto it = observed_.find(name);
    if (it == observed_.end()) {
        throw Error(ErrorCode::kUnknownVariable, "unknown variable '" + name + "'");
    }
    return it->second;
}

const NodeSet& CausalGraph::parents(const std::string& name) const {
    auto it = parents_.find(name);
    if (it == parents_.end()) {
        throw Error(ErrorCode::kUnknownVariable, "unknown variable '" + name + "'");
    }
    return it->second;
}

const NodeSet& CausalGraph::children(const std::string& name) const {
    auto it = children_.find(name);
    if (it == children_.end()) {
        throw Error(ErrorCode::kUnknownVariable, "unknown variable '" + name + "'");
    }
    return it->second;
}

std::vector<std::pair<std::string, std::string>> CausalGraph::edges() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(edge_count_);
    for (const auto& [parent, kids] : children_) {
        for (const auto& child : kids) out.emplace_back(parent, child);
    }
    return out;
}

NodeSet CausalGraph::observed_nodes() const {
    NodeSet out;
    for (const auto& [name, flag] : observed_) {
        if (flag) out.insert(name);
    }
    return out;
}

NodeSet CausalGraph::latent_nodes() const {
    NodeSet out;
    for (const auto& [name, flag] : observed_) {
        if (!flag) out.insert(name);
    }
    return out;
}

bool CausalGraph::operator==(const CausalGraph& other) const {
    return observed_ == other.observed_ && children_ == other.children_;
}

GraphBuilder& GraphBuilder::node(const std::string& name) {
    if (name.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "node name must be nonempty");
    }
    observed_.try_emplace(name, std::nullopt);
    return *this;
}

GraphBuilder& GraphBuilder::node(const std::string& name, bool observed) {
    node(name);
    auto& flag = observed_[name];
    if (flag.has_value() && *flag != observed) {
        throw Error(ErrorCode::kParse,
                    "conflicting 'observed' attribute for node '" + name + "'");
    }
    flag = observed;
    return *this;
}

GraphBuilder& GraphBuilder::edge(const std::string& from, const std::string& to) {
    if (from == to) {
        throw Error(ErrorCode::kCycle, "self-loop on node '" + from + "'");
    }
    node(from);
    node(to);
    edges_.emplace(from, to);
    return *this;
}

CausalGraph GraphBuilder::build() const {
    CausalGraph g;
    for (const auto& [name, flag] : observed_) {
        g.node_list_.push_back(name);
        g.parents_[name];
        g.children_[name];
        g.observed_[name] = flag.value_or(true);
    }
    for (const auto& [from, to] : edges_) {
        g.children_[from].insert(to);
        g.parents_[to].insert(from);
    }
    g.edge_count_ = edges_.size();

    // Kahn's algorithm; leftover in-degree means a cycle.
    std::map<std::string, std::size_t> in_degree;
    std::deque<std::string> queue;
    for (const auto& name : g.node_list_) {
        in_degree[name] = g.parents_[name].size();
        if (in_degree[name] == 0) queue.push_back(name);
    }
    std::size_t emitted = 0;
    while (!queue.empty()) {
        std::string current = queue.front();
        queue.pop_front();
        ++emitted;
        for (const auto& child : g.children_[current]) {
            if (--in_degree[child] == 0) queue.push_back(child);
        }
    }
    if (emitted != g.node_list_.size()) {
        for (const auto& [name, degree] : in_degree) {
            if (degree > 0) {
                throw Error(ErrorCode::kCycle, "cycle detected involving node '" + name + "'");
            }
        }
    }
    return g;
}

NodeSet relatives(const CausalGraph& g, const std::string& x, Relation relation) {
    require_node(g, x);
    switch (relation) {
        case Relation::kParents:
            return g.parents(x);
        case Relation::kChildren:
            return g.children(x);
        case Relation::kAncestors:
            return reachable(g, {x}, &CausalGraph::parents);
        case Relation::kDescendants:
            return reachable(g, {x}, &CausalGraph::children);
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown relation");
}

NodeSet ancestors_of_set(const CausalGraph& g, const NodeSet& xs) {
    require_nodes(g, xs);
    return reachable(g, xs, &CausalGraph::parents);
}

NodeSet descendants_of_set(const CausalGraph& g, const NodeSet& xs) {
    require_nodes(g, xs);
    return reachable(g, xs, &CausalGraph::children);
}

CausalGraph remove_outgoing_edges(const CausalGraph& g, const NodeSet& xs) {
    require_nodes(g, xs);
    GraphBuilder builder;
    for (const auto& name : g.nodes()) builder.node(name, g.is_observed(name));
    for (const auto& [from, to] : g.edges()) {
        if (xs.count(from) == 0) builder.edge(from, to);
    }
    return builder.build();
}

bool d_separated(const CausalGraph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    require_nodes(g, x);
    require_nodes(g, y);
    require_nodes(g, z);
    for (const auto& name : x) {
        if (y.count(name) || z.count(name)) {
            throw Error(ErrorCode::kInvalidArgument,
                        "d-separation sets must be pairwise disjoint ('" + name + "' repeats)");
        }
    }
    for (const auto& name : y) {
        if (z.count(name)) {
            throw Error(ErrorCode::kInvalidArgument,
                        "d-separation sets must be pairwise disjoint ('" + name + "' repeats)");
        }
    }

    // Ancestral closure of x ∪ y ∪ z.
    NodeSet relevant;
    relevant.insert(x.begin(), x.end());
    relevant.insert(y.begin(), y.end());
    relevant.insert(z.begin(), z.end());
    NodeSet closure = ancestors_of_set(g, relevant);
    closure.insert(relevant.begin(), relevant.end());

    // Moralized undirected adjacency restricted to the closure. Parents of a
    // node in the closure are ancestors, hence inside the closure as well.
    std::map<std::string, NodeSet> adjacency;
    for (const auto& node : closure) adjacency[node];
    for (const auto& node : closure) {
        const NodeSet& pars = g.parents(node);
        for (const auto& p : pars) {
            adjacency[node].insert(p);
            adjacency[p].insert(node);
        }
        for (auto it = pars.begin(); it != pars.end(); ++it) {
            for (auto jt = std::next(it); jt != pars.end(); ++jt) {
                adjacency[*it].insert(*jt);
                adjacency[*jt].insert(*it);
            }
        }
    }

    // Undirected reachability from x avoiding z.
    NodeSet seen;
    std::deque<std::string> frontier;
    for (const auto& name : x) {
        seen.insert(name);
        frontier.push_back(name);
    }
    while (!frontier.empty()) {
        std::string current = frontier.front();
        frontier.pop_front();
        if (y.count(current)) return false;
        for (const auto& next : adjacency[current]) {
            if (z.count(next) || !seen.insert(next).second) continue;
            frontier.push_back(next);
        }
    }
    return true;
}

namespace {

// Generalized back-door validity for set-valued treatment/outcome, used by
// the front-door and mediation leg checks.
bool backdoor_valid_for_sets(const CausalGraph& g, const NodeSet& xs, const NodeSet& ys,
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

struct EffectQuery {
    std::string t, y;
};

EffectQuery check_effect_pair(const CausalGraph& g, const std::string& t, const std::string& y) {
    require_node(g, t);
    require_node(g, y);
    if (t == y) {
        throw Error(ErrorCode::kInvalidArgument, "treatment and outcome must differ");
    }
    return {t, y};
}

// Enumerates subsets of `pool` in (size, lexicographic) order and calls
// visit(subset); stops early when visit returns false.
template <typename Visit>
void for_each_subset_by_size(const std::vector<std::string>& pool, std::size_t max_size,
                             Visit visit) {
    const std::size_t n = pool.size();
    max_size = std::min(max_size, n);
    for (std::size_t size = 0; size <= max_size; ++size) {
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            NodeSet subset;
            for (std::size_t i : idx) subset.insert(pool[i]);
            if (!visit(subset)) return;
            if (size == 0) break;
            // next combination in lexicographic order
            std::size_t i = size;
            while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
}

}  // namespace

bool is_valid_backdoor_set(const CausalGraph& g, const std::string& t, const std::string& y,
                           const NodeSet& z) {
    check_effect_pair(g, t, y);
    if (z.count(t) || z.count(y)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "adjustment set must exclude treatment and outcome");
    }
    return backdoor_valid_for_sets(g, {t}, {y}, z);
}

NodeSet canonical_backdoor_set(const CausalGraph& g, const std::string& t, const std::string& y) {
    check_effect_pair(g, t, y);
    NodeSet pool = relatives(g, t, Relation::kAncestors);
    NodeSet anc_y = relatives(g, y, Relation::kAncestors);
    pool.insert(anc_y.begin(), anc_y.end());
    NodeSet below_t = relatives(g, t, Relation::kDescendants);
    NodeSet out;
    for (const auto& name : pool) {
        if (name == t || name == y) continue;
        if (below_t.count(name)) continue;
        if (!g.is_observed(name)) continue;
        out.insert(name);
    }
    return out;
}

std::vector<NodeSet> enumerate_backdoor_sets(const CausalGraph& g, const std::string& t,
                                             const std::string& y, std::size_t max_size) {
    check_effect_pair(g, t, y);
    // Minimal separating sets live inside the ancestral closure of {t, y},
    // so the canonical set doubles as the candidate pool.
    NodeSet pool_set = canonical_backdoor_set(g, t, y);
    if (pool_set.size() > kExhaustiveSearchCap) {
        std::ostringstream msg;
        msg << "back-door candidate pool has " << pool_set.size() << " variables (cap "
            << kExhaustiveSearchCap << "); supply an adjustment set manually";
        throw Error(ErrorCode::kSearchCap, msg.str());
    }
    std::vector<std::string> pool(pool_set.begin(), pool_set.end());

    std::vector<NodeSet> minimal;
    for_each_subset_by_size(pool, max_size, [&](const NodeSet& subset) {
        for (const auto& kept : minimal) {
            if (std::includes(subset.begin(), subset.end(), kept.begin(), kept.end())) {
                return true;  // a smaller valid set is contained: not minimal
            }
        }
        if (is_valid_backdoor_set(g, t, y, subset)) minimal.push_back(subset);
        return true;
    });

    std::vector<NodeSet> result;
    if (pool_set.size() <= max_size && is_valid_backdoor_set(g, t, y, pool_set)) {
        result.push_back(pool_set);
    }
    for (const auto& set : minimal) {
        if (result.empty() || set != result.front()) result.push_back(set);
    }
    return result;
}

bool is_valid_frontdoor_set(const CausalGraph& g, const std::string& t, const std::string& y,
                            const NodeSet& m) {
    check_effect_pair(g, t, y);
    if (m.empty()) return false;
    require_nodes(g, m);
    if (m.count(t) || m.count(y)) return false;
    for (const auto& name : m) {
        if (!g.is_observed(name)) return false;
    }

    // (a) m intercepts every directed path t -> ... -> y.
    NodeSet seen{t};
    std::deque<std::string> frontier{t};
    while (!frontier.empty()) {
        std::string current = frontier.front();
        frontier.pop_front();
        for (const auto& child : g.children(current)) {
            if (child == y) return false;  // uncut directed path reached y
            if (m.count(child) || !seen.insert(child).second) continue;
            frontier.push_back(child);
        }
    }

    // (b) no unblocked back-door path from t into m.
    if (!backdoor_valid_for_sets(g, {t}, m, {})) return false;
    // (c) t blocks every back-door path from m to y.
    return backdoor_valid_for_sets(g, m, {y}, {t});
}

std::optional<NodeSet> find_frontdoor_set(const CausalGraph& g, const std::string& t,
                                          const std::string& y, std::size_t max_size) {
    check_effect_pair(g, t, y);
    NodeSet pool_set = find_mediation(g, t, y);
    if (pool_set.size() > kExhaustiveSearchCap) {
        // Too many mediators for subset search: check the full set only.
        if (pool_set.size() <= max_size && is_valid_frontdoor_set(g, t, y, pool_set)) {
            return pool_set;
        }
        return std::nullopt;
    }
    std::vector<std::string> pool(pool_set.begin(), pool_set.end());
    std::optional<NodeSet> found;
    for_each_subset_by_size(pool, max_size, [&](const NodeSet& subset) {
        if (subset.empty()) return true;
        if (is_valid_frontdoor_set(g, t, y, subset)) {
            found = subset;
            return false;
        }
        return true;
    });
    return found;
}

bool is_instrument(const CausalGraph& g, const std::string& t, const std::string& y,
                   const std::string& z) {
    check_effect_pair(g, t, y);
    require_node(g, z);
    if (z == t || z == y) return false;
    if (!g.is_observed(z)) return false;
    if (d_separated(g, {z}, {t}, {})) return false;  // relevance
    CausalGraph cut = remove_outgoing_edges(g, {t});
    return d_separated(cut, {z}, {y}, {});  // exclusion
}

NodeSet find_instruments(const CausalGraph& g, const std::string& t, const std::string& y) {
    check_effect_pair(g, t, y);
    NodeSet out;
    CausalGraph cut = remove_outgoing_edges(g, {t});
    for (const auto& name : g.nodes()) {
        if (name == t || name == y || !g.is_observed(name)) continue;
        if (d_separated(g, {name}, {t}, {})) continue;
        if (d_separated(cut, {name}, {y}, {})) out.insert(name);
    }
    return out;
}

NodeSet find_mediation(const CausalGraph& g, const std::string& t, const std::string& y) {
    check_effect_pair(g, t, y);
    NodeSet below_t = relatives(g, t, Relation::kDescendants);
    NodeSet above_y = relatives(g, y, Relation::kAncestors);
    NodeSet out;
    for (const auto& name : below_t) {
        if (name == y || above_y.count(name) == 0) continue;
        if (g.is_observed(name)) out.insert(name);
    }
    return out;
}

CausalGraph augment_with_dataset_columns(const CausalGraph& g,
                                         const std::vector<std::string>& columns,
                                         const std::string& t, const std::string& y) {
    check_effect_pair(g, t, y);
    bool saw_t = false, saw_y = false;
    for (const auto& column : columns) {
        saw_t = saw_t || column == t;
        saw_y = saw_y || column == y;
    }
    if (!saw_t || !saw_y) {
        throw Error(ErrorCode::kInvalidArgument,
                    "dataset columns must include treatment and outcome");
    }

    GraphBuilder builder;
    for (const auto& name : g.nodes()) builder.node(name, g.is_observed(name));
    for (const auto& [from, to] : g.edges()) builder.edge(from, to);
    for (const auto& column : columns) {
        if (g.has_node(column)) {
            if (!g.is_observed(column)) {
                throw Error(ErrorCode::kInvalidArgument,
                            "dataset column '" + column + "' collides with a latent node");
            }
            continue;
        }
        builder.node(column, true);
        builder.edge(column, t);
        builder.edge(column, y);
    }
    return builder.build();
}

}  // namespace causal
