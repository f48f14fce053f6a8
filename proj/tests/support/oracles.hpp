#pragma once

// Test-only oracles, independent of the library's d-separation
// implementation: naive path enumeration with the blocking rules applied
// literally, plus a random-DAG generator for property checks.

#include <random>
#include <string>
#include <vector>

#include "graph.hpp"

namespace causal::testing {

inline bool oracle_path_open(const CausalGraph& g, const std::vector<std::string>& path,
                             const NodeSet& z) {
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        const std::string& prev = path[i - 1];
        const std::string& node = path[i];
        const std::string& next = path[i + 1];
        bool collider = g.has_edge(prev, node) && g.has_edge(next, node);
        if (collider) {
            bool opened = z.count(node) > 0;
            if (!opened) {
                for (const auto& below : relatives(g, node, Relation::kDescendants)) {
                    if (z.count(below)) {
                        opened = true;
                        break;
                    }
                }
            }
            if (!opened) return false;  // blocked collider
        } else if (z.count(node)) {
            return false;  // conditioned chain/fork
        }
    }
    return true;
}

inline bool oracle_connected_from(const CausalGraph& g, std::vector<std::string>& path,
                                  NodeSet& visited, const std::string& target,
                                  const NodeSet& z) {
    const std::string& last = path.back();
    if (last == target) return oracle_path_open(g, path, z);
    NodeSet neighbors = g.parents(last);
    const NodeSet& kids = g.children(last);
    neighbors.insert(kids.begin(), kids.end());
    for (const auto& next : neighbors) {
        if (visited.count(next)) continue;
        visited.insert(next);
        path.push_back(next);
        bool open = oracle_connected_from(g, path, visited, target, z);
        path.pop_back();
        visited.erase(next);
        if (open) return true;
    }
    return false;
}

// True iff every simple path between x and y is blocked by z.
inline bool oracle_d_separated(const CausalGraph& g, const std::string& x, const std::string& y,
                               const NodeSet& z) {
    std::vector<std::string> path{x};
    NodeSet visited{x};
    return !oracle_connected_from(g, path, visited, y, z);
}

// Random DAG over 2..max_nodes nodes named from A..; a random permutation
// fixes the topological order and each forward pair becomes an edge with
// probability edge_prob. latent_prob marks nodes unobserved.
inline CausalGraph random_dag(std::mt19937_64& engine, int max_nodes = 5,
                              double edge_prob = 0.45, double latent_prob = 0.0) {
    std::uniform_int_distribution<int> node_count(2, max_nodes);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    int n = node_count(engine);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('A' + i)));
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), engine);

    GraphBuilder builder;
    for (const auto& name : names) builder.node(name, uniform(engine) >= latent_prob);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (uniform(engine) < edge_prob) {
                builder.edge(names[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])],
                             names[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])]);
            }
        }
    }
    return builder.build();
}

// All subsets of the given pool, smallest first.
inline std::vector<NodeSet> all_subsets(const std::vector<std::string>& pool) {
    std::vector<NodeSet> subsets{{}};
    for (const auto& name : pool) {
        std::size_t existing = subsets.size();
        for (std::size_t i = 0; i < existing; ++i) {
            NodeSet grown = subsets[i];
            grown.insert(name);
            subsets.push_back(std::move(grown));
        }
    }
    std::sort(subsets.begin(), subsets.end(), [](const NodeSet& a, const NodeSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return subsets;
}

}  // namespace causal::testing
