#pragma once

#include "mocheck/mdp.hpp"

#include <cstddef>
#include <vector>

namespace mocheck {

using Adjacency = std::vector<std::vector<std::size_t>>;

struct SccDecomposition {
    std::vector<std::size_t> component;                // component id per node
    std::vector<std::vector<std::size_t>> components;  // reverse topological order: sinks first
};

/// Tarjan's algorithm (iterative). Nodes with `active[v] == false` are ignored when `active` is nonempty.
SccDecomposition strongly_connected_components(const Adjacency& graph, const std::vector<bool>& active = {});

/// Nodes from which some node in `targets` is reachable (targets included).
std::vector<bool> backward_reachable(const Adjacency& graph, const std::vector<bool>& targets);
/// Nodes reachable from `sources`.
std::vector<bool> forward_reachable(const Adjacency& graph, const std::vector<std::size_t>& sources);

/// Sub-structure of an MDP closed under its retained actions and strongly connected through them.
struct EndComponent {
    std::vector<StateId> states;                    // sorted
    std::vector<std::vector<std::size_t>> actions;  // retained action indices, parallel to `states`

    bool contains(StateId state) const;
    const std::vector<std::size_t>& actions_of(StateId state) const;
};

/// Maximal end components of the sub-MDP induced by `allowed_states` (all states when empty),
/// optionally restricted to `allowed_actions[state]` (all actions when empty). Iterative SCC refinement.
std::vector<EndComponent> maximal_end_components(const Mdp& mdp, const std::vector<bool>& allowed_states = {},
                                                 const std::vector<std::vector<std::size_t>>& allowed_actions = {});

/// One-step successor graph of the MDP over all actions.
Adjacency successor_graph(const Mdp& mdp);

}  // namespace mocheck
