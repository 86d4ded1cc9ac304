#include "mocheck/graph.hpp"

#include <algorithm>
#include <limits>

namespace mocheck {

SccDecomposition strongly_connected_components(const Adjacency& graph, const std::vector<bool>& active) {
    const std::size_t n = graph.size();
    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
    SccDecomposition out;
    out.component.assign(n, npos);
    std::vector<std::size_t> index(n, unvisited);
    std::vector<std::size_t> low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> call;  // node, next edge position
    std::size_t counter = 0;
    auto is_active = [&](std::size_t v) { return active.empty() || active[v]; };

    for (std::size_t root = 0; root < n; ++root) {
        if (!is_active(root) || index[root] != unvisited) continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos < graph[v].size()) {
                std::size_t w = graph[v][pos++];
                if (!is_active(w)) continue;
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            std::size_t done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                std::vector<std::size_t> members;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    out.component[w] = out.components.size();
                    members.push_back(w);
                } while (w != done);
                std::sort(members.begin(), members.end());
                out.components.push_back(std::move(members));
            }
        }
    }
    return out;
}

std::vector<bool> backward_reachable(const Adjacency& graph, const std::vector<bool>& targets) {
    const std::size_t n = graph.size();
    Adjacency reverse(n);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t w : graph[v]) reverse[w].push_back(v);
    }
    std::vector<bool> seen(targets);
    seen.resize(n, false);
    std::vector<std::size_t> work;
    for (std::size_t v = 0; v < n; ++v) {
        if (seen[v]) work.push_back(v);
    }
    while (!work.empty()) {
        std::size_t w = work.back();
        work.pop_back();
        for (std::size_t v : reverse[w]) {
            if (!seen[v]) {
                seen[v] = true;
                work.push_back(v);
            }
        }
    }
    return seen;
}

std::vector<bool> forward_reachable(const Adjacency& graph, const std::vector<std::size_t>& sources) {
    std::vector<bool> seen(graph.size(), false);
    std::vector<std::size_t> work;
    for (std::size_t s : sources) {
        if (!seen[s]) {
            seen[s] = true;
            work.push_back(s);
        }
    }
    while (!work.empty()) {
        std::size_t v = work.back();
        work.pop_back();
        for (std::size_t w : graph[v]) {
            if (!seen[w]) {
                seen[w] = true;
                work.push_back(w);
            }
        }
    }
    return seen;
}

bool EndComponent::contains(StateId state) const { return std::binary_search(states.begin(), states.end(), state); }

const std::vector<std::size_t>& EndComponent::actions_of(StateId state) const {
    auto it = std::lower_bound(states.begin(), states.end(), state);
    return actions.at(static_cast<std::size_t>(it - states.begin()));
}

Adjacency successor_graph(const Mdp& mdp) {
    Adjacency graph(mdp.num_states());
    for (StateId v = 0; v < mdp.num_states(); ++v) {
        for (const auto& action : mdp.state(v).actions) {
            for (const auto& t : action.transitions) graph[v].push_back(t.target);
        }
        std::sort(graph[v].begin(), graph[v].end());
        graph[v].erase(std::unique(graph[v].begin(), graph[v].end()), graph[v].end());
    }
    return graph;
}

std::vector<EndComponent> maximal_end_components(const Mdp& mdp, const std::vector<bool>& allowed_states,
                                                 const std::vector<std::vector<std::size_t>>& allowed_actions) {
    const std::size_t n = mdp.num_states();
    std::vector<bool> alive(n, true);
    if (!allowed_states.empty()) alive = allowed_states;
    std::vector<std::vector<std::size_t>> act(n);
    for (StateId v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        if (allowed_actions.empty()) {
            for (std::size_t a = 0; a < mdp.state(v).actions.size(); ++a) act[v].push_back(a);
        } else {
            act[v] = allowed_actions[v];
        }
    }

    bool changed = true;
    SccDecomposition scc;
    while (changed) {
        changed = false;
        // Drop actions leaving the alive set and states without actions until stable.
        bool pruned = true;
        while (pruned) {
            pruned = false;
            for (StateId v = 0; v < n; ++v) {
                if (!alive[v]) continue;
                auto& acts = act[v];
                auto keep_end = std::remove_if(acts.begin(), acts.end(), [&](std::size_t a) {
                    for (const auto& t : mdp.state(v).actions[a].transitions) {
                        if (!alive[t.target]) return true;
                    }
                    return false;
                });
                if (keep_end != acts.end()) {
                    acts.erase(keep_end, acts.end());
                    pruned = true;
                }
                if (acts.empty()) {
                    alive[v] = false;
                    pruned = true;
                }
            }
        }
        Adjacency graph(n);
        for (StateId v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            for (std::size_t a : act[v]) {
                for (const auto& t : mdp.state(v).actions[a].transitions) graph[v].push_back(t.target);
            }
        }
        scc = strongly_connected_components(graph, alive);
        for (StateId v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            auto& acts = act[v];
            auto keep_end = std::remove_if(acts.begin(), acts.end(), [&](std::size_t a) {
                for (const auto& t : mdp.state(v).actions[a].transitions) {
                    if (scc.component[t.target] != scc.component[v]) return true;
                }
                return false;
            });
            if (keep_end != acts.end()) {
                acts.erase(keep_end, acts.end());
                changed = true;
            }
            if (acts.empty()) {
                alive[v] = false;
                changed = true;
            }
        }
    }

    std::vector<EndComponent> out;
    for (const auto& members : scc.components) {
        EndComponent ec;
        for (std::size_t v : members) {
            if (!alive[v]) continue;
            ec.states.push_back(v);
            auto acts = act[v];
            std::sort(acts.begin(), acts.end());
            ec.actions.push_back(std::move(acts));
        }
        if (!ec.states.empty()) out.push_back(std::move(ec));
    }
    std::sort(out.begin(), out.end(), [](const EndComponent& a, const EndComponent& b) { return a.states < b.states; });
    return out;
}

}  // namespace mocheck
