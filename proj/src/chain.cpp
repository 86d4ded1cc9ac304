#include "mocheck/chain.hpp"

#include "mocheck/error.hpp"
#include "mocheck/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace mocheck {
namespace {

void check_row(const SparseRow& row, std::size_t index) {
    Rational total = 0;
    for (const auto& [col, p] : row) {
        if (p < 0) throw Error("induced chain row " + std::to_string(index) + " has a negative entry");
        total += p;
    }
    if (total != 1) throw Error("induced chain row " + std::to_string(index) + " sums to " + to_string(total));
}

Adjacency chain_graph(const MarkovChain& chain) {
    Adjacency graph(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) {
        for (const auto& [j, p] : chain.rows[i]) {
            if (p > 0) graph[i].push_back(j);
        }
    }
    return graph;
}

/// Solves (I - A) X = B in place for dense square A; B has `cols` columns. Gauss-Jordan with
/// first-nonzero pivoting (exact arithmetic needs no numerical pivoting).
void solve_dense(std::vector<std::vector<Rational>>& m, std::vector<std::vector<Rational>>& rhs) {
    const std::size_t n = m.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) throw Error("internal error: singular first-passage system");
        std::swap(m[pivot], m[col]);
        std::swap(rhs[pivot], rhs[col]);
        Rational inv = 1 / m[col][col];
        for (std::size_t k = col; k < n; ++k) m[col][k] *= inv;
        for (auto& r : rhs[col]) r *= inv;
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col] == 0) continue;
            Rational f = m[row][col];
            for (std::size_t k = col; k < n; ++k) {
                if (m[col][k] != 0) m[row][k] -= f * m[col][k];
            }
            for (std::size_t k = 0; k < rhs[row].size(); ++k) {
                if (rhs[col][k] != 0) rhs[row][k] -= f * rhs[col][k];
            }
        }
    }
}

}  // namespace

InducedChain induced_chain(const Mdp& mdp, const MemorylessStrategy& strategy) {
    strategy.validate(mdp);
    InducedChain chain;
    const std::size_t n = mdp.num_states();
    chain.rows.resize(n);
    chain.states.resize(n);
    for (StateId v = 0; v < n; ++v) {
        chain.states[v] = {v, 0};
        SparseRow& row = chain.rows[v];
        for (const auto& [a, weight] : strategy.choice[v]) {
            for (const auto& t : mdp.state(v).actions[a].transitions) accumulate(row, t.target, weight * t.probability);
        }
        check_row(row, v);
    }
    chain.initial = mdp.initial().mass;
    return chain;
}

InducedChain induced_chain(const Mdp& mdp, const FiniteMemoryStrategy& strategy) {
    strategy.validate(mdp);
    InducedChain chain;
    std::map<std::pair<StateId, std::size_t>, std::size_t> index;
    std::deque<std::size_t> work;
    auto intern = [&](StateId v, std::size_t mode) {
        auto [it, inserted] = index.emplace(std::make_pair(v, mode), chain.states.size());
        if (inserted) {
            chain.states.push_back({v, mode});
            chain.rows.emplace_back();
            work.push_back(it->second);
        }
        return it->second;
    };
    for (const auto& [v, p] : mdp.initial().mass) {
        for (const auto& [mode, q] : strategy.start_distribution(v)) accumulate(chain.initial, intern(v, mode), p * q);
    }
    while (!work.empty()) {
        std::size_t i = work.front();
        work.pop_front();
        auto [v, mode] = chain.states[i];
        const auto& dist = strategy.at(v, mode);
        if (dist.empty()) {
            throw ModelError("strategy undefined at reachable (" + mdp.state(v).name + ", mode " + std::to_string(mode) + ")");
        }
        SparseRow row;
        for (const auto& [a, weight] : dist) {
            for (const auto& t : mdp.state(v).actions[a].transitions) {
                for (const auto& [next, q] : strategy.next_modes(v, mode, a, t.target)) {
                    accumulate(row, intern(t.target, next), weight * t.probability * q);
                }
            }
        }
        check_row(row, i);
        chain.rows[i] = std::move(row);
    }
    return chain;
}

std::vector<std::vector<Rational>> absorption_probabilities(const MarkovChain& chain, const std::vector<std::size_t>& cls,
                                                            std::size_t num_classes) {
    const std::size_t n = chain.size();
    std::vector<std::vector<Rational>> value(n, std::vector<Rational>(num_classes));
    std::vector<bool> classed(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (cls[i] != npos) {
            classed[i] = true;
            value[i][cls[i]] = 1;
        }
    }
    Adjacency graph = chain_graph(chain);
    std::vector<bool> can_reach = backward_reachable(graph, classed);
    std::vector<bool> unknown(n, false);
    for (std::size_t i = 0; i < n; ++i) unknown[i] = can_reach[i] && !classed[i];
    Adjacency restricted(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!unknown[i]) continue;
        for (std::size_t j : graph[i]) {
            if (unknown[j]) restricted[i].push_back(j);
        }
    }
    // Sinks first, so every successor outside the current component is already solved.
    SccDecomposition scc = strongly_connected_components(restricted, unknown);
    std::vector<std::size_t> local(n, npos);
    for (const auto& members : scc.components) {
        const std::size_t size = members.size();
        for (std::size_t k = 0; k < size; ++k) local[members[k]] = k;
        std::vector<std::vector<Rational>> m(size, std::vector<Rational>(size));
        std::vector<std::vector<Rational>> rhs(size, std::vector<Rational>(num_classes));
        for (std::size_t k = 0; k < size; ++k) {
            std::size_t i = members[k];
            m[k][k] = 1;
            for (const auto& [j, p] : chain.rows[i]) {
                if (unknown[j] && scc.component[j] == scc.component[i]) {
                    m[k][local[j]] -= p;
                } else {
                    for (std::size_t c = 0; c < num_classes; ++c) {
                        if (value[j][c] != 0) rhs[k][c] += p * value[j][c];
                    }
                }
            }
        }
        solve_dense(m, rhs);
        for (std::size_t k = 0; k < size; ++k) value[members[k]] = std::move(rhs[k]);
    }
    return value;
}

std::vector<Rational> hitting_probabilities(const MarkovChain& chain, const std::vector<bool>& target) {
    std::vector<std::size_t> cls(chain.size(), npos);
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (target[i]) cls[i] = 0;
    }
    auto table = absorption_probabilities(chain, cls, 1);
    std::vector<Rational> out(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) out[i] = table[i][0];
    return out;
}

Rational expectation(const SparseRow& distribution, const std::vector<Rational>& values) {
    Rational total = 0;
    for (const auto& [i, p] : distribution) total += p * values[i];
    return total;
}

std::vector<Rational> reach_probabilities(const InducedChain& chain, const std::vector<std::vector<StateId>>& targets) {
    std::vector<Rational> out;
    out.reserve(targets.size());
    for (const auto& target : targets) {
        std::vector<bool> mask(chain.size(), false);
        for (std::size_t i = 0; i < chain.size(); ++i) {
            mask[i] = std::find(target.begin(), target.end(), chain.states[i].state) != target.end();
        }
        out.push_back(expectation(chain.initial, hitting_probabilities(chain, mask)));
    }
    return out;
}

BsccAnalysis bscc_analysis(const MarkovChain& chain) {
    const std::size_t n = chain.size();
    Adjacency graph = chain_graph(chain);
    SccDecomposition scc = strongly_connected_components(graph);
    BsccAnalysis out;
    out.bscc_of.assign(n, npos);
    for (const auto& members : scc.components) {
        bool bottom = true;
        for (std::size_t i : members) {
            for (std::size_t j : graph[i]) {
                if (scc.component[j] != scc.component[i]) bottom = false;
            }
        }
        if (!bottom) continue;
        for (std::size_t i : members) out.bscc_of[i] = out.bsccs.size();
        out.bsccs.push_back(members);
    }
    std::sort(out.bsccs.begin(), out.bsccs.end());
    for (std::size_t b = 0; b < out.bsccs.size(); ++b) {
        for (std::size_t i : out.bsccs[b]) out.bscc_of[i] = b;
    }
    auto table = absorption_probabilities(chain, out.bscc_of, out.bsccs.size());
    out.absorption.assign(out.bsccs.size(), 0);
    for (const auto& [i, p] : chain.initial) {
        for (std::size_t b = 0; b < out.bsccs.size(); ++b) out.absorption[b] += p * table[i][b];
    }
    return out;
}

}  // namespace mocheck
