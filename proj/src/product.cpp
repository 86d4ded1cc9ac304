#include "mocheck/product.hpp"

#include "mocheck/chain.hpp"
#include "mocheck/error.hpp"

#include <deque>
#include <map>

namespace mocheck {
namespace {

std::string product_name(const std::string& source, const std::vector<std::size_t>& q) {
    std::string name = source + "|";
    for (std::size_t i = 0; i < q.size(); ++i) name += (i ? "," : "") + std::to_string(q[i]);
    return name;
}

std::vector<std::size_t> step_all(const std::vector<RabinAutomaton>& automata, const std::vector<std::size_t>& q,
                                  const std::set<std::string>& labels) {
    std::vector<std::size_t> next(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) next[i] = automata[i].next(q[i], labels);
    return next;
}

std::vector<std::size_t> initial_tuple(const std::vector<RabinAutomaton>& automata) {
    std::vector<std::size_t> q;
    for (const auto& a : automata) q.push_back(a.initial());
    return q;
}

}  // namespace

std::vector<std::size_t> ProductMdp::step(const std::vector<std::size_t>& automaton_states,
                                          const std::set<std::string>& labels) const {
    return step_all(automata, automaton_states, labels);
}

StateId ProductMdp::find(StateId source_state, const std::vector<std::size_t>& automaton_states) const {
    for (StateId p = 0; p < source.size(); ++p) {
        if (source[p] == source_state && automaton_state[p] == automaton_states) return p;
    }
    return npos;
}

ProductMdp product(const Mdp& mdp, std::vector<RabinAutomaton> automata) {
    for (const auto& a : automata) {
        for (const auto& p : a.propositions()) {
            if (!mdp.propositions().count(p)) {
                throw ModelError("alphabet mismatch: automaton proposition '" + p + "' is not declared in the model");
            }
        }
    }
    using Key = std::pair<StateId, std::vector<std::size_t>>;
    std::map<Key, std::string> names;
    std::deque<Key> queue;
    MdpBuilder builder;
    for (const auto& p : mdp.propositions()) builder.add_proposition(p);
    builder.add_state(kDummyState);
    auto visit = [&](StateId x, std::vector<std::size_t> q) -> const std::string& {
        Key key{x, std::move(q)};
        auto it = names.find(key);
        if (it != names.end()) return it->second;
        std::string name = product_name(mdp.state(x).name, key.second);
        builder.add_state(name, mdp.state(x).labels);
        queue.push_back(key);
        return names.emplace(key, name).first->second;
    };
    std::vector<std::size_t> q0 = initial_tuple(automata);
    for (const auto& [v, p] : mdp.initial().mass) {
        const std::string& name = visit(v, step_all(automata, q0, mdp.state(v).labels));
        builder.add_transition(kDummyState, kDummyAction, name, p);
    }
    while (!queue.empty()) {
        Key key = queue.front();
        queue.pop_front();
        std::string from = names.at(key);
        for (const auto& action : mdp.state(key.first).actions) {
            for (const auto& t : action.transitions) {
                std::string to = visit(t.target, step_all(automata, key.second, mdp.state(t.target).labels));
                builder.add_transition(from, action.name, to, t.probability);
            }
        }
    }
    builder.set_initial(kDummyState);

    ProductMdp result{builder.build(), {}, {}, 0, std::move(automata)};
    std::size_t n = result.mdp.num_states();
    result.source.assign(n, npos);
    result.automaton_state.assign(n, std::vector<std::size_t>(result.automata.size(), 0));
    for (const auto& [key, name] : names) {
        StateId id = result.mdp.state_id(name);
        result.source[id] = key.first;
        result.automaton_state[id] = key.second;
    }
    result.initial = result.mdp.state_id(kDummyState);
    result.automaton_state[result.initial] = q0;
    return result;
}

std::vector<Rational> omega_regular_probabilities(const Mdp& mdp, const FiniteMemoryStrategy& strategy,
                                                  const std::vector<RabinAutomaton>& automata) {
    InducedChain chain = induced_chain(mdp, strategy);
    using Key = std::pair<std::size_t, std::vector<std::size_t>>;
    std::map<Key, std::size_t> index;
    std::vector<Key> keys;
    MarkovChain joint;
    auto visit = [&](std::size_t c, std::vector<std::size_t> q) {
        Key key{c, std::move(q)};
        auto [it, inserted] = index.emplace(key, keys.size());
        if (inserted) keys.push_back(it->first);
        return it->second;
    };
    std::vector<std::size_t> q0 = initial_tuple(automata);
    for (const auto& [c, p] : chain.initial) {
        std::size_t j = visit(c, step_all(automata, q0, mdp.state(chain.states[c].state).labels));
        accumulate(joint.initial, j, p);
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        Key key = keys[i];
        SparseRow row;
        for (const auto& [c, p] : chain.rows[key.first]) {
            std::size_t j = visit(c, step_all(automata, key.second, mdp.state(chain.states[c].state).labels));
            accumulate(row, j, p);
        }
        joint.rows.push_back(std::move(row));
    }
    BsccAnalysis analysis = bscc_analysis(joint);
    std::vector<Rational> result(automata.size(), 0);
    for (std::size_t b = 0; b < analysis.bsccs.size(); ++b) {
        for (std::size_t i = 0; i < automata.size(); ++i) {
            std::vector<bool> inf(automata[i].num_states(), false);
            for (std::size_t s : analysis.bsccs[b]) inf[keys[s].second[i]] = true;
            if (automata[i].accepts_infinity_set(inf)) result[i] += analysis.absorption[b];
        }
    }
    return result;
}

FiniteMemoryStrategy lift_product_strategy(const ProductMdp& product, const Mdp& source,
                                           const FiniteMemoryStrategy& strategy) {
    const Mdp& pm = product.mdp;
    InducedChain chain = induced_chain(pm, strategy);
    std::map<std::pair<std::vector<std::size_t>, std::size_t>, std::size_t> mode_ids;
    auto mode_of = [&](StateId p, std::size_t m) {
        auto [it, inserted] = mode_ids.emplace(std::make_pair(product.automaton_state[p], m), mode_ids.size());
        return it->second;
    };
    for (const auto& cs : chain.states) {
        if (cs.state != product.initial) mode_of(cs.state, cs.mode);
    }
    FiniteMemoryStrategy lifted(source.num_states(), std::max<std::size_t>(mode_ids.size(), 1));
    auto source_action = [&](StateId p, std::size_t a) {
        return *source.find_action(product.source[p], pm.state(p).actions[a].name);
    };
    for (const auto& cs : chain.states) {
        StateId p = cs.state;
        if (p == product.initial) continue;
        StateId x = product.source[p];
        std::size_t mode = mode_of(p, cs.mode);
        ActionDistribution& choice = lifted.at(x, mode);
        choice.clear();
        for (const auto& [a, w] : strategy.at(p, cs.mode)) {
            std::size_t sa = source_action(p, a);
            accumulate(choice, sa, w);
            for (const auto& t : pm.state(p).actions[a].transitions) {
                auto& update = lifted.update[{x, mode, sa, product.source[t.target]}];
                if (!update.empty()) continue;
                for (const auto& [next, w2] : strategy.next_modes(p, cs.mode, a, t.target)) {
                    accumulate(update, mode_of(t.target, next), w2);
                }
            }
        }
    }
    for (const auto& [m0, w] : strategy.start_distribution(product.initial)) {
        for (const auto& t : pm.state(product.initial).actions[0].transitions) {
            for (const auto& [m, w2] : strategy.next_modes(product.initial, m0, 0, t.target)) {
                accumulate(lifted.start_modes[product.source[t.target]], mode_of(t.target, m), w * w2);
            }
        }
    }
    return lifted;
}

}  // namespace mocheck
