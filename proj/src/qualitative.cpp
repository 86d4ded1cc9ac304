#include "mocheck/qualitative.hpp"

#include "mocheck/error.hpp"

#include <algorithm>

namespace mocheck {
namespace {

bool subsumes(const EndComponent& big, const EndComponent& small) {
    for (std::size_t i = 0; i < small.states.size(); ++i) {
        if (!big.contains(small.states[i])) return false;
        const auto& acts = big.actions_of(small.states[i]);
        for (std::size_t a : small.actions[i]) {
            if (!std::binary_search(acts.begin(), acts.end(), a)) return false;
        }
    }
    return true;
}

// Actions of `v` whose successors all lie in `inside`.
std::vector<std::size_t> closed_actions(const Mdp& mdp, StateId v, const std::vector<bool>& inside) {
    std::vector<std::size_t> out;
    const auto& actions = mdp.state(v).actions;
    for (std::size_t a = 0; a < actions.size(); ++a) {
        bool closed = std::all_of(actions[a].transitions.begin(), actions[a].transitions.end(),
                                  [&](const Transition& t) { return inside[t.target]; });
        if (closed) out.push_back(a);
    }
    return out;
}

// Attractor ranking towards `goal` inside the closed region `region`; returns the chosen action per
// state (npos on goal states and outside the region).
std::vector<std::size_t> attractor_actions(const Mdp& mdp, const std::vector<bool>& region, const std::vector<bool>& goal) {
    std::size_t n = mdp.num_states();
    std::vector<bool> ranked(n, false);
    std::vector<std::size_t> choice(n, npos);
    for (StateId v = 0; v < n; ++v) ranked[v] = region[v] && goal[v];
    bool progress = true;
    while (progress) {
        progress = false;
        std::vector<StateId> newly;
        for (StateId v = 0; v < n; ++v) {
            if (!region[v] || ranked[v]) continue;
            for (std::size_t a : closed_actions(mdp, v, region)) {
                const auto& ts = mdp.state(v).actions[a].transitions;
                if (std::any_of(ts.begin(), ts.end(), [&](const Transition& t) { return ranked[t.target]; })) {
                    choice[v] = a;
                    newly.push_back(v);
                    break;
                }
            }
        }
        for (StateId v : newly) ranked[v] = true;
        progress = !newly.empty();
    }
    return choice;
}

ActionDistribution uniform(const std::vector<std::size_t>& actions) {
    ActionDistribution d;
    Rational p(1, static_cast<unsigned long>(actions.size()));
    for (std::size_t a : actions) d.emplace_back(a, p);
    return d;
}

}  // namespace

std::vector<EndComponent> good_end_components(const ProductMdp& product, const std::vector<std::size_t>& subset) {
    const Mdp& mdp = product.mdp;
    std::size_t n = mdp.num_states();
    std::vector<EndComponent> found;
    std::vector<std::size_t> choice(subset.size(), 0);
    while (true) {
        std::vector<bool> allowed(n, true);
        for (StateId v = 0; v < n; ++v) {
            for (std::size_t i = 0; i < subset.size(); ++i) {
                if (product.in_avoid(v, subset[i], choice[i])) allowed[v] = false;
            }
        }
        for (auto& ec : maximal_end_components(mdp, allowed)) {
            bool good = true;
            for (std::size_t i = 0; i < subset.size() && good; ++i) {
                good = std::any_of(ec.states.begin(), ec.states.end(),
                                   [&](StateId v) { return product.in_repeat(v, subset[i], choice[i]); });
            }
            if (good) found.push_back(std::move(ec));
        }
        std::size_t i = 0;
        for (; i < subset.size(); ++i) {
            if (++choice[i] < product.automata[subset[i]].pairs().size()) break;
            choice[i] = 0;
        }
        if (i == subset.size()) break;
    }
    std::sort(found.begin(), found.end(), [](const EndComponent& a, const EndComponent& b) {
        return std::tie(a.states, a.actions) < std::tie(b.states, b.actions);
    });
    std::vector<EndComponent> maximal;
    for (std::size_t i = 0; i < found.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < found.size() && !dominated; ++j) {
            if (i == j) continue;
            bool same = found[i].states == found[j].states && found[i].actions == found[j].actions;
            dominated = same ? j < i : subsumes(found[j], found[i]);
        }
        if (!dominated) maximal.push_back(found[i]);
    }
    return maximal;
}

std::vector<bool> almost_sure_reach(const Mdp& mdp, const std::vector<bool>& goal) {
    std::size_t n = mdp.num_states();
    std::vector<bool> region(n, true);
    while (true) {
        Adjacency forward(n);
        for (StateId v = 0; v < n; ++v) {
            if (!region[v]) continue;
            for (std::size_t a : closed_actions(mdp, v, region)) {
                for (const auto& t : mdp.state(v).actions[a].transitions) forward[v].push_back(t.target);
            }
        }
        std::vector<bool> seeds(n, false);
        for (StateId v = 0; v < n; ++v) seeds[v] = region[v] && goal[v];
        std::vector<bool> next = backward_reachable(forward, seeds);
        for (StateId v = 0; v < n; ++v) next[v] = next[v] && region[v];
        if (next == region) return region;
        region = std::move(next);
    }
}

bool TargetSet::empty() const { return std::none_of(states.begin(), states.end(), [](bool b) { return b; }); }

TargetSet compute_target_set(const ProductMdp& product, std::vector<std::size_t> subset) {
    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
    TargetSet target;
    target.subset = subset;
    target.good = good_end_components(product, subset);
    std::vector<bool> goal(product.mdp.num_states(), false);
    for (const auto& ec : target.good) {
        for (StateId v : ec.states) goal[v] = true;
    }
    target.states = almost_sure_reach(product.mdp, goal);
    return target;
}

FiniteMemoryStrategy synthesize_mu(const ProductMdp& product, const TargetSet& target) {
    const Mdp& mdp = product.mdp;
    std::size_t n = mdp.num_states();
    FiniteMemoryStrategy mu(n, 1 + target.good.size());
    std::vector<std::size_t> home(n, npos);
    for (std::size_t j = target.good.size(); j-- > 0;) {
        for (StateId v : target.good[j].states) home[v] = j;
    }
    std::vector<bool> goal(n, false);
    for (StateId v = 0; v < n; ++v) goal[v] = home[v] != npos;
    std::vector<std::size_t> attractor = attractor_actions(mdp, target.states, goal);
    for (StateId v = 0; v < n; ++v) {
        if (!target.states[v]) continue;
        if (home[v] != npos) {
            std::size_t j = home[v];
            mu.at(v, 0) = uniform(target.good[j].actions_of(v));
            for (const auto& [a, p] : mu.at(v, 0)) {
                for (const auto& t : mdp.state(v).actions[a].transitions) {
                    mu.update[{v, 0, a, t.target}] = {{1 + j, Rational(1)}};
                }
            }
        } else {
            if (attractor[v] == npos) throw Error("internal error: target state without attractor action");
            mu.at(v, 0) = {{attractor[v], Rational(1)}};
        }
    }
    for (std::size_t j = 0; j < target.good.size(); ++j) {
        for (StateId v : target.good[j].states) mu.at(v, 1 + j) = uniform(target.good[j].actions_of(v));
    }
    return mu;
}

QualitativeResult decide_qualitative(const Mdp& mdp, const std::vector<RabinAutomaton>& automata,
                                     const QualitativeQuery& query) {
    for (std::size_t i : query.sure) {
        if (i >= automata.size()) throw ArgumentError("qualitative query refers to an unknown property");
    }
    for (std::size_t i : query.positive) {
        if (i >= automata.size()) throw ArgumentError("qualitative query refers to an unknown property");
    }
    QualitativeResult result{false, product(mdp, automata), {}, std::nullopt, std::nullopt};
    const ProductMdp& prod = result.product;
    const Mdp& pm = prod.mdp;
    std::size_t n = pm.num_states();

    // Options for phase 2: mu_Phi (only when Phi is nonempty) and mu_{Phi + psi_i}.
    std::vector<TargetSet> options;
    TargetSet phi = compute_target_set(prod, query.sure);
    std::vector<TargetSet> with_psi;
    for (std::size_t psi : query.positive) {
        std::vector<std::size_t> r = query.sure;
        r.push_back(psi);
        with_psi.push_back(compute_target_set(prod, r));
    }

    std::vector<bool> bad(n, false);
    std::vector<std::vector<bool>> allowed(n);
    for (StateId v = 0; v < n; ++v) allowed[v].assign(pm.state(v).actions.size(), true);
    bool changed = true;
    while (changed) {
        changed = false;
        // 3(a): states that cannot reach T_Phi
        Adjacency forward(n);
        for (StateId v = 0; v < n; ++v) {
            if (bad[v]) continue;
            for (std::size_t a = 0; a < allowed[v].size(); ++a) {
                if (!allowed[v][a]) continue;
                for (const auto& t : pm.state(v).actions[a].transitions) forward[v].push_back(t.target);
            }
        }
        std::vector<bool> seeds(n, false);
        for (StateId v = 0; v < n; ++v) seeds[v] = !bad[v] && phi.states[v];
        std::vector<bool> reaches = backward_reachable(forward, seeds);
        for (StateId v = 0; v < n; ++v) {
            if (!bad[v] && !reaches[v]) {
                bad[v] = true;
                changed = true;
            }
        }
        // 3(b) and 3(c)
        for (StateId v = 0; v < n; ++v) {
            if (bad[v]) continue;
            bool any = false;
            for (std::size_t a = 0; a < allowed[v].size(); ++a) {
                if (!allowed[v][a]) continue;
                const auto& ts = pm.state(v).actions[a].transitions;
                if (std::any_of(ts.begin(), ts.end(), [&](const Transition& t) { return bad[t.target]; })) {
                    allowed[v][a] = false;
                    changed = true;
                } else {
                    any = true;
                }
            }
            if (!any) {
                bad[v] = true;
                changed = true;
            }
        }
    }

    result.surviving.assign(n, false);
    if (bad[prod.initial]) return result;
    Adjacency forward(n);
    for (StateId v = 0; v < n; ++v) {
        if (bad[v]) continue;
        for (std::size_t a = 0; a < allowed[v].size(); ++a) {
            if (!allowed[v][a]) continue;
            for (const auto& t : pm.state(v).actions[a].transitions) forward[v].push_back(t.target);
        }
    }
    result.surviving = forward_reachable(forward, {prod.initial});
    for (const auto& t : with_psi) {
        bool hit = false;
        for (StateId v = 0; v < n; ++v) hit = hit || (result.surviving[v] && t.states[v]);
        if (!hit) return result;
    }
    result.satisfiable = true;

    if (!query.sure.empty()) options.push_back(phi);
    for (auto& t : with_psi) options.push_back(std::move(t));
    std::vector<FiniteMemoryStrategy> mus;
    std::vector<std::size_t> offset;
    std::size_t modes = 1;
    for (const auto& o : options) {
        mus.push_back(synthesize_mu(prod, o));
        offset.push_back(modes);
        modes += mus.back().num_modes;
    }
    FiniteMemoryStrategy sigma(n, modes);
    // Phase 1 leaves with probability 1/2 at T-states, split uniformly among the available options;
    // with probability 1 when every option is available, since staying cannot open a new one.
    auto switch_distribution = [&](StateId v) {
        std::vector<std::size_t> available;
        for (std::size_t o = 0; o < options.size(); ++o) {
            if (options[o].states[v]) available.push_back(o);
        }
        ModeDistribution d;
        if (available.empty()) return d;
        Rational leave = available.size() == options.size() ? Rational(1) : Rational(1, 2);
        if (leave < 1) d.emplace_back(0, 1 - leave);
        for (std::size_t o : available) d.emplace_back(offset[o], leave / static_cast<unsigned long>(available.size()));
        return d;
    };
    for (StateId v = 0; v < n; ++v) {
        if (!result.surviving[v]) continue;
        std::vector<std::size_t> acts;
        for (std::size_t a = 0; a < allowed[v].size(); ++a) {
            if (allowed[v][a]) acts.push_back(a);
        }
        sigma.at(v, 0) = uniform(acts);
        for (std::size_t a : acts) {
            for (const auto& t : pm.state(v).actions[a].transitions) {
                ModeDistribution d = switch_distribution(t.target);
                if (!d.empty()) sigma.update[{v, 0, a, t.target}] = std::move(d);
            }
        }
    }
    if (ModeDistribution d = switch_distribution(prod.initial); !d.empty()) sigma.start_modes[prod.initial] = d;
    for (std::size_t o = 0; o < options.size(); ++o) {
        const auto& mu = mus[o];
        for (StateId v = 0; v < n; ++v) {
            for (std::size_t m = 0; m < mu.num_modes; ++m) sigma.at(v, offset[o] + m) = mu.at(v, m);
        }
        for (const auto& [key, dist] : mu.update) {
            auto [v, m, a, succ] = key;
            ModeDistribution shifted;
            for (const auto& [next, p] : dist) shifted.emplace_back(offset[o] + next, p);
            sigma.update[{v, offset[o] + m, a, succ}] = std::move(shifted);
        }
    }
    result.strategy = lift_product_strategy(prod, mdp, sigma);
    result.product_strategy = std::move(sigma);
    return result;
}

}  // namespace mocheck
