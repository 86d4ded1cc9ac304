#include "mocheck/reduction.hpp"

#include "mocheck/error.hpp"

#include <algorithm>
#include <map>

namespace mocheck {
namespace {

std::string subset_text(const std::vector<std::size_t>& subset) {
    std::string s = "{";
    for (std::size_t i = 0; i < subset.size(); ++i) s += (i ? "," : "") + std::to_string(subset[i]);
    return s + "}";
}

std::vector<std::size_t> subset_of_mask(std::size_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; mask >> i; ++i) {
        if ((mask >> i) & 1U) out.push_back(i);
    }
    return out;
}

std::size_t mask_of(const std::vector<std::size_t>& subset) {
    std::size_t mask = 0;
    for (std::size_t i : subset) mask |= std::size_t{1} << i;
    return mask;
}

}  // namespace

std::size_t CleanupReport::num_removed() const { return static_cast<std::size_t>(std::count(removed.begin(), removed.end(), true)); }

CleanupReport clean_up(const Mdp& mdp, const std::vector<std::vector<StateId>>& targets) {
    std::size_t n = mdp.num_states();
    std::vector<bool> in_f(n, false);
    for (const auto& set : targets) {
        for (StateId v : set) {
            if (v >= n) throw ArgumentError("target state out of range");
            if (!mdp.is_absorbing(v)) throw ArgumentError("target state '" + mdp.state(v).name + "' is not absorbing");
            in_f[v] = true;
        }
    }
    std::vector<bool> good = backward_reachable([&] {
        Adjacency forward(n);
        for (StateId v = 0; v < n; ++v) {
            for (const auto& a : mdp.state(v).actions) {
                for (const auto& t : a.transitions) forward[v].push_back(t.target);
            }
        }
        return forward;
    }(), in_f);

    CleanupReport report;
    report.removed.assign(n, false);
    for (StateId v = 0; v < n; ++v) report.removed[v] = !good[v];

    std::string dead = kDeadState;
    while (mdp.find_state(dead)) dead += "'";
    bool uses_dead = false;
    MdpBuilder builder;
    for (const auto& p : mdp.propositions()) builder.add_proposition(p);
    for (StateId v = 0; v < n; ++v) {
        if (good[v]) builder.add_state(mdp.state(v).name, mdp.state(v).labels);
    }
    for (StateId v = 0; v < n; ++v) {
        if (!good[v]) continue;
        const State& s = mdp.state(v);
        for (const auto& a : s.actions) {
            Rational lost = 0;
            for (const auto& t : a.transitions) {
                if (!good[t.target]) lost += t.probability;
            }
            if (lost == 1) continue;
            for (const auto& t : a.transitions) {
                if (good[t.target]) builder.add_transition(s.name, a.name, mdp.state(t.target).name, t.probability);
            }
            if (lost > 0) {
                if (!uses_dead) builder.add_state(dead, {kDeadState});
                uses_dead = true;
                builder.add_transition(s.name, a.name, dead, lost);
            }
        }
    }
    std::map<std::string, Rational> init;
    Rational lost = 0;
    for (const auto& [v, p] : mdp.initial().mass) {
        if (good[v]) {
            init[mdp.state(v).name] = p;
        } else {
            lost += p;
        }
    }
    report.initial_all_bad = init.empty();
    if (lost > 0) {
        if (!uses_dead) builder.add_state(dead, {kDeadState});
        uses_dead = true;
        init[dead] = lost;
    }
    if (uses_dead) builder.add_transition(dead, "stay", dead, 1);
    builder.set_initial(init);
    report.kept = builder.build();

    report.to_kept.assign(n, npos);
    report.from_kept.assign(report.kept.num_states(), npos);
    for (StateId v = 0; v < n; ++v) {
        if (!good[v]) continue;
        StateId k = report.kept.state_id(mdp.state(v).name);
        report.to_kept[v] = k;
        report.from_kept[k] = v;
    }
    if (uses_dead) report.dead = report.kept.state_id(dead);
    for (const auto& set : targets) {
        std::vector<StateId> mapped;
        for (StateId v : set) mapped.push_back(report.to_kept[v]);
        std::sort(mapped.begin(), mapped.end());
        report.targets.push_back(std::move(mapped));
    }
    return report;
}

std::vector<std::size_t> ReducedMdp::subset_of(const std::string& name) {
    if (name.size() < 4 || name[0] != '@' || (name[1] != 's' && name[1] != 'R') || name[2] != '{') return {};
    std::vector<std::size_t> out;
    std::size_t value = 0;
    bool digits = false;
    for (std::size_t i = 3; i < name.size(); ++i) {
        char c = name[i];
        if (c >= '0' && c <= '9') {
            value = value * 10 + static_cast<std::size_t>(c - '0');
            digits = true;
        } else if ((c == ',' || c == '}') && digits) {
            out.push_back(value);
            value = 0;
            digits = false;
        } else {
            return {};
        }
    }
    return out;
}

std::vector<TargetSet> all_target_sets(const ProductMdp& product) {
    std::size_t k = product.automata.size();
    if (k > kMaxReductionProperties) {
        throw ArgumentError("the reduction supports at most " + std::to_string(kMaxReductionProperties) + " properties");
    }
    std::vector<TargetSet> sets;
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        sets.push_back(compute_target_set(product, subset_of_mask(mask)));
    }
    return sets;
}

ReducedMdp build_reduction(ProductMdp product, std::vector<TargetSet> target_sets) {
    std::size_t k = product.automata.size();
    if (k > kMaxReductionProperties) {
        throw ArgumentError("the reduction supports at most " + std::to_string(kMaxReductionProperties) + " properties");
    }
    if (target_sets.size() + 1 != (std::size_t{1} << k)) throw ArgumentError("one target set per nonempty subset is required");
    const Mdp& pm = product.mdp;
    std::size_t n = pm.num_states();

    MdpBuilder builder;
    for (const auto& p : pm.propositions()) builder.add_proposition(p);
    for (StateId v = 0; v < n; ++v) builder.add_state(pm.state(v).name, pm.state(v).labels);
    for (StateId v = 0; v < n; ++v) {
        for (const auto& a : pm.state(v).actions) {
            for (const auto& t : a.transitions) builder.add_transition(pm.state(v).name, a.name, pm.state(t.target).name, t.probability);
        }
    }
    std::vector<bool> used(target_sets.size(), false);
    for (StateId v = 0; v < n; ++v) {
        if (v == product.initial) continue;
        for (std::size_t i = 0; i < target_sets.size(); ++i) {
            if (!target_sets[i].states[v]) continue;
            std::size_t mask = i + 1;
            bool maximal = true;
            for (std::size_t j = 0; j < target_sets.size() && maximal; ++j) {
                std::size_t other = j + 1;
                if (other != mask && (other & mask) == mask && target_sets[j].states[v]) maximal = false;
            }
            if (!maximal) continue;
            std::string text = subset_text(target_sets[i].subset);
            if (!used[i]) {
                builder.add_state("@s" + text);
                builder.add_transition("@s" + text, "@stay", "@s" + text, 1);
                used[i] = true;
            }
            builder.add_transition(pm.state(v).name, "@R" + text, "@s" + text, 1);
        }
    }
    std::map<std::string, Rational> alpha;
    for (const auto& t : pm.state(product.initial).actions[0].transitions) alpha[pm.state(t.target).name] = t.probability;
    builder.set_initial(alpha);

    ReducedMdp reduced{builder.build(), std::move(product), std::vector<std::vector<StateId>>(k), {}, {}, std::move(target_sets)};
    const Mdp& rm = reduced.mdp;
    const Mdp& pm2 = reduced.product.mdp;
    reduced.product_state.assign(rm.num_states(), npos);
    reduced.of_product.assign(pm2.num_states(), npos);
    for (StateId v = 0; v < pm2.num_states(); ++v) {
        StateId r = rm.state_id(pm2.state(v).name);
        reduced.product_state[r] = v;
        reduced.of_product[v] = r;
    }
    for (StateId r = 0; r < rm.num_states(); ++r) {
        if (reduced.product_state[r] != npos) continue;
        for (std::size_t i : ReducedMdp::subset_of(rm.state(r).name)) reduced.targets[i].push_back(r);
    }
    return reduced;
}

ReducedMdp build_reduction(const Mdp& mdp, const std::vector<RabinAutomaton>& automata) {
    ProductMdp prod = product(mdp, automata);
    std::vector<TargetSet> sets = all_target_sets(prod);
    return build_reduction(std::move(prod), std::move(sets));
}

FiniteMemoryStrategy lift_strategy(const ReducedMdp& reduced, const CleanupReport& cleanup, const Mdp& source,
                                   const MemorylessStrategy& sigma) {
    const ProductMdp& prod = reduced.product;
    const Mdp& pm = prod.mdp;
    const Mdp& kept = cleanup.kept;
    std::size_t n = pm.num_states();
    if (sigma.choice.size() != kept.num_states()) throw ArgumentError("strategy does not match the reduced MDP");

    // mu_R for every subset that sigma actually fires.
    std::map<std::size_t, FiniteMemoryStrategy> mus;
    for (StateId k = 0; k < kept.num_states(); ++k) {
        for (const auto& [a, w] : sigma.choice[k]) {
            auto subset = ReducedMdp::subset_of(kept.state(k).actions[a].name);
            if (subset.empty()) continue;
            std::size_t index = mask_of(subset) - 1;
            if (!mus.count(index)) mus.emplace(index, synthesize_mu(prod, reduced.target_sets[index]));
        }
    }
    std::map<std::size_t, std::size_t> offset;
    std::size_t modes = 1;
    for (const auto& [index, mu] : mus) {
        offset[index] = modes;
        modes += mu.num_modes;
    }
    FiniteMemoryStrategy s(n, modes);
    s.at(prod.initial, 0) = {{0, Rational(1)}};
    for (StateId p = 0; p < n; ++p) {
        if (p == prod.initial) continue;
        StateId k = cleanup.to_kept[reduced.of_product[p]];
        if (k == npos || sigma.choice[k].empty()) {
            s.at(p, 0) = {{0, Rational(1)}};
            continue;
        }
        // contribution[a] = (branch, weight); branch npos = sigma itself, otherwise a mu index
        std::map<std::size_t, std::vector<std::pair<std::size_t, Rational>>> contribution;
        for (const auto& [a, w] : sigma.choice[k]) {
            const std::string& name = kept.state(k).actions[a].name;
            auto subset = ReducedMdp::subset_of(name);
            if (subset.empty()) {
                auto pa = pm.find_action(p, name);
                if (!pa) throw ArgumentError("strategy plays unknown action '" + name + "'");
                contribution[*pa].emplace_back(npos, w);
            } else {
                std::size_t index = mask_of(subset) - 1;
                for (const auto& [pa, w2] : mus.at(index).at(p, 0)) contribution[pa].emplace_back(index, w * w2);
            }
        }
        ActionDistribution& choice = s.at(p, 0);
        for (const auto& [pa, parts] : contribution) {
            Rational total = 0;
            for (const auto& part : parts) total += part.second;
            choice.emplace_back(pa, total);
            bool only_sigma = parts.size() == 1 && parts[0].first == npos;
            if (only_sigma) continue;
            for (const auto& t : pm.state(p).actions[pa].transitions) {
                ModeDistribution next;
                for (const auto& [branch, w] : parts) {
                    if (branch == npos) {
                        accumulate(next, 0, w / total);
                    } else {
                        for (const auto& [m, w2] : mus.at(branch).next_modes(p, 0, pa, t.target)) {
                            accumulate(next, offset.at(branch) + m, w / total * w2);
                        }
                    }
                }
                s.update[{p, 0, pa, t.target}] = std::move(next);
            }
        }
    }
    for (const auto& [index, mu] : mus) {
        std::size_t base = offset.at(index);
        for (StateId p = 0; p < n; ++p) {
            for (std::size_t m = 0; m < mu.num_modes; ++m) s.at(p, base + m) = mu.at(p, m);
        }
        for (const auto& [key, dist] : mu.update) {
            auto [p, m, a, succ] = key;
            ModeDistribution shifted;
            for (const auto& [next, w] : dist) shifted.emplace_back(base + next, w);
            s.update[{p, base + m, a, succ}] = std::move(shifted);
        }
    }
    return lift_product_strategy(prod, source, s);
}

}  // namespace mocheck
