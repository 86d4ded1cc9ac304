#include "mocheck/mdp.hpp"

#include "mocheck/error.hpp"

#include <algorithm>

namespace mocheck {

Rational InitialDistribution::at(StateId state) const {
    for (const auto& [s, p] : mass) {
        if (s == state) return p;
    }
    return 0;
}

std::optional<StateId> Mdp::find_state(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

StateId Mdp::state_id(std::string_view name) const {
    auto id = find_state(name);
    if (!id) throw ArgumentError("unknown state '" + std::string(name) + "'");
    return *id;
}

std::optional<std::size_t> Mdp::find_action(StateId state, std::string_view action) const {
    const auto& actions = states_.at(state).actions;
    auto it = std::lower_bound(actions.begin(), actions.end(), action,
                               [](const Action& a, std::string_view n) { return a.name < n; });
    if (it == actions.end() || it->name != action) return std::nullopt;
    return static_cast<std::size_t>(it - actions.begin());
}

std::size_t Mdp::num_choices() const {
    std::size_t total = 0;
    for (const auto& s : states_) total += s.actions.size();
    return total;
}

bool Mdp::has_label(StateId state, const std::string& label) const { return states_.at(state).labels.count(label) != 0; }

std::vector<StateId> Mdp::states_with_label(const std::string& label) const {
    std::vector<StateId> out;
    for (StateId v = 0; v < states_.size(); ++v) {
        if (has_label(v, label)) out.push_back(v);
    }
    return out;
}

bool Mdp::is_absorbing(StateId state) const {
    for (const auto& action : states_.at(state).actions) {
        if (action.transitions.size() != 1 || action.transitions[0].target != state) return false;
    }
    return true;
}

Mdp Mdp::with_initial(InitialDistribution initial) const {
    Rational total = 0;
    for (const auto& [s, p] : initial.mass) {
        if (s >= states_.size() || p <= 0) throw ModelError("initial distribution entries must be positive and name states");
        total += p;
    }
    if (total != 1) throw ModelError("initial distribution does not sum to 1 (sums to " + to_string(total) + ")");
    std::sort(initial.mass.begin(), initial.mass.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Mdp copy = *this;
    copy.initial_ = std::move(initial);
    return copy;
}

bool operator==(const Mdp& a, const Mdp& b) {
    if (a.states_.size() != b.states_.size() || a.propositions_ != b.propositions_) return false;
    if (a.initial_.mass != b.initial_.mass) return false;
    for (std::size_t i = 0; i < a.states_.size(); ++i) {
        const auto& x = a.states_[i];
        const auto& y = b.states_[i];
        if (x.name != y.name || x.labels != y.labels || x.actions.size() != y.actions.size()) return false;
        for (std::size_t j = 0; j < x.actions.size(); ++j) {
            if (x.actions[j].name != y.actions[j].name) return false;
            const auto& tx = x.actions[j].transitions;
            const auto& ty = y.actions[j].transitions;
            if (tx.size() != ty.size()) return false;
            for (std::size_t k = 0; k < tx.size(); ++k) {
                if (tx[k].target != ty[k].target || tx[k].probability != ty[k].probability) return false;
            }
        }
    }
    return true;
}

MdpBuilder& MdpBuilder::add_state(const std::string& name, std::set<std::string> labels) {
    if (name.empty()) throw ModelError("state names must be nonempty");
    auto [it, inserted] = states_.try_emplace(name);
    if (!inserted) throw ModelError("duplicate state '" + name + "'");
    it->second.labels = std::move(labels);
    it->second.order = next_order_++;
    return *this;
}

MdpBuilder& MdpBuilder::add_proposition(const std::string& proposition) {
    propositions_.insert(proposition);
    return *this;
}

MdpBuilder& MdpBuilder::add_transition(const std::string& state, const std::string& action, const std::string& target,
                                       Rational probability) {
    auto it = states_.find(state);
    if (it == states_.end()) throw ModelError("transition from undeclared state '" + state + "'");
    if (action.empty()) throw ModelError("action names must be nonempty");
    auto& successors = it->second.actions[action];
    if (!successors.emplace(target, std::move(probability)).second) {
        throw ModelError("duplicate transition (" + state + ", " + action + ", " + target + ")");
    }
    return *this;
}

MdpBuilder& MdpBuilder::set_initial(const std::string& state) {
    initial_.clear();
    initial_.emplace(state, Rational(1));
    return *this;
}

MdpBuilder& MdpBuilder::set_initial(std::map<std::string, Rational> distribution) {
    initial_ = std::move(distribution);
    return *this;
}

Mdp MdpBuilder::build() const {
    if (states_.empty()) throw ModelError("an MDP needs at least one state");
    Mdp mdp;
    mdp.propositions_ = propositions_;
    StateId next = 0;
    for (const auto& [name, pending] : states_) {
        mdp.index_.emplace(name, next++);
        mdp.propositions_.insert(pending.labels.begin(), pending.labels.end());
    }
    mdp.states_.reserve(states_.size());
    for (const auto& [name, pending] : states_) {
        State state{name, pending.labels, {}};
        if (pending.actions.empty()) throw ModelError("state '" + name + "' has no enabled action");
        for (const auto& [action_name, successors] : pending.actions) {
            Action action{action_name, {}};
            Rational total = 0;
            for (const auto& [target, p] : successors) {
                auto target_it = mdp.index_.find(target);
                if (target_it == mdp.index_.end()) {
                    throw ModelError("action (" + name + ", " + action_name + ") targets undeclared state '" + target + "'");
                }
                if (p <= 0 || p > 1) {
                    throw ModelError("action (" + name + ", " + action_name + ") has probability " + to_string(p) +
                                     " outside (0,1]");
                }
                total += p;
                action.transitions.push_back({target_it->second, p});
            }
            if (total != 1) {
                throw ModelError("probabilities do not sum to 1: action (" + name + ", " + action_name + ") sums to " +
                                 to_string(total));
            }
            std::sort(action.transitions.begin(), action.transitions.end(),
                      [](const Transition& a, const Transition& b) { return a.target < b.target; });
            state.actions.push_back(std::move(action));
        }
        mdp.states_.push_back(std::move(state));
    }
    if (initial_.empty()) {
        auto first = std::min_element(states_.begin(), states_.end(),
                                      [](const auto& a, const auto& b) { return a.second.order < b.second.order; });
        mdp.initial_.mass.emplace_back(mdp.index_.at(first->first), Rational(1));
    } else {
        Rational total = 0;
        for (const auto& [name, p] : initial_) {
            auto it = mdp.index_.find(name);
            if (it == mdp.index_.end()) throw ModelError("initial distribution names undeclared state '" + name + "'");
            if (p <= 0) throw ModelError("initial probability of '" + name + "' must be positive");
            total += p;
            mdp.initial_.mass.emplace_back(it->second, p);
        }
        if (total != 1) throw ModelError("initial distribution does not sum to 1 (sums to " + to_string(total) + ")");
        std::sort(mdp.initial_.mass.begin(), mdp.initial_.mass.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    return mdp;
}

void accumulate(std::vector<std::pair<std::size_t, Rational>>& dist, std::size_t key, const Rational& weight) {
    auto it = std::lower_bound(dist.begin(), dist.end(), key, [](const auto& e, std::size_t k) { return e.first < k; });
    if (it != dist.end() && it->first == key) {
        it->second += weight;
    } else {
        dist.insert(it, {key, weight});
    }
}

namespace {

void check_distribution(const std::vector<std::pair<std::size_t, Rational>>& dist, std::size_t limit,
                        const std::string& what) {
    if (dist.empty()) throw ModelError(what + ": empty distribution");
    Rational total = 0;
    for (const auto& [key, p] : dist) {
        if (key >= limit) throw ModelError(what + ": index " + std::to_string(key) + " out of range");
        if (p <= 0) throw ModelError(what + ": nonpositive probability " + to_string(p));
        total += p;
    }
    if (total != 1) throw ModelError(what + ": probabilities sum to " + to_string(total));
}

}  // namespace

MemorylessStrategy MemorylessStrategy::pure(const Mdp& mdp, const std::vector<std::size_t>& actions) {
    if (actions.size() != mdp.num_states()) throw ArgumentError("pure strategy needs one action per state");
    MemorylessStrategy s;
    s.choice.resize(mdp.num_states());
    for (StateId v = 0; v < mdp.num_states(); ++v) {
        if (actions[v] >= mdp.state(v).actions.size()) throw ArgumentError("pure strategy action out of range");
        s.choice[v] = {{actions[v], Rational(1)}};
    }
    return s;
}

MemorylessStrategy MemorylessStrategy::first_action(const Mdp& mdp) {
    return pure(mdp, std::vector<std::size_t>(mdp.num_states(), 0));
}

void MemorylessStrategy::validate(const Mdp& mdp) const {
    if (choice.size() != mdp.num_states()) throw ModelError("strategy covers " + std::to_string(choice.size()) +
                                                            " states, MDP has " + std::to_string(mdp.num_states()));
    for (StateId v = 0; v < choice.size(); ++v) {
        check_distribution(choice[v], mdp.state(v).actions.size(), "strategy at state '" + mdp.state(v).name + "'");
    }
}

FiniteMemoryStrategy FiniteMemoryStrategy::from_memoryless(const MemorylessStrategy& strategy) {
    FiniteMemoryStrategy s(strategy.choice.size(), 1);
    s.choice = strategy.choice;
    return s;
}

ModeDistribution FiniteMemoryStrategy::start_distribution(StateId state) const {
    auto it = start_modes.find(state);
    if (it != start_modes.end()) return it->second;
    return {{initial_mode, Rational(1)}};
}

ModeDistribution FiniteMemoryStrategy::next_modes(StateId state, std::size_t mode, std::size_t action,
                                                  StateId successor) const {
    auto it = update.find({state, mode, action, successor});
    if (it != update.end()) return it->second;
    return {{mode, Rational(1)}};
}

void FiniteMemoryStrategy::validate(const Mdp& mdp) const {
    if (num_modes == 0) throw ModelError("strategy needs at least one mode");
    if (initial_mode >= num_modes) throw ModelError("initial mode out of range");
    if (choice.size() != mdp.num_states() * num_modes) throw ModelError("strategy choice table has the wrong size");
    for (StateId v = 0; v < mdp.num_states(); ++v) {
        for (std::size_t m = 0; m < num_modes; ++m) {
            const auto& dist = at(v, m);
            if (!dist.empty()) {
                check_distribution(dist, mdp.state(v).actions.size(),
                                   "strategy at (" + mdp.state(v).name + ", mode " + std::to_string(m) + ")");
            }
        }
    }
    for (const auto& [state, dist] : start_modes) {
        if (state >= mdp.num_states()) throw ModelError("start mode entry for unknown state");
        check_distribution(dist, num_modes, "start modes of '" + mdp.state(state).name + "'");
    }
    for (const auto& [key, dist] : update) {
        auto [state, mode, action, successor] = key;
        if (state >= mdp.num_states() || successor >= mdp.num_states() || mode >= num_modes ||
            action >= mdp.state(state).actions.size()) {
            throw ModelError("mode update references unknown state, mode or action");
        }
        check_distribution(dist, num_modes, "mode update at '" + mdp.state(state).name + "'");
    }
}

}  // namespace mocheck
