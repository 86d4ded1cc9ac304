#pragma once

#include "mocheck/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mocheck {

using StateId = std::size_t;
inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct Transition {
    StateId target;
    Rational probability;
};

struct Action {
    std::string name;
    std::vector<Transition> transitions;  // sorted by target, probabilities > 0, sum exactly 1
};

struct State {
    std::string name;
    std::set<std::string> labels;
    std::vector<Action> actions;  // sorted by name, never empty
};

/// Probability distribution over states (initial distribution alpha). Entries sorted by state, all > 0.
struct InitialDistribution {
    std::vector<std::pair<StateId, Rational>> mass;

    Rational at(StateId state) const;
};

/// Finite labeled MDP with exact rational probabilities. Immutable once built; states are
/// kept in lexicographic name order and actions in lexicographic order per state.
class Mdp {
public:
    std::size_t num_states() const noexcept { return states_.size(); }
    const State& state(StateId id) const { return states_.at(id); }
    std::span<const State> states() const noexcept { return states_; }
    const std::set<std::string>& propositions() const noexcept { return propositions_; }
    const InitialDistribution& initial() const noexcept { return initial_; }

    std::optional<StateId> find_state(std::string_view name) const;
    StateId state_id(std::string_view name) const;  // throws ArgumentError when unknown
    std::optional<std::size_t> find_action(StateId state, std::string_view action) const;
    std::size_t num_choices() const;  // total number of (state, action) pairs

    bool has_label(StateId state, const std::string& label) const;
    std::vector<StateId> states_with_label(const std::string& label) const;
    /// Every enabled action is a probability-1 self-loop.
    bool is_absorbing(StateId state) const;

    /// Same structure with another initial distribution.
    Mdp with_initial(InitialDistribution initial) const;

    friend bool operator==(const Mdp& a, const Mdp& b);

private:
    friend class MdpBuilder;
    std::vector<State> states_;
    std::set<std::string> propositions_;
    InitialDistribution initial_;
    std::map<std::string, StateId, std::less<>> index_;
};

/// Name-based construction of an Mdp. build() validates every invariant and canonicalizes ordering.
class MdpBuilder {
public:
    MdpBuilder& add_state(const std::string& name, std::set<std::string> labels = {});
    MdpBuilder& add_proposition(const std::string& proposition);
    /// Adds (state, action) -> target with probability p. Duplicate triples are an error.
    MdpBuilder& add_transition(const std::string& state, const std::string& action, const std::string& target,
                               Rational probability);
    MdpBuilder& set_initial(const std::string& state);
    MdpBuilder& set_initial(std::map<std::string, Rational> distribution);

    bool has_state(const std::string& name) const { return states_.count(name) != 0; }

    /// Throws ModelError naming the violated invariant.
    Mdp build() const;

private:
    struct PendingState {
        std::set<std::string> labels;
        std::map<std::string, std::map<std::string, Rational>> actions;
        std::size_t order;
    };
    std::map<std::string, PendingState> states_;
    std::set<std::string> propositions_;
    std::map<std::string, Rational> initial_;
    std::size_t next_order_ = 0;
};

/// Distribution over the actions of one state: (action index, probability) pairs, sorted by index.
using ActionDistribution = std::vector<std::pair<std::size_t, Rational>>;
/// Distribution over strategy modes, sorted by mode.
using ModeDistribution = std::vector<std::pair<std::size_t, Rational>>;

/// sigma: V -> D(Gamma).
struct MemorylessStrategy {
    std::vector<ActionDistribution> choice;  // indexed by state

    static MemorylessStrategy pure(const Mdp& mdp, const std::vector<std::size_t>& actions);
    /// Lexicographically least action everywhere.
    static MemorylessStrategy first_action(const Mdp& mdp);
    void validate(const Mdp& mdp) const;
};

/// Randomized finite-memory controller. At (state, mode) an action is drawn from choice; after the
/// move to the successor the next mode is drawn from update (missing entries keep the mode).
struct FiniteMemoryStrategy {
    using UpdateKey = std::tuple<StateId, std::size_t, std::size_t, StateId>;  // state, mode, action, successor

    std::size_t num_modes = 1;
    std::size_t initial_mode = 0;
    /// Optional per-start-state initial mode distribution; overrides initial_mode for that state.
    std::map<StateId, ModeDistribution> start_modes;
    std::vector<ActionDistribution> choice;  // indexed by state * num_modes + mode; empty = undefined
    std::map<UpdateKey, ModeDistribution> update;

    FiniteMemoryStrategy() = default;
    FiniteMemoryStrategy(std::size_t num_states, std::size_t modes)
        : num_modes(modes), choice(num_states * modes) {}

    static FiniteMemoryStrategy from_memoryless(const MemorylessStrategy& strategy);

    std::size_t num_states() const { return num_modes == 0 ? 0 : choice.size() / num_modes; }
    const ActionDistribution& at(StateId state, std::size_t mode) const { return choice.at(state * num_modes + mode); }
    ActionDistribution& at(StateId state, std::size_t mode) { return choice.at(state * num_modes + mode); }
    ModeDistribution start_distribution(StateId state) const;
    ModeDistribution next_modes(StateId state, std::size_t mode, std::size_t action, StateId successor) const;

    /// Checks well-formedness of every defined entry against the MDP.
    void validate(const Mdp& mdp) const;
};

/// Adds `weight` to the entry for `key` in a sorted sparse distribution.
void accumulate(std::vector<std::pair<std::size_t, Rational>>& dist, std::size_t key, const Rational& weight);

}  // namespace mocheck
