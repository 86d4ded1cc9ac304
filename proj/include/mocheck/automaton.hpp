#pragma once

#include "mocheck/mdp.hpp"

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mocheck {

/// Acceptance pair: the run visits `avoid` finitely often and `repeat` infinitely often.
struct RabinPair {
    std::vector<bool> avoid;   // indexed by automaton state
    std::vector<bool> repeat;
};

/// Deterministic, complete Rabin automaton over the alphabet 2^AP. Letters are bitmasks over
/// `propositions` (bit i set iff propositions[i] holds).
class RabinAutomaton {
public:
    RabinAutomaton(std::vector<std::string> propositions, std::size_t num_states, std::size_t initial,
                   std::vector<std::vector<std::size_t>> delta, std::vector<RabinPair> pairs);

    std::size_t num_states() const noexcept { return delta_.size(); }
    std::size_t initial() const noexcept { return initial_; }
    const std::vector<std::string>& propositions() const noexcept { return propositions_; }
    const std::vector<RabinPair>& pairs() const noexcept { return pairs_; }
    std::size_t num_letters() const noexcept { return std::size_t{1} << propositions_.size(); }

    std::size_t next(std::size_t state, std::size_t letter) const { return delta_[state][letter]; }
    std::size_t letter_of(const std::set<std::string>& labels) const;
    std::size_t next(std::size_t state, const std::set<std::string>& labels) const {
        return next(state, letter_of(labels));
    }

    /// True when some pair accepts a run whose infinitely-often set is exactly `inf_states`.
    bool accepts_infinity_set(const std::vector<bool>& inf_states) const;

private:
    std::vector<std::string> propositions_;
    std::size_t initial_;
    std::vector<std::vector<std::size_t>> delta_;  // [state][letter]
    std::vector<RabinPair> pairs_;
};

struct HoaOptions {
    /// Missing transitions go to a fresh rejecting sink instead of raising an error.
    bool complete = false;
};

/// Parses the HOA subset: HOA/States/Start/AP/Acceptance headers, state-based acceptance marks,
/// guards over AP indices with !, &, |, parentheses, t and f.
RabinAutomaton parse_automaton(std::string_view text, const HoaOptions& options = {});
std::string to_hoa(const RabinAutomaton& automaton);

/// Eventually reach a state labelled `proposition`.
RabinAutomaton reach_automaton(const std::string& proposition);
/// Never visit a state labelled `proposition` (complement of reach_automaton).
RabinAutomaton avoid_automaton(const std::string& proposition);
/// Visit states labelled `proposition` infinitely often.
RabinAutomaton buchi_automaton(const std::string& proposition);

}  // namespace mocheck
