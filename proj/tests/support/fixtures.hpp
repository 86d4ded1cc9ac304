#pragma once

#include "mocheck/mdp.hpp"
#include "mocheck/model_io.hpp"

#include <string>

namespace mocheck::testing {

inline std::string data_path(const std::string& name) { return std::string(MOCHECK_DATA_DIR) + "/" + name; }

inline Mdp load_model(const std::string& name) { return parse_mdp(read_file(data_path(name))); }

inline Rational q(const char* text) { return parse_rational(text); }

/// Two-phase controller for the loops model: in w, mode 0 flips a fair coin between staying in mode 0 (a) and switching to
/// mode 1; mode 1 plays b once and then stays in v.
inline FiniteMemoryStrategy loops_two_phase(const Mdp& mdp) {
    StateId u = mdp.state_id("u"), w = mdp.state_id("w"), v = mdp.state_id("v");
    std::size_t a = *mdp.find_action(w, "a"), b = *mdp.find_action(w, "b");
    FiniteMemoryStrategy s(mdp.num_states(), 2);
    s.at(u, 0) = {{0, Rational(1)}};
    s.at(w, 0) = {{a, Rational(1)}};
    s.at(w, 1) = {{b, Rational(1)}};
    s.at(v, 0) = {{0, Rational(1)}};
    s.at(v, 1) = {{0, Rational(1)}};
    s.update[{u, 0, 0, w}] = {{0, Rational(1, 2)}, {1, Rational(1, 2)}};
    return s;
}

}  // namespace mocheck::testing
