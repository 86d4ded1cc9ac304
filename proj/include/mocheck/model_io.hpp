#pragma once

#include "mocheck/mdp.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace mocheck {

/// Parses JSON keeping every non-integer number literal as its source text (a string), so that
/// decimals such as 0.1 convert to rationals exactly. Throws ParseError with line/column.
nlohmann::json parse_json_exact(std::string_view text);

/// Reads a rational from a JSON string ("3/5", "0.6") or integer.
Rational json_rational(const nlohmann::json& value, const std::string& context);

/// Model file: {"states":[{name,labels}], "propositions":[...], "actions":[{state,action,transitions:[{to,prob}]}],
/// "init": "name" | {"name": prob, ...}}. Absent init = point mass on the first listed state.
Mdp parse_mdp(std::string_view text);
nlohmann::json mdp_to_json(const Mdp& mdp);
/// Canonical serialization (sorted states/actions/successors, probabilities as "p/q").
std::string serialize_mdp(const Mdp& mdp);

/// Strategy file: modes, initial mode, optional start-mode table, (state, mode, action, probability)
/// choice rows and the mode-update table. Rationals are written exactly and as 12-place decimals.
nlohmann::json strategy_to_json(const Mdp& mdp, const FiniteMemoryStrategy& strategy);
nlohmann::json strategy_to_json(const Mdp& mdp, const MemorylessStrategy& strategy);
FiniteMemoryStrategy parse_strategy(const Mdp& mdp, std::string_view text);

/// {"exact": "p/q", "decimal": "0.xxxxxxxxxxxx"}
nlohmann::json rational_json(const Rational& value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace mocheck
