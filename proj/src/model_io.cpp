#include "mocheck/model_io.hpp"

#include "mocheck/error.hpp"

#include <fstream>
#include <sstream>

namespace mocheck {
namespace {

using nlohmann::json;

class ExactNumberSax : public nlohmann::detail::json_sax_dom_parser<json> {
public:
    using Base = nlohmann::detail::json_sax_dom_parser<json>;
    explicit ExactNumberSax(json& root) : Base(root, true) {}

    bool number_float(number_float_t /*value*/, const string_t& text) {
        string_t copy = text;
        return Base::string(copy);
    }
};

std::pair<std::size_t, std::size_t> position_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

const json& require(const json& object, const char* key, const std::string& context) {
    if (!object.is_object() || !object.contains(key)) throw ParseError(context + ": missing field '" + key + "'");
    return object.at(key);
}

std::string require_string(const json& value, const std::string& context) {
    if (!value.is_string()) throw ParseError(context + ": expected a string");
    return value.get<std::string>();
}

std::size_t require_index(const json& value, const std::string& context) {
    if (!value.is_number_unsigned()) throw ParseError(context + ": expected a nonnegative integer");
    return value.get<std::size_t>();
}

}  // namespace

json parse_json_exact(std::string_view text) {
    json root;
    ExactNumberSax sax(root);
    try {
        json::sax_parse(text.begin(), text.end(), &sax);
    } catch (const json::parse_error& e) {
        auto [line, column] = position_of(text, e.byte);
        std::string what = e.what();
        auto colon = what.find("syntax error");
        throw ParseError(colon == std::string::npos ? what : what.substr(colon), line, column);
    }
    return root;
}

Rational json_rational(const json& value, const std::string& context) {
    if (value.is_string()) {
        try {
            return parse_rational(value.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(context + ": " + e.what());
        }
    }
    if (value.is_number_integer()) return Rational(value.dump());
    throw ParseError(context + ": expected a probability (\"p/q\" or decimal)");
}

Mdp parse_mdp(std::string_view text) {
    json doc = parse_json_exact(text);
    if (!doc.is_object()) throw ParseError("model: top level must be an object");
    MdpBuilder builder;
    const json& states = require(doc, "states", "model");
    if (!states.is_array()) throw ParseError("model: 'states' must be a list");
    std::string first_state;
    for (const json& entry : states) {
        std::string name = require_string(require(entry, "name", "state"), "state name");
        std::set<std::string> labels;
        if (entry.contains("labels")) {
            for (const json& label : entry.at("labels")) labels.insert(require_string(label, "label of '" + name + "'"));
        }
        builder.add_state(name, std::move(labels));
        if (first_state.empty()) first_state = name;
    }
    if (doc.contains("propositions")) {
        for (const json& p : doc.at("propositions")) builder.add_proposition(require_string(p, "proposition"));
    }
    const json& actions = require(doc, "actions", "model");
    if (!actions.is_array()) throw ParseError("model: 'actions' must be a list");
    for (const json& entry : actions) {
        std::string state = require_string(require(entry, "state", "action"), "action state");
        std::string action = require_string(require(entry, "action", "action"), "action name");
        std::string context = "action (" + state + ", " + action + ")";
        const json& transitions = require(entry, "transitions", context);
        for (const json& t : transitions) {
            builder.add_transition(state, action, require_string(require(t, "to", context), context),
                                   json_rational(require(t, "prob", context), context));
        }
    }
    if (doc.contains("init")) {
        const json& init = doc.at("init");
        if (init.is_string()) {
            builder.set_initial(init.get<std::string>());
        } else if (init.is_object()) {
            std::map<std::string, Rational> dist;
            for (const auto& [name, p] : init.items()) dist.emplace(name, json_rational(p, "init"));
            builder.set_initial(std::move(dist));
        } else {
            throw ParseError("model: 'init' must be a state name or a distribution object");
        }
    } else if (!first_state.empty()) {
        builder.set_initial(first_state);
    }
    return builder.build();
}

json mdp_to_json(const Mdp& mdp) {
    json doc;
    doc["states"] = json::array();
    for (const auto& s : mdp.states()) {
        doc["states"].push_back({{"name", s.name}, {"labels", s.labels}});
    }
    std::set<std::string> used;
    for (const auto& s : mdp.states()) used.insert(s.labels.begin(), s.labels.end());
    json extra = json::array();
    for (const auto& p : mdp.propositions()) {
        if (!used.count(p)) extra.push_back(p);
    }
    if (!extra.empty()) doc["propositions"] = extra;
    doc["actions"] = json::array();
    for (const auto& s : mdp.states()) {
        for (const auto& a : s.actions) {
            json transitions = json::array();
            for (const auto& t : a.transitions) {
                transitions.push_back({{"to", mdp.state(t.target).name}, {"prob", to_string(t.probability)}});
            }
            doc["actions"].push_back({{"state", s.name}, {"action", a.name}, {"transitions", transitions}});
        }
    }
    const auto& init = mdp.initial().mass;
    if (init.size() == 1) {
        doc["init"] = mdp.state(init[0].first).name;
    } else {
        json dist = json::object();
        for (const auto& [v, p] : init) dist[mdp.state(v).name] = to_string(p);
        doc["init"] = dist;
    }
    return doc;
}

std::string serialize_mdp(const Mdp& mdp) { return mdp_to_json(mdp).dump(2) + "\n"; }

json rational_json(const Rational& value) { return {{"exact", to_string(value)}, {"decimal", to_decimal(value)}}; }

json strategy_to_json(const Mdp& mdp, const FiniteMemoryStrategy& strategy) {
    json doc;
    doc["modes"] = strategy.num_modes;
    doc["initial_mode"] = strategy.initial_mode;
    json start = json::array();
    for (const auto& [v, dist] : strategy.start_modes) {
        for (const auto& [mode, p] : dist) {
            start.push_back({{"state", mdp.state(v).name}, {"mode", mode}, {"prob", to_string(p)}, {"decimal", to_decimal(p)}});
        }
    }
    doc["start_modes"] = start;
    json choices = json::array();
    for (StateId v = 0; v < mdp.num_states(); ++v) {
        for (std::size_t m = 0; m < strategy.num_modes; ++m) {
            for (const auto& [a, p] : strategy.at(v, m)) {
                choices.push_back({{"state", mdp.state(v).name},
                                   {"mode", m},
                                   {"action", mdp.state(v).actions[a].name},
                                   {"prob", to_string(p)},
                                   {"decimal", to_decimal(p)}});
            }
        }
    }
    doc["choices"] = choices;
    json updates = json::array();
    for (const auto& [key, dist] : strategy.update) {
        auto [v, mode, a, succ] = key;
        for (const auto& [next, p] : dist) {
            updates.push_back({{"state", mdp.state(v).name},
                               {"mode", mode},
                               {"action", mdp.state(v).actions[a].name},
                               {"to", mdp.state(succ).name},
                               {"next_mode", next},
                               {"prob", to_string(p)},
                               {"decimal", to_decimal(p)}});
        }
    }
    doc["updates"] = updates;
    return doc;
}

json strategy_to_json(const Mdp& mdp, const MemorylessStrategy& strategy) {
    return strategy_to_json(mdp, FiniteMemoryStrategy::from_memoryless(strategy));
}

FiniteMemoryStrategy parse_strategy(const Mdp& mdp, std::string_view text) {
    json doc = parse_json_exact(text);
    std::size_t modes = doc.contains("modes") ? require_index(doc.at("modes"), "modes") : 1;
    if (modes == 0) throw ParseError("strategy: 'modes' must be positive");
    FiniteMemoryStrategy s(mdp.num_states(), modes);
    if (doc.contains("initial_mode")) s.initial_mode = require_index(doc.at("initial_mode"), "initial_mode");
    auto state_of = [&](const json& entry, const char* key, const std::string& ctx) {
        std::string name = require_string(require(entry, key, ctx), ctx);
        auto id = mdp.find_state(name);
        if (!id) throw ModelError(ctx + ": strategy references unknown state '" + name + "'");
        return *id;
    };
    auto action_of = [&](StateId v, const json& entry, const std::string& ctx) {
        std::string name = require_string(require(entry, "action", ctx), ctx);
        auto id = mdp.find_action(v, name);
        if (!id) throw ModelError(ctx + ": action '" + name + "' is not enabled at '" + mdp.state(v).name + "'");
        return *id;
    };
    auto mode_of = [&](const json& entry, const char* key, const std::string& ctx) {
        std::size_t m = require_index(require(entry, key, ctx), ctx);
        if (m >= modes) throw ModelError(ctx + ": mode " + std::to_string(m) + " out of range");
        return m;
    };
    if (doc.contains("start_modes")) {
        for (const json& entry : doc.at("start_modes")) {
            StateId v = state_of(entry, "state", "start_modes");
            accumulate(s.start_modes[v], mode_of(entry, "mode", "start_modes"), json_rational(require(entry, "prob", "start_modes"), "start_modes"));
        }
    }
    for (const json& entry : require(doc, "choices", "strategy")) {
        StateId v = state_of(entry, "state", "choices");
        std::size_t m = mode_of(entry, "mode", "choices");
        accumulate(s.at(v, m), action_of(v, entry, "choices"), json_rational(require(entry, "prob", "choices"), "choices"));
    }
    if (doc.contains("updates")) {
        for (const json& entry : doc.at("updates")) {
            StateId v = state_of(entry, "state", "updates");
            std::size_t m = mode_of(entry, "mode", "updates");
            std::size_t a = action_of(v, entry, "updates");
            StateId succ = state_of(entry, "to", "updates");
            accumulate(s.update[{v, m, a, succ}], mode_of(entry, "next_mode", "updates"),
                       json_rational(require(entry, "prob", "updates"), "updates"));
        }
    }
    s.validate(mdp);
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write '" + path + "'");
    out << contents;
    if (!out) throw ArgumentError("error writing '" + path + "'");
}

}  // namespace mocheck
