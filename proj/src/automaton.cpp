#include "mocheck/automaton.hpp"

#include "mocheck/error.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <sstream>

namespace mocheck {

RabinAutomaton::RabinAutomaton(std::vector<std::string> propositions, std::size_t num_states, std::size_t initial,
                               std::vector<std::vector<std::size_t>> delta, std::vector<RabinPair> pairs)
    : propositions_(std::move(propositions)), initial_(initial), delta_(std::move(delta)), pairs_(std::move(pairs)) {
    if (num_states == 0 || delta_.size() != num_states) throw ModelError("automaton: state count mismatch");
    if (propositions_.size() > 16) throw ModelError("automaton: at most 16 atomic propositions are supported");
    if (initial_ >= num_states) throw ModelError("automaton: initial state out of range");
    for (const auto& row : delta_) {
        if (row.size() != num_letters()) throw ModelError("automaton: transition function not total");
        for (std::size_t q : row) {
            if (q >= num_states) throw ModelError("automaton: successor out of range");
        }
    }
    if (pairs_.empty()) throw ModelError("automaton: at least one acceptance pair is required");
    for (auto& pair : pairs_) {
        pair.avoid.resize(num_states, false);
        pair.repeat.resize(num_states, false);
    }
}

std::size_t RabinAutomaton::letter_of(const std::set<std::string>& labels) const {
    std::size_t letter = 0;
    for (std::size_t i = 0; i < propositions_.size(); ++i) {
        if (labels.count(propositions_[i])) letter |= std::size_t{1} << i;
    }
    return letter;
}

bool RabinAutomaton::accepts_infinity_set(const std::vector<bool>& inf_states) const {
    for (const auto& pair : pairs_) {
        bool avoided = true;
        bool repeated = false;
        for (std::size_t q = 0; q < num_states(); ++q) {
            if (!inf_states[q]) continue;
            if (pair.avoid[q]) avoided = false;
            if (pair.repeat[q]) repeated = true;
        }
        if (avoided && repeated) return true;
    }
    return false;
}

namespace {

enum class Tok { Header, Ident, Int, String, Symbol, Body, End, Eof };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (pos_ >= text_.size()) {
                out.push_back({Tok::Eof, "", line_, column_});
                return out;
            }
            std::size_t line = line_;
            std::size_t column = column_;
            char c = text_[pos_];
            if (text_.substr(pos_, 8) == "--BODY--") {
                advance(8);
                out.push_back({Tok::Body, "--BODY--", line, column});
            } else if (text_.substr(pos_, 7) == "--END--") {
                advance(7);
                out.push_back({Tok::End, "--END--", line, column});
            } else if (c == '"') {
                advance(1);
                std::string s;
                while (pos_ < text_.size() && text_[pos_] != '"') {
                    if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) advance(1);
                    s += text_[pos_];
                    advance(1);
                }
                if (pos_ >= text_.size()) throw ParseError("unterminated string", line, column);
                advance(1);
                out.push_back({Tok::String, s, line, column});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::string s;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    s += text_[pos_];
                    advance(1);
                }
                out.push_back({Tok::Int, s, line, column});
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string s;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '-')) {
                    s += text_[pos_];
                    advance(1);
                }
                if (pos_ < text_.size() && text_[pos_] == ':') {
                    advance(1);
                    out.push_back({Tok::Header, s, line, column});
                } else {
                    out.push_back({Tok::Ident, s, line, column});
                }
            } else if (std::string_view("[]{}()!&|").find(c) != std::string_view::npos) {
                advance(1);
                out.push_back({Tok::Symbol, std::string(1, c), line, column});
            } else {
                throw ParseError(std::string("unexpected character '") + c + "'", line, column);
            }
        }
    }

private:
    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
            if (text_[pos_] == '\n') {
                ++line_;
                column_ = 1;
            } else {
                ++column_;
            }
        }
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                advance(1);
            } else if (text_.substr(pos_, 2) == "/*") {
                std::size_t close = text_.find("*/", pos_ + 2);
                if (close == std::string_view::npos) throw ParseError("unterminated comment", line_, column_);
                advance(close + 2 - pos_);
            } else {
                return;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

// Boolean formula used both for edge guards (atoms = AP indices) and acceptance (atoms = Fin/Inf).
struct Formula {
    enum class Kind { True, False, Atom, Fin, Inf, Not, And, Or } kind;
    std::size_t index = 0;
    std::vector<std::shared_ptr<Formula>> children;
};

using FormulaPtr = std::shared_ptr<Formula>;

FormulaPtr make(Formula::Kind kind, std::size_t index = 0) {
    auto f = std::make_shared<Formula>();
    f->kind = kind;
    f->index = index;
    return f;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const HoaOptions& options) : tokens_(std::move(tokens)), options_(options) {}

    RabinAutomaton parse() {
        parse_header();
        parse_body();
        return assemble();
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& message, const Token& at) const {
        throw ParseError(message, at.line, at.column);
    }

    bool at_symbol(char c) const { return peek().kind == Tok::Symbol && peek().text[0] == c; }

    void expect_symbol(char c) {
        if (!at_symbol(c)) fail(std::string("expected '") + c + "'", peek());
        take();
    }

    std::size_t take_int(const char* what) {
        if (peek().kind != Tok::Int) fail(std::string("expected ") + what, peek());
        const Token& t = take();
        if (t.text.size() > 9) fail(std::string(what) + " too large", t);
        return std::stoul(t.text);
    }

    void parse_header() {
        if (peek().kind != Tok::Header || peek().text != "HOA") fail("expected 'HOA:' header", peek());
        take();
        if (peek().kind != Tok::Ident || peek().text != "v1") fail("unsupported HOA version", peek());
        take();
        while (peek().kind != Tok::Body) {
            const Token& t = peek();
            if (t.kind == Tok::Eof) fail("missing --BODY--", t);
            if (t.kind != Tok::Header) fail("expected a header item", t);
            take();
            if (t.text == "States") {
                num_states_ = take_int("state count");
            } else if (t.text == "Start") {
                if (initial_) fail("multiple Start headers (a single initial state is required)", t);
                initial_ = take_int("start state");
                if (at_symbol('&')) fail("conjunctive start states are not supported", peek());
            } else if (t.text == "AP") {
                std::size_t n = take_int("AP count");
                for (std::size_t i = 0; i < n; ++i) {
                    if (peek().kind != Tok::String) fail("expected proposition name", peek());
                    aps_.push_back(take().text);
                }
            } else if (t.text == "Acceptance") {
                num_sets_ = take_int("acceptance set count");
                acceptance_ = parse_or(true);
                acceptance_token_ = t;
            } else {
                // acc-name, name, tool, properties, ...: skip their arguments
                while (peek().kind != Tok::Header && peek().kind != Tok::Body && peek().kind != Tok::Eof) take();
            }
        }
        take();
        if (!num_states_) fail("missing 'States:' header", peek());
        if (!initial_) fail("missing 'Start:' header", peek());
        if (!acceptance_) fail("missing 'Acceptance:' header", peek());
        if (*initial_ >= *num_states_) fail("start state out of range", peek());
    }

    FormulaPtr parse_or(bool acceptance) {
        auto left = parse_and(acceptance);
        if (!at_symbol('|')) return left;
        auto node = make(Formula::Kind::Or);
        node->children.push_back(std::move(left));
        while (at_symbol('|')) {
            take();
            node->children.push_back(parse_and(acceptance));
        }
        return node;
    }

    FormulaPtr parse_and(bool acceptance) {
        auto left = parse_unary(acceptance);
        if (!at_symbol('&')) return left;
        auto node = make(Formula::Kind::And);
        node->children.push_back(std::move(left));
        while (at_symbol('&')) {
            take();
            node->children.push_back(parse_unary(acceptance));
        }
        return node;
    }

    FormulaPtr parse_unary(bool acceptance) {
        const Token& t = peek();
        if (t.kind == Tok::Symbol && t.text == "!") {
            if (acceptance) fail("negation is not allowed in acceptance conditions", t);
            take();
            auto node = make(Formula::Kind::Not);
            node->children.push_back(parse_unary(acceptance));
            return node;
        }
        if (t.kind == Tok::Symbol && t.text == "(") {
            take();
            auto inner = parse_or(acceptance);
            expect_symbol(')');
            return inner;
        }
        if (t.kind == Tok::Ident && t.text == "t") {
            take();
            return make(Formula::Kind::True);
        }
        if (t.kind == Tok::Ident && t.text == "f") {
            take();
            return make(Formula::Kind::False);
        }
        if (acceptance) {
            if (t.kind == Tok::Ident && (t.text == "Fin" || t.text == "Inf")) {
                take();
                expect_symbol('(');
                const Token& at = peek();
                std::size_t set = take_int("acceptance set");
                if (set >= num_sets_) fail("acceptance set index out of range", at);
                expect_symbol(')');
                return make(t.text == "Fin" ? Formula::Kind::Fin : Formula::Kind::Inf, set);
            }
            fail("expected Fin(i), Inf(i), t or f", t);
        }
        if (t.kind == Tok::Int) {
            std::size_t index = take_int("proposition index");
            if (index >= aps_.size()) fail("unknown proposition index " + std::to_string(index), t);
            return make(Formula::Kind::Atom, index);
        }
        fail("expected a guard expression", t);
    }

    void parse_body() {
        marks_.assign(*num_states_, {});
        edges_.assign(*num_states_, {});
        std::vector<bool> seen(*num_states_, false);
        while (peek().kind != Tok::End) {
            const Token& t = peek();
            if (t.kind != Tok::Header || t.text != "State") fail("expected 'State:'", t);
            take();
            const Token& at = peek();
            std::size_t q = take_int("state index");
            if (q >= *num_states_) fail("state index out of range", at);
            if (seen[q]) fail("state " + std::to_string(q) + " declared twice", at);
            seen[q] = true;
            if (peek().kind == Tok::Ident && !at_symbol('[')) {
                // implicit-label state lists are not part of the subset
                fail("unexpected token '" + peek().text + "'", peek());
            }
            if (peek().kind == Tok::String) take();
            if (at_symbol('{')) marks_[q] = parse_marks();
            while (at_symbol('[')) {
                take();
                auto guard = parse_or(false);
                expect_symbol(']');
                const Token& dest_tok = peek();
                std::size_t dest = take_int("successor state");
                if (dest >= *num_states_) fail("successor state out of range", dest_tok);
                if (at_symbol('{')) fail("transition-based acceptance marks are not supported", peek());
                edges_[q].push_back({std::move(guard), dest, dest_tok});
            }
            if (peek().kind == Tok::Int) fail("edges without a guard are not supported", peek());
        }
        end_token_ = take();
    }

    std::vector<std::size_t> parse_marks() {
        expect_symbol('{');
        std::vector<std::size_t> marks;
        while (!at_symbol('}')) {
            const Token& at = peek();
            std::size_t set = take_int("acceptance set");
            if (set >= num_sets_) fail("acceptance set index out of range", at);
            marks.push_back(set);
        }
        take();
        return marks;
    }

    static bool eval_guard(const Formula& f, std::size_t letter) {
        switch (f.kind) {
            case Formula::Kind::True: return true;
            case Formula::Kind::False: return false;
            case Formula::Kind::Atom: return (letter >> f.index) & 1U;
            case Formula::Kind::Not: return !eval_guard(*f.children[0], letter);
            case Formula::Kind::And:
                return std::all_of(f.children.begin(), f.children.end(),
                                   [&](const FormulaPtr& c) { return eval_guard(*c, letter); });
            case Formula::Kind::Or:
                return std::any_of(f.children.begin(), f.children.end(),
                                   [&](const FormulaPtr& c) { return eval_guard(*c, letter); });
            default: return false;
        }
    }

    // A conjunction of Fin/Inf atoms; nullopt when the conjunction is unsatisfiable ('f').
    struct Clause {
        std::set<std::size_t> fin;
        std::set<std::size_t> inf;
    };

    std::vector<Clause> to_dnf(const Formula& f) const {
        switch (f.kind) {
            case Formula::Kind::True: return {Clause{}};
            case Formula::Kind::False: return {};
            case Formula::Kind::Fin: return {Clause{{f.index}, {}}};
            case Formula::Kind::Inf: return {Clause{{}, {f.index}}};
            case Formula::Kind::Or: {
                std::vector<Clause> out;
                for (const auto& c : f.children) {
                    auto part = to_dnf(*c);
                    out.insert(out.end(), part.begin(), part.end());
                }
                return out;
            }
            case Formula::Kind::And: {
                std::vector<Clause> out{Clause{}};
                for (const auto& c : f.children) {
                    auto part = to_dnf(*c);
                    std::vector<Clause> next;
                    for (const auto& a : out) {
                        for (const auto& b : part) {
                            Clause merged = a;
                            merged.fin.insert(b.fin.begin(), b.fin.end());
                            merged.inf.insert(b.inf.begin(), b.inf.end());
                            next.push_back(std::move(merged));
                        }
                    }
                    out = std::move(next);
                }
                return out;
            }
            default: return {};
        }
    }

    RabinAutomaton assemble() {
        std::size_t n = *num_states_;
        std::size_t letters = std::size_t{1} << aps_.size();
        if (aps_.size() > 16) fail("at most 16 atomic propositions are supported", end_token_);
        std::optional<std::size_t> sink;
        std::vector<std::vector<std::size_t>> delta(n, std::vector<std::size_t>(letters, npos));
        for (std::size_t q = 0; q < n; ++q) {
            for (const auto& edge : edges_[q]) {
                for (std::size_t letter = 0; letter < letters; ++letter) {
                    if (!eval_guard(*edge.guard, letter)) continue;
                    if (delta[q][letter] != npos && delta[q][letter] != edge.target) {
                        fail("automaton is not deterministic: state " + std::to_string(q) +
                                 " has two successors for one letter",
                             edge.at);
                    }
                    delta[q][letter] = edge.target;
                }
            }
            for (std::size_t letter = 0; letter < letters; ++letter) {
                if (delta[q][letter] != npos) continue;
                if (!options_.complete) {
                    fail("transition function not total: state " + std::to_string(q) + " has no successor for letter " +
                             letter_text(letter),
                         end_token_);
                }
                if (!sink) {
                    sink = delta.size();
                    delta.emplace_back(letters, *sink);
                }
                delta[q][letter] = *sink;
            }
        }
        std::size_t total = delta.size();
        std::vector<RabinPair> pairs;
        for (const Clause& clause : to_dnf(*acceptance_)) {
            if (clause.inf.size() > 1) {
                fail("acceptance is not a Rabin condition (conjunction of several Inf)", acceptance_token_);
            }
            RabinPair pair{std::vector<bool>(total, false), std::vector<bool>(total, clause.inf.empty())};
            for (std::size_t q = 0; q < n; ++q) {
                for (std::size_t set : marks_[q]) {
                    if (clause.fin.count(set)) pair.avoid[q] = true;
                    if (clause.inf.count(set)) pair.repeat[q] = true;
                }
            }
            if (sink) pair.repeat[*sink] = false;
            pairs.push_back(std::move(pair));
        }
        if (pairs.empty()) pairs.push_back(RabinPair{std::vector<bool>(total, false), std::vector<bool>(total, false)});
        return RabinAutomaton(aps_, total, *initial_, std::move(delta), std::move(pairs));
    }

    std::string letter_text(std::size_t letter) const {
        std::string s = "{";
        bool first = true;
        for (std::size_t i = 0; i < aps_.size(); ++i) {
            if ((letter >> i) & 1U) {
                s += (first ? "" : ",") + aps_[i];
                first = false;
            }
        }
        return s + "}";
    }

    struct Edge {
        FormulaPtr guard;
        std::size_t target;
        Token at;
    };

    std::vector<Token> tokens_;
    HoaOptions options_;
    std::size_t pos_ = 0;
    std::optional<std::size_t> num_states_;
    std::optional<std::size_t> initial_;
    std::vector<std::string> aps_;
    std::size_t num_sets_ = 0;
    FormulaPtr acceptance_;
    Token acceptance_token_{Tok::Eof, "", 0, 0};
    Token end_token_{Tok::Eof, "", 0, 0};
    std::vector<std::vector<std::size_t>> marks_;
    std::vector<std::vector<Edge>> edges_;
};

RabinAutomaton single_prop(const std::string& proposition, std::vector<std::vector<std::size_t>> delta,
                           RabinPair pair) {
    std::size_t n = delta.size();
    return RabinAutomaton({proposition}, n, 0, std::move(delta), {std::move(pair)});
}

}  // namespace

RabinAutomaton parse_automaton(std::string_view text, const HoaOptions& options) {
    Parser parser(Lexer(text).run(), options);
    return parser.parse();
}

std::string to_hoa(const RabinAutomaton& automaton) {
    std::ostringstream out;
    const auto& aps = automaton.propositions();
    out << "HOA: v1\nStates: " << automaton.num_states() << "\nStart: " << automaton.initial() << "\nAP: " << aps.size();
    for (const auto& p : aps) out << " \"" << p << "\"";
    out << "\nacc-name: Rabin " << automaton.pairs().size() << "\nAcceptance: " << 2 * automaton.pairs().size() << " ";
    for (std::size_t i = 0; i < automaton.pairs().size(); ++i) {
        out << (i ? "|" : "") << "(Fin(" << 2 * i << ")&Inf(" << 2 * i + 1 << "))";
    }
    out << "\n--BODY--\n";
    for (std::size_t q = 0; q < automaton.num_states(); ++q) {
        out << "State: " << q;
        std::vector<std::size_t> marks;
        for (std::size_t i = 0; i < automaton.pairs().size(); ++i) {
            if (automaton.pairs()[i].avoid[q]) marks.push_back(2 * i);
            if (automaton.pairs()[i].repeat[q]) marks.push_back(2 * i + 1);
        }
        if (!marks.empty()) {
            out << " {";
            for (std::size_t j = 0; j < marks.size(); ++j) out << (j ? " " : "") << marks[j];
            out << "}";
        }
        out << "\n";
        for (std::size_t letter = 0; letter < automaton.num_letters(); ++letter) {
            out << "  [";
            if (aps.empty()) out << "t";
            for (std::size_t i = 0; i < aps.size(); ++i) {
                out << (i ? "&" : "") << (((letter >> i) & 1U) ? "" : "!") << i;
            }
            out << "] " << automaton.next(q, letter) << "\n";
        }
    }
    out << "--END--\n";
    return out.str();
}

RabinAutomaton reach_automaton(const std::string& proposition) {
    return single_prop(proposition, {{0, 1}, {1, 1}}, RabinPair{{false, false}, {false, true}});
}

RabinAutomaton avoid_automaton(const std::string& proposition) {
    return single_prop(proposition, {{0, 1}, {1, 1}}, RabinPair{{false, true}, {true, false}});
}

RabinAutomaton buchi_automaton(const std::string& proposition) {
    return single_prop(proposition, {{0, 1}, {0, 1}}, RabinPair{{false, false}, {false, true}});
}

}  // namespace mocheck
