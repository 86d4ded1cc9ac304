#include "mocheck/oracle.hpp"

#include "mocheck/chain.hpp"
#include "mocheck/error.hpp"
#include "mocheck/parallel.hpp"
#include "mocheck/pareto.hpp"
#include "mocheck/product.hpp"

#include <omp.h>

#include <algorithm>
#include <random>
#include <set>

namespace mocheck {
namespace {

std::vector<Rational> outcome(const Mdp& mdp, const std::vector<std::vector<StateId>>& targets,
                              const std::vector<std::size_t>& radix, std::size_t index) {
    std::vector<std::size_t> actions(mdp.num_states());
    for (StateId v = 0; v < mdp.num_states(); ++v) {
        actions[v] = index % radix[v];
        index /= radix[v];
    }
    InducedChain chain = induced_chain(mdp, MemorylessStrategy::pure(mdp, actions));
    return reach_probabilities(chain, targets);
}

void sort_unique(std::vector<std::vector<Rational>>& points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
}

// Normal of the hyperplane through the given difference / direction rows (k-1 rows of length k),
// or empty when the rows are dependent.
std::vector<Rational> null_vector(std::vector<std::vector<Rational>> rows, std::size_t k) {
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < k && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[r]);
        Rational inv = 1 / rows[r][c];
        for (auto& x : rows[r]) x *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            Rational f = rows[i][c];
            for (std::size_t j = 0; j < k; ++j) rows[i][j] -= f * rows[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    if (r + 1 != k) return {};
    std::size_t free = 0;
    while (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) ++free;
    std::vector<Rational> w(k, 0);
    w[free] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) w[pivot_col[i]] = -rows[i][free];
    return w;
}

std::vector<HalfSpace> halfspaces_of(const std::vector<std::vector<Rational>>& points, std::size_t k) {
    // generators: points (index < n) and recession directions -e_i (index n + i)
    std::size_t n = points.size();
    std::size_t g = n + k;
    std::set<std::vector<Rational>> normals;
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    if (k > g) return {};
    while (true) {
        if (pick[0] < n) {
            const auto& base = points[pick[0]];
            std::vector<std::vector<Rational>> rows;
            for (std::size_t j = 1; j < k; ++j) {
                std::vector<Rational> row(k, 0);
                if (pick[j] < n) {
                    for (std::size_t c = 0; c < k; ++c) row[c] = points[pick[j]][c] - base[c];
                } else {
                    row[pick[j] - n] = 1;
                }
                rows.push_back(std::move(row));
            }
            std::vector<Rational> w = null_vector(std::move(rows), k);
            if (!w.empty()) {
                bool nonneg = std::all_of(w.begin(), w.end(), [](const Rational& x) { return x >= 0; });
                bool nonpos = std::all_of(w.begin(), w.end(), [](const Rational& x) { return x <= 0; });
                if (nonneg || nonpos) {
                    Rational sum = 0;
                    for (const auto& x : w) sum += x;
                    for (auto& x : w) x /= sum;
                    normals.insert(std::move(w));
                }
            }
        }
        // next k-combination of g generators
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == g - k + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    std::vector<HalfSpace> out;
    for (const auto& w : normals) {
        Rational h = 0;
        bool first = true;
        for (const auto& p : points) {
            Rational v = 0;
            for (std::size_t c = 0; c < k; ++c) v += w[c] * p[c];
            if (first || v > h) h = v;
            first = false;
        }
        out.push_back({w, h});
    }
    return out;
}

bool inside(const std::vector<HalfSpace>& halfspaces, const std::vector<Rational>& r) {
    for (const auto& hs : halfspaces) {
        Rational v = 0;
        for (std::size_t c = 0; c < r.size(); ++c) v += hs.normal[c] * r[c];
        if (v > hs.offset) return false;
    }
    return true;
}

}  // namespace

std::size_t count_pure_strategies(const Mdp& mdp, std::size_t cap) {
    std::size_t total = 1;
    for (const auto& s : mdp.states()) {
        if (total > cap / s.actions.size()) return cap + 1;
        total *= s.actions.size();
    }
    return total;
}

std::vector<std::vector<Rational>> enumerate_pure_outcomes(const Mdp& mdp, const std::vector<std::vector<StateId>>& targets,
                                                           const OracleOptions& options) {
    std::size_t total = count_pure_strategies(mdp, options.cap);
    if (total > options.cap) {
        throw ArgumentError("more than " + std::to_string(options.cap) + " pure memoryless strategies");
    }
    std::vector<std::size_t> radix;
    for (const auto& s : mdp.states()) radix.push_back(s.actions.size());
    std::vector<std::vector<Rational>> points;
    if (!options.parallel) {
        for (std::size_t i = 0; i < total; ++i) points.push_back(outcome(mdp, targets, radix, i));
        sort_unique(points);
        return points;
    }
    int threads = worker_count();
    std::vector<std::vector<std::vector<Rational>>> local(static_cast<std::size_t>(threads));
    std::vector<std::string> errors(static_cast<std::size_t>(threads));
    const auto count = static_cast<long long>(total);
#pragma omp parallel for num_threads(threads) schedule(dynamic, 16)
    for (long long i = 0; i < count; ++i) {
        auto t = static_cast<std::size_t>(omp_get_thread_num());
        try {
            local[t].push_back(outcome(mdp, targets, radix, static_cast<std::size_t>(i)));
        } catch (const std::exception& e) {
            errors[t] = e.what();
        }
        if (local[t].size() >= 4096) sort_unique(local[t]);
    }
    for (const auto& e : errors) {
        if (!e.empty()) throw Error(e);
    }
    for (auto& l : local) points.insert(points.end(), std::make_move_iterator(l.begin()), std::make_move_iterator(l.end()));
    sort_unique(points);
    return points;
}

HullOracle hull_from_points(std::vector<std::vector<Rational>> points) {
    if (points.empty()) throw ArgumentError("hull of an empty point set");
    HullOracle oracle;
    oracle.dimension = points.front().size();
    sort_unique(points);
    oracle.points = std::move(points);
    for (std::size_t i : non_dominated(oracle.points)) oracle.pareto.push_back(oracle.points[i]);
    oracle.halfspaces = halfspaces_of(oracle.pareto, oracle.dimension);
    for (std::size_t i = 0; i < oracle.pareto.size(); ++i) {
        std::vector<std::vector<Rational>> others;
        for (std::size_t j = 0; j < oracle.pareto.size(); ++j) {
            if (j != i) others.push_back(oracle.pareto[j]);
        }
        if (others.empty() || !inside(halfspaces_of(others, oracle.dimension), oracle.pareto[i])) {
            oracle.vertices.push_back(oracle.pareto[i]);
        }
    }
    return oracle;
}

HullOracle build_hull_oracle(const Mdp& mdp, const std::vector<std::vector<StateId>>& targets, const OracleOptions& options) {
    HullOracle oracle = hull_from_points(enumerate_pure_outcomes(mdp, targets, options));
    oracle.strategies = count_pure_strategies(mdp, options.cap);
    return oracle;
}

bool HullOracle::contains(const std::vector<Rational>& r, const std::vector<bool>& strict) const {
    if (r.size() != dimension) throw ArgumentError("membership query dimension mismatch");
    for (const auto& hs : halfspaces) {
        Rational v = 0;
        for (std::size_t c = 0; c < dimension; ++c) v += hs.normal[c] * r[c];
        if (v > hs.offset) return false;
        if (v == hs.offset) {
            for (std::size_t j = 0; j < strict.size() && j < dimension; ++j) {
                if (strict[j] && hs.normal[j] != 0) return false;
            }
        }
    }
    return true;
}

Rational HullOracle::support(const std::vector<Rational>& weight) const {
    Rational best = 0;
    bool first = true;
    for (const auto& p : pareto) {
        Rational v = 0;
        for (std::size_t c = 0; c < dimension; ++c) v += weight[c] * p[c];
        if (first || v > best) best = v;
        first = false;
    }
    return best;
}

const char* to_string(Comparison comparison) {
    switch (comparison) {
        case Comparison::Geq: return ">=";
        case Comparison::Gt: return ">";
        case Comparison::Leq: return "<=";
        case Comparison::Lt: return "<";
        case Comparison::Eq: return "=";
    }
    return "?";
}

bool holds(const Rational& actual, const Claim& claim) {
    switch (claim.comparison) {
        case Comparison::Geq: return actual >= claim.bound;
        case Comparison::Gt: return actual > claim.bound;
        case Comparison::Leq: return actual <= claim.bound;
        case Comparison::Lt: return actual < claim.bound;
        case Comparison::Eq: return actual == claim.bound;
    }
    return false;
}

Claim parse_claim(std::string_view text) {
    Claim claim;
    std::size_t skip = 0;
    if (text.starts_with(">=")) {
        skip = 2;
    } else if (text.starts_with("<=")) {
        claim.comparison = Comparison::Leq;
        skip = 2;
    } else if (text.starts_with(">")) {
        claim.comparison = Comparison::Gt;
        skip = 1;
    } else if (text.starts_with("<")) {
        claim.comparison = Comparison::Lt;
        skip = 1;
    } else if (text.starts_with("=")) {
        claim.comparison = Comparison::Eq;
        skip = 1;
    }
    claim.bound = parse_rational(text.substr(skip));
    return claim;
}

bool ValidationReport::pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const ValidationRow& r) { return r.pass; });
}

nlohmann::json ValidationReport::to_json() const {
    nlohmann::json out;
    out["verdict"] = pass() ? "pass" : "fail";
    out["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        out["rows"].push_back({{"objective", r.objective},
                               {"claim", std::string(to_string(r.claim.comparison)) + mocheck::to_string(r.claim.bound)},
                               {"actual", mocheck::to_string(r.actual)},
                               {"actual_decimal", to_decimal(r.actual)},
                               {"verdict", r.pass ? "pass" : "fail"}});
    }
    return out;
}

namespace {

ValidationReport compare(const std::vector<Rational>& actual, const std::vector<std::string>& names,
                         const std::vector<Claim>& claims) {
    if (claims.size() != actual.size()) throw ArgumentError("one claim per objective is required");
    ValidationReport report;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        std::string name = i < names.size() ? names[i] : "objective " + std::to_string(i + 1);
        report.rows.push_back({name, claims[i], actual[i], holds(actual[i], claims[i])});
    }
    return report;
}

}  // namespace

ValidationReport validate_reach(const Mdp& mdp, const std::vector<std::vector<StateId>>& targets,
                                const std::vector<std::string>& names, const FiniteMemoryStrategy& strategy,
                                const std::vector<Claim>& claims) {
    strategy.validate(mdp);
    return compare(reach_probabilities(induced_chain(mdp, strategy), targets), names, claims);
}

ValidationReport validate_omega(const Mdp& mdp, const std::vector<RabinAutomaton>& automata,
                                const std::vector<std::string>& names, const FiniteMemoryStrategy& strategy,
                                const std::vector<Claim>& claims) {
    strategy.validate(mdp);
    return compare(omega_regular_probabilities(mdp, strategy, automata), names, claims);
}

HardInstance gen_hard_instance(std::size_t layers, std::uint64_t seed, std::size_t width) {
    if (layers < 2) throw ArgumentError("hard instances need at least 2 layers");
    if (layers > kMaxHardLayers) throw ArgumentError("at most " + std::to_string(kMaxHardLayers) + " layers are supported");
    if (width < 1 || width > 16) throw ArgumentError("layer width must lie in [1, 16]");
    HardInstance inst;
    inst.layers = layers;
    LayeredGraph& g = inst.graph;
    auto add_node = [&](std::string name, std::size_t layer) {
        g.names.push_back(std::move(name));
        g.layer_of.push_back(layer);
        g.out.emplace_back();
        return g.names.size() - 1;
    };
    g.layers.push_back({add_node("s", 0)});
    for (std::size_t i = 1; i < layers; ++i) {
        std::vector<std::size_t> layer;
        for (std::size_t j = 0; j < width; ++j) layer.push_back(add_node("u" + std::to_string(i) + "_" + std::to_string(j), i));
        g.layers.push_back(std::move(layer));
    }
    g.layers.push_back({add_node("t", layers)});
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < layers; ++i) {
        long scale = 1L << i;
        std::uniform_int_distribution<long> noise(0, std::max(0L, scale / 2));
        const auto& next = g.layers[i + 1];
        for (std::size_t u : g.layers[i]) {
            for (std::size_t j = 0; j < next.size(); ++j) {
                long c = 1 + static_cast<long>(j) * scale + noise(rng);
                long d = 1 + static_cast<long>(next.size() - 1 - j) * scale + noise(rng);
                g.out[u].push_back(g.edges.size());
                g.edges.push_back({u, next[j], c, d});
            }
        }
    }
    for (const auto& e : g.edges) inst.h = std::max({inst.h, e.cost_c, e.cost_d});

    mpz_class two_n = 1;
    mpz_mul_2exp(two_n.get_mpz_t(), two_n.get_mpz_t(), static_cast<mp_bitcnt_t>(layers));
    Rational denom = Rational(8 * inst.h) * Rational(two_n);
    MdpBuilder builder;
    builder.add_proposition("R").add_proposition("B");
    for (const auto& name : g.names) builder.add_state(name);
    builder.add_state("R", {"R"}).add_state("B", {"B"});
    for (const char* sink : {"t", "R", "B"}) builder.add_transition(sink, "stay", sink, 1);
    for (const auto& e : g.edges) {
        std::size_t i = g.layer_of[e.from];
        mpz_class pow = 1;
        mpz_mul_2exp(pow.get_mpz_t(), pow.get_mpz_t(), static_cast<mp_bitcnt_t>(i));
        Rational r = Rational(pow) * Rational(2 * inst.h - e.cost_c) / denom;
        Rational b = Rational(pow) * Rational(2 * inst.h - e.cost_d) / denom;
        const std::string& from = g.names[e.from];
        const std::string& to = g.names[e.to];
        std::string action = "to_" + to;
        builder.add_transition(from, action, "R", r);
        builder.add_transition(from, action, "B", b);
        Rational half(1, 2);
        if (to == "t") {
            builder.add_transition(from, action, "t", 1 - r - b);
        } else {
            builder.add_transition(from, action, to, half);
            builder.add_transition(from, action, "t", half - r - b);
        }
    }
    builder.set_initial("s");
    inst.mdp = builder.build();
    inst.targets = {{inst.mdp.state_id("R")}, {inst.mdp.state_id("B")}};
    inst.a = Rational(static_cast<long>(layers)) / (4 * Rational(two_n));
    inst.b = 1 / denom;
    return inst;
}

std::vector<PathCost> enumerate_paths(const LayeredGraph& graph) {
    std::vector<PathCost> out;
    PathCost current{0, 0, {}};
    std::size_t target = graph.layers.back().front();
    auto dfs = [&](auto&& self, std::size_t node) -> void {
        if (node == target) {
            out.push_back(current);
            return;
        }
        for (std::size_t e : graph.out[node]) {
            const auto& edge = graph.edges[e];
            current.c += edge.cost_c;
            current.d += edge.cost_d;
            current.edges.push_back(e);
            self(self, edge.to);
            current.edges.pop_back();
            current.c -= edge.cost_c;
            current.d -= edge.cost_d;
        }
    };
    dfs(dfs, graph.layers.front().front());
    return out;
}

MemorylessStrategy path_strategy(const HardInstance& instance, const PathCost& path) {
    const Mdp& mdp = instance.mdp;
    std::vector<std::size_t> actions(mdp.num_states(), 0);
    for (std::size_t e : path.edges) {
        const auto& edge = instance.graph.edges[e];
        StateId v = mdp.state_id(instance.graph.names[edge.from]);
        actions[v] = *mdp.find_action(v, "to_" + instance.graph.names[edge.to]);
    }
    return MemorylessStrategy::pure(mdp, actions);
}

}  // namespace mocheck
