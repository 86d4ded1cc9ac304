#pragma once

#include "mocheck/automaton.hpp"
#include "mocheck/mdp.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mocheck {

/// Valid inequality w . y <= h of the downward closed hull, w >= 0.
struct HalfSpace {
    std::vector<Rational> normal;
    Rational offset;
};

/// Downward closure of the convex hull of the outcome vectors of all pure memoryless strategies.
struct HullOracle {
    std::size_t dimension = 0;
    std::size_t strategies = 0;                  // pure memoryless strategies enumerated
    std::vector<std::vector<Rational>> points;   // distinct outcome vectors
    std::vector<std::vector<Rational>> pareto;   // the non-dominated ones
    std::vector<std::vector<Rational>> vertices; // extreme points of the downward closed hull
    std::vector<HalfSpace> halfspaces;           // includes every facet

    /// r achievable (>= on every coordinate), with > on the coordinates flagged in `strict`.
    bool contains(const std::vector<Rational>& r, const std::vector<bool>& strict = {}) const;
    /// max over the hull of w . y
    Rational support(const std::vector<Rational>& weight) const;
};

struct OracleOptions {
    std::size_t cap = 1'000'000;  // maximal number of pure memoryless strategies
    bool parallel = true;
};

/// Outcome vectors Pr(reach targets_i) of every pure memoryless strategy, deduplicated and sorted.
/// Throws ArgumentError when the strategy count exceeds the cap.
std::vector<std::vector<Rational>> enumerate_pure_outcomes(const Mdp& mdp, const std::vector<std::vector<StateId>>& targets,
                                                           const OracleOptions& options = {});
std::size_t count_pure_strategies(const Mdp& mdp, std::size_t cap);

HullOracle hull_from_points(std::vector<std::vector<Rational>> points);
HullOracle build_hull_oracle(const Mdp& mdp, const std::vector<std::vector<StateId>>& targets,
                             const OracleOptions& options = {});

enum class Comparison { Geq, Gt, Leq, Lt, Eq };

struct Claim {
    Comparison comparison = Comparison::Geq;
    Rational bound;
};

const char* to_string(Comparison comparison);
bool holds(const Rational& actual, const Claim& claim);
/// Parses ">=1/2", ">0", "<=0.3", "=1", or a bare number (meaning >=).
Claim parse_claim(std::string_view text);

struct ValidationRow {
    std::string objective;
    Claim claim;
    Rational actual;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    bool pass() const;
    nlohmann::json to_json() const;
};

/// Exact probabilities on the induced (mode-extended) chain, compared against the claims.
ValidationReport validate_reach(const Mdp& mdp, const std::vector<std::vector<StateId>>& targets,
                                const std::vector<std::string>& names, const FiniteMemoryStrategy& strategy,
                                const std::vector<Claim>& claims);
ValidationReport validate_omega(const Mdp& mdp, const std::vector<RabinAutomaton>& automata,
                                const std::vector<std::string>& names, const FiniteMemoryStrategy& strategy,
                                const std::vector<Claim>& claims);

/// Layered s-t graph with two integer costs per edge.
struct LayeredGraph {
    struct Edge {
        std::size_t from;
        std::size_t to;
        long cost_c;
        long cost_d;
    };
    std::vector<std::vector<std::size_t>> layers;  // layers[0] = {s}, layers.back() = {t}
    std::vector<std::string> names;
    std::vector<std::size_t> layer_of;
    std::vector<Edge> edges;
    std::vector<std::vector<std::size_t>> out;  // edge indices per node
};

struct HardInstance {
    std::size_t layers = 0;  // n: s in layer 0, t in layer n
    LayeredGraph graph;
    long h = 0;              // maximal edge cost
    Mdp mdp;
    std::vector<std::vector<StateId>> targets;  // {R}, {B}
    Rational a;              // Pr(reach R) = a - b * c(path)
    Rational b;
};

inline constexpr std::size_t kMaxHardLayers = 30;

/// Layered graph with `width` nodes per inner layer, complete bipartite between consecutive layers,
/// costs c = j*2^i + noise, d = (width-1-j)*2^i + noise for an edge from layer i into node j, and the
/// MDP whose pure strategies correspond to s-t paths.
HardInstance gen_hard_instance(std::size_t layers, std::uint64_t seed, std::size_t width = 2);

/// (c(path), d(path)) for every s-t path, with the edge sequence.
struct PathCost {
    long c;
    long d;
    std::vector<std::size_t> edges;
};
std::vector<PathCost> enumerate_paths(const LayeredGraph& graph);

/// Pure memoryless strategy of the hard-instance MDP following `path` (least action off the path).
MemorylessStrategy path_strategy(const HardInstance& instance, const PathCost& path);

}  // namespace mocheck
