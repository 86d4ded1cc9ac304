#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include "mocheck/oracle.hpp"
#include "mocheck/pareto.hpp"
#include "mocheck/problem.hpp"
#include "mocheck/product.hpp"
#include "mocheck/query.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace mocheck;
using namespace mocheck::testing;

namespace {

using Clock = std::chrono::steady_clock;
using Vector = std::vector<Rational>;

struct Verdict {
    bool pass = true;
    std::string detail;
};

struct StrategyCheck {
    std::size_t checked = 0;
    std::size_t failed = 0;

    void record(const Vector& actual, const Vector& bound, const std::vector<bool>& strict) {
        ++checked;
        for (std::size_t i = 0; i < bound.size(); ++i) {
            bool s = i < strict.size() && strict[i];
            if (s ? !(actual[i] > bound[i]) : !(actual[i] >= bound[i])) {
                ++failed;
                return;
            }
        }
    }
};

StrategyCheck soundness;

bool report(int id, const char* name, double limit_s, const std::function<Verdict()>& body) {
    auto start = Clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    bool ok = v.pass && elapsed < limit_s;
    std::printf("[%s] criterion %d %s: %s (%.2fs, limit %.0fs)\n", ok ? "PASS" : "FAIL", id, name, v.detail.c_str(), elapsed,
                limit_s);
    std::fflush(stdout);
    return ok;
}

Vector rationals(std::initializer_list<const char*> texts) {
    Vector out;
    for (const char* t : texts) out.push_back(parse_rational(t));
    return out;
}

Rational random_fraction(std::mt19937_64& rng, long den) {
    Rational r(static_cast<long>(rng() % static_cast<unsigned long>(den + 1)), den);
    r.canonicalize();
    return r;
}

// Records the exact probabilities of a yes-answer's memoryless strategy on a direct reachability problem.
void check_direct(const ReachProblem& p, const AchievabilityResult& res, const Vector& bound, const std::vector<bool>& strict) {
    MemorylessStrategy sigma = restore_strategy(p.cleanup, p.source, *res.strategy);
    soundness.record(exact_reach(p.source, sigma, p.targets), bound, strict);
}

Verdict split() {
    Mdp m = load_model("split.json");
    ReachProblem p = reach_problem(m, {"P1", "P2"});
    ParetoResult vertices = exact_vertices_biobjective(p.lp);
    std::vector<Vector> expected{rationals({"3/5", "0"}), rationals({"1/2", "1/2"}), rationals({"0", "4/5"})};
    bool ok = vertices.values() == expected;
    std::ostringstream detail;
    detail << "vertices";
    for (const auto& v : vertices.values()) detail << " (" << to_string(v[0]) << "," << to_string(v[1]) << ")";
    struct Case {
        Vector bound;
        bool expect;
    };
    for (const Case& c : {Case{rationals({"1/2", "1/2"}), true}, Case{rationals({"3/10", "2/5"}), true},
                          Case{rationals({"0.55", "0.3"}), false}}) {
        AchievabilityResult res = decide_extended_achievability(p.lp, c.bound, {});
        ok = ok && res.achievable == c.expect;
        detail << "; " << to_string(c.bound[0]) << "," << to_string(c.bound[1]) << " -> " << (res.achievable ? "yes" : "no");
        if (res.achievable) check_direct(p, res, c.bound, {});
    }
    return {ok, detail.str()};
}

// Every memoryless strategy playing its support uniformly, and every pure strategy with two memory modes.
bool loops_exhaustive_refutes(const Mdp& m, const std::vector<RabinAutomaton>& automata, std::size_t& tried) {
    auto satisfies = [&](const FiniteMemoryStrategy& s) {
        auto values = omega_regular_probabilities(m, s, automata);
        return values[0] > 0 && values[1] > 0;
    };
    std::size_t n = m.num_states();
    std::vector<std::size_t> support(n, 1);
    std::function<bool(StateId)> memoryless = [&](StateId v) -> bool {
        if (v == n) {
            MemorylessStrategy sigma;
            sigma.choice.resize(n);
            for (StateId x = 0; x < n; ++x) {
                std::size_t count = __builtin_popcountll(support[x]);
                for (std::size_t a = 0; a < m.state(x).actions.size(); ++a) {
                    if ((support[x] >> a) & 1) sigma.choice[x].emplace_back(a, Rational(1, static_cast<long>(count)));
                }
            }
            ++tried;
            return !satisfies(FiniteMemoryStrategy::from_memoryless(sigma));
        }
        for (support[v] = 1; support[v] < (std::size_t{1} << m.state(v).actions.size()); ++support[v]) {
            if (!memoryless(v + 1)) return false;
        }
        return true;
    };
    if (!memoryless(0)) return false;

    const std::size_t modes = 2;
    std::vector<std::pair<StateId, std::size_t>> slots;
    for (StateId v = 0; v < n; ++v) {
        for (std::size_t k = 0; k < modes; ++k) slots.push_back({v, k});
    }
    std::vector<FiniteMemoryStrategy::UpdateKey> keys;
    for (StateId v = 0; v < n; ++v) {
        for (std::size_t k = 0; k < modes; ++k) {
            for (std::size_t a = 0; a < m.state(v).actions.size(); ++a) {
                for (const auto& t : m.state(v).actions[a].transitions) keys.emplace_back(v, k, a, t.target);
            }
        }
    }
    std::size_t choices = 1;
    for (const auto& [v, k] : slots) choices *= m.state(v).actions.size();
    std::size_t updates = std::size_t{1} << keys.size();
    for (std::size_t init = 0; init < modes; ++init) {
        for (std::size_t c = 0; c < choices; ++c) {
            for (std::size_t u = 0; u < updates; ++u) {
                FiniteMemoryStrategy s(n, modes);
                s.initial_mode = init;
                std::size_t rest = c;
                for (const auto& [v, k] : slots) {
                    std::size_t count = m.state(v).actions.size();
                    s.at(v, k) = {{rest % count, Rational(1)}};
                    rest /= count;
                }
                for (std::size_t i = 0; i < keys.size(); ++i) s.update[keys[i]] = {{(u >> i) & 1, Rational(1)}};
                ++tried;
                if (satisfies(s)) return false;
            }
        }
    }
    return true;
}

Verdict loops() {
    Mdp m = load_model("loops.json");
    QueryFile file = parse_query_file(read_file(data_path("loops_query.txt")), MOCHECK_DATA_DIR);
    QueryResult r = evaluate(m, file.properties, file.query);
    std::vector<RabinAutomaton> automata{buchi_automaton("P1"), buchi_automaton("P2")};
    bool ok = r.satisfiable && r.strategy.has_value();
    Vector values;
    if (ok) {
        ValidationReport v = validate_omega(m, automata, {"GFp1", "GFp2"}, *r.strategy, {parse_claim(">0"), parse_claim(">0")});
        for (const auto& row : v.rows) values.push_back(row.actual);
        ok = v.pass() && values == rationals({"1/2", "1/2"});
        soundness.record(values, {0, 0}, {true, true});
    }
    std::size_t tried = 0;
    bool refuted = loops_exhaustive_refutes(m, automata, tried);
    std::ostringstream detail;
    detail << (r.satisfiable ? "yes" : "no") << " via " << r.route;
    if (values.size() == 2) detail << ", validated (" << to_string(values[0]) << "," << to_string(values[1]) << ")";
    detail << "; " << tried << " pure/memoryless strategies " << (refuted ? "all fail" : "FOUND A WITNESS");
    return {ok && refuted, detail.str()};
}

struct RandomInstance {
    RandomReachInstance inst;
    ReachProblem problem;
    HullOracle hull;
};

std::vector<RandomInstance> criterion3_instances() {
    std::mt19937_64 rng(20240601);
    std::vector<RandomInstance> out;
    while (out.size() < 200) {
        RandomReachInstance inst = random_reach_instance(rng);
        ReachProblem p = reach_problem(inst.mdp, inst.labels);
        HullOracle hull = build_hull_oracle(inst.mdp, inst.targets);
        out.push_back({std::move(inst), std::move(p), std::move(hull)});
    }
    return out;
}

std::vector<RandomInstance>& instances() {
    static std::vector<RandomInstance> set = criterion3_instances();
    return set;
}

Verdict lp_vs_hull() {
    std::mt19937_64 rng(7);
    std::size_t vectors = 0, mismatches = 0, boundary = 0, yes = 0;
    std::size_t min_per_instance = SIZE_MAX;
    for (const auto& ri : instances()) {
        const HullOracle& hull = ri.hull;
        std::size_t k = hull.dimension;
        std::vector<std::pair<Vector, std::vector<bool>>> samples;
        auto flags = [&] {
            std::vector<bool> s(k);
            for (std::size_t i = 0; i < k; ++i) s[i] = rng() % 2 == 0;
            return s;
        };
        for (const auto& v : hull.vertices) {
            samples.push_back({v, std::vector<bool>(k, false)});
            samples.push_back({v, std::vector<bool>(k, true)});
            samples.push_back({v, flags()});
        }
        for (std::size_t i = 0; i + 1 < hull.pareto.size(); ++i) {
            Vector mid(k);
            for (std::size_t j = 0; j < k; ++j) mid[j] = (hull.pareto[i][j] + hull.pareto[i + 1][j]) / 2;
            samples.push_back({mid, flags()});
        }
        while (samples.size() < 12) {
            Vector r(k);
            for (auto& x : r) x = random_fraction(rng, 8);
            if (!hull.vertices.empty() && rng() % 2 == 0) {
                const Vector& v = hull.vertices[rng() % hull.vertices.size()];
                for (std::size_t j = 0; j < k; ++j) r[j] = rng() % 2 == 0 ? v[j] : Rational(v[j] * 9 / 10);
            }
            samples.push_back({r, flags()});
        }
        min_per_instance = std::min(min_per_instance, samples.size());
        for (const auto& [r, strict] : samples) {
            ++vectors;
            bool expected = hull.contains(r, strict);
            AchievabilityResult res = decide_extended_achievability(ri.problem.lp, r, strict);
            if (res.achievable != expected) ++mismatches;
            if (!expected && hull.contains(r)) ++boundary;
            if (res.achievable) {
                ++yes;
                check_direct(ri.problem, res, r, strict);
            }
        }
    }
    std::ostringstream detail;
    detail << instances().size() << " MDPs, " << vectors << " vectors (>= " << min_per_instance << " each), " << yes
           << " achievable, " << boundary << " strict-boundary refusals, " << mismatches << " mismatches";
    return {mismatches == 0 && instances().size() >= 200 && min_per_instance >= 10 && boundary > 0, detail.str()};
}

Verdict strategy_soundness() {
    std::ostringstream detail;
    detail << soundness.checked << " extracted strategies validated exactly, " << soundness.failed << " failures";
    return {soundness.failed == 0 && soundness.checked > 0, detail.str()};
}

Verdict epsilon_cover() {
    std::size_t uncovered = 0, unachievable = 0, points = 0, runs = 0;
    for (const char* eps_text : {"1/10", "1/100"}) {
        Rational eps = parse_rational(eps_text);
        for (const auto& ri : instances()) {
            ParetoResult r = epsilon_pareto(ri.problem.lp, eps);
            ++runs;
            uncovered += check_coverage(r.values(), ri.hull.vertices, eps).uncovered.size();
            for (std::size_t i = 0; i < r.points.size(); ++i) {
                ++points;
                MemorylessStrategy sigma = restore_strategy(ri.problem.cleanup, ri.problem.source, r.strategy(ri.problem.lp, i));
                Vector actual = exact_reach(ri.problem.source, sigma, ri.problem.targets);
                bool ok = ri.hull.contains(r.points[i].value);
                for (std::size_t j = 0; j < actual.size(); ++j) ok = ok && actual[j] >= r.points[i].value[j];
                if (!ok) ++unachievable;
            }
        }
    }
    std::ostringstream detail;
    detail << runs << " runs, " << points << " points, " << uncovered << " uncovered hull vertices, " << unachievable
           << " unachievable points";
    return {uncovered == 0 && unachievable == 0, detail.str()};
}

Verdict hard_instances() {
    std::size_t runs = 0, count_mismatch = 0, affine_failures = 0, paths_checked = 0;
    std::ostringstream counts;
    for (std::size_t layers = 4; layers <= 8; ++layers) {
        for (std::uint64_t seed : {1, 2, 3}) {
            HardInstance inst = gen_hard_instance(layers, seed);
            ReachProblem p = reach_problem(inst.mdp, {"R", "B"});
            std::size_t mdp_vertices = exact_vertices_biobjective(p.lp).points.size();
            std::size_t path_vertices = path_pareto_vertex_count(inst.graph);
            if (mdp_vertices != path_vertices) ++count_mismatch;
            if (seed == 1) counts << (layers == 4 ? "" : ",") << mdp_vertices;
            for (const auto& path : enumerate_paths(inst.graph)) {
                ++paths_checked;
                Vector values = exact_reach(inst.mdp, path_strategy(inst, path), inst.targets);
                if (values[0] != inst.a - inst.b * path.c || values[1] != inst.a - inst.b * path.d) ++affine_failures;
            }
            ++runs;
        }
    }
    std::ostringstream detail;
    detail << runs << " instances (4-8 layers), vertex counts seed 1 [" << counts.str() << "], " << count_mismatch
           << " count mismatches, " << paths_checked << " paths, " << affine_failures << " non-affine";
    return {count_mismatch == 0 && affine_failures == 0, detail.str()};
}

Verdict reduction_consistency() {
    std::mt19937_64 rng(5150);
    std::size_t instances_run = 0, vectors = 0, mismatches = 0, yes = 0, invalid = 0;
    while (instances_run < 60) {
        Mdp m = random_labelled_mdp(rng, 4, 2);
        std::size_t k = 1 + rng() % 2;
        std::vector<RabinAutomaton> automata;
        std::vector<std::string> names;
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<std::string> props = rng() % 2 == 0 ? std::vector<std::string>{"p", "q"} : std::vector<std::string>{i == 0 ? "p" : "q"};
            automata.push_back(random_automaton(rng, props, 3));
            names.push_back("phi" + std::to_string(i + 1));
        }
        OmegaOracle oracle = omega_oracle(m, automata);
        ++instances_run;
        std::vector<std::pair<Vector, std::vector<bool>>> samples;
        for (const auto& pt : oracle.points) {
            samples.push_back({pt, std::vector<bool>(k, false)});
            std::vector<bool> s(k, false);
            s[rng() % k] = true;
            samples.push_back({pt, s});
        }
        while (samples.size() < 10) {
            Vector r(k);
            std::vector<bool> s(k);
            for (std::size_t i = 0; i < k; ++i) {
                r[i] = random_fraction(rng, 4);
                s[i] = rng() % 3 == 0;
            }
            samples.push_back({r, s});
        }
        for (const auto& [r, strict] : samples) {
            ++vectors;
            bool expected = oracle.contains(r, strict);
            OmegaAchievability got = decide_omega_achievability(m, automata, r, strict);
            if (got.achievable != expected) ++mismatches;
            if (!got.achievable) continue;
            ++yes;
            std::vector<Claim> claims;
            for (std::size_t i = 0; i < k; ++i) claims.push_back({strict[i] ? Comparison::Gt : Comparison::Geq, r[i]});
            ValidationReport v = validate_omega(m, automata, names, *got.strategy, claims);
            if (!v.pass()) ++invalid;
        }
    }
    std::ostringstream detail;
    detail << instances_run << " instances, " << vectors << " vectors, " << yes << " achievable, " << mismatches
           << " mismatches, " << invalid << " lifted strategies failing validation";
    return {mismatches == 0 && invalid == 0, detail.str()};
}

}  // namespace

int main() {
    bool all = true;
    all &= report(1, "split-reproduction", 1, split);
    all &= report(2, "loops-reproduction", 5, loops);
    all &= report(3, "lp-vs-hull-equivalence", 300, lp_vs_hull);
    all &= report(4, "strategy-extraction-soundness", 1, strategy_soundness);
    all &= report(5, "epsilon-pareto-coverage", 600, epsilon_cover);
    all &= report(6, "hard-instance-correspondence", 120, hard_instances);
    all &= report(7, "reduction-consistency", 600, reduction_consistency);
    std::printf("%s\n", all ? "all criteria pass" : "some criteria fail");
    return all ? 0 : 1;
}
