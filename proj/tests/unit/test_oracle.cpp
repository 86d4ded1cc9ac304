#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include "mocheck/chain.hpp"
#include "mocheck/error.hpp"
#include "mocheck/oracle.hpp"
#include "mocheck/pareto.hpp"
#include "mocheck/problem.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace mocheck;
using namespace mocheck::testing;

namespace {

using Points = std::vector<std::vector<Rational>>;

Points sorted(Points p) {
    std::sort(p.begin(), p.end());
    return p;
}

}  // namespace

TEST_CASE("split hull") {
    Mdp m = load_model("split.json");
    HullOracle hull = build_hull_oracle(m, {{m.state_id("p1")}, {m.state_id("p2")}});
    CHECK(hull.strategies == 6);
    CHECK(sorted(hull.vertices) == sorted({{Rational(3, 5), 0}, {Rational(1, 2), Rational(1, 2)}, {0, Rational(4, 5)}}));
    CHECK(hull.contains({Rational(3, 10), Rational(2, 5)}));
    CHECK(hull.contains({Rational(3, 10), Rational(2, 5)}, {true, true}));
    CHECK_FALSE(hull.contains({parse_rational("0.55"), parse_rational("0.3")}));
    CHECK(hull.support({1, 1}) == 1);
    CHECK(hull.support({1, 0}) == Rational(3, 5));
}

TEST_CASE("single strategy gives one point") {
    MdpBuilder b;
    b.add_state("x").add_state("g", {"G"});
    b.add_transition("x", "a", "g", Rational(1, 3)).add_transition("x", "a", "x", Rational(2, 3));
    b.add_transition("g", "s", "g", 1);
    b.set_initial("x");
    Mdp m = b.build();
    HullOracle hull = build_hull_oracle(m, {{m.state_id("g")}});
    CHECK(hull.points == Points{{1}});
    CHECK(count_pure_strategies(m, 10) == 1);
}

TEST_CASE("strategy cap is enforced") {
    HardInstance inst = gen_hard_instance(6, 2, 3);
    CHECK_THROWS_AS(enumerate_pure_outcomes(inst.mdp, inst.targets, {10, false}), ArgumentError);
}

TEST_CASE("serial and parallel enumeration agree") {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 20; ++round) {
        RandomReachInstance inst = random_reach_instance(rng);
        CHECK(enumerate_pure_outcomes(inst.mdp, inst.targets, {1'000'000, false}) ==
              enumerate_pure_outcomes(inst.mdp, inst.targets, {1'000'000, true}));
    }
}

TEST_CASE("hull membership agrees with convex combinations") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 40; ++round) {
        RandomMdpOptions options;
        options.max_states = 3;
        options.min_targets = 1;
        options.max_targets = 3;
        RandomReachInstance inst = random_reach_instance(rng, options);
        HullOracle hull = build_hull_oracle(inst.mdp, inst.targets);
        std::size_t k = inst.targets.size();
        for (int s = 0; s < 8; ++s) {
            std::vector<Rational> r(k);
            std::vector<bool> strict(k);
            for (std::size_t i = 0; i < k; ++i) {
                r[i] = Rational(static_cast<long>(rng() % 7), 6);
                r[i].canonicalize();
                strict[i] = rng() % 3 == 0;
            }
            CHECK(hull.contains(r, strict) == caratheodory_contains(hull.points, r, strict));
        }
        for (const auto& v : hull.vertices) CHECK(hull.contains(v));
    }
}

TEST_CASE("claims") {
    CHECK(parse_claim(">=1/2").comparison == Comparison::Geq);
    CHECK(parse_claim(">0").comparison == Comparison::Gt);
    CHECK(parse_claim("<=0.3").bound == Rational(3, 10));
    CHECK(parse_claim("=1").comparison == Comparison::Eq);
    CHECK(parse_claim("0.25").bound == Rational(1, 4));
    CHECK(holds(Rational(1, 2), parse_claim(">=1/2")));
    CHECK_FALSE(holds(Rational(1, 2), parse_claim(">1/2")));
    CHECK_THROWS_AS(parse_claim(">>1"), ParseError);
}

TEST_CASE("strategy validation reports") {
    Mdp m = load_model("split.json");
    StateId s = m.state_id("s");
    std::vector<std::size_t> acts(m.num_states(), 0);
    acts[s] = *m.find_action(s, "a3");
    auto sigma = FiniteMemoryStrategy::from_memoryless(MemorylessStrategy::pure(m, acts));
    std::vector<std::vector<StateId>> targets{{m.state_id("p1")}, {m.state_id("p2")}};
    ValidationReport ok = validate_reach(m, targets, {"P1", "P2"}, sigma, {parse_claim(">=1/2"), parse_claim(">=1/2")});
    CHECK(ok.pass());
    ValidationReport bad = validate_reach(m, targets, {"P1", "P2"}, sigma, {parse_claim(">=1"), parse_claim(">=0")});
    CHECK_FALSE(bad.pass());
    CHECK(bad.rows[0].actual == Rational(1, 2));
    CHECK(bad.to_json()["rows"][0]["actual"] == "1/2");
    CHECK(bad.to_json()["verdict"] == "fail");

    Mdp m2 = load_model("loops.json");
    ValidationReport two = validate_omega(m2, {buchi_automaton("P1"), buchi_automaton("P2")}, {"GFp1", "GFp2"},
                                          loops_two_phase(m2), {parse_claim(">0"), parse_claim(">0")});
    CHECK(two.pass());
    CHECK(two.rows[0].actual == Rational(1, 2));
    CHECK(two.rows[1].actual == Rational(1, 2));
}

TEST_CASE("hard instances: reach probabilities are affine in path costs") {
    for (std::size_t layers : {3, 4, 5}) {
        HardInstance inst = gen_hard_instance(layers, 100 + layers);
        auto paths = enumerate_paths(inst.graph);
        CHECK(paths.size() == std::size_t{1} << (layers - 1));
        for (const auto& path : paths) {
            MemorylessStrategy sigma = path_strategy(inst, path);
            auto values = exact_reach(inst.mdp, sigma, inst.targets);
            CHECK(values[0] == inst.a - inst.b * path.c);
            CHECK(values[1] == inst.a - inst.b * path.d);
        }
        ReachProblem p = reach_problem(inst.mdp, {"R", "B"});
        CHECK(exact_vertices_biobjective(p.lp).points.size() == path_pareto_vertex_count(inst.graph));
    }
}

TEST_CASE("hard instance generation is reproducible") {
    HardInstance a = gen_hard_instance(4, 9), b = gen_hard_instance(4, 9);
    CHECK(a.mdp == b.mdp);
    CHECK_THROWS_AS(gen_hard_instance(1, 0), ArgumentError);
    CHECK_THROWS_AS(gen_hard_instance(kMaxHardLayers + 1, 0), ArgumentError);
}
