#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include "mocheck/chain.hpp"
#include "mocheck/error.hpp"
#include "mocheck/graph.hpp"
#include "mocheck/model_io.hpp"

#include <doctest.h>

#include <random>

using namespace mocheck;
using namespace mocheck::testing;

TEST_CASE("rationals parse exactly") {
    CHECK(parse_rational("3/5") == Rational(3, 5));
    CHECK(parse_rational("0.55") == Rational(11, 20));
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational("-2.5E2") == Rational(-250));
    CHECK(to_string(parse_rational("6/4")) == "3/2");
    CHECK(to_decimal(Rational(1, 3), 4) == "0.3333");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK(parse_rational_list("1/2,0.25") == std::vector<Rational>{Rational(1, 2), Rational(1, 4)});
}

TEST_CASE("split model loads with three actions at s") {
    Mdp m = load_model("split.json");
    CHECK(m.num_states() == 6);
    CHECK(m.state(m.state_id("s")).actions.size() == 3);
    CHECK(m.is_absorbing(m.state_id("p1")));
    CHECK(m.has_label(m.state_id("p2"), "P2"));
    CHECK(m.initial().at(m.state_id("s")) == 1);
}

TEST_CASE("single absorbing state is a valid model") {
    MdpBuilder b;
    b.add_state("x").add_transition("x", "loop", "x", 1);
    Mdp m = b.build();
    CHECK(m.num_states() == 1);
    InducedChain chain = induced_chain(m, MemorylessStrategy::first_action(m));
    REQUIRE(chain.rows.size() == 1);
    CHECK(chain.rows[0] == SparseRow{{0, Rational(1)}});
    BsccAnalysis bscc = bscc_analysis(chain);
    CHECK(bscc.bsccs.size() == 1);
    CHECK(bscc.absorption[0] == 1);
}

TEST_CASE("model invariants are enforced") {
    MdpBuilder b;
    b.add_state("x").add_state("y");
    b.add_transition("x", "a", "y", Rational(9, 10));
    b.add_transition("y", "a", "y", 1);
    try {
        b.build();
        FAIL("expected ModelError");
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("probabilities do not sum to 1") != std::string::npos);
    }
    MdpBuilder c;
    c.add_state("x");
    CHECK_THROWS_AS(c.build(), ModelError);
    CHECK_THROWS_AS(c.add_state("x"), ModelError);
    CHECK_THROWS_AS(parse_mdp("{\"states\": ["), ParseError);
}

TEST_CASE("serialization round-trips") {
    Mdp m = load_model("split.json");
    Mdp back = parse_mdp(serialize_mdp(m));
    CHECK(back == m);
    CHECK(serialize_mdp(back) == serialize_mdp(m));
}

TEST_CASE("split strategies induce the expected chains") {
    Mdp m = load_model("split.json");
    StateId s = m.state_id("s");
    std::vector<std::vector<StateId>> targets{{m.state_id("p1")}, {m.state_id("p2")}};
    auto pure = [&](const char* action) {
        std::vector<std::size_t> acts(m.num_states(), 0);
        acts[s] = *m.find_action(s, action);
        return MemorylessStrategy::pure(m, acts);
    };
    CHECK(reach_probabilities(induced_chain(m, pure("a1")), targets) == std::vector<Rational>{Rational(3, 5), 0});
    InducedChain a3 = induced_chain(m, pure("a3"));
    CHECK(reach_probabilities(a3, targets) == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    BsccAnalysis bscc = bscc_analysis(a3);
    CHECK(bscc.bsccs.size() == 4);
    Rational p1 = 0, p2 = 0;
    for (std::size_t i = 0; i < bscc.bsccs.size(); ++i) {
        if (bscc.bsccs[i] == std::vector<std::size_t>{m.state_id("p1")}) p1 = bscc.absorption[i];
        if (bscc.bsccs[i] == std::vector<std::size_t>{m.state_id("p2")}) p2 = bscc.absorption[i];
    }
    CHECK(p1 == Rational(1, 2));
    CHECK(p2 == Rational(1, 2));

    MemorylessStrategy mix = MemorylessStrategy::first_action(m);
    mix.choice[s] = {{*m.find_action(s, "a1"), Rational(1, 2)}, {*m.find_action(s, "a2"), Rational(1, 2)}};
    auto got = reach_probabilities(induced_chain(m, mix), targets);
    CHECK(got == exact_reach(m, mix, targets));
    CHECK(got == std::vector<Rational>{Rational(3, 10), Rational(2, 5)});
    CHECK(reach_probabilities(induced_chain(m, mix), {{s}}) == std::vector<Rational>{1});
}

TEST_CASE("two-mode strategy chain has stochastic rows") {
    Mdp m = load_model("loops.json");
    InducedChain chain = induced_chain(m, loops_two_phase(m));
    for (const auto& row : chain.rows) {
        Rational total = 0;
        for (const auto& [j, p] : row) total += p;
        CHECK(total == 1);
    }
    CHECK(chain.size() > m.num_states());
}

TEST_CASE("cycle chain is one bottom component") {
    MarkovChain chain;
    chain.rows = {{{1, Rational(1)}}, {{2, Rational(1)}}, {{0, Rational(1)}}};
    chain.initial = {{0, Rational(1)}};
    BsccAnalysis bscc = bscc_analysis(chain);
    REQUIRE(bscc.bsccs.size() == 1);
    CHECK(bscc.bsccs[0].size() == 3);
}

TEST_CASE("reach probabilities agree with an independent solve on random models") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 100; ++round) {
        RandomReachInstance inst = random_reach_instance(rng);
        const Mdp& m = inst.mdp;
        MemorylessStrategy sigma;
        sigma.choice.resize(m.num_states());
        for (StateId v = 0; v < m.num_states(); ++v) {
            std::size_t n = m.state(v).actions.size();
            auto dist = random_distribution(rng, n);
            for (std::size_t a = 0; a < n; ++a) {
                if (dist[a] > 0) sigma.choice[v].emplace_back(a, dist[a]);
            }
        }
        CHECK(reach_probabilities(induced_chain(m, sigma), inst.targets) == exact_reach(m, sigma, inst.targets));
    }
}

TEST_CASE("maximal end components agree with an independent refinement") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 100; ++round) {
        Mdp m = random_labelled_mdp(rng, 7, 3);
        auto lib = maximal_end_components(m);
        auto ref = oracle_mecs(m, std::vector<bool>(m.num_states(), true));
        REQUIRE(lib.size() == ref.size());
        std::vector<std::vector<StateId>> a, b;
        for (const auto& c : lib) a.push_back(c.states);
        for (const auto& c : ref) b.push_back(c.states);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }
}

TEST_CASE("strongly connected components are sink-first") {
    Adjacency g{{1}, {0, 2}, {}};
    SccDecomposition scc = strongly_connected_components(g);
    REQUIRE(scc.components.size() == 2);
    CHECK(scc.components[0] == std::vector<std::size_t>{2});
    CHECK(backward_reachable(g, {false, false, true}) == std::vector<bool>{true, true, true});
    CHECK(forward_reachable(g, {2}) == std::vector<bool>{false, false, true});
}
