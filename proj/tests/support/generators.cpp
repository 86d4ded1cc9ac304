#include "generators.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace mocheck::testing {

std::vector<Rational> random_distribution(std::mt19937_64& rng, std::size_t n) {
    std::vector<int> units(n, 1);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int extra = 12 - static_cast<int>(n); extra > 0; --extra) ++units[pick(rng)];
    std::vector<Rational> out;
    for (int u : units) out.push_back(Rational(u, 12));
    for (auto& x : out) x.canonicalize();
    return out;
}

namespace {

std::vector<std::size_t> sample(std::mt19937_64& rng, std::size_t population, std::size_t count) {
    std::vector<std::size_t> all(population);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(count, population));
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

RandomReachInstance random_reach_instance(std::mt19937_64& rng, const RandomMdpOptions& o) {
    std::uniform_int_distribution<std::size_t> n_dist(1, o.max_states);
    std::uniform_int_distribution<std::size_t> k_dist(o.min_targets, o.max_targets);
    std::size_t n = n_dist(rng);
    std::size_t k = k_dist(rng);
    RandomReachInstance inst;
    MdpBuilder b;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("s" + std::to_string(i));
        b.add_state(names.back());
    }
    for (std::size_t j = 0; j < k; ++j) {
        inst.labels.push_back("T" + std::to_string(j + 1));
        b.add_proposition(inst.labels.back());
    }
    std::vector<std::string> absorbing;
    for (std::size_t j = 0; j < k; ++j) {
        std::set<std::string> labels{inst.labels[j]};
        // occasionally a target state counts for two objectives
        if (k > 1 && rng() % 6 == 0) labels.insert(inst.labels[(j + 1) % k]);
        absorbing.push_back("t" + std::to_string(j));
        b.add_state(absorbing.back(), labels);
    }
    if (o.sink) {
        absorbing.push_back("z");
        b.add_state("z");
    }
    for (const auto& a : absorbing) b.add_transition(a, "stay", a, 1);
    std::vector<std::string> all = names;
    all.insert(all.end(), absorbing.begin(), absorbing.end());
    std::uniform_int_distribution<std::size_t> a_dist(1, o.max_actions);
    std::uniform_int_distribution<std::size_t> succ_dist(1, 3);
    for (const auto& s : names) {
        std::size_t actions = a_dist(rng);
        for (std::size_t a = 0; a < actions; ++a) {
            auto succ = sample(rng, all.size(), succ_dist(rng));
            auto probs = random_distribution(rng, succ.size());
            for (std::size_t i = 0; i < succ.size(); ++i) {
                b.add_transition(s, "a" + std::to_string(a), all[succ[i]], probs[i]);
            }
        }
    }
    if (n > 1 && rng() % 3 == 0) {
        auto probs = random_distribution(rng, 2);
        b.set_initial({{names[0], probs[0]}, {names[n - 1], probs[1]}});
    } else {
        b.set_initial(names[0]);
    }
    inst.mdp = b.build();
    for (const auto& l : inst.labels) inst.targets.push_back(inst.mdp.states_with_label(l));
    return inst;
}

Mdp random_labelled_mdp(std::mt19937_64& rng, std::size_t max_states, std::size_t max_actions) {
    std::uniform_int_distribution<std::size_t> n_dist(2, max_states);
    std::size_t n = n_dist(rng);
    MdpBuilder b;
    b.add_proposition("p").add_proposition("q");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("x" + std::to_string(i));
        std::set<std::string> labels;
        if (rng() % 2) labels.insert("p");
        if (rng() % 3 == 0) labels.insert("q");
        b.add_state(names.back(), labels);
    }
    std::uniform_int_distribution<std::size_t> a_dist(1, max_actions);
    std::uniform_int_distribution<std::size_t> succ_dist(1, 2);
    for (const auto& s : names) {
        std::size_t actions = a_dist(rng);
        for (std::size_t a = 0; a < actions; ++a) {
            auto succ = sample(rng, n, succ_dist(rng));
            auto probs = random_distribution(rng, succ.size());
            for (std::size_t i = 0; i < succ.size(); ++i) b.add_transition(s, "a" + std::to_string(a), names[succ[i]], probs[i]);
        }
    }
    b.set_initial(names[0]);
    return b.build();
}

RabinAutomaton random_automaton(std::mt19937_64& rng, const std::vector<std::string>& props, std::size_t max_states) {
    std::uniform_int_distribution<std::size_t> n_dist(1, max_states);
    std::size_t n = n_dist(rng);
    std::size_t letters = std::size_t{1} << props.size();
    std::uniform_int_distribution<std::size_t> q_dist(0, n - 1);
    std::vector<std::vector<std::size_t>> delta(n, std::vector<std::size_t>(letters));
    for (auto& row : delta) {
        for (auto& t : row) t = q_dist(rng);
    }
    std::size_t num_pairs = 1 + rng() % 2;
    std::vector<RabinPair> pairs;
    for (std::size_t p = 0; p < num_pairs; ++p) {
        RabinPair pair{std::vector<bool>(n, false), std::vector<bool>(n, false)};
        pair.repeat[q_dist(rng)] = true;
        for (std::size_t q = 0; q < n; ++q) {
            if (!pair.repeat[q] && rng() % 3 == 0) pair.avoid[q] = true;
            if (!pair.avoid[q] && rng() % 3 == 0) pair.repeat[q] = true;
        }
        pairs.push_back(std::move(pair));
    }
    return RabinAutomaton(props, n, 0, std::move(delta), std::move(pairs));
}

}  // namespace mocheck::testing
