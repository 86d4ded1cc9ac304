#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace mocheck::testing {

std::vector<Rational> solve_dense(Matrix a, std::vector<Rational> b) {
    std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw std::runtime_error("singular system");
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
            b[r] -= f * b[c];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

namespace {

// Per-state probability of reaching `goal` in the chain `p` (dense rows).
std::vector<Rational> hit(const Matrix& p, const std::vector<bool>& goal) {
    std::size_t n = p.size();
    std::vector<bool> reach(goal);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (reach[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (p[i][j] != 0 && reach[j]) {
                    reach[i] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    std::vector<std::size_t> unknown;
    std::vector<std::size_t> index(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (reach[i] && !goal[i]) {
            index[i] = unknown.size();
            unknown.push_back(i);
        }
    }
    Matrix a(unknown.size(), std::vector<Rational>(unknown.size(), 0));
    std::vector<Rational> b(unknown.size(), 0);
    for (std::size_t r = 0; r < unknown.size(); ++r) {
        std::size_t i = unknown[r];
        a[r][r] = 1;
        for (std::size_t j = 0; j < n; ++j) {
            if (p[i][j] == 0) continue;
            if (goal[j]) {
                b[r] += p[i][j];
            } else if (index[j] != n) {
                a[r][index[j]] -= p[i][j];
            }
        }
    }
    std::vector<Rational> x = unknown.empty() ? std::vector<Rational>{} : solve_dense(a, b);
    std::vector<Rational> out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (goal[i]) out[i] = 1;
        if (index[i] != n) out[i] = x[index[i]];
    }
    return out;
}

}  // namespace

std::vector<Rational> exact_reach(const Mdp& mdp, const MemorylessStrategy& strategy,
                                  const std::vector<std::vector<StateId>>& targets) {
    std::size_t n = mdp.num_states();
    Matrix p(n, std::vector<Rational>(n, 0));
    for (StateId v = 0; v < n; ++v) {
        for (const auto& [a, w] : strategy.choice[v]) {
            for (const auto& t : mdp.state(v).actions[a].transitions) p[v][t.target] += w * t.probability;
        }
    }
    std::vector<Rational> out;
    for (const auto& set : targets) {
        std::vector<bool> goal(n, false);
        for (StateId v : set) goal[v] = true;
        std::vector<Rational> h = hit(p, goal);
        Rational total = 0;
        for (const auto& [v, w] : mdp.initial().mass) total += w * h[v];
        out.push_back(total);
    }
    return out;
}

namespace {

// Solutions lambda of the system {lambda >= 0, sum lambda = 1, sum_j lambda_j p_j >= r}: the vertices of
// the feasible polytope, by intersecting s-1 tight constraints with the equality.
std::vector<std::vector<Rational>> feasible_vertices(const std::vector<std::vector<Rational>>& pts,
                                                     const std::vector<Rational>& r) {
    std::size_t s = pts.size();
    std::size_t k = r.size();
    // inequality rows g . lambda >= h
    std::vector<std::vector<Rational>> g;
    std::vector<Rational> h;
    for (std::size_t j = 0; j < s; ++j) {
        std::vector<Rational> row(s, 0);
        row[j] = 1;
        g.push_back(row);
        h.push_back(0);
    }
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Rational> row(s);
        for (std::size_t j = 0; j < s; ++j) row[j] = pts[j][i];
        g.push_back(row);
        h.push_back(r[i]);
    }
    std::vector<std::vector<Rational>> out;
    std::size_t m = g.size();
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (pick.size() + 1 == s) {
            Matrix a;
            std::vector<Rational> b;
            a.push_back(std::vector<Rational>(s, 1));
            b.push_back(1);
            for (std::size_t c : pick) {
                a.push_back(g[c]);
                b.push_back(h[c]);
            }
            std::vector<Rational> lambda;
            try {
                lambda = solve_dense(a, b);
            } catch (const std::runtime_error&) {
                return;
            }
            for (std::size_t c = 0; c < m; ++c) {
                Rational v = 0;
                for (std::size_t j = 0; j < s; ++j) v += g[c][j] * lambda[j];
                if (v < h[c]) return;
            }
            out.push_back(std::move(lambda));
            return;
        }
        for (std::size_t c = from; c < m; ++c) {
            pick.push_back(c);
            rec(c + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace

bool caratheodory_contains(const std::vector<std::vector<Rational>>& points, const std::vector<Rational>& r,
                           const std::vector<bool>& strict) {
    std::size_t k = r.size();
    std::vector<std::size_t> pick;
    std::function<bool(std::size_t)> rec = [&](std::size_t from) -> bool {
        if (!pick.empty()) {
            std::vector<std::vector<Rational>> pts;
            for (std::size_t i : pick) pts.push_back(points[i]);
            auto vertices = feasible_vertices(pts, r);
            if (!vertices.empty()) {
                bool ok = true;
                for (std::size_t i = 0; i < k && ok; ++i) {
                    if (i >= strict.size() || !strict[i]) continue;
                    ok = std::any_of(vertices.begin(), vertices.end(), [&](const std::vector<Rational>& lambda) {
                        Rational v = 0;
                        for (std::size_t j = 0; j < pts.size(); ++j) v += lambda[j] * pts[j][i];
                        return v > r[i];
                    });
                }
                if (ok) return true;
            }
        }
        if (pick.size() == k) return false;
        for (std::size_t i = from; i < points.size(); ++i) {
            pick.push_back(i);
            if (rec(i + 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    return rec(0);
}

std::vector<Component> oracle_mecs(const Mdp& mdp, const std::vector<bool>& allowed) {
    std::size_t n = mdp.num_states();
    std::vector<bool> alive(allowed);
    std::vector<std::vector<bool>> act(n);
    for (StateId v = 0; v < n; ++v) act[v].assign(mdp.state(v).actions.size(), alive[v]);
    std::vector<std::size_t> comp(n, n);
    while (true) {
        // actions must stay among alive states
        for (StateId v = 0; v < n; ++v) {
            for (std::size_t a = 0; a < act[v].size(); ++a) {
                if (!act[v][a]) continue;
                for (const auto& t : mdp.state(v).actions[a].transitions) {
                    if (!alive[t.target]) act[v][a] = false;
                }
            }
        }
        // Kosaraju on the retained edges
        std::vector<std::vector<StateId>> fwd(n), bwd(n);
        for (StateId v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            for (std::size_t a = 0; a < act[v].size(); ++a) {
                if (!act[v][a]) continue;
                for (const auto& t : mdp.state(v).actions[a].transitions) {
                    fwd[v].push_back(t.target);
                    bwd[t.target].push_back(v);
                }
            }
        }
        std::vector<bool> seen(n, false);
        std::vector<StateId> order;
        std::function<void(StateId)> dfs1 = [&](StateId v) {
            seen[v] = true;
            for (StateId w : fwd[v]) {
                if (!seen[w]) dfs1(w);
            }
            order.push_back(v);
        };
        for (StateId v = 0; v < n; ++v) {
            if (alive[v] && !seen[v]) dfs1(v);
        }
        comp.assign(n, n);
        std::size_t next = 0;
        std::function<void(StateId)> dfs2 = [&](StateId v) {
            comp[v] = next;
            for (StateId w : bwd[v]) {
                if (comp[w] == n) dfs2(w);
            }
        };
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            if (comp[*it] == n) {
                dfs2(*it);
                ++next;
            }
        }
        bool changed = false;
        for (StateId v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            bool any = false;
            for (std::size_t a = 0; a < act[v].size(); ++a) {
                if (!act[v][a]) continue;
                for (const auto& t : mdp.state(v).actions[a].transitions) {
                    if (comp[t.target] != comp[v]) {
                        act[v][a] = false;
                        changed = true;
                        break;
                    }
                }
                any = any || act[v][a];
            }
            if (!any) {
                alive[v] = false;
                changed = true;
            }
        }
        if (!changed) break;
    }
    std::map<std::size_t, Component> by_comp;
    for (StateId v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        Component& c = by_comp[comp[v]];
        c.states.push_back(v);
        std::vector<std::size_t> acts;
        for (std::size_t a = 0; a < act[v].size(); ++a) {
            if (act[v][a]) acts.push_back(a);
        }
        c.actions.push_back(std::move(acts));
    }
    std::vector<Component> out;
    for (auto& [id, c] : by_comp) out.push_back(std::move(c));
    return out;
}

namespace {

// Product of the MDP with the automata, built independently: state = (x, q_1..q_m).
struct LockMdp {
    Mdp product;
    // lock options per product state: acceptance vector (0/1 per property)
    std::vector<std::vector<std::vector<Rational>>> locks;
};

LockMdp build_lock_mdp(const Mdp& mdp, const std::vector<RabinAutomaton>& automata) {
    std::size_t m = automata.size();
    using Key = std::pair<StateId, std::vector<std::size_t>>;
    std::map<Key, std::string> names;
    std::vector<Key> keys;
    auto name_of = [&](const Key& key) {
        auto it = names.find(key);
        if (it != names.end()) return it->second;
        std::string name = mdp.state(key.first).name + "#";
        for (std::size_t q : key.second) name += std::to_string(q) + ".";
        names.emplace(key, name);
        keys.push_back(key);
        return name;
    };
    auto step = [&](const std::vector<std::size_t>& q, StateId x) {
        std::vector<std::size_t> out(m);
        for (std::size_t i = 0; i < m; ++i) out[i] = automata[i].next(q[i], mdp.state(x).labels);
        return out;
    };
    std::vector<std::size_t> q0(m);
    for (std::size_t i = 0; i < m; ++i) q0[i] = automata[i].initial();
    std::map<std::string, Rational> init;
    for (const auto& [x, p] : mdp.initial().mass) init[name_of({x, step(q0, x)})] += p;
    MdpBuilder b;
    for (std::size_t done = 0; done < keys.size(); ++done) {
        Key key = keys[done];
        std::string from = names.at(key);
        b.add_state(from);
        for (const auto& a : mdp.state(key.first).actions) {
            std::map<std::string, Rational> dist;
            for (const auto& t : a.transitions) dist[name_of({t.target, step(key.second, t.target)})] += t.probability;
            for (const auto& [to, p] : dist) b.add_transition(from, a.name, to, p);
        }
    }
    b.set_initial(init);
    LockMdp out;
    out.product = b.build();
    const Mdp& pm = out.product;
    std::vector<std::vector<std::size_t>> qs(pm.num_states());
    for (const auto& [key, name] : names) qs[pm.state_id(name)] = key.second;
    out.locks.assign(pm.num_states(), {});
    // one pair (or "any") per automaton; remove the chosen avoid sets; keep MECs meeting chosen repeats
    std::vector<std::size_t> choice(m, 0);
    std::set<std::pair<std::vector<StateId>, std::vector<Rational>>> seen;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == m) {
            std::vector<bool> allowed(pm.num_states(), true);
            for (StateId v = 0; v < pm.num_states(); ++v) {
                for (std::size_t j = 0; j < m; ++j) {
                    if (choice[j] > 0 && automata[j].pairs()[choice[j] - 1].avoid[qs[v][j]]) allowed[v] = false;
                }
            }
            for (const auto& c : oracle_mecs(pm, allowed)) {
                std::vector<Rational> acc(m, 0);
                for (std::size_t j = 0; j < m; ++j) {
                    for (const auto& pair : automata[j].pairs()) {
                        bool avoid = false, repeat = false;
                        for (StateId v : c.states) {
                            avoid = avoid || pair.avoid[qs[v][j]];
                            repeat = repeat || pair.repeat[qs[v][j]];
                        }
                        if (!avoid && repeat) acc[j] = 1;
                    }
                }
                if (!seen.insert({c.states, acc}).second) continue;
                for (StateId v : c.states) out.locks[v].push_back(acc);
            }
            return;
        }
        for (choice[i] = 0; choice[i] <= automata[i].pairs().size(); ++choice[i]) rec(i + 1);
    };
    rec(0);
    return out;
}

// Option o at state v: o < #actions plays the action, otherwise lock option o - #actions.
struct Evaluation {
    std::vector<Rational> value;
};

std::vector<Rational> evaluate_policy(const LockMdp& lm, const std::vector<std::size_t>& policy,
                                      const std::vector<Rational>& reward_weights) {
    const Mdp& pm = lm.product;
    std::size_t n = pm.num_states();
    // states n.. are terminal copies; encode lock rewards as absorption into a goal with partial mass
    Matrix p(n + 1, std::vector<Rational>(n + 1, 0));
    std::vector<Rational> reward(n, 0);
    for (StateId v = 0; v < n; ++v) {
        std::size_t o = policy[v];
        std::size_t na = pm.state(v).actions.size();
        if (o < na) {
            for (const auto& t : pm.state(v).actions[o].transitions) p[v][t.target] += t.probability;
        } else {
            const auto& acc = lm.locks[v][o - na];
            for (std::size_t j = 0; j < acc.size(); ++j) reward[v] += reward_weights[j] * acc[j];
            p[v][n] = 1;
        }
    }
    p[n][n] = 1;
    // value = expected lock reward: hitting probabilities weighted per lock state
    std::vector<Rational> value(n, 0);
    std::map<Rational, std::vector<StateId>> by_reward;
    for (StateId v = 0; v < n; ++v) {
        if (policy[v] >= pm.state(v).actions.size() && reward[v] != 0) by_reward[reward[v]].push_back(v);
    }
    for (const auto& [rw, states] : by_reward) {
        Matrix q = p;
        std::vector<bool> goal(n + 1, false);
        for (StateId v : states) {
            goal[v] = true;
            q[v].assign(n + 1, 0);
            q[v][v] = 1;
        }
        std::vector<Rational> h = hit(q, goal);
        for (StateId v = 0; v < n; ++v) value[v] += rw * h[v];
    }
    return value;
}

struct Optimum {
    std::vector<Rational> outcome;
    Rational value;
};

Optimum optimize(const LockMdp& lm, const std::vector<Rational>& w) {
    const Mdp& pm = lm.product;
    std::size_t n = pm.num_states();
    std::size_t m = w.size();
    std::vector<std::size_t> policy(n, 0);
    std::vector<Rational> v;
    while (true) {
        v = evaluate_policy(lm, policy, w);
        bool changed = false;
        for (StateId s = 0; s < n; ++s) {
            std::size_t na = pm.state(s).actions.size();
            Rational best = v[s];
            std::size_t arg = policy[s];
            for (std::size_t o = 0; o < na + lm.locks[s].size(); ++o) {
                Rational q = 0;
                if (o < na) {
                    for (const auto& t : pm.state(s).actions[o].transitions) q += t.probability * v[t.target];
                } else {
                    for (std::size_t j = 0; j < m; ++j) q += w[j] * lm.locks[s][o - na][j];
                }
                if (q > best) {
                    best = q;
                    arg = o;
                }
            }
            if (arg != policy[s]) {
                policy[s] = arg;
                changed = true;
            }
        }
        if (!changed) break;
    }
    Optimum out;
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<Rational> e(m, 0);
        e[j] = 1;
        std::vector<Rational> vj = evaluate_policy(lm, policy, e);
        Rational total = 0;
        for (const auto& [s, p] : pm.initial().mass) total += p * vj[s];
        out.outcome.push_back(total);
    }
    out.value = 0;
    for (const auto& [s, p] : pm.initial().mass) out.value += p * v[s];
    return out;
}

Rational line(const std::vector<Rational>& p, const Rational& t) { return (1 - t) * p[0] + t * p[1]; }

}  // namespace

Rational OmegaOracle::support(const Rational& t) const {
    Rational best = 0;
    for (const auto& p : points) {
        Rational v = dimension == 1 ? p[0] : line(p, t);
        if (v > best) best = v;
    }
    return best;
}

bool OmegaOracle::contains(const std::vector<Rational>& r, const std::vector<bool>& strict) const {
    auto is_strict = [&](std::size_t i) { return i < strict.size() && strict[i]; };
    if (dimension == 1) return is_strict(0) ? r[0] < support(0) : r[0] <= support(0);
    for (const auto& t : breakpoints) {
        Rational g = support(t) - line(r, t);
        Rational wj = 0;
        if (is_strict(0)) wj += 1 - t;
        if (is_strict(1)) wj += t;
        if (g < 0) return false;
        if (g == 0 && wj > 0) return false;
    }
    return true;
}

OmegaOracle omega_oracle(const Mdp& mdp, const std::vector<RabinAutomaton>& automata) {
    if (automata.empty() || automata.size() > 2) throw std::invalid_argument("one or two properties");
    LockMdp lm = build_lock_mdp(mdp, automata);
    OmegaOracle o;
    o.dimension = automata.size();
    if (o.dimension == 1) {
        o.points.push_back(optimize(lm, {Rational(1)}).outcome);
        o.breakpoints = {0};
        return o;
    }
    auto at = [&](const Rational& t) { return optimize(lm, {1 - t, t}); };
    std::set<Rational> ts{Rational(0), Rational(1)};
    std::function<void(const Rational&, const std::vector<Rational>&, const Rational&, const std::vector<Rational>&)> rec =
        [&](const Rational& t0, const std::vector<Rational>& p0, const Rational& t1, const std::vector<Rational>& p1) {
            Rational denom = (p0[0] - p1[0]) - (p0[1] - p1[1]);
            if (denom == 0) return;
            Rational t = (p0[0] - p1[0]) / denom;
            if (t <= t0 || t >= t1) return;
            Optimum mid = at(t);
            ts.insert(t);
            if (mid.value <= line(p0, t)) return;
            o.points.push_back(mid.outcome);
            rec(t0, p0, t, mid.outcome);
            rec(t, mid.outcome, t1, p1);
        };
    Optimum left = at(0);
    Optimum right = at(1);
    o.points.push_back(left.outcome);
    o.points.push_back(right.outcome);
    rec(Rational(0), left.outcome, Rational(1), right.outcome);
    o.breakpoints.assign(ts.begin(), ts.end());
    return o;
}

std::size_t path_pareto_vertex_count(const LayeredGraph& graph) {
    std::set<std::pair<long, long>> pts;
    std::size_t target = graph.layers.back().front();
    std::function<void(std::size_t, long, long)> dfs = [&](std::size_t node, long c, long d) {
        if (node == target) {
            pts.insert({c, d});
            return;
        }
        for (std::size_t e : graph.out[node]) {
            const auto& edge = graph.edges[e];
            dfs(edge.to, c + edge.cost_c, d + edge.cost_d);
        }
    };
    dfs(graph.layers.front().front(), 0, 0);
    // lower hull (Andrew), then the part from the min-c end to the min-d point
    std::vector<std::pair<long, long>> p(pts.begin(), pts.end());
    std::vector<std::pair<long, long>> hull;
    auto cross = [](const std::pair<long, long>& o, const std::pair<long, long>& a, const std::pair<long, long>& b) {
        return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
    };
    for (const auto& q : p) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), q) <= 0) hull.pop_back();
        hull.push_back(q);
    }
    std::size_t count = 0;
    long best_d = 0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        if (i == 0 || hull[i].second < best_d) {
            ++count;
            best_d = hull[i].second;
        } else {
            break;
        }
    }
    return count;
}

}  // namespace mocheck::testing
