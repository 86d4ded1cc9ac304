#include "mocheck/pareto.hpp"

#include "mocheck/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

namespace mocheck {

Rational round_down(const Rational& x, unsigned bits) {
    if (x <= 0) return x;
    const mpz_class& num = x.get_num();
    const mpz_class& den = x.get_den();
    long shift = static_cast<long>(bits) - (static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                                            static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)));
    if (shift < 0) return x;
    mpz_class scaled = num;
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
    mpz_class scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    Rational out(scaled, scale);
    out.canonicalize();
    return out;
}

std::vector<Rational> ParetoResult::flow(std::size_t point) const {
    const auto& mix = points.at(point).mixture;
    std::vector<Rational> y(solutions.at(mix.front().first).size(), 0);
    for (const auto& [s, c] : mix) {
        const auto& sol = solutions[s];
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (sol[i] != 0) y[i] += c * sol[i];
        }
    }
    return y;
}

MemorylessStrategy ParetoResult::strategy(const MultiObjectiveLp& lp, std::size_t point) const {
    return extract_strategy(lp, flow(point));
}

std::vector<std::vector<Rational>> ParetoResult::values() const {
    std::vector<std::vector<Rational>> out;
    for (const auto& p : points) out.push_back(p.value);
    return out;
}

std::vector<std::size_t> non_dominated(const std::vector<std::vector<Rational>>& points) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] > points[b]; });
    std::vector<std::size_t> kept;
    if (points.empty()) return kept;
    std::size_t k = points.front().size();
    auto dominates = [&](const std::vector<Rational>& x, const std::vector<Rational>& y) {
        for (std::size_t i = 0; i < k; ++i) {
            if (x[i] < y[i]) return false;
        }
        return true;
    };
    std::map<Rational, Rational> stairs;  // k = 3: y2 -> best y3 among points with y2' >= y2
    for (std::size_t idx : order) {
        const auto& p = points[idx];
        if (!kept.empty() && points[kept.back()] == p) continue;
        bool dominated = false;
        if (k == 1) {
            dominated = !kept.empty();
        } else if (k == 2) {
            dominated = !kept.empty() && points[kept.back()][1] >= p[1];
        } else if (k == 3) {
            auto it = stairs.lower_bound(p[1]);
            dominated = it != stairs.end() && it->second >= p[2];
            if (!dominated) {
                // drop staircase entries the new point covers
                auto first = stairs.begin();
                auto last = stairs.upper_bound(p[1]);
                for (auto e = first; e != last;) {
                    if (e->second <= p[2]) {
                        e = stairs.erase(e);
                    } else {
                        ++e;
                    }
                }
                stairs[p[1]] = p[2];
            }
        } else {
            for (std::size_t q : kept) {
                if (dominates(points[q], p)) {
                    dominated = true;
                    break;
                }
            }
        }
        if (!dominated) kept.push_back(idx);
    }
    return kept;
}

CoverageReport check_coverage(const std::vector<std::vector<Rational>>& points,
                              const std::vector<std::vector<Rational>>& probes, const Rational& epsilon) {
    CoverageReport report;
    Rational factor = 1 + epsilon;
    for (const auto& r : probes) {
        bool covered = std::any_of(points.begin(), points.end(), [&](const std::vector<Rational>& t) {
            if (t.size() != r.size()) throw ArgumentError("coverage probe dimension mismatch");
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (r[i] > factor * t[i]) return false;
            }
            return true;
        });
        if (!covered) report.uncovered.push_back(r);
    }
    return report;
}

namespace {

using Mixture = std::vector<std::pair<std::size_t, Rational>>;

struct Candidate {
    std::vector<Rational> value;
    Mixture mixture;
    std::vector<Rational> weight;
};

Mixture blend(const Mixture& a, const Mixture& b, const Rational& mu) {
    std::map<std::size_t, Rational> combined;
    for (const auto& [s, c] : a) combined[s] += (1 - mu) * c;
    for (const auto& [s, c] : b) combined[s] += mu * c;
    Mixture out;
    for (auto& [s, c] : combined) {
        if (c != 0) out.emplace_back(s, c);
    }
    return out;
}

Candidate mix(const Candidate& a, const Candidate& b, const Rational& mu, std::vector<Rational> weight) {
    Candidate c;
    for (std::size_t i = 0; i < a.value.size(); ++i) c.value.push_back((1 - mu) * a.value[i] + mu * b.value[i]);
    c.mixture = blend(a.mixture, b.mixture, mu);
    c.weight = std::move(weight);
    return c;
}

class Engine {
public:
    Engine(const MultiObjectiveLp& lp, ParetoResult& out) : lp_(lp), out_(out), k_(lp.num_objectives()) {}

    std::optional<Candidate> solve(const std::vector<Rational>& weight, const std::vector<Rational>& lower) {
        ++out_.lp_calls;
        WeightedOptimum opt = maximize_weighted(lp_, weight, lower);
        if (!opt.feasible) return std::nullopt;
        return record(opt, weight);
    }

    std::optional<Candidate> lexicographic(const std::vector<std::size_t>& order, const std::vector<Rational>& lower) {
        out_.lp_calls += order.size();
        WeightedOptimum opt = maximize_lexicographic(lp_, order, lower);
        if (!opt.feasible) return std::nullopt;
        std::vector<Rational> weight(k_, 0);
        weight[order.front()] = 1;
        return record(opt, weight);
    }

    // Vertices of the Pareto curve of objectives (a, b) under `lower`, from the a-maximal end.
    std::vector<Candidate> vertices(std::size_t a, std::size_t b, const std::vector<Rational>& lower) {
        auto p = lexicographic({a, b}, lower);
        if (!p) return {};
        auto q = lexicographic({b, a}, lower);
        if (p->value[a] == q->value[a] && p->value[b] == q->value[b]) return {*p};
        std::vector<Candidate> list{*p};
        refine(a, b, *p, *q, lower, list);
        list.push_back(*q);
        // drop points lying on the segment between their neighbours
        std::vector<Candidate> clean;
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (!clean.empty() && i + 1 < list.size()) {
                const auto& l = clean.back().value;
                const auto& m = list[i].value;
                const auto& r = list[i + 1].value;
                Rational cross = (m[a] - l[a]) * (r[b] - l[b]) - (m[b] - l[b]) * (r[a] - l[a]);
                if (cross == 0) continue;
            }
            clean.push_back(std::move(list[i]));
        }
        return clean;
    }

    std::vector<Candidate> cover(const std::vector<std::size_t>& dims, const std::vector<Rational>& lower,
                                 const Rational& eps) {
        if (dims.size() == 1) {
            auto c = lexicographic({dims[0]}, lower);
            if (!c) return {};
            return {*c};
        }
        if (dims.size() == 2) {
            std::vector<Candidate> v = vertices(dims[0], dims[1], lower);
            std::vector<Candidate> out;
            for (std::size_t i = 0; i < v.size(); ++i) {
                out.push_back(v[i]);
                if (i + 1 < v.size()) sample_edge(dims[0], dims[1], v[i], v[i + 1], eps, out);
            }
            return out;
        }
        std::size_t d = dims[0];
        std::vector<std::size_t> rest(dims.begin() + 1, dims.end());
        auto best = lexicographic({d}, lower);
        if (!best) return {};
        Rational m = best->value[d];
        if (m == 0) return cover(rest, lower, eps);
        Rational lambda = eps / (2 * (1 + eps));
        std::vector<Candidate> out;
        for (const auto& c : cover(rest, lower, eps / 2)) out.push_back(mix(c, *best, lambda, c.weight));
        Rational level = round_down(lambda * m);
        while (level <= m) {
            std::vector<Rational> sub = lower;
            if (level > sub[d]) sub[d] = level;
            std::vector<Candidate> part = cover(rest, sub, eps);
            if (part.empty()) break;
            Rational beta = part.front().value[d];
            for (const auto& c : part) {
                if (c.value[d] < beta) beta = c.value[d];
            }
            for (auto& c : part) out.push_back(std::move(c));
            Rational next = round_down(beta * (1 + eps));
            if (next <= level) next = beta * (1 + eps);
            level = next;
        }
        return out;
    }

private:
    Candidate record(const WeightedOptimum& opt, const std::vector<Rational>& weight) {
        out_.solutions.push_back(opt.solution.values);
        return Candidate{opt.values, {{out_.solutions.size() - 1, Rational(1)}}, weight};
    }

    void refine(std::size_t a, std::size_t b, const Candidate& p, const Candidate& q, const std::vector<Rational>& lower,
                std::vector<Candidate>& list) {
        std::vector<Rational> w(k_, 0);
        w[a] = q.value[b] - p.value[b];
        w[b] = p.value[a] - q.value[a];
        auto r = solve(w, lower);
        if (!r) return;
        Rational level = w[a] * p.value[a] + w[b] * p.value[b];
        if (w[a] * r->value[a] + w[b] * r->value[b] <= level) return;
        refine(a, b, p, *r, lower, list);
        list.push_back(*r);
        refine(a, b, *r, q, lower, list);
    }

    // Points on the segment p -> q (p has the larger a-value) so that every point of the segment is
    // within factor 1+eps of one of them, in both coordinates a and b.
    void sample_edge(std::size_t a, std::size_t b, const Candidate& p, const Candidate& q, const Rational& eps,
                     std::vector<Candidate>& out) {
        const Rational pa = p.value[a], pb = p.value[b];
        const Rational da = p.value[a] - q.value[a];  // > 0
        const Rational db = q.value[b] - p.value[b];  // > 0
        const Rational factor = 1 + eps;
        std::vector<Rational> normal(k_, 0);
        normal[a] = db;
        normal[b] = da;
        auto value_a = [&](const Rational& mu) -> Rational { return pa - mu * da; };
        auto value_b = [&](const Rational& mu) -> Rational { return pb + mu * db; };
        // largest mu whose b-value is within factor of the b-value at `mu`
        auto reach_b = [&](const Rational& mu) -> Rational {
            Rational r = (factor * value_b(mu) - pb) / db;
            return r > 1 ? Rational(1) : r;
        };
        Rational covered = round_down(reach_b(0));
        while (covered < 1) {
            Rational target = (pa - value_a(covered) / factor) / da;
            if (target >= 1) break;
            Rational mu = round_down(target);
            if (mu <= covered) mu = target;
            out.push_back(mix(p, q, mu, normal));
            Rational next = round_down(reach_b(mu));
            covered = next < mu ? mu : next;
        }
    }

    const MultiObjectiveLp& lp_;
    ParetoResult& out_;
    std::size_t k_;
};

ParetoResult assemble(std::vector<Candidate> candidates, ParetoResult result) {
    std::vector<std::vector<Rational>> values;
    for (const auto& c : candidates) values.push_back(c.value);
    for (std::size_t i : non_dominated(values)) {
        result.points.push_back({std::move(candidates[i].value), std::move(candidates[i].mixture), std::move(candidates[i].weight)});
    }
    return result;
}

}  // namespace

ParetoResult exact_vertices_biobjective(const MultiObjectiveLp& lp) {
    if (lp.num_objectives() != 2) throw ArgumentError("exact vertex enumeration needs exactly 2 objectives");
    ParetoResult result;
    result.epsilon = 0;
    Engine engine(lp, result);
    auto candidates = engine.vertices(0, 1, std::vector<Rational>(2, 0));
    return assemble(std::move(candidates), std::move(result));
}

ParetoResult epsilon_pareto(const MultiObjectiveLp& lp, const Rational& epsilon) {
    if (epsilon <= 0) throw ArgumentError("epsilon must be positive");
    std::size_t k = lp.num_objectives();
    if (k == 0) throw ArgumentError("at least one objective is required");
    ParetoResult result;
    result.epsilon = epsilon;
    Engine engine(lp, result);
    std::vector<std::size_t> dims(k);
    std::iota(dims.begin(), dims.end(), 0);
    auto candidates = engine.cover(dims, std::vector<Rational>(k, 0), epsilon);
    return assemble(std::move(candidates), std::move(result));
}

}  // namespace mocheck
