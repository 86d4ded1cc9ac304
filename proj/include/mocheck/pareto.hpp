#pragma once

#include "mocheck/multiobj_lp.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace mocheck {

/// One achievable value vector. Its witness is a convex combination of LP solutions, so it is
/// realized by the memoryless strategy extracted from the mixed flow.
struct ParetoPoint {
    std::vector<Rational> value;
    std::vector<std::pair<std::size_t, Rational>> mixture;  // (solution index, coefficient)
    std::vector<Rational> weight;                           // weight vector that produced it
};

struct ParetoResult {
    std::vector<ParetoPoint> points;  // mutually non-dominated, sorted by first coordinate, descending
    std::vector<std::vector<Rational>> solutions;
    Rational epsilon;  // 0 in exact mode
    std::size_t lp_calls = 0;

    std::vector<Rational> flow(std::size_t point) const;
    MemorylessStrategy strategy(const MultiObjectiveLp& lp, std::size_t point) const;
    std::vector<std::vector<Rational>> values() const;
};

/// Exact vertices of the Pareto curve of a two-objective LP by dichotomic weighted-sum search.
ParetoResult exact_vertices_biobjective(const MultiObjectiveLp& lp);

/// Achievable points such that every achievable r satisfies r <= (1+eps) t for some returned t.
/// k = 1: the optimum. k = 2: exact vertices plus points along each Pareto edge spaced by ratio 1+eps.
/// k >= 3: a (1+eps)-geometric sequence of lower bounds on the first objective, each solved
/// recursively for the remaining objectives, plus an eps/2 cover of the remaining objectives mixed with
/// the first objective's optimum for the range below the smallest level.
ParetoResult epsilon_pareto(const MultiObjectiveLp& lp, const Rational& epsilon);

struct CoverageReport {
    std::vector<std::vector<Rational>> uncovered;
    bool ok() const { return uncovered.empty(); }
};

/// Probes r without a point t with r <= (1+eps) t.
CoverageReport check_coverage(const std::vector<std::vector<Rational>>& points,
                              const std::vector<std::vector<Rational>>& probes, const Rational& epsilon);

/// Removes dominated and duplicate vectors (first occurrence wins) and sorts by first coordinate,
/// descending, then by the remaining coordinates. Returns the kept indices.
std::vector<std::size_t> non_dominated(const std::vector<std::vector<Rational>>& points);

/// Largest value not above x whose denominator is a power of two, within relative error 2^-bits.
Rational round_down(const Rational& x, unsigned bits = 40);

}  // namespace mocheck
