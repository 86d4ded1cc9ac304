#pragma once

#include "mocheck/mdp.hpp"
#include "mocheck/simplex.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace mocheck {

/// The multi-objective reachability LP: one variable y_v per absorbing state (targets and sinks) and
/// y_(v,a) per other state and action, one flow-balance equality per state, one objective per target
/// set (sum of y_v over F_i).
struct MultiObjectiveLp {
    Mdp mdp;
    InitialDistribution alpha;
    std::vector<std::vector<StateId>> targets;
    std::vector<bool> absorbing;                        // F plus sinks
    std::vector<std::size_t> state_var;                 // npos for non-absorbing states
    std::vector<std::vector<std::size_t>> action_var;   // [state][action], empty for absorbing states
    LinearProgram program;
    std::vector<LinearExpr> objectives;

    std::size_t num_objectives() const { return objectives.size(); }
    std::vector<Rational> objective_values(const std::vector<Rational>& y) const;
};

/// Preconditions (ArgumentError otherwise): targets and sinks absorbing, alpha supported outside F,
/// every state outside the sinks can reach F.
MultiObjectiveLp build_multiobj_lp(const Mdp& mdp, const InitialDistribution& alpha,
                                   const std::vector<std::vector<StateId>>& targets,
                                   const std::vector<StateId>& sinks = {});

struct AchievabilityResult {
    bool achievable = false;
    std::optional<MemorylessStrategy> strategy;
    LpResult witness;
    std::optional<Rational> slack;  // z* when strict bounds were requested
    std::vector<Rational> values;   // objective readouts of the witness
};

/// Sum_{F_i} y >= r_i for i not strict, >= r_j + z for strict j, 0 <= z <= 1, maximizing z.
AchievabilityResult decide_extended_achievability(const MultiObjectiveLp& lp, const std::vector<Rational>& bounds,
                                                  const std::vector<bool>& strict = {});

/// sigma(v)(a) = y_(v,a) / sum_a' y_(v,a') on flow-carrying states, least action elsewhere.
MemorylessStrategy extract_strategy(const MultiObjectiveLp& lp, const std::vector<Rational>& y);

struct WeightedOptimum {
    bool feasible = false;  // false only when `lower` cannot be met
    Rational value;
    LpResult solution;
    MemorylessStrategy strategy;
    std::vector<Rational> values;  // objective readouts
};

/// Maximizes sum_i w_i * sum_{F_i} y. Optional extra constraints sum_{F_i} y >= lower_i.
WeightedOptimum maximize_weighted(const MultiObjectiveLp& lp, const std::vector<Rational>& weights,
                                  const std::vector<Rational>& lower = {});

/// Lexicographic maximization of the objectives in `order` (later ones break ties of earlier ones).
WeightedOptimum maximize_lexicographic(const MultiObjectiveLp& lp, const std::vector<std::size_t>& order,
                                       const std::vector<Rational>& lower = {});

}  // namespace mocheck
