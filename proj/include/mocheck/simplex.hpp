#pragma once

#include "mocheck/rational.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace mocheck {

using LinearExpr = std::vector<std::pair<std::size_t, Rational>>;  // (variable, coefficient)

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
    std::string name;
    LinearExpr terms;
    Relation relation;
    Rational rhs;
};

/// Linear program over nonnegative variables.
class LinearProgram {
public:
    std::size_t add_variable(std::string name);
    void add_constraint(std::string name, LinearExpr terms, Relation relation, Rational rhs);

    std::size_t num_variables() const noexcept { return variables_.size(); }
    const std::vector<std::string>& variables() const noexcept { return variables_; }
    const std::vector<Constraint>& constraints() const noexcept { return constraints_; }

private:
    std::vector<std::string> variables_;
    std::vector<Constraint> constraints_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rational objective;
    std::vector<Rational> values;  // one per variable, an optimal basic solution

    bool optimal() const { return status == LpStatus::Optimal; }
};

/// Maximizes `objective` with an exact two-phase tableau simplex using Bland's rule.
LpResult solve_lp(const LinearProgram& program, const LinearExpr& objective);

/// Value of an expression under an assignment.
Rational evaluate(const LinearExpr& expr, const std::vector<Rational>& values);

/// CPLEX-style LP file, decimals in the rows and the exact rationals as comments.
std::string write_lp_file(const LinearProgram& program, const LinearExpr& objective);

const char* to_string(LpStatus status);

}  // namespace mocheck
