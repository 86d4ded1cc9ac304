#include "mocheck/simplex.hpp"

#include "mocheck/error.hpp"

#include <algorithm>
#include <sstream>

namespace mocheck {

std::size_t LinearProgram::add_variable(std::string name) {
    variables_.push_back(std::move(name));
    return variables_.size() - 1;
}

void LinearProgram::add_constraint(std::string name, LinearExpr terms, Relation relation, Rational rhs) {
    LinearExpr merged;
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [v, c] : terms) {
        if (v >= variables_.size()) throw ArgumentError("constraint '" + name + "' uses an undeclared variable");
        if (!merged.empty() && merged.back().first == v) {
            merged.back().second += c;
        } else {
            merged.emplace_back(v, std::move(c));
        }
    }
    std::erase_if(merged, [](const auto& t) { return t.second == 0; });
    constraints_.push_back({std::move(name), std::move(merged), relation, std::move(rhs)});
}

Rational evaluate(const LinearExpr& expr, const std::vector<Rational>& values) {
    Rational total = 0;
    for (const auto& [v, c] : expr) total += c * values[v];
    return total;
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

namespace {

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, std::vector<Rational>(cols + 1)), basis_(rows) {}

    Rational& at(std::size_t i, std::size_t j) { return rows_[i][j]; }
    Rational& rhs(std::size_t i) { return rows_[i][cols_]; }
    std::size_t num_rows() const { return rows_.size(); }
    std::size_t& basis(std::size_t i) { return basis_[i]; }

    void pivot(std::size_t r, std::size_t c) {
        auto& prow = rows_[r];
        Rational inv = 1 / prow[c];
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j <= cols_; ++j) {
            if (prow[j] != 0) {
                prow[j] *= inv;
                nz.push_back(j);
            }
        }
        Rational factor;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i == r || rows_[i][c] == 0) continue;
            factor = rows_[i][c];
            auto& row = rows_[i];
            for (std::size_t j : nz) row[j] -= factor * prow[j];
        }
        if (!cost_.empty() && cost_[c] != 0) {
            factor = cost_[c];
            for (std::size_t j : nz) cost_[j] -= factor * prow[j];
        }
        basis_[r] = c;
    }

    // cost_[j] = reduced cost of column j for maximizing `objective`; cost_[cols] = -value.
    void set_objective(const std::vector<Rational>& objective) {
        cost_.assign(cols_ + 1, 0);
        for (std::size_t j = 0; j < cols_; ++j) cost_[j] = objective[j];
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Rational& cb = objective[basis_[i]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) {
                if (rows_[i][j] != 0) cost_[j] -= cb * rows_[i][j];
            }
        }
    }

    // Bland's rule. Returns false when unbounded.
    bool optimize(const std::vector<bool>& allowed) {
        while (true) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (allowed[j] && cost_[j] > 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols_) return true;
            std::size_t leave = rows_.size();
            Rational best;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                if (rows_[i][enter] <= 0) continue;
                Rational ratio = rows_[i][cols_] / rows_[i][enter];
                if (leave == rows_.size() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == rows_.size()) return false;
            pivot(leave, enter);
        }
    }

    Rational value() const { return -cost_[cols_]; }

    void remove_row(std::size_t i) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
    }

private:
    std::size_t cols_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<std::size_t> basis_;
    std::vector<Rational> cost_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& program, const LinearExpr& objective) {
    std::size_t n = program.num_variables();
    const auto& cons = program.constraints();
    std::size_t m = cons.size();
    for (const auto& [v, c] : objective) {
        if (v >= n) throw ArgumentError("objective uses an undeclared variable");
    }
    // Column layout: structural | slack/surplus | artificial.
    std::size_t slacks = 0;
    std::size_t artificials = 0;
    std::vector<bool> flip(m, false);
    std::vector<Relation> rel(m);
    for (std::size_t i = 0; i < m; ++i) {
        rel[i] = cons[i].relation;
        if (cons[i].rhs < 0) {
            flip[i] = true;
            if (rel[i] == Relation::LessEqual) {
                rel[i] = Relation::GreaterEqual;
            } else if (rel[i] == Relation::GreaterEqual) {
                rel[i] = Relation::LessEqual;
            }
        }
        if (rel[i] != Relation::Equal) ++slacks;
        if (rel[i] != Relation::LessEqual) ++artificials;
    }
    std::size_t cols = n + slacks + artificials;
    Tableau t(m, cols);
    std::size_t next_slack = n;
    std::size_t next_art = n + slacks;
    for (std::size_t i = 0; i < m; ++i) {
        Rational sign = flip[i] ? -1 : 1;
        for (const auto& [v, c] : cons[i].terms) t.at(i, v) = sign * c;
        t.rhs(i) = sign * cons[i].rhs;
        if (rel[i] == Relation::LessEqual) {
            t.at(i, next_slack) = 1;
            t.basis(i) = next_slack++;
        } else {
            if (rel[i] == Relation::GreaterEqual) t.at(i, next_slack++) = -1;
            t.at(i, next_art) = 1;
            t.basis(i) = next_art++;
        }
    }
    LpResult result;
    std::vector<bool> allowed(cols, true);
    if (artificials > 0) {
        std::vector<Rational> phase1(cols, 0);
        for (std::size_t j = n + slacks; j < cols; ++j) phase1[j] = -1;
        t.set_objective(phase1);
        t.optimize(allowed);
        if (t.value() < 0) {
            result.status = LpStatus::Infeasible;
            return result;
        }
        for (std::size_t i = t.num_rows(); i-- > 0;) {
            if (t.basis(i) < n + slacks) continue;
            std::size_t col = cols;
            for (std::size_t j = 0; j < n + slacks; ++j) {
                if (t.at(i, j) != 0) {
                    col = j;
                    break;
                }
            }
            if (col == cols) {
                t.remove_row(i);
            } else {
                t.pivot(i, col);
            }
        }
        for (std::size_t j = n + slacks; j < cols; ++j) allowed[j] = false;
    }
    std::vector<Rational> phase2(cols, 0);
    for (const auto& [v, c] : objective) phase2[v] += c;
    t.set_objective(phase2);
    if (!t.optimize(allowed)) {
        result.status = LpStatus::Unbounded;
        return result;
    }
    result.status = LpStatus::Optimal;
    result.values.assign(n, 0);
    for (std::size_t i = 0; i < t.num_rows(); ++i) {
        if (t.basis(i) < n) result.values[t.basis(i)] = t.rhs(i);
    }
    result.objective = evaluate(objective, result.values);
    return result;
}

std::string write_lp_file(const LinearProgram& program, const LinearExpr& objective) {
    std::ostringstream out;
    const auto& names = program.variables();
    auto expr = [&](const LinearExpr& e, bool exact) {
        std::string s;
        if (e.empty()) return names.empty() ? std::string("0") : "0 " + names.front();
        for (std::size_t k = 0; k < e.size(); ++k) {
            const auto& [v, c] = e[k];
            std::string value = exact ? to_string(abs(c)) : to_decimal(abs(c));
            s += (k == 0 ? (c < 0 ? "- " : "") : (c < 0 ? " - " : " + ")) + value + " " + names[v];
        }
        return s;
    };
    auto rel = [](Relation r) { return r == Relation::LessEqual ? " <= " : r == Relation::Equal ? " = " : " >= "; };
    out << "\\ exact coefficients follow each row as a comment\nMaximize\n obj: " << expr(objective, false) << "\n";
    out << "\\ obj: " << expr(objective, true) << "\nSubject To\n";
    for (const auto& c : program.constraints()) {
        out << " " << c.name << ": " << expr(c.terms, false) << rel(c.relation) << to_decimal(c.rhs) << "\n";
        out << "\\ " << c.name << ": " << expr(c.terms, true) << rel(c.relation) << to_string(c.rhs) << "\n";
    }
    out << "End\n";
    return out.str();
}

}  // namespace mocheck
