#pragma once

#include "ssq/value.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ssq {

enum class AggFn : std::uint8_t { Sum, Count, Min, Max, Avg };

std::string_view to_string(AggFn fn);

struct ColumnRef
{
    /// Relation qualifier, empty when the reference is unqualified.
    std::string source;
    std::string name;

    bool operator==(const ColumnRef &) const = default;
};

/// One side of a comparison atom.
struct Operand
{
    enum class Kind : std::uint8_t { Column, Constant, Aggregate };

    Kind kind = Kind::Constant;
    ColumnRef column;      ///< Column, or the argument of an Aggregate
    Value constant;        ///< Constant
    AggFn fn = AggFn::Sum; ///< Aggregate
    /// Aggregate over the subset-identifier pseudo attribute (`count(sid)`, `count(*)`).
    bool sid = false;

    static Operand col(std::string name, std::string source = {});
    static Operand lit(Value v);
    static Operand agg(AggFn fn, std::string name, std::string source = {});
    static Operand count_sid(std::string sid_name = "sid");

    bool operator==(const Operand &) const = default;
};

/// Boolean constraint AST shared by WHERE, CONSTRAINED BY, HAVING and join conditions.
struct Expr
{
    enum class Kind : std::uint8_t { Literal, Compare, And, Or, Not };

    Kind kind = Kind::Literal;
    bool truth = true;
    CmpOp op = CmpOp::Eq;
    Operand lhs;
    Operand rhs;
    std::vector<Expr> children;

    static Expr literal(bool value);
    static Expr compare(Operand lhs, CmpOp op, Operand rhs);
    static Expr all_of(std::vector<Expr> parts);
    static Expr any_of(std::vector<Expr> parts);
    static Expr negate(Expr e);

    bool is_true_literal() const { return kind == Kind::Literal && truth; }

    bool operator==(const Expr &) const = default;
};

/// Top-level conjuncts; `a and (b and c)` yields {a, b, c}, a literal true yields {}.
std::vector<Expr> conjuncts(const Expr &e);

bool has_aggregate(const Expr &e);
bool has_column(const Expr &e);
/// Every comparison atom, depth-first.
std::vector<const Expr *> atoms(const Expr &e);

/// SQL text for the expression, reparseable by the frontend.
std::string to_sql(const Expr &e);
std::string to_sql(const Operand &o);

}
