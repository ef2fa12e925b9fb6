#pragma once

#include "ssq/expr.hpp"
#include "ssq/omega.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ssq::sql {

struct SubsetDecl
{
    std::string table;
    std::string sid;

    bool operator==(const SubsetDecl &) const = default;
};

/// One entry of the select list as written. Whether a bare name is a column or a subset
/// identifier is decided during lowering, once the declarations are known.
struct SelectEntry
{
    enum class Kind : std::uint8_t { Star, Name, Aggregate };

    Kind kind = Kind::Star;
    ColumnRef name;  ///< Name, or the argument of Aggregate ("*" for count(*))
    AggFn fn = AggFn::Count;

    bool operator==(const SelectEntry &) const = default;
};

struct SubsetQuery
{
    std::vector<SelectEntry> select;
    std::vector<std::string> from;
    std::optional<Expr> where;
    std::vector<SubsetDecl> decls;
    std::optional<MaxMinMode> maxmin;
    std::optional<Expr> constrained_by;
    std::optional<SetMode> apply_unary;
    std::vector<ColumnRef> group_by;
    std::optional<Expr> having;

    bool operator==(const SubsetQuery &) const = default;
};

enum class CompoundOp : std::uint8_t { Union, Intersection, CrossUnion, CrossIntersection };

std::string_view to_string(CompoundOp op);

/// A subset query, or two queries joined by a set combinator.
struct Ast
{
    enum class Kind : std::uint8_t { Query, Compound };

    Kind kind = Kind::Query;
    SubsetQuery query;
    CompoundOp op = CompoundOp::Union;
    std::vector<Ast> operands; ///< exactly two for Compound

    static Ast compound(Ast left, CompoundOp op, Ast right);

    bool operator==(const Ast &) const = default;
};

/// Query text that parses back to an equal Ast.
std::string render_sql(const Ast &ast);

}
