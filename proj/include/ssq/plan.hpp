#pragma once

#include "ssq/expr.hpp"
#include "ssq/omega.hpp"
#include "ssq/subset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ssq {

/// Inclusive bounds on subset cardinality extracted from count(sid) atoms.
struct CardinalityBounds
{
    std::optional<std::int64_t> min;
    std::optional<std::int64_t> max;

    /// Tightens with `count op value`; false when the atom is not a range bound.
    bool tighten(CmpOp op, std::int64_t value);
    Expr to_expr(const std::string &sid_name = "sid") const;

    bool operator==(const CardinalityBounds &) const = default;
};

struct SelectItem
{
    enum class Kind : std::uint8_t { Star, Sid, Column, Aggregate };

    Kind kind = Kind::Star;
    ColumnRef column;
    AggregateTerm aggregate;

    static SelectItem star() { return {}; }
    static SelectItem sid() { SelectItem i; i.kind = Kind::Sid; return i; }
    static SelectItem col(ColumnRef c) { SelectItem i; i.kind = Kind::Column; i.column = std::move(c); return i; }
    static SelectItem agg(AggregateTerm t) { SelectItem i; i.kind = Kind::Aggregate; i.aggregate = std::move(t); return i; }

    std::string label() const;

    bool operator==(const SelectItem &) const = default;
};

/// Subset-algebra IR. Relation-valued nodes: Scan, TupleSelect over a relation. Family-valued
/// nodes: PowerSet, Lift, ConstraintFilter, TupleSelect over a family, SetCombine, CrossCombine,
/// CrossProduct, CrossJoin, MaxMin. UnaryCombine yields one subset; Project and GroupBy yield rows.
struct PlanNode
{
    enum class Kind : std::uint8_t {
        Scan,
        PowerSet,
        TupleSelect,
        ConstraintFilter,
        Project,
        UnaryCombine,
        SetCombine,
        CrossCombine,
        CrossProduct,
        CrossJoin,
        GroupBy,
        MaxMin,
        Lift,
    };

    Kind kind = Kind::Scan;
    std::string table;                       ///< Scan
    Expr cond = Expr::literal(true);         ///< TupleSelect, ConstraintFilter, CrossJoin, GroupBy (having)
    std::optional<CardinalityBounds> card;   ///< ConstraintFilter
    std::vector<SelectItem> items;           ///< Project, GroupBy
    std::vector<ColumnRef> keys;             ///< GroupBy
    SetMode set_mode = SetMode::Union;       ///< UnaryCombine, SetCombine, CrossCombine
    MaxMinMode maxmin = MaxMinMode::Maximal; ///< MaxMin
    /// MaxMin criterion; unset means the evaluator's configured default.
    std::optional<MaxMinCriterion> criterion;
    std::vector<PlanNode> children;

    static PlanNode scan(std::string table);
    static PlanNode power_set(PlanNode relation);
    static PlanNode lift(PlanNode relation);
    static PlanNode tuple_select(PlanNode child, Expr cond);
    static PlanNode constraint_filter(PlanNode child, Expr cond, std::optional<CardinalityBounds> card = std::nullopt);
    static PlanNode project(PlanNode child, std::vector<SelectItem> items);
    static PlanNode unary_combine(PlanNode child, SetMode mode);
    static PlanNode set_combine(PlanNode left, PlanNode right, SetMode mode);
    static PlanNode cross_combine(PlanNode left, PlanNode right, SetMode mode);
    static PlanNode cross_product(PlanNode left, PlanNode right);
    static PlanNode cross_join(PlanNode left, PlanNode right, Expr jc);
    static PlanNode group_by(PlanNode child, std::vector<ColumnRef> keys, std::vector<SelectItem> items,
                             Expr having = Expr::literal(true));
    static PlanNode maxmin_filter(PlanNode child, MaxMinMode mode,
                                  std::optional<MaxMinCriterion> criterion = std::nullopt);

    bool operator==(const PlanNode &) const = default;
};

std::string_view to_string(PlanNode::Kind kind);
/// One-line algebra rendering, e.g. `ConstraintFilter[sum(Weight) > 200](PowerSet(Scan[Item]))`.
std::string to_string(const PlanNode &plan);

}
