#pragma once

#include "ssq/expr.hpp"
#include "ssq/relation.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ssq {

/// An immutable set of rows drawn from one extension, held as ascending rowids.
class Subset
{
public:
    /// Sorts and deduplicates `members`; throws SemanticError if a rowid is not in `ext`.
    Subset(RelationPtr ext, std::vector<RowId> members);
    /// The whole extension as one subset.
    static Subset whole(RelationPtr ext);
    /// Trusted construction from members already sorted, unique and drawn from `ext`.
    static Subset from_canonical(RelationPtr ext, std::vector<RowId> members);

    const RelationPtr &extension() const { return ext_; }
    std::span<const RowId> members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(RowId id) const;

    /// Positions of the members within extension()->tuples().
    std::vector<std::uint32_t> slots() const;

    /// Same base origin and the same rows.
    friend bool operator==(const Subset &a, const Subset &b);

private:
    Subset() = default;

    RelationPtr ext_;
    std::vector<RowId> members_;
};

/// `ColumnRef` from "Name" or "Source.Name".
ColumnRef column_ref(std::string_view text);

struct AggregateTerm
{
    AggFn fn = AggFn::Count;
    ColumnRef arg;
    /// Argument is the subset-identifier pseudo attribute; only meaningful for count.
    bool sid = false;

    static AggregateTerm from(const Operand &o);
    static AggregateTerm count_sid() { return {AggFn::Count, {"", "sid"}, true}; }

    bool operator==(const AggregateTerm &) const = default;
};

std::string to_sql(const AggregateTerm &t);

/// An aggregate resolved against a schema. sum/min/max/avg need a numeric attribute.
class BoundAggregate
{
public:
    BoundAggregate(const AggregateTerm &term, const Schema &schema);

    /// Evaluates over the given extension slots. Throws SemanticError for sum/min/max/avg over
    /// no rows, or on overflow.
    Value eval(const Relation &ext, std::span<const std::uint32_t> slots) const;

    AggFn fn() const { return fn_; }
    /// Attribute index, or -1 for count.
    int column() const { return column_; }
    Kind result_kind() const { return result_kind_; }

private:
    AggFn fn_;
    int column_ = -1;
    Kind column_kind_ = Kind::Int;
    Kind result_kind_ = Kind::Int;
};

/// A condition evaluated against a whole group of rows: aggregate atoms, constants and, when
/// permitted, columns that are constant within the group (GROUP BY keys in HAVING).
class GroupPredicate
{
public:
    /// `key_columns` lists attributes that may appear bare; any other bare column is an error.
    GroupPredicate(const Expr &cond, const Schema &schema, std::vector<std::size_t> key_columns = {});

    bool operator()(const Relation &ext, std::span<const std::uint32_t> slots) const;

private:
    struct Side
    {
        enum class Kind : std::uint8_t { Constant, Column, Aggregate } kind = Kind::Constant;
        Value constant;
        std::size_t column = 0;
        std::size_t aggregate = 0;
    };
    struct Node
    {
        Expr::Kind kind = Expr::Kind::Literal;
        bool truth = true;
        CmpOp op = CmpOp::Eq;
        Side lhs, rhs;
        std::vector<Node> children;
    };

    Node bind(const Expr &e, const Schema &schema, const std::vector<std::size_t> &keys);
    bool eval(const Node &n, const Relation &ext, std::span<const std::uint32_t> slots,
              std::vector<std::optional<Value>> &cache) const;

    std::vector<BoundAggregate> aggregates_;
    Node root_;
};

Subset s_union(const Subset &a, const Subset &b);
Subset s_intersect(const Subset &a, const Subset &b);
Subset s_difference(const Subset &a, const Subset &b);
/// Rows of the subset's own extension that are not members.
Subset s_complement(const Subset &a);
/// Members satisfying a per-tuple condition; may be empty.
Subset s_select(const Subset &a, const Expr &cond);

struct ProjectedRow
{
    RowId rowid = 0;
    std::vector<Value> values;

    bool operator==(const ProjectedRow &) const = default;
};

/// One row per member, restricted to `attrs` ("Name" or "Source.Name").
std::vector<ProjectedRow> s_project(const Subset &a, const std::vector<std::string> &attrs);

/// Pairs (t1, t2) of members passing `jc`, as a subset of the product of both extensions.
Subset s_join(const Subset &a, const Subset &b, const Expr &jc);

struct GroupRow
{
    std::vector<Value> keys;
    std::vector<Value> aggregates;

    bool operator==(const GroupRow &) const = default;
};

/// Groups the members by `keys`, one row per group ordered by key values ascending.
/// Groups failing `having` are dropped.
std::vector<GroupRow> s_group_by(const Subset &a, const std::vector<std::string> &keys,
                                 const std::vector<AggregateTerm> &aggs, const Expr &having = Expr::literal(true));

Value s_aggregate(const Subset &a, const AggregateTerm &term);

}
