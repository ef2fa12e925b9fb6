#pragma once

#include "ssq/limits.hpp"
#include "ssq/omega.hpp"
#include "ssq/plan.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ssq {

/// Registered relations, looked up case-insensitively.
class Catalog
{
public:
    /// Throws SemanticError if a relation of the same name is already registered.
    void add(RelationPtr relation);
    /// Registers or replaces.
    void put(RelationPtr relation);
    /// Throws SemanticError("unknown table ...").
    const RelationPtr &find(std::string_view name) const;
    bool contains(std::string_view name) const;
    /// Registered names in registration spelling, sorted case-insensitively.
    std::vector<std::string> names() const;

private:
    std::map<std::string, RelationPtr> tables_; // folded name -> relation
};

struct EvalOptions
{
    Limits limits;
    /// Used by MaxMin nodes that do not fix a criterion themselves.
    MaxMinCriterion maxmin_criterion = MaxMinCriterion::Inclusion;
    /// Evaluate ConstraintFilter over PowerSet with the pruned enumerator.
    bool fuse = true;
    /// Filter the relation before forming subsets instead of filtering every subset afterwards.
    bool pushdown = true;
};

/// A flattened query result with the sid as first column. Subset results list one row per member;
/// row results (aggregate projections, groups) one row per subset or group.
struct QueryResult
{
    enum class Shape : std::uint8_t { Subsets, Rows };

    Shape shape = Shape::Rows;
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    /// The relation of subsets the output was read from, when there is one.
    std::optional<RelationOfSubsets> omega;
    /// The subset a unary combination produced.
    std::optional<Subset> subset;
    /// Search nodes visited by every enumeration in the plan.
    std::uint64_t explored = 0;

    /// Compares the visible table only.
    bool operator==(const QueryResult &o) const
    {
        return shape == o.shape && columns == o.columns && rows == o.rows;
    }
};

QueryResult evaluate(const PlanNode &plan, const Catalog &catalog, const EvalOptions &options = {});

/// Projects every member of `w`: aggregate items give one row per subset, attribute items one
/// row per member. Mixing attributes with aggregates is an error. A leading sid column is always
/// emitted.
QueryResult aggregate_projection(const RelationOfSubsets &w, const std::vector<SelectItem> &items);

/// Every member row of `w` under the full schema.
QueryResult star_result(const RelationOfSubsets &w, const std::string &sid_label = "sid");

}
