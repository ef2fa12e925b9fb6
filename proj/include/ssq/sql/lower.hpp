#pragma once

#include "ssq/classify.hpp"
#include "ssq/engine.hpp"
#include "ssq/plan.hpp"
#include "ssq/sql/ast.hpp"

namespace ssq::sql {

struct LowerOptions
{
    /// See ClassifyOptions::per_tuple_sum_attrs.
    std::vector<std::string> per_tuple_sum_attrs;
};

/// Translates a parsed query into a plan over `catalog`. Per source: Scan, the per-tuple filter,
/// PowerSet (or Lift for FROM tables without a subset declaration) and the aggregate filter; then
/// CrossJoin/CrossProduct across sources, MaxMin, UnaryCombine and finally Project or GroupBy.
/// Compound queries combine the operands' families and project with the left operand's select list.
PlanNode lower(const Ast &ast, const Catalog &catalog, const LowerOptions &options = {});

}
