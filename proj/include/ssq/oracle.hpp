#pragma once

#include "ssq/engine.hpp"
#include "ssq/plan.hpp"

namespace ssq {

/// Largest relation the oracle forms subsets of.
inline constexpr std::size_t kOracleMaxRows = 16;

/// Reference evaluator: materializes every power set and applies each operator by its
/// set-comprehension definition, with no pruning, fusion or pushdown. It shares only the value
/// arithmetic and the plan/result types with the engine, so the two can be tested against each
/// other. Throws LimitError when a power set source has more than kOracleMaxRows rows.
QueryResult oracle_eval(const PlanNode &plan, const Catalog &catalog,
                        MaxMinCriterion default_criterion = MaxMinCriterion::Inclusion);

}
