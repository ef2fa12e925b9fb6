#pragma once

#include "ssq/expr.hpp"
#include "ssq/plan.hpp"
#include "ssq/relation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ssq {

struct ClassifySource
{
    std::string name;
    const Schema *schema = nullptr;
    /// Subset-identifier name from WITH SUBSETS; empty when the source is lifted whole.
    std::string sid_name;
};

struct ClassifyOptions
{
    /// Attributes whose `sum(attr) op c` atoms are read per tuple, as `attr op c` in WHERE.
    std::vector<std::string> per_tuple_sum_attrs;
};

struct SourceConstraints
{
    std::string source;
    Expr per_tuple = Expr::literal(true);
    Expr aggregate = Expr::literal(true);
    std::optional<CardinalityBounds> cardinality;

    bool operator==(const SourceConstraints &) const = default;
};

struct Classification
{
    /// One entry per source, in the order given.
    std::vector<SourceConstraints> sources;
    /// Per-tuple conjuncts spanning several sources.
    std::vector<Expr> join_atoms;

    const SourceConstraints &of(std::string_view source) const;
};

/// Routes every top-level conjunct of `cond` to the source whose attributes it mentions:
/// aggregate-free conjuncts on one source become its per-tuple condition, aggregate conjuncts on one
/// source its aggregate condition (count(sid) range atoms become cardinality bounds), and per-tuple
/// conjuncts on several sources join atoms. A conjunct whose atoms land in different places, or an
/// atom comparing aggregates of two sources, is rejected.
Classification classify_constraints(const Expr &cond, const std::vector<ClassifySource> &sources,
                                    const ClassifyOptions &options = {});

/// `cond` with every `sum(attr) op c` for a listed attribute rewritten to `attr op c`.
Expr per_tuple_sums(const Expr &cond, const std::vector<std::string> &attrs);

}
