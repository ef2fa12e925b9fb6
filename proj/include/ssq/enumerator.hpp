#pragma once

#include "ssq/limits.hpp"
#include "ssq/omega.hpp"
#include "ssq/plan.hpp"

#include <cstdint>
#include <optional>

namespace ssq {

struct Enumeration
{
    RelationOfSubsets omega;
    /// Search-tree nodes visited, the empty root included.
    std::uint64_t explored = 0;
};

/// The nonempty subsets of `r` satisfying `cond` (aggregate atoms only) and `card`, in
/// canonical order, without materializing the power set.
///
/// Depth-first over the tree where each node extends its subset with one larger row, so the
/// preorder is already lexicographic. Every node evaluates the constraint in three-valued logic
/// over intervals covering all subsets of its subtree and cuts the subtree once the answer is
/// definitely false. That covers the usual monotone cases (a sum under a cap over nonnegative
/// values, count upper bounds, min/max thresholds) and stays sound for negative values, avg and
/// disjunctions, where the intervals simply prune less.
Enumeration enumerate_subsets(const RelationPtr &r, const Expr &cond,
                              const std::optional<CardinalityBounds> &card = std::nullopt,
                              const Limits &limits = {});

}
