#pragma once

#include "ssq/limits.hpp"
#include "ssq/subset.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ssq {

using Members = std::vector<RowId>;

/// A set of distinct, nonempty subsets of one extension, kept in lexicographic order of their
/// member lists. The subset at position i has sid i + 1.
class RelationOfSubsets
{
public:
    /// Canonicalizes: sorts each member list, drops empty lists, sorts and deduplicates the family.
    /// Throws SemanticError if a rowid is not in `ext`.
    explicit RelationOfSubsets(RelationPtr ext, std::vector<Members> members = {});
    /// Trusted construction; `members` must already be canonical.
    static RelationOfSubsets from_canonical(RelationPtr ext, std::vector<Members> members);
    /// Family of the given subsets, which must share an origin.
    static RelationOfSubsets of(const std::vector<Subset> &subsets);

    const RelationPtr &extension() const { return ext_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    std::span<const Members> members() const { return members_; }

    Subset subset(std::size_t index) const;
    Subset at_sid(std::size_t sid) const { return subset(sid - 1); }

    /// Describes the first violated structural invariant, or nullopt when the value is well formed.
    std::optional<std::string> validate() const;

private:
    RelationOfSubsets() = default;

    RelationPtr ext_;
    std::vector<Members> members_;
};

/// Same base origin and the same member subsets.
bool rs_equal(const RelationOfSubsets &a, const RelationOfSubsets &b);

enum class SetMode : std::uint8_t { Union, Intersection };
enum class MaxMinMode : std::uint8_t { Maximal, Minimal };
enum class MaxMinCriterion : std::uint8_t { Inclusion, Cardinality };

/// Every nonempty subset of `r`, materialized. Reference semantics for the pruned enumerator.
RelationOfSubsets power_set(const RelationPtr &r, const Limits &limits = {});

/// Members satisfying an aggregate condition (aggregate and count(sid) atoms only).
RelationOfSubsets constraint_filter(const RelationOfSubsets &w, const Expr &cond);

/// Applies a per-tuple condition inside every member; empty results are dropped.
RelationOfSubsets rs_tuple_select(const RelationOfSubsets &w, const Expr &cond);

struct SubsetRows
{
    std::size_t sid = 0;
    std::vector<ProjectedRow> rows;

    bool operator==(const SubsetRows &) const = default;
};
std::vector<SubsetRows> rs_project(const RelationOfSubsets &w, const std::vector<std::string> &attrs);

/// Folds the family into one subset. Intersection of an empty family is an error.
Subset unary_combine(const RelationOfSubsets &w, SetMode mode);

/// Set union / intersection of two families over the same base relation.
RelationOfSubsets rs_set_combine(const RelationOfSubsets &a, const RelationOfSubsets &b, SetMode mode);

/// Union / intersection of every pair (s_a, s_b); empty results are dropped.
RelationOfSubsets cross_combine(const RelationOfSubsets &a, const RelationOfSubsets &b, SetMode mode,
                                const Limits &limits = {});

/// Complements of the members relative to the family's extension; empty complements are dropped.
RelationOfSubsets rs_complement(const RelationOfSubsets &w);

/// Cartesian product of every pair of members, over the product of both extensions.
RelationOfSubsets cross_product(const RelationOfSubsets &a, const RelationOfSubsets &b, const Limits &limits = {});

/// Join of every pair of members on `jc`; pairs with an empty join are dropped.
RelationOfSubsets cross_join(const RelationOfSubsets &a, const RelationOfSubsets &b, const Expr &jc,
                             const Limits &limits = {});

struct SubsetGroups
{
    std::size_t sid = 0;
    std::vector<GroupRow> rows;

    bool operator==(const SubsetGroups &) const = default;
};
std::vector<SubsetGroups> rs_group_by(const RelationOfSubsets &w, const std::vector<std::string> &keys,
                                      const std::vector<AggregateTerm> &aggs,
                                      const Expr &having = Expr::literal(true));

/// Inclusion: members with no proper superset (maximal) / subset (minimal) in the family.
/// Cardinality: members whose size is the family's largest (maximal) / smallest (minimal).
RelationOfSubsets maxmin_filter(const RelationOfSubsets &w, MaxMinMode mode,
                                MaxMinCriterion criterion = MaxMinCriterion::Inclusion);

/// The whole of `r` as a single-member family. `r` must be nonempty.
RelationOfSubsets lift(const RelationPtr &r);

}
