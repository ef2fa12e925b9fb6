#include "ssq/omega.hpp"

#include "ssq/error.hpp"
#include "ssq/kernels.hpp"
#include "ssq/predicate.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssq {

void validate(const Limits &limits)
{
    if (limits.max_generated == 0 || limits.max_results == 0 || limits.naive_cap == 0)
        throw std::invalid_argument("limits must be positive");
}

namespace {

void canonicalize(std::vector<Members> &family)
{
    for (auto &m : family) {
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
    }
    family.erase(std::remove_if(family.begin(), family.end(), [](const Members &m) { return m.empty(); }),
                 family.end());
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
}

void check_results(std::size_t n, const Limits &limits)
{
    if (n > limits.max_results)
        throw LimitError("result exceeds max_results (" + std::to_string(limits.max_results) + " subsets)");
}

void check_pairs(const RelationOfSubsets &a, const RelationOfSubsets &b, const Limits &limits)
{
    const std::uint64_t pairs = std::uint64_t(a.size()) * b.size();
    if (a.size() != 0 && pairs / a.size() != b.size())
        throw LimitError("cross operator exceeds max_generated");
    if (pairs > limits.max_generated)
        throw LimitError("cross operator visits " + std::to_string(pairs) + " pairs, exceeding max_generated (" +
                         std::to_string(limits.max_generated) + ")");
}

/// Member lists as slot bitsets over `ext`.
std::vector<kernels::Bitset> to_bitsets(const RelationOfSubsets &w, const Relation &ext)
{
    std::vector<kernels::Bitset> out;
    out.reserve(w.size());
    for (const auto &m : w.members()) {
        kernels::Bitset bits(ext.size());
        for (RowId id : m)
            bits.set(*ext.slot_of(id));
        out.push_back(std::move(bits));
    }
    return out;
}

Members to_members(const kernels::Bitset &bits, const Relation &ext)
{
    Members m;
    for (std::size_t slot : bits.positions())
        m.push_back(ext.at_slot(slot).rowid);
    return m;
}

RelationPtr shared_extension(const RelationOfSubsets &a, const RelationOfSubsets &b)
{
    if (!a.extension()->same_origin(*b.extension()))
        throw SemanticError("relations of subsets are over different base relations ('" + a.extension()->name() +
                            "' and '" + b.extension()->name() + "')");
    return merge_extensions(a.extension(), b.extension());
}

}

RelationOfSubsets::RelationOfSubsets(RelationPtr ext, std::vector<Members> members)
    : ext_(std::move(ext)), members_(std::move(members))
{
    if (!ext_)
        throw SemanticError("relation of subsets without an extension");
    canonicalize(members_);
    for (const auto &m : members_)
        for (RowId id : m)
            if (!ext_->slot_of(id))
                throw SemanticError("row " + std::to_string(id) + " is not in the extension of '" + ext_->name() +
                                    "'");
}

RelationOfSubsets RelationOfSubsets::from_canonical(RelationPtr ext, std::vector<Members> members)
{
    RelationOfSubsets w;
    w.ext_ = std::move(ext);
    w.members_ = std::move(members);
    return w;
}

RelationOfSubsets RelationOfSubsets::of(const std::vector<Subset> &subsets)
{
    if (subsets.empty())
        throw SemanticError("cannot infer the extension of an empty family");
    RelationPtr ext = subsets.front().extension();
    std::vector<Members> members;
    for (const auto &s : subsets) {
        if (!s.extension()->same_origin(*ext))
            throw SemanticError("subsets are drawn from different relations");
        ext = merge_extensions(ext, s.extension());
        members.emplace_back(s.members().begin(), s.members().end());
    }
    return RelationOfSubsets(std::move(ext), std::move(members));
}

Subset RelationOfSubsets::subset(std::size_t index) const
{
    if (index >= members_.size())
        throw SemanticError("sid " + std::to_string(index + 1) + " is out of range");
    return Subset::from_canonical(ext_, members_[index]);
}

std::optional<std::string> RelationOfSubsets::validate() const
{
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const auto &m = members_[i];
        const std::string where = "sid " + std::to_string(i + 1);
        if (m.empty())
            return where + " is empty";
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (k > 0 && m[k] <= m[k - 1])
                return where + " is not strictly ascending";
            if (!ext_->slot_of(m[k]))
                return where + " references row " + std::to_string(m[k]) + " outside the extension";
        }
        if (i > 0) {
            if (m == members_[i - 1])
                return where + " duplicates its predecessor";
            if (m < members_[i - 1])
                return where + " is out of canonical order";
        }
    }
    return std::nullopt;
}

bool rs_equal(const RelationOfSubsets &a, const RelationOfSubsets &b)
{
    return a.extension()->same_origin(*b.extension()) &&
           std::equal(a.members().begin(), a.members().end(), b.members().begin(), b.members().end());
}

RelationOfSubsets power_set(const RelationPtr &r, const Limits &limits)
{
    const std::size_t n = r->size();
    if (n > limits.naive_cap)
        throw LimitError("power set of '" + r->name() + "' (" + std::to_string(n) + " rows) exceeds naive_cap (" +
                         std::to_string(limits.naive_cap) + ")");
    if (n >= 63 || ((std::uint64_t{1} << n) - 1) > limits.max_results)
        throw LimitError("power set of '" + r->name() + "' exceeds max_results (" +
                         std::to_string(limits.max_results) + " subsets)");
    std::vector<Members> family;
    family.reserve((std::size_t{1} << n) - 1);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        Members m;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1)
                m.push_back(r->at_slot(i).rowid);
        family.push_back(std::move(m));
    }
    std::sort(family.begin(), family.end());
    return RelationOfSubsets::from_canonical(r, std::move(family));
}

RelationOfSubsets constraint_filter(const RelationOfSubsets &w, const Expr &cond)
{
    if (cond.is_true_literal())
        return w;
    GroupPredicate pred(cond, w.extension()->schema());
    std::vector<Members> kept;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Subset s = w.subset(i);
        if (pred(*w.extension(), s.slots()))
            kept.push_back(w.members()[i]);
    }
    return RelationOfSubsets::from_canonical(w.extension(), std::move(kept));
}

RelationOfSubsets rs_tuple_select(const RelationOfSubsets &w, const Expr &cond)
{
    if (cond.is_true_literal())
        return w;
    TuplePredicate pred(cond, w.extension()->schema());
    const Relation &ext = *w.extension();
    std::vector<char> pass(ext.size());
    for (std::size_t slot = 0; slot < ext.size(); ++slot)
        pass[slot] = pred(ext.at_slot(slot));
    std::vector<Members> family;
    family.reserve(w.size());
    for (const auto &m : w.members()) {
        Members kept;
        for (RowId id : m)
            if (pass[*ext.slot_of(id)])
                kept.push_back(id);
        family.push_back(std::move(kept));
    }
    return RelationOfSubsets(w.extension(), std::move(family));
}

std::vector<SubsetRows> rs_project(const RelationOfSubsets &w, const std::vector<std::string> &attrs)
{
    std::vector<SubsetRows> out;
    out.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        out.push_back({i + 1, s_project(w.subset(i), attrs)});
    return out;
}

Subset unary_combine(const RelationOfSubsets &w, SetMode mode)
{
    if (w.empty()) {
        if (mode == SetMode::Intersection)
            throw SemanticError("unary intersection of an empty relation of subsets is undefined");
        return Subset::from_canonical(w.extension(), {});
    }
    const Relation &ext = *w.extension();
    const auto bits = to_bitsets(w, ext);
    kernels::Bitset acc = bits.front();
    for (std::size_t i = 1; i < bits.size(); ++i) {
        if (mode == SetMode::Union)
            kernels::bit_or(acc.words(), acc.words(), bits[i].words());
        else
            kernels::bit_and(acc.words(), acc.words(), bits[i].words());
    }
    return Subset::from_canonical(w.extension(), to_members(acc, ext));
}

RelationOfSubsets rs_set_combine(const RelationOfSubsets &a, const RelationOfSubsets &b, SetMode mode)
{
    auto ext = shared_extension(a, b);
    std::vector<Members> out;
    if (mode == SetMode::Union)
        std::set_union(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                       std::back_inserter(out));
    else
        std::set_intersection(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                              std::back_inserter(out));
    return RelationOfSubsets::from_canonical(std::move(ext), std::move(out));
}

RelationOfSubsets cross_combine(const RelationOfSubsets &a, const RelationOfSubsets &b, SetMode mode,
                                const Limits &limits)
{
    auto ext = shared_extension(a, b);
    check_pairs(a, b, limits);
    const auto left = to_bitsets(a, *ext);
    const auto right = to_bitsets(b, *ext);
    std::vector<Members> family;
    family.reserve(left.size() * right.size());
    kernels::Bitset scratch(ext->size());
    for (const auto &x : left) {
        for (const auto &y : right) {
            if (mode == SetMode::Union)
                kernels::bit_or(scratch.words(), x.words(), y.words());
            else
                kernels::bit_and(scratch.words(), x.words(), y.words());
            if (!scratch.none())
                family.push_back(to_members(scratch, *ext));
        }
    }
    canonicalize(family);
    check_results(family.size(), limits);
    return RelationOfSubsets::from_canonical(std::move(ext), std::move(family));
}

RelationOfSubsets rs_complement(const RelationOfSubsets &w)
{
    std::vector<Members> family;
    family.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Subset c = s_complement(w.subset(i));
        family.emplace_back(c.members().begin(), c.members().end());
    }
    canonicalize(family);
    return RelationOfSubsets::from_canonical(w.extension(), std::move(family));
}

RelationOfSubsets cross_product(const RelationOfSubsets &a, const RelationOfSubsets &b, const Limits &limits)
{
    return cross_join(a, b, Expr::literal(true), limits);
}

RelationOfSubsets cross_join(const RelationOfSubsets &a, const RelationOfSubsets &b, const Expr &jc,
                             const Limits &limits)
{
    check_pairs(a, b, limits);
    auto product = product_extension(a.extension(), b.extension());
    const std::size_t width = b.extension()->size();
    std::vector<char> pass(product->size(), 1);
    if (!jc.is_true_literal()) {
        TuplePredicate pred(jc, product->schema());
        for (std::size_t slot = 0; slot < product->size(); ++slot)
            pass[slot] = pred(product->at_slot(slot));
    }

    std::vector<Members> family;
    family.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto left = a.subset(i).slots();
        for (std::size_t j = 0; j < b.size(); ++j) {
            const auto right = b.subset(j).slots();
            Members m;
            for (auto sa : left)
                for (auto sb : right) {
                    const std::size_t slot = std::size_t(sa) * width + sb;
                    if (pass[slot])
                        m.push_back(product->at_slot(slot).rowid);
                }
            family.push_back(std::move(m));
        }
    }
    canonicalize(family);
    check_results(family.size(), limits);
    return RelationOfSubsets::from_canonical(std::move(product), std::move(family));
}

std::vector<SubsetGroups> rs_group_by(const RelationOfSubsets &w, const std::vector<std::string> &keys,
                                      const std::vector<AggregateTerm> &aggs, const Expr &having)
{
    std::vector<SubsetGroups> out;
    out.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        out.push_back({i + 1, s_group_by(w.subset(i), keys, aggs, having)});
    return out;
}

RelationOfSubsets maxmin_filter(const RelationOfSubsets &w, MaxMinMode mode, MaxMinCriterion criterion)
{
    if (w.size() <= 1)
        return w;
    std::vector<Members> kept;
    if (criterion == MaxMinCriterion::Cardinality) {
        std::size_t target = w.members().front().size();
        for (const auto &m : w.members())
            target = mode == MaxMinMode::Maximal ? std::max(target, m.size()) : std::min(target, m.size());
        for (const auto &m : w.members())
            if (m.size() == target)
                kept.push_back(m);
        return RelationOfSubsets::from_canonical(w.extension(), std::move(kept));
    }

    const auto bits = to_bitsets(w, *w.extension());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const std::size_t size_i = w.members()[i].size();
        bool dominated = false;
        for (std::size_t j = 0; j < w.size() && !dominated; ++j) {
            const std::size_t size_j = w.members()[j].size();
            // Members are distinct, so containment between different sizes is proper.
            if (mode == MaxMinMode::Maximal)
                dominated = size_j > size_i && kernels::is_subset(bits[i].words(), bits[j].words());
            else
                dominated = size_j < size_i && kernels::is_subset(bits[j].words(), bits[i].words());
        }
        if (!dominated)
            kept.push_back(w.members()[i]);
    }
    return RelationOfSubsets::from_canonical(w.extension(), std::move(kept));
}

RelationOfSubsets lift(const RelationPtr &r)
{
    if (r->empty())
        throw SemanticError("cannot lift empty relation '" + r->name() + "'");
    const Subset all = Subset::whole(r);
    return RelationOfSubsets::from_canonical(r, {Members(all.members().begin(), all.members().end())});
}

}
