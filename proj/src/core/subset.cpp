#include "ssq/subset.hpp"

#include "ssq/error.hpp"
#include "ssq/ident.hpp"
#include "ssq/kernels.hpp"
#include "ssq/predicate.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace ssq {

Subset::Subset(RelationPtr ext, std::vector<RowId> members) : ext_(std::move(ext)), members_(std::move(members))
{
    if (!ext_)
        throw SemanticError("subset without an extension");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (RowId id : members_)
        if (!ext_->slot_of(id))
            throw SemanticError("row " + std::to_string(id) + " is not in the extension of '" + ext_->name() + "'");
}

Subset Subset::whole(RelationPtr ext)
{
    std::vector<RowId> ids;
    ids.reserve(ext->size());
    for (const auto &t : ext->tuples())
        ids.push_back(t.rowid);
    return from_canonical(std::move(ext), std::move(ids));
}

Subset Subset::from_canonical(RelationPtr ext, std::vector<RowId> members)
{
    Subset s;
    s.ext_ = std::move(ext);
    s.members_ = std::move(members);
    return s;
}

bool Subset::contains(RowId id) const
{
    return std::binary_search(members_.begin(), members_.end(), id);
}

std::vector<std::uint32_t> Subset::slots() const
{
    if (ext_->size() > std::numeric_limits<std::uint32_t>::max())
        throw LimitError("extension of '" + ext_->name() + "' is too large");
    std::vector<std::uint32_t> out;
    out.reserve(members_.size());
    for (RowId id : members_)
        out.push_back(static_cast<std::uint32_t>(*ext_->slot_of(id)));
    return out;
}

bool operator==(const Subset &a, const Subset &b)
{
    return a.ext_->same_origin(*b.ext_) && a.members_ == b.members_;
}

ColumnRef column_ref(std::string_view text)
{
    const auto dot = text.find('.');
    if (dot == std::string_view::npos)
        return {"", std::string(text)};
    return {std::string(text.substr(0, dot)), std::string(text.substr(dot + 1))};
}

AggregateTerm AggregateTerm::from(const Operand &o)
{
    if (o.kind != Operand::Kind::Aggregate)
        throw SemanticError("'" + to_sql(o) + "' is not an aggregate");
    return {o.fn, o.column, o.sid};
}

std::string to_sql(const AggregateTerm &t)
{
    const std::string arg = t.arg.source.empty() ? t.arg.name : t.arg.source + "." + t.arg.name;
    return std::string(to_string(t.fn)) + "(" + arg + ")";
}

BoundAggregate::BoundAggregate(const AggregateTerm &term, const Schema &schema) : fn_(term.fn)
{
    if (fn_ == AggFn::Count) {
        // count(sid) and count(attr) both mean cardinality: members are distinct rows.
        if (!term.sid && term.arg.name != "*")
            schema.resolve(term.arg.name, term.arg.source);
        result_kind_ = Kind::Int;
        return;
    }
    if (term.sid)
        throw SemanticError(std::string(to_string(fn_)) + " cannot take the subset identifier");
    column_ = static_cast<int>(schema.resolve(term.arg.name, term.arg.source));
    column_kind_ = schema[column_].kind;
    if (column_kind_ == Kind::Str)
        throw SemanticError(to_sql(term) + " needs a numeric attribute");
    result_kind_ = fn_ == AggFn::Avg ? Kind::Dec : column_kind_;
}

namespace {

Value raw_value(std::int64_t raw, Kind kind)
{
    return kind == Kind::Int ? Value(raw) : Value(Decimal::from_units(raw));
}

}

Value BoundAggregate::eval(const Relation &ext, std::span<const std::uint32_t> slots) const
{
    if (fn_ == AggFn::Count)
        return Value(static_cast<std::int64_t>(slots.size()));
    if (slots.empty())
        throw SemanticError(std::string(to_string(fn_)) + " over an empty subset is undefined");
    const auto column = ext.numeric_column(static_cast<std::size_t>(column_));
    switch (fn_) {
        case AggFn::Min:
            return raw_value(kernels::gather_min(column, slots), column_kind_);
        case AggFn::Max:
            return raw_value(kernels::gather_max(column, slots), column_kind_);
        case AggFn::Sum:
        case AggFn::Avg: {
            const auto sum = kernels::gather_sum(column, slots, ext.max_abs(static_cast<std::size_t>(column_)));
            if (sum.overflow)
                throw SemanticError(std::string(to_string(fn_)) + " overflows");
            const Value total = raw_value(sum.value, column_kind_);
            return fn_ == AggFn::Sum ? total : average(total, static_cast<std::int64_t>(slots.size()));
        }
        case AggFn::Count:
            break;
    }
    return Value();
}

GroupPredicate::GroupPredicate(const Expr &cond, const Schema &schema, std::vector<std::size_t> key_columns)
{
    root_ = bind(cond, schema, key_columns);
}

GroupPredicate::Node GroupPredicate::bind(const Expr &e, const Schema &schema, const std::vector<std::size_t> &keys)
{
    Node n;
    n.kind = e.kind;
    n.truth = e.truth;
    n.op = e.op;
    if (e.kind == Expr::Kind::Compare) {
        auto side = [&](const Operand &o, Kind &kind) {
            Side s;
            switch (o.kind) {
                case Operand::Kind::Constant:
                    s.kind = Side::Kind::Constant;
                    s.constant = o.constant;
                    kind = o.constant.kind();
                    break;
                case Operand::Kind::Column: {
                    const std::size_t c = schema.resolve(o.column.name, o.column.source);
                    if (std::find(keys.begin(), keys.end(), c) == keys.end())
                        throw SemanticError("per-tuple condition on '" + to_sql(o) +
                                            "' cannot be applied to whole subsets; move it to WHERE");
                    s.kind = Side::Kind::Column;
                    s.column = c;
                    kind = schema[c].kind;
                    break;
                }
                case Operand::Kind::Aggregate: {
                    s.kind = Side::Kind::Aggregate;
                    s.aggregate = aggregates_.size();
                    aggregates_.emplace_back(AggregateTerm::from(o), schema);
                    kind = aggregates_.back().result_kind();
                    break;
                }
            }
            return s;
        };
        Kind lk = Kind::Int, rk = Kind::Int;
        n.lhs = side(e.lhs, lk);
        n.rhs = side(e.rhs, rk);
        if (!comparable(lk, rk, e.op))
            throw SemanticError("kind mismatch in " + to_sql(e));
    }
    for (const auto &c : e.children)
        n.children.push_back(bind(c, schema, keys));
    return n;
}

bool GroupPredicate::eval(const Node &n, const Relation &ext, std::span<const std::uint32_t> slots,
                          std::vector<std::optional<Value>> &cache) const
{
    switch (n.kind) {
        case Expr::Kind::Literal:
            return n.truth;
        case Expr::Kind::Compare: {
            auto get = [&](const Side &s) -> Value {
                switch (s.kind) {
                    case Side::Kind::Constant: return s.constant;
                    case Side::Kind::Column: return ext.at_slot(slots.front()).values[s.column];
                    case Side::Kind::Aggregate:
                        if (!cache[s.aggregate])
                            cache[s.aggregate] = aggregates_[s.aggregate].eval(ext, slots);
                        return *cache[s.aggregate];
                }
                return Value();
            };
            return holds(n.op, compare(get(n.lhs), get(n.rhs)));
        }
        case Expr::Kind::And:
            for (const auto &c : n.children)
                if (!eval(c, ext, slots, cache)) return false;
            return true;
        case Expr::Kind::Or:
            for (const auto &c : n.children)
                if (eval(c, ext, slots, cache)) return true;
            return false;
        case Expr::Kind::Not:
            return !eval(n.children.front(), ext, slots, cache);
    }
    return false;
}

bool GroupPredicate::operator()(const Relation &ext, std::span<const std::uint32_t> slots) const
{
    std::vector<std::optional<Value>> cache(aggregates_.size());
    return eval(root_, ext, slots, cache);
}

namespace {

RelationPtr common_extension(const Subset &a, const Subset &b)
{
    if (!a.extension()->same_origin(*b.extension()))
        throw SemanticError("subsets are drawn from different relations ('" + a.extension()->name() + "' and '" +
                            b.extension()->name() + "')");
    return merge_extensions(a.extension(), b.extension());
}

template <typename Op>
Subset combine(const Subset &a, const Subset &b, Op op)
{
    auto ext = common_extension(a, b);
    std::vector<RowId> out;
    op(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(), std::back_inserter(out));
    return Subset::from_canonical(std::move(ext), std::move(out));
}

}

Subset s_union(const Subset &a, const Subset &b)
{
    return combine(a, b, [](auto... args) { return std::set_union(args...); });
}

Subset s_intersect(const Subset &a, const Subset &b)
{
    return combine(a, b, [](auto... args) { return std::set_intersection(args...); });
}

Subset s_difference(const Subset &a, const Subset &b)
{
    return combine(a, b, [](auto... args) { return std::set_difference(args...); });
}

Subset s_complement(const Subset &a)
{
    std::vector<RowId> out;
    out.reserve(a.extension()->size() - a.size());
    auto m = a.members().begin();
    for (const auto &t : a.extension()->tuples()) {
        while (m != a.members().end() && *m < t.rowid)
            ++m;
        if (m == a.members().end() || *m != t.rowid)
            out.push_back(t.rowid);
    }
    return Subset::from_canonical(a.extension(), std::move(out));
}

Subset s_select(const Subset &a, const Expr &cond)
{
    if (cond.is_true_literal())
        return a;
    TuplePredicate pred(cond, a.extension()->schema());
    std::vector<RowId> out;
    for (auto slot : a.slots())
        if (pred(a.extension()->at_slot(slot)))
            out.push_back(a.extension()->at_slot(slot).rowid);
    return Subset::from_canonical(a.extension(), std::move(out));
}

std::vector<ProjectedRow> s_project(const Subset &a, const std::vector<std::string> &attrs)
{
    const Schema &schema = a.extension()->schema();
    std::vector<std::size_t> idx;
    for (const auto &name : attrs) {
        const ColumnRef c = column_ref(name);
        idx.push_back(schema.resolve(c.name, c.source));
    }
    std::vector<ProjectedRow> rows;
    rows.reserve(a.size());
    for (auto slot : a.slots()) {
        const Tuple &t = a.extension()->at_slot(slot);
        ProjectedRow row{t.rowid, {}};
        for (std::size_t i : idx)
            row.values.push_back(t.values[i]);
        rows.push_back(std::move(row));
    }
    return rows;
}

Subset s_join(const Subset &a, const Subset &b, const Expr &jc)
{
    auto product = product_extension(a.extension(), b.extension());
    TuplePredicate pred(jc, product->schema());
    const std::uint64_t radix = b.extension()->origin().domain;
    std::vector<RowId> out;
    std::vector<Value> row;
    for (auto sa : a.slots()) {
        const Tuple &t1 = a.extension()->at_slot(sa);
        for (auto sb : b.slots()) {
            const Tuple &t2 = b.extension()->at_slot(sb);
            row.assign(t1.values.begin(), t1.values.end());
            row.insert(row.end(), t2.values.begin(), t2.values.end());
            if (pred(row))
                out.push_back(t1.rowid * radix + t2.rowid);
        }
    }
    return Subset::from_canonical(std::move(product), std::move(out));
}

std::vector<GroupRow> s_group_by(const Subset &a, const std::vector<std::string> &keys,
                                 const std::vector<AggregateTerm> &aggs, const Expr &having)
{
    const Relation &ext = *a.extension();
    const Schema &schema = ext.schema();
    std::vector<std::size_t> key_idx;
    for (const auto &k : keys) {
        const ColumnRef c = column_ref(k);
        key_idx.push_back(schema.resolve(c.name, c.source));
    }
    std::vector<BoundAggregate> bound;
    for (const auto &t : aggs)
        bound.emplace_back(t, schema);
    GroupPredicate keep(having, schema, key_idx);

    auto key_less = [](const std::vector<Value> &x, const std::vector<Value> &y) {
        return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), value_less);
    };
    std::map<std::vector<Value>, std::vector<std::uint32_t>, decltype(key_less)> groups(key_less);
    for (auto slot : a.slots()) {
        std::vector<Value> key;
        for (std::size_t i : key_idx)
            key.push_back(ext.at_slot(slot).values[i]);
        groups[std::move(key)].push_back(slot);
    }

    std::vector<GroupRow> rows;
    for (const auto &[key, slots] : groups) {
        if (!keep(ext, slots))
            continue;
        GroupRow row{key, {}};
        for (const auto &b : bound)
            row.aggregates.push_back(b.eval(ext, slots));
        rows.push_back(std::move(row));
    }
    return rows;
}

Value s_aggregate(const Subset &a, const AggregateTerm &term)
{
    BoundAggregate bound(term, a.extension()->schema());
    return bound.eval(*a.extension(), a.slots());
}

}
