#include "ssq/oracle.hpp"

#include "ssq/error.hpp"
#include "ssq/ident.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ssq {

namespace {

struct Col
{
    std::string source, name;
    Kind kind;
};

/// A relation extension held as rowid -> values.
struct Ext
{
    std::vector<Col> cols;
    std::map<RowId, std::vector<Value>> rows;
    std::string origin;
    std::uint64_t domain = 0;

    std::size_t column(const ColumnRef &ref) const
    {
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (iequals(cols[i].name, ref.name) && (ref.source.empty() || iequals(cols[i].source, ref.source)))
                hits.push_back(i);
        if (hits.empty())
            throw SemanticError("unknown attribute '" + ref.name + "'");
        if (hits.size() > 1)
            throw SemanticError("ambiguous attribute '" + ref.name + "'");
        return hits[0];
    }

    std::string header(std::size_t i) const
    {
        std::set<std::string> sources;
        for (const auto &c : cols)
            sources.insert(fold(c.source));
        return sources.size() > 1 ? cols[i].source + "." + cols[i].name : cols[i].name;
    }
};

using Family = std::set<std::vector<RowId>>;

struct Val
{
    enum class Kind : std::uint8_t { Relation, Family, Subset, Result } kind;
    Ext ext;
    Family family;
    std::vector<RowId> subset;
    QueryResult result;
};

Value aggregate(AggFn fn, const std::vector<const std::vector<Value> *> &rows, std::optional<std::size_t> col)
{
    if (fn == AggFn::Count)
        return Value(static_cast<std::int64_t>(rows.size()));
    if (rows.empty())
        throw SemanticError("aggregate over no rows");
    const std::size_t c = *col;
    if (!(*rows[0])[c].is_numeric())
        throw SemanticError("aggregate over a string attribute");
    Value acc = (*rows[0])[c];
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const Value &v = (*rows[i])[c];
        switch (fn) {
            case AggFn::Sum:
            case AggFn::Avg: acc = checked_add(acc, v); break;
            case AggFn::Min: if (compare(v, acc) < 0) acc = v; break;
            case AggFn::Max: if (compare(v, acc) > 0) acc = v; break;
            case AggFn::Count: break;
        }
    }
    return fn == AggFn::Avg ? average(acc, static_cast<std::int64_t>(rows.size())) : acc;
}

/// Evaluates a condition over a group of rows. `row` is set for per-tuple evaluation; in group
/// mode bare columns must be among `keys` and take the group's value.
struct Cond
{
    const Ext &ext;
    const std::vector<const std::vector<Value> *> *group = nullptr;
    const std::vector<Value> *row = nullptr;
    const std::vector<std::size_t> *keys = nullptr;

    Value operand(const Operand &o) const
    {
        switch (o.kind) {
            case Operand::Kind::Constant: return o.constant;
            case Operand::Kind::Column: {
                const std::size_t c = ext.column(o.column);
                if (row)
                    return (*row)[c];
                if (!keys || std::find(keys->begin(), keys->end(), c) == keys->end())
                    throw SemanticError("bare column in a subset condition");
                return (*(*group)[0])[c];
            }
            case Operand::Kind::Aggregate: {
                if (!group)
                    throw SemanticError("aggregate in a per-tuple condition");
                std::optional<std::size_t> col;
                if (o.fn != AggFn::Count)
                    col = ext.column(o.column);
                return aggregate(o.fn, *group, col);
            }
        }
        return Value();
    }

    bool operator()(const Expr &e) const
    {
        switch (e.kind) {
            case Expr::Kind::Literal: return e.truth;
            case Expr::Kind::Compare: return compare(operand(e.lhs), e.op, operand(e.rhs));
            case Expr::Kind::Not: return !(*this)(e.children[0]);
            case Expr::Kind::And:
                for (const auto &c : e.children)
                    if (!(*this)(c)) return false;
                return true;
            case Expr::Kind::Or:
                for (const auto &c : e.children)
                    if ((*this)(c)) return true;
                return false;
        }
        return false;
    }
};

std::vector<const std::vector<Value> *> rows_of(const Ext &ext, const std::vector<RowId> &members)
{
    std::vector<const std::vector<Value> *> out;
    for (RowId id : members)
        out.push_back(&ext.rows.at(id));
    return out;
}

Ext merged(const Ext &a, const Ext &b)
{
    if (a.origin != b.origin)
        throw SemanticError("different base relations");
    Ext out = a;
    for (const auto &[id, v] : b.rows)
        out.rows.emplace(id, v);
    return out;
}

Ext product(const Ext &a, const Ext &b)
{
    Ext out;
    out.cols = a.cols;
    out.cols.insert(out.cols.end(), b.cols.begin(), b.cols.end());
    out.origin = "(" + a.origin + "*" + b.origin + ")";
    out.domain = a.domain * b.domain;
    for (const auto &[ia, va] : a.rows)
        for (const auto &[ib, vb] : b.rows) {
            std::vector<Value> v = va;
            v.insert(v.end(), vb.begin(), vb.end());
            out.rows.emplace(ia * b.domain + ib, std::move(v));
        }
    return out;
}

class Oracle
{
public:
    Oracle(const Catalog &catalog, MaxMinCriterion criterion) : catalog_(catalog), criterion_(criterion) {}

    QueryResult run(const PlanNode &plan)
    {
        Val v = eval(plan);
        switch (v.kind) {
            case Val::Kind::Result: return v.result;
            case Val::Kind::Family: return project(v.ext, v.family, {SelectItem::star()});
            case Val::Kind::Subset: return project(v.ext, single(v.subset), {SelectItem::star()});
            case Val::Kind::Relation: break;
        }
        throw SemanticError("plan produces a relation, not subsets");
    }

private:
    static Family single(const std::vector<RowId> &s)
    {
        return s.empty() ? Family{} : Family{s};
    }

    static Val family(Ext ext, Family f)
    {
        Val v{Val::Kind::Family, std::move(ext), std::move(f), {}, {}};
        return v;
    }

    Val eval_family(const PlanNode &n)
    {
        Val v = eval(n);
        if (v.kind == Val::Kind::Subset)
            return family(std::move(v.ext), single(v.subset));
        if (v.kind != Val::Kind::Family)
            throw SemanticError("expected a relation of subsets");
        return v;
    }

    Ext eval_relation(const PlanNode &n)
    {
        Val v = eval(n);
        if (v.kind != Val::Kind::Relation)
            throw SemanticError("expected a relation");
        return std::move(v.ext);
    }

    Val eval(const PlanNode &n)
    {
        using K = PlanNode::Kind;
        switch (n.kind) {
            case K::Scan: {
                const Relation &r = *catalog_.find(n.table);
                Val v{Val::Kind::Relation, {}, {}, {}, {}};
                for (const auto &a : r.schema().attributes())
                    v.ext.cols.push_back({a.source, a.name, a.kind});
                for (const auto &t : r.tuples())
                    v.ext.rows.emplace(t.rowid, t.values);
                v.ext.origin = r.origin().key;
                v.ext.domain = r.origin().domain;
                return v;
            }
            case K::TupleSelect: {
                Val v = eval(n.children[0]);
                auto keep = [&](const std::vector<Value> &row) { return Cond{v.ext, nullptr, &row}(n.cond); };
                if (v.kind == Val::Kind::Relation) {
                    std::erase_if(v.ext.rows, [&](const auto &kv) { return !keep(kv.second); });
                } else if (v.kind == Val::Kind::Family || v.kind == Val::Kind::Subset) {
                    Family out;
                    const Family in = v.kind == Val::Kind::Family ? v.family : single(v.subset);
                    for (const auto &m : in) {
                        std::vector<RowId> s;
                        for (RowId id : m)
                            if (keep(v.ext.rows.at(id)))
                                s.push_back(id);
                        if (!s.empty())
                            out.insert(s);
                    }
                    return family(std::move(v.ext), std::move(out));
                } else {
                    throw SemanticError("cannot select from a projection");
                }
                return v;
            }
            case K::PowerSet: {
                Ext r = eval_relation(n.children[0]);
                if (r.rows.size() > kOracleMaxRows)
                    throw LimitError("oracle power set is limited to " + std::to_string(kOracleMaxRows) + " rows");
                std::vector<RowId> ids;
                for (const auto &kv : r.rows)
                    ids.push_back(kv.first);
                Family f;
                for (std::uint32_t mask = 1; mask < (1u << ids.size()); ++mask) {
                    std::vector<RowId> s;
                    for (std::size_t i = 0; i < ids.size(); ++i)
                        if (mask & (1u << i))
                            s.push_back(ids[i]);
                    f.insert(std::move(s));
                }
                return family(std::move(r), std::move(f));
            }
            case K::Lift: {
                Ext r = eval_relation(n.children[0]);
                Family f;
                if (!r.rows.empty()) {
                    std::vector<RowId> all;
                    for (const auto &kv : r.rows)
                        all.push_back(kv.first);
                    f.insert(all);
                }
                return family(std::move(r), std::move(f));
            }
            case K::ConstraintFilter: {
                Val v = eval_family(n.children[0]);
                Family out;
                for (const auto &m : v.family) {
                    const auto rows = rows_of(v.ext, m);
                    if (!Cond{v.ext, &rows}(n.cond))
                        continue;
                    if (n.card && ((n.card->min && std::int64_t(m.size()) < *n.card->min) ||
                                   (n.card->max && std::int64_t(m.size()) > *n.card->max)))
                        continue;
                    out.insert(m);
                }
                v.family = std::move(out);
                return v;
            }
            case K::MaxMin: {
                Val v = eval_family(n.children[0]);
                const MaxMinCriterion c = n.criterion.value_or(criterion_);
                const bool maximal = n.maxmin == MaxMinMode::Maximal;
                Family out;
                std::size_t best = maximal ? 0 : SIZE_MAX;
                for (const auto &m : v.family)
                    best = maximal ? std::max(best, m.size()) : std::min(best, m.size());
                for (const auto &s : v.family) {
                    bool keep = true;
                    if (c == MaxMinCriterion::Cardinality) {
                        keep = s.size() == best;
                    } else {
                        for (const auto &t : v.family) {
                            if (t == s) continue;
                            const bool dominated = maximal ? std::includes(t.begin(), t.end(), s.begin(), s.end())
                                                           : std::includes(s.begin(), s.end(), t.begin(), t.end());
                            if (dominated) { keep = false; break; }
                        }
                    }
                    if (keep)
                        out.insert(s);
                }
                v.family = std::move(out);
                return v;
            }
            case K::UnaryCombine: {
                Val v = eval_family(n.children[0]);
                if (n.set_mode == SetMode::Intersection && v.family.empty())
                    throw SemanticError("intersection of an empty relation of subsets");
                std::set<RowId> acc;
                bool first = true;
                for (const auto &m : v.family) {
                    std::set<RowId> s(m.begin(), m.end());
                    if (n.set_mode == SetMode::Union || first) {
                        acc.insert(s.begin(), s.end());
                    } else {
                        std::erase_if(acc, [&](RowId id) { return !s.contains(id); });
                    }
                    first = false;
                }
                Val out{Val::Kind::Subset, std::move(v.ext), {}, std::vector<RowId>(acc.begin(), acc.end()), {}};
                return out;
            }
            case K::SetCombine: {
                Val a = eval_family(n.children[0]), b = eval_family(n.children[1]);
                Ext ext = merged(a.ext, b.ext);
                Family out;
                for (const auto &m : a.family)
                    if (n.set_mode == SetMode::Union || b.family.contains(m))
                        out.insert(m);
                if (n.set_mode == SetMode::Union)
                    out.insert(b.family.begin(), b.family.end());
                return family(std::move(ext), std::move(out));
            }
            case K::CrossCombine: {
                Val a = eval_family(n.children[0]), b = eval_family(n.children[1]);
                Ext ext = merged(a.ext, b.ext);
                Family out;
                for (const auto &x : a.family)
                    for (const auto &y : b.family) {
                        std::vector<RowId> s;
                        if (n.set_mode == SetMode::Union)
                            std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(s));
                        else
                            std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(s));
                        if (!s.empty())
                            out.insert(std::move(s));
                    }
                return family(std::move(ext), std::move(out));
            }
            case K::CrossProduct:
            case K::CrossJoin: {
                Val a = eval_family(n.children[0]), b = eval_family(n.children[1]);
                Ext ext = product(a.ext, b.ext);
                const Expr jc = n.kind == K::CrossJoin ? n.cond : Expr::literal(true);
                Family out;
                for (const auto &x : a.family)
                    for (const auto &y : b.family) {
                        std::vector<RowId> s;
                        for (RowId i : x)
                            for (RowId j : y) {
                                const RowId id = i * b.ext.domain + j;
                                if (Cond{ext, nullptr, &ext.rows.at(id)}(jc))
                                    s.push_back(id);
                            }
                        std::sort(s.begin(), s.end());
                        if (!s.empty())
                            out.insert(std::move(s));
                    }
                return family(std::move(ext), std::move(out));
            }
            case K::Project: {
                Val v = eval_family(n.children[0]);
                Val out{Val::Kind::Result, {}, {}, {}, project(v.ext, v.family, n.items)};
                return out;
            }
            case K::GroupBy: {
                Val v = eval_family(n.children[0]);
                Val out{Val::Kind::Result, {}, {}, {}, group(v.ext, v.family, n)};
                return out;
            }
        }
        throw SemanticError("unsupported plan node");
    }

    static std::string sid_label(const std::vector<SelectItem> &items)
    {
        for (const auto &i : items)
            if (i.kind == SelectItem::Kind::Sid && !i.column.name.empty())
                return i.column.name;
        return "sid";
    }

    static QueryResult project(const Ext &ext, const Family &f, const std::vector<SelectItem> &items)
    {
        QueryResult out;
        out.columns.push_back(sid_label(items));
        bool aggs = false, attrs = false;
        for (const auto &i : items) {
            aggs |= i.kind == SelectItem::Kind::Aggregate;
            attrs |= i.kind == SelectItem::Kind::Column || i.kind == SelectItem::Kind::Star;
        }
        if (aggs && attrs)
            throw SemanticError("mixed projection");
        std::int64_t sid = 0;
        if (!attrs) {
            out.shape = QueryResult::Shape::Rows;
            for (const auto &i : items)
                if (i.kind == SelectItem::Kind::Aggregate)
                    out.columns.push_back(to_sql(i.aggregate));
            for (const auto &m : f) {
                const auto rows = rows_of(ext, m);
                std::vector<Value> row{Value(++sid)};
                for (const auto &i : items)
                    if (i.kind == SelectItem::Kind::Aggregate) {
                        std::optional<std::size_t> col;
                        if (i.aggregate.fn != AggFn::Count)
                            col = ext.column(i.aggregate.arg);
                        row.push_back(aggregate(i.aggregate.fn, rows, col));
                    }
                out.rows.push_back(std::move(row));
            }
            return out;
        }
        out.shape = QueryResult::Shape::Subsets;
        std::vector<std::size_t> cols;
        for (const auto &i : items) {
            if (i.kind == SelectItem::Kind::Star) {
                for (std::size_t c = 0; c < ext.cols.size(); ++c) {
                    cols.push_back(c);
                    out.columns.push_back(ext.header(c));
                }
            } else if (i.kind == SelectItem::Kind::Column) {
                cols.push_back(ext.column(i.column));
                out.columns.push_back(i.label());
            }
        }
        for (const auto &m : f) {
            ++sid;
            for (RowId id : m) {
                std::vector<Value> row{Value(sid)};
                for (std::size_t c : cols)
                    row.push_back(ext.rows.at(id)[c]);
                out.rows.push_back(std::move(row));
            }
        }
        return out;
    }

    static QueryResult group(const Ext &ext, const Family &f, const PlanNode &n)
    {
        QueryResult out;
        out.shape = QueryResult::Shape::Rows;
        out.columns.push_back(sid_label(n.items));
        std::vector<std::size_t> keys;
        for (const auto &k : n.keys)
            keys.push_back(ext.column(k));
        for (const auto &i : n.items) {
            if (i.kind == SelectItem::Kind::Star)
                throw SemanticError("star with group by");
            if (i.kind == SelectItem::Kind::Column) {
                if (std::find(keys.begin(), keys.end(), ext.column(i.column)) == keys.end())
                    throw SemanticError("non-key column in group by output");
                out.columns.push_back(i.label());
            } else if (i.kind == SelectItem::Kind::Aggregate) {
                out.columns.push_back(to_sql(i.aggregate));
            }
        }
        auto less = [](const std::vector<Value> &a, const std::vector<Value> &b) {
            return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), value_less);
        };
        std::int64_t sid = 0;
        for (const auto &m : f) {
            ++sid;
            std::map<std::vector<Value>, std::vector<const std::vector<Value> *>, decltype(less)> groups(less);
            for (RowId id : m) {
                const auto &row = ext.rows.at(id);
                std::vector<Value> key;
                for (std::size_t k : keys)
                    key.push_back(row[k]);
                groups[key].push_back(&row);
            }
            for (const auto &[key, rows] : groups) {
                if (!Cond{ext, &rows, nullptr, &keys}(n.cond))
                    continue;
                std::vector<Value> out_row{Value(sid)};
                for (const auto &i : n.items) {
                    if (i.kind == SelectItem::Kind::Column) {
                        out_row.push_back(rows[0]->at(ext.column(i.column)));
                    } else if (i.kind == SelectItem::Kind::Aggregate) {
                        std::optional<std::size_t> col;
                        if (i.aggregate.fn != AggFn::Count)
                            col = ext.column(i.aggregate.arg);
                        out_row.push_back(aggregate(i.aggregate.fn, rows, col));
                    }
                }
                out.rows.push_back(std::move(out_row));
            }
        }
        return out;
    }

    const Catalog &catalog_;
    MaxMinCriterion criterion_;
};

}

QueryResult oracle_eval(const PlanNode &plan, const Catalog &catalog, MaxMinCriterion default_criterion)
{
    Oracle o(catalog, default_criterion);
    return o.run(plan);
}

}
