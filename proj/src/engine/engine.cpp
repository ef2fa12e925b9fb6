#include "ssq/engine.hpp"

#include "ssq/enumerator.hpp"
#include "ssq/error.hpp"
#include "ssq/ident.hpp"

#include <algorithm>

namespace ssq {

void Catalog::add(RelationPtr relation)
{
    const std::string key = fold(relation->name());
    if (tables_.contains(key))
        throw SemanticError("table '" + relation->name() + "' is already registered");
    tables_.emplace(key, std::move(relation));
}

void Catalog::put(RelationPtr relation)
{
    const std::string key = fold(relation->name());
    tables_[key] = std::move(relation);
}

const RelationPtr &Catalog::find(std::string_view name) const
{
    auto it = tables_.find(fold(name));
    if (it == tables_.end())
        throw SemanticError("unknown table '" + std::string(name) + "'");
    return it->second;
}

bool Catalog::contains(std::string_view name) const
{
    return tables_.contains(fold(name));
}

std::vector<std::string> Catalog::names() const
{
    std::vector<std::string> out;
    for (const auto &[key, rel] : tables_)
        out.push_back(rel->name());
    return out;
}

namespace {

std::string sid_label_of(const std::vector<SelectItem> &items)
{
    for (const auto &i : items)
        if (i.kind == SelectItem::Kind::Sid && !i.column.name.empty())
            return i.column.name;
    return "sid";
}

bool has_aggregates(const std::vector<SelectItem> &items)
{
    return std::any_of(items.begin(), items.end(), [](const SelectItem &i) { return i.kind == SelectItem::Kind::Aggregate; });
}

void check_not_mixed(const std::vector<SelectItem> &items)
{
    if (!has_aggregates(items))
        return;
    for (const auto &i : items)
        if (i.kind == SelectItem::Kind::Column || i.kind == SelectItem::Kind::Star)
            throw SemanticError("cannot mix attribute '" + i.label() + "' with aggregates in one projection");
}

/// Attribute names selected by column/star items, as accepted by tuple_project.
std::vector<std::string> projected_attrs(const Schema &schema, const std::vector<SelectItem> &items,
                                         std::vector<std::string> &headers)
{
    std::vector<std::string> attrs;
    for (const auto &i : items) {
        if (i.kind == SelectItem::Kind::Star) {
            for (std::size_t c = 0; c < schema.arity(); ++c) {
                attrs.push_back(schema[c].source + "." + schema[c].name);
                headers.push_back(schema.display_name(c));
            }
        } else if (i.kind == SelectItem::Kind::Column) {
            const std::size_t c = schema.resolve(i.column.name, i.column.source);
            attrs.push_back(schema[c].source + "." + schema[c].name);
            headers.push_back(i.label());
        }
    }
    return attrs;
}

std::vector<AggregateTerm> aggregate_terms(const std::vector<SelectItem> &items)
{
    std::vector<AggregateTerm> out;
    for (const auto &i : items)
        if (i.kind == SelectItem::Kind::Aggregate)
            out.push_back(i.aggregate);
    return out;
}

/// A combined subset presented as a family: one member with sid 1, or none when it is empty.
RelationOfSubsets single(const Subset &s)
{
    if (s.empty())
        return RelationOfSubsets(s.extension());
    return RelationOfSubsets::from_canonical(s.extension(), {Members(s.members().begin(), s.members().end())});
}

std::vector<std::size_t> key_indices(const Schema &schema, const std::vector<ColumnRef> &keys)
{
    std::vector<std::size_t> out;
    for (const auto &k : keys)
        out.push_back(schema.resolve(k.name, k.source));
    return out;
}

std::vector<std::string> key_names(const Schema &schema, const std::vector<std::size_t> &idx)
{
    std::vector<std::string> out;
    for (std::size_t c : idx)
        out.push_back(schema[c].source + "." + schema[c].name);
    return out;
}

/// Builds the header and per-row assembly for GROUP BY items.
struct GroupLayout
{
    std::vector<std::string> headers;
    // For each non-sid item: index into keys (>= 0) or into aggregates (encoded as -1 - j).
    std::vector<long> picks;
    std::vector<AggregateTerm> aggs;

    GroupLayout(const Schema &schema, const std::vector<std::size_t> &keys, const std::vector<SelectItem> &items)
    {
        for (const auto &i : items) {
            switch (i.kind) {
                case SelectItem::Kind::Sid: break;
                case SelectItem::Kind::Star:
                    throw SemanticError("SELECT * cannot be combined with GROUP BY");
                case SelectItem::Kind::Column: {
                    const std::size_t c = schema.resolve(i.column.name, i.column.source);
                    auto it = std::find(keys.begin(), keys.end(), c);
                    if (it == keys.end())
                        throw SemanticError("'" + i.label() + "' must appear in GROUP BY or inside an aggregate");
                    picks.push_back(it - keys.begin());
                    headers.push_back(i.label());
                    break;
                }
                case SelectItem::Kind::Aggregate:
                    picks.push_back(-1 - static_cast<long>(aggs.size()));
                    aggs.push_back(i.aggregate);
                    headers.push_back(i.label());
                    break;
            }
        }
    }

    std::vector<Value> assemble(const GroupRow &g) const
    {
        std::vector<Value> row;
        for (long p : picks)
            row.push_back(p >= 0 ? g.keys[static_cast<std::size_t>(p)] : g.aggregates[static_cast<std::size_t>(-1 - p)]);
        return row;
    }
};

class Evaluator
{
public:
    Evaluator(const Catalog &catalog, const EvalOptions &options) : catalog_(catalog), options_(options)
    {
        validate(options.limits);
    }

    QueryResult run(const PlanNode &plan)
    {
        Value_ v = eval(plan);
        QueryResult out;
        if (v.result) {
            out = std::move(*v.result);
        } else if (v.omega) {
            out = star_result(*v.omega);
        } else if (v.subset) {
            out = star_result(single(*v.subset));
            out.subset = std::move(v.subset);
        } else {
            throw SemanticError("plan produces a relation, not subsets");
        }
        out.explored = explored_;
        return out;
    }

private:
    struct Value_
    {
        RelationPtr relation;
        std::optional<RelationOfSubsets> omega;
        std::optional<Subset> subset;
        std::optional<QueryResult> result;
    };

    RelationPtr relation(const PlanNode &n)
    {
        Value_ v = eval(n);
        if (!v.relation)
            throw SemanticError(std::string(to_string(n.kind)) + " does not produce a relation");
        return v.relation;
    }

    RelationOfSubsets family(const PlanNode &n)
    {
        Value_ v = eval(n);
        if (v.subset)
            return single(*v.subset);
        if (!v.omega)
            throw SemanticError(std::string(to_string(n.kind)) + " does not produce a relation of subsets");
        return std::move(*v.omega);
    }

    static Value_ of(RelationOfSubsets w)
    {
        Value_ v;
        v.omega = std::move(w);
        return v;
    }

    /// PowerSet, optionally with the aggregate filter sitting right above it.
    RelationOfSubsets power_set_node(const PlanNode &ps, const Expr *cond, const std::optional<CardinalityBounds> &card)
    {
        const PlanNode &input = ps.children.at(0);
        const bool filtered = cond != nullptr && (!cond->is_true_literal() || card);
        if (!options_.pushdown && input.kind == PlanNode::Kind::TupleSelect) {
            // Form subsets of the unfiltered relation, then filter each one.
            RelationOfSubsets w = subsets_of(relation(input.children.at(0)), nullptr, std::nullopt);
            w = rs_tuple_select(w, input.cond);
            return filtered ? constraint_filter(w, full_condition(*cond, card)) : w;
        }
        return subsets_of(relation(input), filtered ? cond : nullptr, card);
    }

    RelationOfSubsets subsets_of(const RelationPtr &r, const Expr *cond, const std::optional<CardinalityBounds> &card)
    {
        if (options_.fuse) {
            Enumeration e = enumerate_subsets(r, cond ? *cond : Expr::literal(true), card, options_.limits);
            explored_ += e.explored;
            return std::move(e.omega);
        }
        RelationOfSubsets w = power_set(r, options_.limits);
        return cond ? constraint_filter(w, full_condition(*cond, card)) : w;
    }

    static Expr full_condition(const Expr &cond, const std::optional<CardinalityBounds> &card)
    {
        return card ? Expr::all_of({cond, card->to_expr()}) : cond;
    }

    Value_ eval(const PlanNode &n)
    {
        using K = PlanNode::Kind;
        switch (n.kind) {
            case K::Scan: {
                Value_ v;
                v.relation = catalog_.find(n.table);
                return v;
            }
            case K::PowerSet: return of(power_set_node(n, nullptr, std::nullopt));
            case K::Lift: {
                RelationPtr r = relation(n.children.at(0));
                return of(r->empty() ? RelationOfSubsets(r) : lift(r));
            }
            case K::TupleSelect: {
                Value_ v = eval(n.children.at(0));
                if (v.relation)
                    v.relation = tuple_select(v.relation, n.cond);
                else if (v.omega)
                    v.omega = rs_tuple_select(*v.omega, n.cond);
                else if (v.subset)
                    v.subset = s_select(*v.subset, n.cond);
                else
                    throw SemanticError("cannot select tuples from a projected result");
                return v;
            }
            case K::ConstraintFilter: {
                const PlanNode &child = n.children.at(0);
                if (child.kind == K::PowerSet)
                    return of(power_set_node(child, &n.cond, n.card));
                return of(constraint_filter(family(child), full_condition(n.cond, n.card)));
            }
            case K::MaxMin:
                return of(maxmin_filter(family(n.children.at(0)), n.maxmin,
                                        n.criterion.value_or(options_.maxmin_criterion)));
            case K::UnaryCombine: {
                Value_ v;
                v.subset = unary_combine(family(n.children.at(0)), n.set_mode);
                return v;
            }
            case K::SetCombine:
                return of(rs_set_combine(family(n.children.at(0)), family(n.children.at(1)), n.set_mode));
            case K::CrossCombine:
                return of(cross_combine(family(n.children.at(0)), family(n.children.at(1)), n.set_mode,
                                        options_.limits));
            case K::CrossProduct:
                return of(cross_product(family(n.children.at(0)), family(n.children.at(1)), options_.limits));
            case K::CrossJoin:
                return of(cross_join(family(n.children.at(0)), family(n.children.at(1)), n.cond, options_.limits));
            case K::Project: {
                Value_ in = eval(n.children.at(0));
                Value_ v;
                if (in.omega)
                    v.result = aggregate_projection(*in.omega, n.items);
                else if (in.subset)
                    v.result = aggregate_projection(single(*in.subset), n.items);
                else
                    throw SemanticError("Project needs subsets as input");
                v.result->subset = std::move(in.subset);
                return v;
            }
            case K::GroupBy: return group(n);
        }
        throw SemanticError("unsupported plan node");
    }

    Value_ group(const PlanNode &n)
    {
        const RelationOfSubsets w = family(n.children.at(0));
        const Schema &schema = w.extension()->schema();
        const auto keys = key_indices(schema, n.keys);
        const GroupLayout layout(schema, keys, n.items);

        QueryResult out;
        out.shape = QueryResult::Shape::Rows;
        out.columns.push_back(sid_label_of(n.items));
        out.columns.insert(out.columns.end(), layout.headers.begin(), layout.headers.end());
        for (const auto &sg : rs_group_by(w, key_names(schema, keys), layout.aggs, n.cond))
            for (const auto &g : sg.rows) {
                std::vector<Value> row{Value(static_cast<std::int64_t>(sg.sid))};
                for (auto &x : layout.assemble(g))
                    row.push_back(std::move(x));
                out.rows.push_back(std::move(row));
            }
        out.omega = w;
        Value_ v;
        v.result = std::move(out);
        return v;
    }

    const Catalog &catalog_;
    const EvalOptions &options_;
    std::uint64_t explored_ = 0;
};

}

QueryResult star_result(const RelationOfSubsets &w, const std::string &sid_label)
{
    QueryResult out;
    out.shape = QueryResult::Shape::Subsets;
    const Relation &ext = *w.extension();
    out.columns.push_back(sid_label);
    for (std::size_t c = 0; c < ext.schema().arity(); ++c)
        out.columns.push_back(ext.schema().display_name(c));
    for (std::size_t i = 0; i < w.size(); ++i)
        for (RowId id : w.members()[i]) {
            std::vector<Value> row{Value(static_cast<std::int64_t>(i + 1))};
            const Tuple &t = ext.at_slot(*ext.slot_of(id));
            row.insert(row.end(), t.values.begin(), t.values.end());
            out.rows.push_back(std::move(row));
        }
    out.omega = w;
    return out;
}

QueryResult aggregate_projection(const RelationOfSubsets &w, const std::vector<SelectItem> &items)
{
    check_not_mixed(items);
    const std::string sid = sid_label_of(items);
    QueryResult out;
    out.columns.push_back(sid);
    if (has_aggregates(items) || std::all_of(items.begin(), items.end(), [](const SelectItem &i) {
            return i.kind == SelectItem::Kind::Sid;
        })) {
        out.shape = QueryResult::Shape::Rows;
        const auto terms = aggregate_terms(items);
        std::vector<BoundAggregate> bound;
        for (const auto &t : terms) {
            bound.emplace_back(t, w.extension()->schema());
            out.columns.push_back(to_sql(t));
        }
        for (std::size_t i = 0; i < w.size(); ++i) {
            const auto slots = w.subset(i).slots();
            std::vector<Value> row{Value(static_cast<std::int64_t>(i + 1))};
            for (const auto &b : bound)
                row.push_back(b.eval(*w.extension(), slots));
            out.rows.push_back(std::move(row));
        }
    } else {
        out.shape = QueryResult::Shape::Subsets;
        const auto attrs = projected_attrs(w.extension()->schema(), items, out.columns);
        for (const auto &sr : rs_project(w, attrs))
            for (const auto &r : sr.rows) {
                std::vector<Value> row{Value(static_cast<std::int64_t>(sr.sid))};
                row.insert(row.end(), r.values.begin(), r.values.end());
                out.rows.push_back(std::move(row));
            }
    }
    out.omega = w;
    return out;
}

QueryResult evaluate(const PlanNode &plan, const Catalog &catalog, const EvalOptions &options)
{
    Evaluator ev(catalog, options);
    return ev.run(plan);
}

}
