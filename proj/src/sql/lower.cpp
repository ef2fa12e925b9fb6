#include "ssq/sql/lower.hpp"

#include "ssq/error.hpp"
#include "ssq/ident.hpp"

#include <algorithm>

namespace ssq::sql {

namespace {

struct Scope
{
    std::vector<std::string> tables;  ///< FROM order, catalog spelling
    std::vector<std::string> sids;    ///< declared sid per table, empty when lifted
    std::vector<const Schema *> schemas;

    bool is_sid(const ColumnRef &c) const
    {
        if (c.name == "*")
            return true;
        for (std::size_t i = 0; i < tables.size(); ++i)
            if (!sids[i].empty() && iequals(sids[i], c.name) &&
                (c.source.empty() || iequals(c.source, tables[i])))
                return true;
        return false;
    }

    /// Checks that a column resolves to exactly one FROM table.
    void check_column(const ColumnRef &c) const
    {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < tables.size(); ++i) {
            if (!c.source.empty() && !iequals(c.source, tables[i]))
                continue;
            if (schemas[i]->find(c.name))
                ++hits;
        }
        const std::string shown = c.source.empty() ? c.name : c.source + "." + c.name;
        if (!c.source.empty() &&
            std::none_of(tables.begin(), tables.end(), [&](const std::string &t) { return iequals(t, c.source); }))
            throw SemanticError("unknown relation '" + c.source + "' in '" + shown + "'");
        if (hits == 0)
            throw SemanticError("unknown attribute '" + shown + "'");
        if (hits > 1)
            throw SemanticError("ambiguous attribute '" + shown + "'; qualify it with a relation name");
    }
};

/// Marks count(<declared sid>) operands as cardinality aggregates.
Expr resolve_sids(Expr e, const Scope &scope)
{
    auto fix = [&](Operand &o) {
        if (o.kind != Operand::Kind::Aggregate || o.sid || !scope.is_sid(o.column))
            return;
        if (o.fn != AggFn::Count)
            throw SemanticError(std::string(to_string(o.fn)) + " cannot take the subset identifier '" +
                                o.column.name + "'");
        o.sid = true;
    };
    if (e.kind == Expr::Kind::Compare) {
        fix(e.lhs);
        fix(e.rhs);
    }
    for (auto &c : e.children)
        c = resolve_sids(std::move(c), scope);
    return e;
}

Scope make_scope(const SubsetQuery &q, const Catalog &catalog)
{
    Scope s;
    for (const auto &name : q.from) {
        const RelationPtr &r = catalog.find(name);
        if (std::any_of(s.tables.begin(), s.tables.end(), [&](const std::string &t) { return iequals(t, r->name()); }))
            throw SemanticError("table '" + name + "' appears twice in FROM");
        s.tables.push_back(r->name());
        s.sids.emplace_back();
        s.schemas.push_back(&r->schema());
    }
    for (const auto &d : q.decls) {
        auto it = std::find_if(s.tables.begin(), s.tables.end(), [&](const std::string &t) { return iequals(t, d.table); });
        if (it == s.tables.end())
            throw SemanticError("WITH SUBSETS names '" + d.table + "', which is not in FROM");
        std::string &sid = s.sids[static_cast<std::size_t>(it - s.tables.begin())];
        if (!sid.empty())
            throw SemanticError("table '" + d.table + "' is declared twice in WITH SUBSETS");
        sid = d.sid;
    }
    return s;
}

std::vector<SelectItem> select_items(const std::vector<SelectEntry> &entries, const Scope &scope, bool grouped = false)
{
    std::vector<SelectItem> out;
    for (const auto &e : entries) {
        switch (e.kind) {
            case SelectEntry::Kind::Star: out.push_back(SelectItem::star()); break;
            case SelectEntry::Kind::Name:
                if (scope.is_sid(e.name)) {
                    SelectItem i = SelectItem::sid();
                    i.column.name = e.name.name;
                    out.push_back(i);
                } else {
                    scope.check_column(e.name);
                    out.push_back(SelectItem::col(e.name));
                }
                break;
            case SelectEntry::Kind::Aggregate: {
                AggregateTerm t{e.fn, e.name, false};
                if (scope.is_sid(e.name)) {
                    if (e.fn != AggFn::Count)
                        throw SemanticError(std::string(to_string(e.fn)) + " cannot take the subset identifier '" +
                                            e.name.name + "'");
                    t.sid = true;
                } else {
                    scope.check_column(e.name);
                }
                out.push_back(SelectItem::agg(t));
                break;
            }
        }
    }
    const bool aggs = std::any_of(out.begin(), out.end(), [](const SelectItem &i) { return i.kind == SelectItem::Kind::Aggregate; });
    if (aggs && !grouped)
        for (const auto &i : out)
            if (i.kind == SelectItem::Kind::Column || i.kind == SelectItem::Kind::Star)
                throw SemanticError("cannot mix attribute '" + i.label() + "' with aggregates in one projection");
    return out;
}

bool only_star(const std::vector<SelectItem> &items)
{
    return items.size() == 1 && items[0].kind == SelectItem::Kind::Star;
}

/// The family-valued part of a subset query: everything below MaxMin inclusive.
PlanNode lower_family(const SubsetQuery &q, const Scope &scope, const LowerOptions &options)
{
    if (q.where && has_aggregate(*q.where))
        throw SemanticError("aggregates are not allowed in WHERE; put them in CONSTRAINED BY");
    Expr cond = Expr::all_of({q.where.value_or(Expr::literal(true)), q.constrained_by.value_or(Expr::literal(true))});
    cond = resolve_sids(std::move(cond), scope);

    std::vector<ClassifySource> sources;
    for (std::size_t i = 0; i < scope.tables.size(); ++i)
        sources.push_back({scope.tables[i], scope.schemas[i], scope.sids[i]});
    const Classification cls = classify_constraints(cond, sources, {options.per_tuple_sum_attrs});

    std::vector<PlanNode> families;
    for (std::size_t i = 0; i < scope.tables.size(); ++i) {
        const SourceConstraints &sc = cls.sources[i];
        PlanNode rel = PlanNode::scan(scope.tables[i]);
        if (!sc.per_tuple.is_true_literal())
            rel = PlanNode::tuple_select(std::move(rel), sc.per_tuple);
        if (scope.sids[i].empty()) {
            families.push_back(PlanNode::lift(std::move(rel)));
            continue;
        }
        PlanNode w = PlanNode::power_set(std::move(rel));
        if (!sc.aggregate.is_true_literal() || sc.cardinality)
            w = PlanNode::constraint_filter(std::move(w), sc.aggregate, sc.cardinality);
        families.push_back(std::move(w));
    }

    // Join atoms attach at the first step where every table they mention is in scope.
    auto mentions = [&](const Expr &e) {
        std::size_t last = 0;
        for (const Expr *a : atoms(e))
            for (const Operand *o : {&a->lhs, &a->rhs}) {
                if (o->kind != Operand::Kind::Column)
                    continue;
                for (std::size_t i = 0; i < scope.tables.size(); ++i) {
                    const bool named = o->column.source.empty() ? scope.schemas[i]->find(o->column.name).has_value()
                                                                : iequals(o->column.source, scope.tables[i]);
                    if (named)
                        last = std::max(last, i);
                }
            }
        return last;
    };
    std::vector<std::size_t> ready;
    for (const Expr &j : cls.join_atoms)
        ready.push_back(mentions(j));

    PlanNode acc = std::move(families[0]);
    for (std::size_t i = 1; i < families.size(); ++i) {
        std::vector<Expr> jc;
        for (std::size_t k = 0; k < cls.join_atoms.size(); ++k)
            if (ready[k] == i)
                jc.push_back(cls.join_atoms[k]);
        acc = jc.empty() ? PlanNode::cross_product(std::move(acc), std::move(families[i]))
                         : PlanNode::cross_join(std::move(acc), std::move(families[i]), Expr::all_of(std::move(jc)));
    }
    if (q.maxmin)
        acc = PlanNode::maxmin_filter(std::move(acc), *q.maxmin);
    return acc;
}

const SubsetQuery &leftmost(const Ast &a)
{
    return a.kind == Ast::Kind::Query ? a.query : leftmost(a.operands[0]);
}

PlanNode lower_operand(const Ast &a, const Catalog &catalog, const LowerOptions &options)
{
    if (a.kind == Ast::Kind::Compound) {
        PlanNode l = lower_operand(a.operands[0], catalog, options);
        PlanNode r = lower_operand(a.operands[1], catalog, options);
        switch (a.op) {
            case CompoundOp::Union: return PlanNode::set_combine(std::move(l), std::move(r), SetMode::Union);
            case CompoundOp::Intersection:
                return PlanNode::set_combine(std::move(l), std::move(r), SetMode::Intersection);
            case CompoundOp::CrossUnion: return PlanNode::cross_combine(std::move(l), std::move(r), SetMode::Union);
            case CompoundOp::CrossIntersection:
                return PlanNode::cross_combine(std::move(l), std::move(r), SetMode::Intersection);
        }
    }
    const SubsetQuery &q = a.query;
    if (q.apply_unary || !q.group_by.empty())
        throw SemanticError("APPLY UNARY and GROUP BY cannot be used inside a combined query");
    const Scope scope = make_scope(q, catalog);
    select_items(q.select, scope);
    return lower_family(q, scope, options);
}

}

PlanNode lower(const Ast &ast, const Catalog &catalog, const LowerOptions &options)
{
    if (ast.kind == Ast::Kind::Compound) {
        PlanNode plan = lower_operand(ast, catalog, options);
        const SubsetQuery &left = leftmost(ast);
        const auto items = select_items(left.select, make_scope(left, catalog));
        return only_star(items) ? plan : PlanNode::project(std::move(plan), items);
    }

    const SubsetQuery &q = ast.query;
    const Scope scope = make_scope(q, catalog);
    const auto items = select_items(q.select, scope, !q.group_by.empty());
    PlanNode plan = lower_family(q, scope, options);
    if (q.apply_unary)
        plan = PlanNode::unary_combine(std::move(plan), *q.apply_unary);
    if (!q.group_by.empty()) {
        for (const auto &k : q.group_by)
            scope.check_column(k);
        Expr having = q.having ? resolve_sids(*q.having, scope) : Expr::literal(true);
        return PlanNode::group_by(std::move(plan), q.group_by, items, std::move(having));
    }
    return only_star(items) ? plan : PlanNode::project(std::move(plan), items);
}

}
