#include "ssq/sql/ast.hpp"

namespace ssq::sql {

std::string_view to_string(CompoundOp op)
{
    switch (op) {
        case CompoundOp::Union: return "UNION";
        case CompoundOp::Intersection: return "INTERSECTION";
        case CompoundOp::CrossUnion: return "CROSS UNION";
        case CompoundOp::CrossIntersection: return "CROSS INTERSECTION";
    }
    return "?";
}

Ast Ast::compound(Ast left, CompoundOp op, Ast right)
{
    Ast a;
    a.kind = Kind::Compound;
    a.op = op;
    a.operands.push_back(std::move(left));
    a.operands.push_back(std::move(right));
    return a;
}

namespace {

std::string column(const ColumnRef &c)
{
    return c.source.empty() ? c.name : c.source + "." + c.name;
}

std::string entry(const SelectEntry &e)
{
    switch (e.kind) {
        case SelectEntry::Kind::Star: return "*";
        case SelectEntry::Kind::Name: return column(e.name);
        case SelectEntry::Kind::Aggregate: return std::string(to_string(e.fn)) + "(" + column(e.name) + ")";
    }
    return {};
}

template <typename T, typename F>
std::string join(const std::vector<T> &items, F f)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i)
        out += (i ? ", " : "") + f(items[i]);
    return out;
}

std::string render(const SubsetQuery &q)
{
    std::string out = "SELECT " + join(q.select, entry);
    out += " FROM " + join(q.from, [](const std::string &s) { return s; });
    if (q.where)
        out += " WHERE " + to_sql(*q.where);
    out += " WITH SUBSETS " + join(q.decls, [](const SubsetDecl &d) { return d.table + " " + d.sid; });
    if (q.maxmin)
        out += *q.maxmin == MaxMinMode::Maximal ? " MAXIMAL" : " MINIMAL";
    if (q.constrained_by)
        out += " CONSTRAINED BY " + to_sql(*q.constrained_by);
    if (q.apply_unary)
        out += *q.apply_unary == SetMode::Union ? " APPLY UNARY UNION" : " APPLY UNARY INTERSECTION";
    if (!q.group_by.empty())
        out += " GROUP BY " + join(q.group_by, column);
    if (q.having)
        out += " HAVING " + to_sql(*q.having);
    return out;
}

}

std::string render_sql(const Ast &ast)
{
    if (ast.kind == Ast::Kind::Query)
        return render(ast.query);
    return "(" + render_sql(ast.operands[0]) + ") " + std::string(to_string(ast.op)) + " (" +
           render_sql(ast.operands[1]) + ")";
}

}
