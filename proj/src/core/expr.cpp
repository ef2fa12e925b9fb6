#include "ssq/expr.hpp"

namespace ssq {

std::string_view to_string(AggFn fn)
{
    switch (fn) {
        case AggFn::Sum: return "sum";
        case AggFn::Count: return "count";
        case AggFn::Min: return "min";
        case AggFn::Max: return "max";
        case AggFn::Avg: return "avg";
    }
    return "?";
}

Operand Operand::col(std::string name, std::string source)
{
    Operand o;
    o.kind = Kind::Column;
    o.column = {std::move(source), std::move(name)};
    return o;
}

Operand Operand::lit(Value v)
{
    Operand o;
    o.kind = Kind::Constant;
    o.constant = std::move(v);
    return o;
}

Operand Operand::agg(AggFn fn, std::string name, std::string source)
{
    Operand o;
    o.kind = Kind::Aggregate;
    o.fn = fn;
    o.column = {std::move(source), std::move(name)};
    return o;
}

Operand Operand::count_sid(std::string sid_name)
{
    Operand o = agg(AggFn::Count, std::move(sid_name));
    o.sid = true;
    return o;
}

Expr Expr::literal(bool value)
{
    Expr e;
    e.kind = Kind::Literal;
    e.truth = value;
    return e;
}

Expr Expr::compare(Operand lhs, CmpOp op, Operand rhs)
{
    Expr e;
    e.kind = Kind::Compare;
    e.op = op;
    e.lhs = std::move(lhs);
    e.rhs = std::move(rhs);
    return e;
}

Expr Expr::all_of(std::vector<Expr> parts)
{
    if (parts.empty())
        return literal(true);
    if (parts.size() == 1)
        return std::move(parts.front());
    Expr e;
    e.kind = Kind::And;
    e.children = std::move(parts);
    return e;
}

Expr Expr::any_of(std::vector<Expr> parts)
{
    if (parts.empty())
        return literal(false);
    if (parts.size() == 1)
        return std::move(parts.front());
    Expr e;
    e.kind = Kind::Or;
    e.children = std::move(parts);
    return e;
}

Expr Expr::negate(Expr inner)
{
    Expr e;
    e.kind = Kind::Not;
    e.children.push_back(std::move(inner));
    return e;
}

namespace {

void collect_conjuncts(const Expr &e, std::vector<Expr> &out)
{
    if (e.kind == Expr::Kind::And) {
        for (const auto &c : e.children)
            collect_conjuncts(c, out);
    } else if (!e.is_true_literal()) {
        out.push_back(e);
    }
}

template <typename Pred>
bool any_operand(const Expr &e, Pred pred)
{
    if (e.kind == Expr::Kind::Compare)
        return pred(e.lhs) || pred(e.rhs);
    for (const auto &c : e.children)
        if (any_operand(c, pred)) return true;
    return false;
}

void collect_atoms(const Expr &e, std::vector<const Expr *> &out)
{
    if (e.kind == Expr::Kind::Compare)
        out.push_back(&e);
    for (const auto &c : e.children)
        collect_atoms(c, out);
}

std::string quote(const std::string &s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string column_sql(const ColumnRef &c)
{
    return c.source.empty() ? c.name : c.source + "." + c.name;
}

}

std::vector<Expr> conjuncts(const Expr &e)
{
    std::vector<Expr> out;
    collect_conjuncts(e, out);
    return out;
}

bool has_aggregate(const Expr &e)
{
    return any_operand(e, [](const Operand &o) { return o.kind == Operand::Kind::Aggregate; });
}

bool has_column(const Expr &e)
{
    return any_operand(e, [](const Operand &o) { return o.kind == Operand::Kind::Column; });
}

std::vector<const Expr *> atoms(const Expr &e)
{
    std::vector<const Expr *> out;
    collect_atoms(e, out);
    return out;
}

std::string to_sql(const Operand &o)
{
    switch (o.kind) {
        case Operand::Kind::Column:
            return column_sql(o.column);
        case Operand::Kind::Constant:
            return o.constant.kind() == Kind::Str ? quote(o.constant.as_str()) : o.constant.to_string();
        case Operand::Kind::Aggregate:
            return std::string(to_string(o.fn)) + "(" + column_sql(o.column) + ")";
    }
    return {};
}

std::string to_sql(const Expr &e)
{
    auto nested = [](const Expr &c) {
        const bool wrap = c.kind == Expr::Kind::And || c.kind == Expr::Kind::Or;
        return wrap ? "(" + to_sql(c) + ")" : to_sql(c);
    };
    switch (e.kind) {
        case Expr::Kind::Literal:
            return e.truth ? "true" : "false";
        case Expr::Kind::Compare:
            return to_sql(e.lhs) + " " + std::string(to_string(e.op)) + " " + to_sql(e.rhs);
        case Expr::Kind::And:
        case Expr::Kind::Or: {
            std::string out;
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                if (i) out += e.kind == Expr::Kind::And ? " and " : " or ";
                out += nested(e.children[i]);
            }
            return out;
        }
        case Expr::Kind::Not:
            return "not " + nested(e.children.front());
    }
    return {};
}

}
