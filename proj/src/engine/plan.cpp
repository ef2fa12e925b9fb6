#include "ssq/plan.hpp"

namespace ssq {

bool CardinalityBounds::tighten(CmpOp op, std::int64_t value)
{
    auto raise = [&](std::int64_t lo) { min = min ? std::max(*min, lo) : lo; };
    auto lower = [&](std::int64_t hi) { max = max ? std::min(*max, hi) : hi; };
    switch (op) {
        case CmpOp::Ge: raise(value); return true;
        case CmpOp::Gt: raise(value + 1); return true;
        case CmpOp::Le: lower(value); return true;
        case CmpOp::Lt: lower(value - 1); return true;
        case CmpOp::Eq: raise(value); lower(value); return true;
        case CmpOp::Ne: return false;
    }
    return false;
}

Expr CardinalityBounds::to_expr(const std::string &sid_name) const
{
    std::vector<Expr> parts;
    if (min)
        parts.push_back(Expr::compare(Operand::count_sid(sid_name), CmpOp::Ge, Operand::lit(*min)));
    if (max)
        parts.push_back(Expr::compare(Operand::count_sid(sid_name), CmpOp::Le, Operand::lit(*max)));
    return Expr::all_of(std::move(parts));
}

std::string SelectItem::label() const
{
    switch (kind) {
        case Kind::Star: return "*";
        case Kind::Sid: return "sid";
        case Kind::Column: return column.source.empty() ? column.name : column.source + "." + column.name;
        case Kind::Aggregate: return to_sql(aggregate);
    }
    return {};
}

namespace {

PlanNode node(PlanNode::Kind kind, std::vector<PlanNode> children)
{
    PlanNode n;
    n.kind = kind;
    n.children = std::move(children);
    return n;
}

template <typename... Ts>
std::vector<PlanNode> kids(Ts &&...ts)
{
    std::vector<PlanNode> v;
    (v.push_back(std::forward<Ts>(ts)), ...);
    return v;
}

}

PlanNode PlanNode::scan(std::string table)
{
    PlanNode n;
    n.kind = Kind::Scan;
    n.table = std::move(table);
    return n;
}

PlanNode PlanNode::power_set(PlanNode relation) { return node(Kind::PowerSet, kids(std::move(relation))); }
PlanNode PlanNode::lift(PlanNode relation) { return node(Kind::Lift, kids(std::move(relation))); }

PlanNode PlanNode::tuple_select(PlanNode child, Expr cond)
{
    PlanNode n = node(Kind::TupleSelect, kids(std::move(child)));
    n.cond = std::move(cond);
    return n;
}

PlanNode PlanNode::constraint_filter(PlanNode child, Expr cond, std::optional<CardinalityBounds> card)
{
    PlanNode n = node(Kind::ConstraintFilter, kids(std::move(child)));
    n.cond = std::move(cond);
    n.card = std::move(card);
    return n;
}

PlanNode PlanNode::project(PlanNode child, std::vector<SelectItem> items)
{
    PlanNode n = node(Kind::Project, kids(std::move(child)));
    n.items = std::move(items);
    return n;
}

PlanNode PlanNode::unary_combine(PlanNode child, SetMode mode)
{
    PlanNode n = node(Kind::UnaryCombine, kids(std::move(child)));
    n.set_mode = mode;
    return n;
}

PlanNode PlanNode::set_combine(PlanNode left, PlanNode right, SetMode mode)
{
    PlanNode n = node(Kind::SetCombine, kids(std::move(left), std::move(right)));
    n.set_mode = mode;
    return n;
}

PlanNode PlanNode::cross_combine(PlanNode left, PlanNode right, SetMode mode)
{
    PlanNode n = node(Kind::CrossCombine, kids(std::move(left), std::move(right)));
    n.set_mode = mode;
    return n;
}

PlanNode PlanNode::cross_product(PlanNode left, PlanNode right)
{
    return node(Kind::CrossProduct, kids(std::move(left), std::move(right)));
}

PlanNode PlanNode::cross_join(PlanNode left, PlanNode right, Expr jc)
{
    PlanNode n = node(Kind::CrossJoin, kids(std::move(left), std::move(right)));
    n.cond = std::move(jc);
    return n;
}

PlanNode PlanNode::group_by(PlanNode child, std::vector<ColumnRef> keys, std::vector<SelectItem> items, Expr having)
{
    PlanNode n = node(Kind::GroupBy, kids(std::move(child)));
    n.keys = std::move(keys);
    n.items = std::move(items);
    n.cond = std::move(having);
    return n;
}

PlanNode PlanNode::maxmin_filter(PlanNode child, MaxMinMode mode, std::optional<MaxMinCriterion> criterion)
{
    PlanNode n = node(Kind::MaxMin, kids(std::move(child)));
    n.maxmin = mode;
    n.criterion = criterion;
    return n;
}

std::string_view to_string(PlanNode::Kind kind)
{
    switch (kind) {
        case PlanNode::Kind::Scan: return "Scan";
        case PlanNode::Kind::PowerSet: return "PowerSet";
        case PlanNode::Kind::TupleSelect: return "TupleSelect";
        case PlanNode::Kind::ConstraintFilter: return "ConstraintFilter";
        case PlanNode::Kind::Project: return "Project";
        case PlanNode::Kind::UnaryCombine: return "UnaryCombine";
        case PlanNode::Kind::SetCombine: return "SetCombine";
        case PlanNode::Kind::CrossCombine: return "CrossCombine";
        case PlanNode::Kind::CrossProduct: return "CrossProduct";
        case PlanNode::Kind::CrossJoin: return "CrossJoin";
        case PlanNode::Kind::GroupBy: return "GroupBy";
        case PlanNode::Kind::MaxMin: return "MaxMin";
        case PlanNode::Kind::Lift: return "Lift";
    }
    return "?";
}

std::string to_string(const PlanNode &plan)
{
    std::string args;
    auto add = [&](const std::string &s) {
        if (!args.empty()) args += "; ";
        args += s;
    };
    auto items = [](const std::vector<SelectItem> &v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? ", " : "") + v[i].label();
        return s;
    };
    auto mode = [](SetMode m) { return m == SetMode::Union ? "union" : "intersection"; };
    switch (plan.kind) {
        case PlanNode::Kind::Scan: add(plan.table); break;
        case PlanNode::Kind::TupleSelect:
        case PlanNode::Kind::CrossJoin: add(to_sql(plan.cond)); break;
        case PlanNode::Kind::ConstraintFilter:
            add(to_sql(plan.cond));
            if (plan.card) add(to_sql(plan.card->to_expr()));
            break;
        case PlanNode::Kind::Project: add(items(plan.items)); break;
        case PlanNode::Kind::UnaryCombine:
        case PlanNode::Kind::SetCombine:
        case PlanNode::Kind::CrossCombine: add(mode(plan.set_mode)); break;
        case PlanNode::Kind::GroupBy: {
            std::string k;
            for (std::size_t i = 0; i < plan.keys.size(); ++i)
                k += (i ? ", " : "") + SelectItem::col(plan.keys[i]).label();
            add(k);
            add(items(plan.items));
            if (!plan.cond.is_true_literal()) add(to_sql(plan.cond));
            break;
        }
        case PlanNode::Kind::MaxMin:
            add(plan.maxmin == MaxMinMode::Maximal ? "maximal" : "minimal");
            if (plan.criterion)
                add(*plan.criterion == MaxMinCriterion::Inclusion ? "inclusion" : "cardinality");
            break;
        default: break;
    }
    std::string out(to_string(plan.kind));
    if (!args.empty())
        out += "[" + args + "]";
    if (!plan.children.empty()) {
        out += "(";
        for (std::size_t i = 0; i < plan.children.size(); ++i)
            out += (i ? ", " : "") + to_string(plan.children[i]);
        out += ")";
    }
    return out;
}

}
