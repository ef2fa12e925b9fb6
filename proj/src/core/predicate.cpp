#include "ssq/predicate.hpp"

#include "ssq/error.hpp"

namespace ssq {

TuplePredicate::TuplePredicate(const Expr &cond, const Schema &schema) : root_(bind(cond, schema)) {}

TuplePredicate::Node TuplePredicate::bind(const Expr &e, const Schema &schema)
{
    Node n;
    n.kind = e.kind;
    n.truth = e.truth;
    n.op = e.op;
    switch (e.kind) {
        case Expr::Kind::Literal:
            break;
        case Expr::Kind::Compare: {
            auto side = [&](const Operand &o, Kind &kind) {
                Side s;
                switch (o.kind) {
                    case Operand::Kind::Aggregate:
                        throw SemanticError("aggregate " + to_sql(o) + " is not allowed in a per-tuple condition");
                    case Operand::Kind::Column:
                        s.column = static_cast<int>(schema.resolve(o.column.name, o.column.source));
                        kind = schema[s.column].kind;
                        break;
                    case Operand::Kind::Constant:
                        s.constant = o.constant;
                        kind = o.constant.kind();
                        break;
                }
                return s;
            };
            Kind lk = Kind::Int, rk = Kind::Int;
            n.lhs = side(e.lhs, lk);
            n.rhs = side(e.rhs, rk);
            if (!comparable(lk, rk, e.op))
                throw SemanticError("kind mismatch in " + to_sql(e) + ": " + std::string(kind_name(lk)) + " " +
                                    std::string(to_string(e.op)) + " " + std::string(kind_name(rk)));
            break;
        }
        case Expr::Kind::And:
        case Expr::Kind::Or:
        case Expr::Kind::Not:
            n.children.reserve(e.children.size());
            for (const auto &c : e.children)
                n.children.push_back(bind(c, schema));
            break;
    }
    return n;
}

bool TuplePredicate::eval(const Node &n, std::span<const Value> values)
{
    switch (n.kind) {
        case Expr::Kind::Literal:
            return n.truth;
        case Expr::Kind::Compare: {
            const Value &a = n.lhs.column >= 0 ? values[n.lhs.column] : n.lhs.constant;
            const Value &b = n.rhs.column >= 0 ? values[n.rhs.column] : n.rhs.constant;
            return holds(n.op, compare(a, b));
        }
        case Expr::Kind::And:
            for (const auto &c : n.children)
                if (!eval(c, values)) return false;
            return true;
        case Expr::Kind::Or:
            for (const auto &c : n.children)
                if (eval(c, values)) return true;
            return false;
        case Expr::Kind::Not:
            return !eval(n.children.front(), values);
    }
    return false;
}

}
