#pragma once

#include "ssq/expr.hpp"
#include "ssq/relation.hpp"

#include <span>
#include <vector>

namespace ssq {

/// A per-tuple condition resolved against one schema. Binding rejects aggregates, unknown
/// attributes and comparisons between incompatible kinds up front, so evaluation cannot fail.
class TuplePredicate
{
public:
    TuplePredicate(const Expr &cond, const Schema &schema);

    bool operator()(std::span<const Value> values) const { return eval(root_, values); }
    bool operator()(const Tuple &t) const { return eval(root_, t.values); }

private:
    struct Side
    {
        int column = -1; // -1: constant
        Value constant;
    };
    struct Node
    {
        Expr::Kind kind = Expr::Kind::Literal;
        bool truth = true;
        CmpOp op = CmpOp::Eq;
        Side lhs, rhs;
        std::vector<Node> children;
    };

    static Node bind(const Expr &e, const Schema &schema);
    static bool eval(const Node &n, std::span<const Value> values);

    Node root_;
};

}
