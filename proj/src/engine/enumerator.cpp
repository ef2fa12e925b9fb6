#include "ssq/enumerator.hpp"

#include "ssq/error.hpp"

#include <algorithm>
#include <limits>

namespace ssq {

namespace {

constexpr int128 kInf = std::numeric_limits<std::int64_t>::max() * int128(Decimal::kScale) * 4;

enum class Tri : std::uint8_t { False, True, Unknown };

Tri tri_not(Tri t)
{
    return t == Tri::Unknown ? t : (t == Tri::True ? Tri::False : Tri::True);
}

/// Closed interval in millionths.
struct Interval
{
    int128 lo = 0;
    int128 hi = 0;
};

Tri tri_compare(Interval a, CmpOp op, Interval b)
{
    switch (op) {
        case CmpOp::Lt:
            if (a.hi < b.lo) return Tri::True;
            if (a.lo >= b.hi) return Tri::False;
            return Tri::Unknown;
        case CmpOp::Le:
            if (a.hi <= b.lo) return Tri::True;
            if (a.lo > b.hi) return Tri::False;
            return Tri::Unknown;
        case CmpOp::Gt: return tri_compare(b, CmpOp::Lt, a);
        case CmpOp::Ge: return tri_compare(b, CmpOp::Le, a);
        case CmpOp::Eq:
            if (a.hi < b.lo || a.lo > b.hi) return Tri::False;
            if (a.lo == a.hi && b.lo == b.hi) return Tri::True;
            return Tri::Unknown;
        case CmpOp::Ne: return tri_not(tri_compare(a, CmpOp::Eq, b));
    }
    return Tri::Unknown;
}

struct Column
{
    std::span<const std::int64_t> raw;
    Kind kind = Kind::Int;
    int128 unit = 1; // raw * unit = millionths
    // Suffix summaries over slots [i, n), in raw units; index n is the empty suffix.
    std::vector<int128> pos_sum, neg_sum;
    std::vector<std::int64_t> suf_min, suf_max;
};

struct Term
{
    AggFn fn = AggFn::Count;
    int column = -1;
    Kind result = Kind::Int;
};

struct Side
{
    bool constant = true;
    Value value;
    std::size_t term = 0;
};

struct Node
{
    Expr::Kind kind = Expr::Kind::Literal;
    bool truth = true;
    CmpOp op = CmpOp::Eq;
    Side lhs, rhs;
    std::vector<Node> children;
};

/// Aggregate state of the current subset, per column.
struct State
{
    std::size_t count = 0;
    std::vector<int128> sum;
    std::vector<std::int64_t> min, max;
};

class Search
{
public:
    Search(const RelationPtr &r, const Expr &cond, const std::optional<CardinalityBounds> &card, const Limits &limits)
        : r_(r), limits_(limits)
    {
        const Schema &schema = r->schema();
        columns_.resize(schema.arity());
        Expr full = cond;
        if (card)
            full = Expr::all_of({cond, card->to_expr()});
        root_ = bind(full, schema);
        n_ = r->size();
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            if (schema[c].kind == Kind::Str)
                continue;
            Column &col = columns_[c];
            col.raw = r->numeric_column(c);
            col.kind = schema[c].kind;
            col.unit = col.kind == Kind::Int ? Decimal::kScale : 1;
            col.pos_sum.assign(n_ + 1, 0);
            col.neg_sum.assign(n_ + 1, 0);
            col.suf_min.assign(n_ + 1, std::numeric_limits<std::int64_t>::max());
            col.suf_max.assign(n_ + 1, std::numeric_limits<std::int64_t>::min());
            for (std::size_t i = n_; i-- > 0;) {
                const std::int64_t v = col.raw[i];
                col.pos_sum[i] = col.pos_sum[i + 1] + (v > 0 ? v : 0);
                col.neg_sum[i] = col.neg_sum[i + 1] + (v < 0 ? v : 0);
                col.suf_min[i] = std::min(col.suf_min[i + 1], v);
                col.suf_max[i] = std::max(col.suf_max[i + 1], v);
            }
        }
        state_.sum.assign(columns_.size(), 0);
        state_.min.assign(columns_.size(), 0);
        state_.max.assign(columns_.size(), 0);
    }

    Enumeration run()
    {
        visit_root();
        return {RelationOfSubsets::from_canonical(r_, std::move(found_)), explored_};
    }

private:
    Node bind(const Expr &e, const Schema &schema)
    {
        Node n;
        n.kind = e.kind;
        n.truth = e.truth;
        n.op = e.op;
        if (e.kind == Expr::Kind::Compare) {
            auto side = [&](const Operand &o, Kind &kind) {
                Side s;
                if (o.kind == Operand::Kind::Column)
                    throw SemanticError("per-tuple condition on '" + to_sql(o) +
                                        "' cannot be applied to whole subsets; move it to WHERE");
                if (o.kind == Operand::Kind::Constant) {
                    s.value = o.constant;
                    kind = o.constant.kind();
                    return s;
                }
                const BoundAggregate bound(AggregateTerm::from(o), schema);
                Term t{bound.fn(), bound.column(), bound.result_kind()};
                auto it = std::find_if(terms_.begin(), terms_.end(), [&](const Term &x) {
                    return x.fn == t.fn && x.column == t.column;
                });
                s.constant = false;
                s.term = static_cast<std::size_t>(it - terms_.begin());
                if (it == terms_.end())
                    terms_.push_back(t);
                kind = t.result;
                return s;
            };
            Kind lk = Kind::Int, rk = Kind::Int;
            n.lhs = side(e.lhs, lk);
            n.rhs = side(e.rhs, rk);
            if (!comparable(lk, rk, e.op))
                throw SemanticError("cannot compare " + std::string(kind_name(lk)) + " with " +
                                    std::string(kind_name(rk)) + " in '" + to_sql(e) + "'");
        }
        for (const Expr &c : e.children)
            n.children.push_back(bind(c, schema));
        return n;
    }

    /// Interval of a term over every nonempty subset S ∪ T with T ⊆ rows [from, n).
    /// At the root S is empty and `count` is zero.
    Interval bounds(const Term &t, std::size_t from) const
    {
        const std::size_t rest = n_ - from;
        if (t.fn == AggFn::Count) {
            const int128 lo = state_.count ? state_.count : 1;
            return {lo * Decimal::kScale, int128(state_.count + rest) * Decimal::kScale};
        }
        const Column &col = columns_[static_cast<std::size_t>(t.column)];
        const std::size_t c = static_cast<std::size_t>(t.column);
        const bool has = state_.count > 0;
        const int128 sufmin = col.suf_min[from], sufmax = col.suf_max[from];
        switch (t.fn) {
            case AggFn::Sum:
                return {(state_.sum[c] + col.neg_sum[from]) * col.unit, (state_.sum[c] + col.pos_sum[from]) * col.unit};
            case AggFn::Min:
                if (!has) return {sufmin * col.unit, sufmax * col.unit};
                return {std::min<int128>(state_.min[c], sufmin) * col.unit, int128(state_.min[c]) * col.unit};
            case AggFn::Max:
                if (!has) return {sufmin * col.unit, sufmax * col.unit};
                return {int128(state_.max[c]) * col.unit, std::max<int128>(state_.max[c], sufmax) * col.unit};
            case AggFn::Avg:
                if (!has) return {sufmin * col.unit, sufmax * col.unit};
                return {std::min<int128>(state_.min[c], sufmin) * col.unit,
                        std::max<int128>(state_.max[c], sufmax) * col.unit};
            case AggFn::Count: break;
        }
        return {-kInf, kInf};
    }

    Tri verdict(const Node &n, std::size_t from) const
    {
        switch (n.kind) {
            case Expr::Kind::Literal: return n.truth ? Tri::True : Tri::False;
            case Expr::Kind::Not: return tri_not(verdict(n.children[0], from));
            case Expr::Kind::And: {
                Tri acc = Tri::True;
                for (const Node &c : n.children) {
                    const Tri t = verdict(c, from);
                    if (t == Tri::False) return Tri::False;
                    if (t == Tri::Unknown) acc = Tri::Unknown;
                }
                return acc;
            }
            case Expr::Kind::Or: {
                Tri acc = Tri::False;
                for (const Node &c : n.children) {
                    const Tri t = verdict(c, from);
                    if (t == Tri::True) return Tri::True;
                    if (t == Tri::Unknown) acc = Tri::Unknown;
                }
                return acc;
            }
            case Expr::Kind::Compare: {
                auto side = [&](const Side &s) -> Interval {
                    if (s.constant) {
                        const int128 v = s.value.scaled();
                        return {v, v};
                    }
                    return bounds(terms_[s.term], from);
                };
                if (!n.lhs.constant || !n.rhs.constant)
                    return tri_compare(side(n.lhs), n.op, side(n.rhs));
                return compare(n.lhs.value, n.op, n.rhs.value) ? Tri::True : Tri::False;
            }
        }
        return Tri::Unknown;
    }

    /// Exact value of a term on the current subset, through the shared value layer.
    Value exact(const Term &t) const
    {
        if (t.fn == AggFn::Count)
            return Value(static_cast<std::int64_t>(state_.count));
        const std::size_t c = static_cast<std::size_t>(t.column);
        const Kind kind = columns_[c].kind;
        auto raw = [&](std::int64_t v) { return kind == Kind::Int ? Value(v) : Value(Decimal::from_units(v)); };
        switch (t.fn) {
            case AggFn::Min: return raw(state_.min[c]);
            case AggFn::Max: return raw(state_.max[c]);
            case AggFn::Sum:
            case AggFn::Avg: {
                const int128 s = state_.sum[c];
                if (s > std::numeric_limits<std::int64_t>::max() || s < std::numeric_limits<std::int64_t>::min())
                    throw SemanticError(std::string(to_string(t.fn)) + " overflows");
                const Value total = raw(static_cast<std::int64_t>(s));
                return t.fn == AggFn::Sum ? total : average(total, static_cast<std::int64_t>(state_.count));
            }
            case AggFn::Count: break;
        }
        return Value();
    }

    bool holds_now(const Node &n, std::vector<std::optional<Value>> &cache) const
    {
        switch (n.kind) {
            case Expr::Kind::Literal: return n.truth;
            case Expr::Kind::Not: return !holds_now(n.children[0], cache);
            case Expr::Kind::And:
                return std::all_of(n.children.begin(), n.children.end(),
                                   [&](const Node &c) { return holds_now(c, cache); });
            case Expr::Kind::Or:
                return std::any_of(n.children.begin(), n.children.end(),
                                   [&](const Node &c) { return holds_now(c, cache); });
            case Expr::Kind::Compare: {
                auto side = [&](const Side &s) -> const Value & {
                    if (s.constant) return s.value;
                    auto &slot = cache[s.term];
                    if (!slot) slot = exact(terms_[s.term]);
                    return *slot;
                };
                return compare(side(n.lhs), n.op, side(n.rhs));
            }
        }
        return false;
    }

    void count_node()
    {
        if (++explored_ > limits_.max_generated)
            throw LimitError("enumeration of '" + r_->name() + "' exceeds max_generated (" +
                             std::to_string(limits_.max_generated) + " nodes)");
    }

    void emit()
    {
        if (found_.size() >= limits_.max_results)
            throw LimitError("result exceeds max_results (" + std::to_string(limits_.max_results) + " subsets)");
        Members m;
        m.reserve(path_.size());
        for (std::size_t slot : path_)
            m.push_back(r_->at_slot(slot).rowid);
        found_.push_back(std::move(m));
    }

    void visit_root()
    {
        count_node();
        if (n_ == 0 || verdict(root_, 0) == Tri::False)
            return;
        for (std::size_t j = 0; j < n_; ++j)
            descend(j, false);
    }

    /// Enters the child that adds slot `j`. `accepted` means every subset below the parent
    /// satisfies the constraint already.
    void descend(std::size_t j, bool accepted)
    {
        count_node();
        // Push slot j into the running state, remembering what to restore.
        const std::size_t saved_count = state_.count;
        std::vector<std::int64_t> saved_min = state_.min, saved_max = state_.max;
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            if (columns_[c].raw.empty())
                continue;
            const std::int64_t v = columns_[c].raw[j];
            state_.sum[c] += v;
            state_.min[c] = saved_count ? std::min(state_.min[c], v) : v;
            state_.max[c] = saved_count ? std::max(state_.max[c], v) : v;
        }
        state_.count = saved_count + 1;
        path_.push_back(j);

        bool ok = accepted;
        bool prune = false;
        if (!accepted) {
            const Tri t = verdict(root_, j + 1);
            if (t == Tri::False) {
                prune = true;
            } else if (t == Tri::True) {
                ok = true;
            }
        }
        if (!prune) {
            std::vector<std::optional<Value>> cache(terms_.size());
            if (ok || holds_now(root_, cache))
                emit();
            for (std::size_t k = j + 1; k < n_; ++k)
                descend(k, ok);
        }

        path_.pop_back();
        state_.count = saved_count;
        for (std::size_t c = 0; c < columns_.size(); ++c)
            if (!columns_[c].raw.empty())
                state_.sum[c] -= columns_[c].raw[j];
        state_.min = std::move(saved_min);
        state_.max = std::move(saved_max);
    }

    RelationPtr r_;
    Limits limits_;
    std::size_t n_ = 0;
    std::vector<Column> columns_;
    std::vector<Term> terms_;
    Node root_;
    State state_;
    std::vector<std::size_t> path_;
    std::vector<Members> found_;
    std::uint64_t explored_ = 0;
};

}

Enumeration enumerate_subsets(const RelationPtr &r, const Expr &cond, const std::optional<CardinalityBounds> &card,
                              const Limits &limits)
{
    validate(limits);
    Search search(r, cond, card, limits);
    return search.run();
}

}
