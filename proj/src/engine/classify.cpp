#include "ssq/classify.hpp"

#include "ssq/error.hpp"
#include "ssq/ident.hpp"

#include <algorithm>

namespace ssq {

const SourceConstraints &Classification::of(std::string_view source) const
{
    for (const auto &s : sources)
        if (iequals(s.source, source))
            return s;
    throw SemanticError("unknown source '" + std::string(source) + "'");
}

Expr per_tuple_sums(const Expr &cond, const std::vector<std::string> &attrs)
{
    Expr out = cond;
    if (out.kind == Expr::Kind::Compare) {
        auto listed = [&](const Operand &o) {
            return o.kind == Operand::Kind::Aggregate && o.fn == AggFn::Sum && !o.sid &&
                   std::any_of(attrs.begin(), attrs.end(), [&](const std::string &a) { return iequals(a, o.column.name); });
        };
        auto rewrite = [](Operand &o) { o = Operand::col(o.column.name, o.column.source); };
        const bool l = listed(out.lhs), r = listed(out.rhs);
        if (l && out.rhs.kind == Operand::Kind::Constant) rewrite(out.lhs);
        if (r && out.lhs.kind == Operand::Kind::Constant) rewrite(out.rhs);
        return out;
    }
    for (auto &c : out.children)
        c = per_tuple_sums(c, attrs);
    return out;
}

namespace {

/// Where an atom belongs.
struct Bucket
{
    enum class Kind : std::uint8_t { Neutral, PerTuple, Aggregate, Join } kind = Kind::Neutral;
    std::size_t source = 0;

    bool operator==(const Bucket &) const = default;
};

class Router
{
public:
    explicit Router(const std::vector<ClassifySource> &sources) : sources_(sources) {}

    /// Index of the source owning a column reference.
    std::size_t owner(const ColumnRef &c) const
    {
        if (!c.source.empty()) {
            for (std::size_t i = 0; i < sources_.size(); ++i)
                if (iequals(sources_[i].name, c.source)) {
                    sources_[i].schema->resolve(c.name);
                    return i;
                }
            throw SemanticError("unknown relation '" + c.source + "' in '" + c.source + "." + c.name + "'");
        }
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < sources_.size(); ++i)
            if (sources_[i].schema->find(c.name))
                hits.push_back(i);
        if (hits.empty())
            throw SemanticError("unknown attribute '" + c.name + "'");
        if (hits.size() > 1)
            throw SemanticError("ambiguous attribute '" + c.name + "'; qualify it with a relation name");
        return hits[0];
    }

    std::size_t sid_owner(const Operand &o) const
    {
        const std::string &name = o.column.name;
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < sources_.size(); ++i)
            if (!sources_[i].sid_name.empty() && (name == "*" || iequals(sources_[i].sid_name, name)) &&
                (o.column.source.empty() || iequals(o.column.source, sources_[i].name)))
                hits.push_back(i);
        if (hits.empty())
            throw SemanticError("'" + to_sql(o) + "' does not name a declared subset identifier");
        if (hits.size() > 1)
            throw SemanticError("'" + to_sql(o) + "' is ambiguous between several subset sources");
        return hits[0];
    }

    Bucket atom(const Expr &e) const
    {
        std::vector<std::size_t> columns, aggregates;
        for (const Operand *o : {&e.lhs, &e.rhs}) {
            if (o->kind == Operand::Kind::Column)
                columns.push_back(owner(o->column));
            else if (o->kind == Operand::Kind::Aggregate)
                aggregates.push_back(o->sid ? sid_owner(*o) : owner(o->column));
        }
        if (!aggregates.empty()) {
            if (!columns.empty())
                throw SemanticError("'" + to_sql(e) + "' compares an aggregate with a per-tuple attribute");
            if (aggregates.size() == 2 && aggregates[0] != aggregates[1])
                throw SemanticError("'" + to_sql(e) + "' compares aggregates of different relations");
            const std::size_t s = aggregates[0];
            if (sources_[s].sid_name.empty())
                throw SemanticError("aggregate '" + to_sql(e) + "' over '" + sources_[s].name +
                                    "', which has no WITH SUBSETS declaration");
            return {Bucket::Kind::Aggregate, s};
        }
        if (columns.empty())
            return {};
        if (columns.size() == 2 && columns[0] != columns[1])
            return {Bucket::Kind::Join, 0};
        return {Bucket::Kind::PerTuple, columns[0]};
    }

    /// Common bucket of every atom in `e`. A join conjunct may mix per-tuple atoms of any sources.
    Bucket conjunct(const Expr &e) const
    {
        Bucket acc;
        bool mixed_tuple = false;
        for (const Expr *a : atoms(e)) {
            const Bucket b = atom(*a);
            if (b.kind == Bucket::Kind::Neutral || b == acc)
                continue;
            if (acc.kind == Bucket::Kind::Neutral) {
                acc = b;
                continue;
            }
            const bool tuple_a = acc.kind != Bucket::Kind::Aggregate, tuple_b = b.kind != Bucket::Kind::Aggregate;
            if (tuple_a && tuple_b) {
                mixed_tuple = true;
                continue;
            }
            throw SemanticError("condition '" + to_sql(e) +
                                "' mixes constraints that apply at different stages; split it into separate conjuncts");
        }
        if (mixed_tuple)
            return {Bucket::Kind::Join, 0};
        return acc;
    }

private:
    const std::vector<ClassifySource> &sources_;
};

/// `count(sid) op n` or `n op count(sid)` with an Int constant.
std::optional<std::pair<CmpOp, std::int64_t>> cardinality_atom(const Expr &e)
{
    if (e.kind != Expr::Kind::Compare)
        return std::nullopt;
    auto is_count = [](const Operand &o) { return o.kind == Operand::Kind::Aggregate && o.fn == AggFn::Count; };
    auto is_int = [](const Operand &o) { return o.kind == Operand::Kind::Constant && o.constant.kind() == Kind::Int; };
    if (is_count(e.lhs) && is_int(e.rhs))
        return std::pair{e.op, e.rhs.constant.as_int()};
    if (is_int(e.lhs) && is_count(e.rhs))
        return std::pair{mirror(e.op), e.lhs.constant.as_int()};
    return std::nullopt;
}

void conjoin(Expr &target, Expr e)
{
    if (target.is_true_literal())
        target = std::move(e);
    else if (target.kind == Expr::Kind::And)
        target.children.push_back(std::move(e));
    else
        target = Expr::all_of({std::move(target), std::move(e)});
}

}

Classification classify_constraints(const Expr &cond, const std::vector<ClassifySource> &sources,
                                    const ClassifyOptions &options)
{
    if (sources.empty())
        throw SemanticError("no relations to constrain");
    Classification out;
    for (const auto &s : sources)
        out.sources.push_back(SourceConstraints{s.name, Expr::literal(true), Expr::literal(true), std::nullopt});
    const Router router(sources);
    const Expr rewritten = options.per_tuple_sum_attrs.empty() ? cond : per_tuple_sums(cond, options.per_tuple_sum_attrs);
    for (Expr c : conjuncts(rewritten)) {
        const Bucket b = router.conjunct(c);
        switch (b.kind) {
            case Bucket::Kind::Neutral:
                // Constant-only conjunct; it filters the first source's rows all or nothing.
                conjoin(out.sources[0].per_tuple, std::move(c));
                break;
            case Bucket::Kind::PerTuple: conjoin(out.sources[b.source].per_tuple, std::move(c)); break;
            case Bucket::Kind::Join: out.join_atoms.push_back(std::move(c)); break;
            case Bucket::Kind::Aggregate: {
                auto &dst = out.sources[b.source];
                if (auto card = cardinality_atom(c)) {
                    CardinalityBounds bounds = dst.cardinality.value_or(CardinalityBounds{});
                    if (bounds.tighten(card->first, card->second)) {
                        dst.cardinality = bounds;
                        break;
                    }
                }
                conjoin(dst.aggregate, std::move(c));
                break;
            }
        }
    }
    return out;
}

}
