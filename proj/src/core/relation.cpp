#include "ssq/relation.hpp"

#include "ssq/error.hpp"
#include "ssq/expr.hpp"
#include "ssq/ident.hpp"
#include "ssq/predicate.hpp"

#include <algorithm>
#include <atomic>

namespace ssq {

Schema::Schema(std::vector<Attribute> attributes) : attributes_(std::move(attributes))
{
    for (std::size_t i = 0; i < attributes_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (iequals(attributes_[i].name, attributes_[j].name) &&
                iequals(attributes_[i].source, attributes_[j].source))
                throw SemanticError("duplicate attribute '" + attributes_[i].name + "'");
}

std::optional<std::size_t> Schema::find(std::string_view name, std::string_view source) const
{
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (!iequals(attributes_[i].name, name))
            continue;
        if (!source.empty() && !iequals(attributes_[i].source, source))
            continue;
        if (hit)
            throw SemanticError("ambiguous attribute '" + std::string(name) +
                                "'; qualify it with its relation name");
        hit = i;
    }
    return hit;
}

std::size_t Schema::resolve(std::string_view name, std::string_view source) const
{
    if (auto i = find(name, source))
        return *i;
    const std::string shown = source.empty() ? std::string(name) : std::string(source) + "." + std::string(name);
    throw SemanticError("unknown attribute '" + shown + "'");
}

bool Schema::has_source(std::string_view source) const
{
    return std::any_of(attributes_.begin(), attributes_.end(),
                       [&](const Attribute &a) { return iequals(a.source, source); });
}

std::vector<std::string> Schema::sources() const
{
    std::vector<std::string> out;
    for (const auto &a : attributes_)
        if (std::none_of(out.begin(), out.end(), [&](const std::string &s) { return iequals(s, a.source); }))
            out.push_back(a.source);
    return out;
}

std::string Schema::display_name(std::size_t i) const
{
    const auto &a = attributes_[i];
    if (a.source.empty() || sources().size() <= 1)
        return a.name;
    return a.source + "." + a.name;
}

Relation::Relation(std::string name, Schema schema, std::vector<Tuple> tuples, std::shared_ptr<const Origin> origin)
    : name_(std::move(name)), schema_(std::move(schema)), tuples_(std::move(tuples)), origin_(std::move(origin))
{
    for (std::size_t i = 0; i < tuples_.size(); ++i) {
        if (tuples_[i].values.size() != schema_.arity())
            throw SemanticError("tuple arity does not match schema of '" + name_ + "'");
        if (tuples_[i].rowid >= origin_->domain)
            throw SemanticError("rowid out of range for '" + name_ + "'");
        if (i > 0 && tuples_[i].rowid <= tuples_[i - 1].rowid)
            throw SemanticError("rowids of '" + name_ + "' are not strictly ascending");
    }
    dense_ = tuples_.empty() || tuples_.back().rowid + 1 == tuples_.size();

    columns_.resize(schema_.arity());
    max_abs_.assign(schema_.arity(), 0);
    for (std::size_t a = 0; a < schema_.arity(); ++a) {
        const Kind kind = schema_[a].kind;
        if (kind == Kind::Str)
            continue;
        auto &col = columns_[a];
        col.reserve(tuples_.size());
        for (const auto &t : tuples_) {
            const Value &v = t.values[a];
            if (v.kind() != kind)
                throw SemanticError("value kind does not match attribute '" + schema_[a].name + "'");
            const std::int64_t raw = kind == Kind::Int ? v.as_int() : v.as_dec().units();
            col.push_back(raw);
            const std::uint64_t mag = raw < 0 ? std::uint64_t(0) - static_cast<std::uint64_t>(raw)
                                              : static_cast<std::uint64_t>(raw);
            max_abs_[a] = std::max(max_abs_[a], mag);
        }
    }
}

RelationPtr Relation::make_base(std::string name, Schema schema, std::vector<std::vector<Value>> rows)
{
    static std::atomic<std::uint64_t> serial{0};
    auto origin = std::make_shared<Origin>();
    origin->key = fold(name) + "#" + std::to_string(++serial);
    origin->domain = rows.size();

    std::vector<Attribute> attrs(schema.attributes().begin(), schema.attributes().end());
    for (auto &a : attrs)
        a.source = name;

    std::vector<Tuple> tuples;
    tuples.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        tuples.push_back({i, std::move(rows[i])});
    return std::make_shared<Relation>(std::move(name), Schema(std::move(attrs)), std::move(tuples), std::move(origin));
}

RelationPtr Relation::derive(const Relation &from, std::vector<Tuple> tuples)
{
    return std::make_shared<Relation>(from.name_, from.schema_, std::move(tuples), from.origin_);
}

bool Relation::same_origin(const Relation &other) const
{
    return origin_ == other.origin_ || origin_->key == other.origin_->key;
}

std::optional<std::size_t> Relation::slot_of(RowId rowid) const
{
    if (dense_)
        return rowid < tuples_.size() ? std::optional<std::size_t>(rowid) : std::nullopt;
    auto it = std::lower_bound(tuples_.begin(), tuples_.end(), rowid,
                               [](const Tuple &t, RowId id) { return t.rowid < id; });
    if (it == tuples_.end() || it->rowid != rowid)
        return std::nullopt;
    return static_cast<std::size_t>(it - tuples_.begin());
}

RelationPtr tuple_select(const RelationPtr &r, const Expr &cond)
{
    if (cond.is_true_literal())
        return r;
    TuplePredicate pred(cond, r->schema());
    std::vector<Tuple> kept;
    for (const auto &t : r->tuples())
        if (pred(t))
            kept.push_back(t);
    return Relation::derive(*r, std::move(kept));
}

RelationPtr tuple_project(const RelationPtr &r, const std::vector<std::string> &attrs)
{
    if (attrs.empty())
        throw SemanticError("projection needs at least one attribute");
    std::vector<std::size_t> idx;
    std::vector<Attribute> out_attrs;
    for (const auto &name : attrs) {
        const auto dot = name.find('.');
        const std::size_t i = dot == std::string::npos ? r->schema().resolve(name)
                                                       : r->schema().resolve(name.substr(dot + 1), name.substr(0, dot));
        idx.push_back(i);
        out_attrs.push_back(r->schema()[i]);
    }
    std::vector<Tuple> tuples;
    tuples.reserve(r->size());
    for (const auto &t : r->tuples()) {
        Tuple p{t.rowid, {}};
        p.values.reserve(idx.size());
        for (std::size_t i : idx)
            p.values.push_back(t.values[i]);
        tuples.push_back(std::move(p));
    }
    return std::make_shared<Relation>(r->name(), Schema(std::move(out_attrs)), std::move(tuples), r->origin_ptr());
}

RelationPtr merge_extensions(const RelationPtr &a, const RelationPtr &b)
{
    if (a == b)
        return a;
    if (!a->same_origin(*b))
        throw SemanticError("relations '" + a->name() + "' and '" + b->name() + "' have different bases");
    if (!(a->schema() == b->schema()))
        throw SemanticError("relations '" + a->name() + "' and '" + b->name() + "' have different schemas");
    std::vector<Tuple> merged;
    merged.reserve(a->size() + b->size());
    auto x = a->tuples().begin(), xe = a->tuples().end();
    auto y = b->tuples().begin(), ye = b->tuples().end();
    while (x != xe || y != ye) {
        if (y == ye || (x != xe && x->rowid < y->rowid)) {
            merged.push_back(*x++);
        } else if (x == xe || y->rowid < x->rowid) {
            merged.push_back(*y++);
        } else {
            merged.push_back(*x++);
            ++y;
        }
    }
    if (merged.size() == a->size())
        return a;
    if (merged.size() == b->size())
        return b;
    return Relation::derive(*a, std::move(merged));
}

RelationPtr product_extension(const RelationPtr &a, const RelationPtr &b)
{
    auto origin = std::make_shared<Origin>();
    origin->key = "(" + a->origin().key + "*" + b->origin().key + ")";
    if (__builtin_mul_overflow(a->origin().domain, b->origin().domain, &origin->domain))
        throw LimitError("product of '" + a->name() + "' and '" + b->name() + "' exceeds the rowid space");

    std::vector<Attribute> attrs(a->schema().attributes().begin(), a->schema().attributes().end());
    attrs.insert(attrs.end(), b->schema().attributes().begin(), b->schema().attributes().end());

    const std::uint64_t radix = b->origin().domain;
    std::vector<Tuple> tuples;
    tuples.reserve(a->size() * b->size());
    for (const auto &t1 : a->tuples()) {
        for (const auto &t2 : b->tuples()) {
            Tuple t{t1.rowid * radix + t2.rowid, t1.values};
            t.values.insert(t.values.end(), t2.values.begin(), t2.values.end());
            tuples.push_back(std::move(t));
        }
    }
    return std::make_shared<Relation>(a->name() + "*" + b->name(), Schema(std::move(attrs)), std::move(tuples),
                                      std::move(origin));
}

}
