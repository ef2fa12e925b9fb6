#pragma once

#include "ssq/value.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ssq {

struct Expr;

using RowId = std::uint64_t;

struct Attribute
{
    std::string name;
    Kind kind = Kind::Str;
    /// Name of the relation the attribute came from; used to qualify columns of product relations.
    std::string source;

    bool operator==(const Attribute &) const = default;
};

class Schema
{
public:
    Schema() = default;
    /// Throws SemanticError if two attributes share (source, name) case-insensitively.
    explicit Schema(std::vector<Attribute> attributes);

    std::size_t arity() const { return attributes_.size(); }
    const Attribute &operator[](std::size_t i) const { return attributes_[i]; }
    std::span<const Attribute> attributes() const { return attributes_; }

    /// Looks up `name`, optionally qualified by `source`. Throws SemanticError when an
    /// unqualified name matches attributes of several sources.
    std::optional<std::size_t> find(std::string_view name, std::string_view source = {}) const;
    /// Like find(), but an unknown attribute is an error.
    std::size_t resolve(std::string_view name, std::string_view source = {}) const;

    bool has_source(std::string_view source) const;
    /// Distinct sources in first-appearance order.
    std::vector<std::string> sources() const;

    /// "Shop.ShopId" when the schema spans several sources, otherwise "ShopId".
    std::string display_name(std::size_t i) const;

    bool operator==(const Schema &) const = default;

private:
    std::vector<Attribute> attributes_;
};

struct Tuple
{
    RowId rowid = 0;
    std::vector<Value> values;

    bool operator==(const Tuple &) const = default;
};

/// Identity shared by a base table and every filtered or projected view of it. Two subsets are
/// comparable only when their extensions share an origin.
struct Origin
{
    std::string key;
    /// Number of rows of the unfiltered table; rowids are drawn from [0, domain).
    std::uint64_t domain = 0;
};

class Relation;
using RelationPtr = std::shared_ptr<const Relation>;

/// A named schema and an ordered extension. Tuples are kept in ascending rowid order; a base
/// table numbers its rows 0..n-1, while filtered views keep the rowids of the rows they retain.
class Relation
{
public:
    Relation(std::string name, Schema schema, std::vector<Tuple> tuples, std::shared_ptr<const Origin> origin);

    /// Builds a base table: rowids follow row order and a fresh origin is minted.
    static RelationPtr make_base(std::string name, Schema schema, std::vector<std::vector<Value>> rows);
    /// Same origin and rows, new tuple list. Rowids must be a subsequence of the source's.
    static RelationPtr derive(const Relation &from, std::vector<Tuple> tuples);

    const std::string &name() const { return name_; }
    const Schema &schema() const { return schema_; }
    std::span<const Tuple> tuples() const { return tuples_; }
    std::size_t size() const { return tuples_.size(); }
    bool empty() const { return tuples_.empty(); }

    const Origin &origin() const { return *origin_; }
    const std::shared_ptr<const Origin> &origin_ptr() const { return origin_; }
    bool same_origin(const Relation &other) const;

    /// Position of `rowid` within tuples(), if present.
    std::optional<std::size_t> slot_of(RowId rowid) const;
    const Tuple &at_slot(std::size_t slot) const { return tuples_[slot]; }

    /// Column `attr` as raw integers (Int values, or Dec millionths). Empty for Str columns.
    std::span<const std::int64_t> numeric_column(std::size_t attr) const { return columns_[attr]; }
    /// Largest absolute value in numeric_column(attr); bounds overflow-free SIMD sums.
    std::uint64_t max_abs(std::size_t attr) const { return max_abs_[attr]; }

private:
    std::string name_;
    Schema schema_;
    std::vector<Tuple> tuples_;
    std::shared_ptr<const Origin> origin_;
    bool dense_ = false;
    std::vector<std::vector<std::int64_t>> columns_;
    std::vector<std::uint64_t> max_abs_;
};

/// Tuples satisfying a per-tuple condition, original rowids and order preserved.
RelationPtr tuple_select(const RelationPtr &r, const Expr &cond);
/// Restricts the schema to `attrs` in the given order. Rows that become value-equal are kept.
RelationPtr tuple_project(const RelationPtr &r, const std::vector<std::string> &attrs);

/// Extension containing the rows of both arguments, which must share an origin.
RelationPtr merge_extensions(const RelationPtr &a, const RelationPtr &b);

/// Product extension: every pair (t1, t2) concatenated, rowid = t1.rowid * |domain(b)| + t2.rowid.
RelationPtr product_extension(const RelationPtr &a, const RelationPtr &b);

}
