#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace ssq {

__extension__ typedef __int128 int128;

enum class Kind : std::uint8_t { Int, Dec, Str };

std::string_view kind_name(Kind kind);

/// Fixed-point decimal with six fractional digits, stored as a count of millionths.
class Decimal
{
public:
    static constexpr std::int64_t kScale = 1'000'000;
    static constexpr int kDigits = 6;

    constexpr Decimal() = default;

    static constexpr Decimal from_units(std::int64_t units) { Decimal d; d.units_ = units; return d; }
    /// Throws SemanticError when the integer does not fit at scale 6.
    static Decimal from_int(std::int64_t value);
    /// Accepts `[+-]digits[.digits]` with at most six fractional digits.
    static std::optional<Decimal> parse(std::string_view text);

    constexpr std::int64_t units() const { return units_; }
    /// Trailing zeros trimmed, at least one fractional digit ("4.6", "38.0").
    std::string to_string() const;

    constexpr auto operator<=>(const Decimal &) const = default;

private:
    std::int64_t units_ = 0;
};

std::optional<std::int64_t> parse_int(std::string_view text);

class Value
{
public:
    Value() : v_(std::int64_t{0}) {}
    Value(std::int64_t v) : v_(v) {}
    Value(int v) : v_(std::int64_t{v}) {}
    Value(Decimal v) : v_(v) {}
    Value(std::string v) : v_(std::move(v)) {}
    Value(const char *v) : v_(std::string(v)) {}

    Kind kind() const { return static_cast<Kind>(v_.index()); }
    bool is_numeric() const { return kind() != Kind::Str; }

    std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
    Decimal as_dec() const { return std::get<Decimal>(v_); }
    const std::string &as_str() const { return std::get<std::string>(v_); }

    /// Numeric value in millionths regardless of kind. Int values are widened.
    int128 scaled() const;

    std::string to_string() const;

    /// Kind-strict identity: an Int never equals a Dec or a Str.
    friend bool operator==(const Value &, const Value &) = default;

private:
    std::variant<std::int64_t, Decimal, std::string> v_;
};

/// Ordering used for sorting values of one column (group keys). Kinds order Int < Dec < Str.
bool value_less(const Value &a, const Value &b);

enum class CmpOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CmpOp op);
/// The operator that holds after swapping the operands (`a < b` iff `b > a`).
CmpOp mirror(CmpOp op);
bool holds(CmpOp op, std::strong_ordering ord);

/// Whether `a op b` is a legal comparison between the two kinds.
bool comparable(Kind a, Kind b, CmpOp op);
/// Int and Dec compare numerically; Str only against Str. Throws SemanticError otherwise.
std::strong_ordering compare(const Value &a, const Value &b);
bool compare(const Value &a, CmpOp op, const Value &b);

/// Exact addition of two numeric values of the same kind; throws on overflow.
Value checked_add(const Value &a, const Value &b);
/// Mean of `count` values summing to `sum`, as Dec rounded half-to-even at scale 6.
Value average(const Value &sum, std::int64_t count);

}
