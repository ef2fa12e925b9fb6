#include "ssq/value.hpp"

#include "ssq/error.hpp"

#include <charconv>
#include <limits>

namespace ssq {

std::string_view kind_name(Kind kind)
{
    switch (kind) {
        case Kind::Int: return "Int";
        case Kind::Dec: return "Dec";
        case Kind::Str: return "Str";
    }
    return "?";
}

Decimal Decimal::from_int(std::int64_t value)
{
    std::int64_t units;
    if (__builtin_mul_overflow(value, kScale, &units))
        throw SemanticError("integer " + std::to_string(value) + " does not fit in a decimal");
    return from_units(units);
}

std::optional<Decimal> Decimal::parse(std::string_view text)
{
    if (text.empty())
        return std::nullopt;
    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty())
        return std::nullopt;
    if (frac.size() > static_cast<std::size_t>(kDigits))
        return std::nullopt;
    for (char c : whole)
        if (c < '0' || c > '9') return std::nullopt;
    for (char c : frac)
        if (c < '0' || c > '9') return std::nullopt;

    std::int64_t units = 0;
    for (char c : whole) {
        if (__builtin_mul_overflow(units, 10, &units) || __builtin_add_overflow(units, c - '0', &units))
            return std::nullopt;
    }
    for (int i = 0; i < kDigits; ++i) {
        const int digit = i < static_cast<int>(frac.size()) ? frac[i] - '0' : 0;
        if (__builtin_mul_overflow(units, 10, &units) || __builtin_add_overflow(units, digit, &units))
            return std::nullopt;
    }
    return from_units(negative ? -units : units);
}

std::string Decimal::to_string() const
{
    // Work on the magnitude in unsigned space so INT64_MIN prints correctly.
    const bool negative = units_ < 0;
    const std::uint64_t mag = negative ? std::uint64_t(0) - static_cast<std::uint64_t>(units_)
                                       : static_cast<std::uint64_t>(units_);
    std::string frac = std::to_string(mag % kScale);
    frac.insert(0, kDigits - frac.size(), '0');
    while (frac.size() > 1 && frac.back() == '0')
        frac.pop_back();
    return (negative ? "-" : "") + std::to_string(mag / kScale) + "." + frac;
}

std::optional<std::int64_t> parse_int(std::string_view text)
{
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    if (text.empty())
        return std::nullopt;
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        return std::nullopt;
    return out;
}

int128 Value::scaled() const
{
    switch (kind()) {
        case Kind::Int: return int128(as_int()) * Decimal::kScale;
        case Kind::Dec: return as_dec().units();
        case Kind::Str: break;
    }
    throw SemanticError("string value used where a number is required");
}

std::string Value::to_string() const
{
    switch (kind()) {
        case Kind::Int: return std::to_string(as_int());
        case Kind::Dec: return as_dec().to_string();
        case Kind::Str: return as_str();
    }
    return {};
}

bool value_less(const Value &a, const Value &b)
{
    if (a.kind() != b.kind())
        return a.kind() < b.kind();
    switch (a.kind()) {
        case Kind::Int: return a.as_int() < b.as_int();
        case Kind::Dec: return a.as_dec() < b.as_dec();
        case Kind::Str: return a.as_str() < b.as_str();
    }
    return false;
}

std::string_view to_string(CmpOp op)
{
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

CmpOp mirror(CmpOp op)
{
    switch (op) {
        case CmpOp::Lt: return CmpOp::Gt;
        case CmpOp::Le: return CmpOp::Ge;
        case CmpOp::Gt: return CmpOp::Lt;
        case CmpOp::Ge: return CmpOp::Le;
        default: return op;
    }
}

bool holds(CmpOp op, std::strong_ordering ord)
{
    switch (op) {
        case CmpOp::Eq: return ord == 0;
        case CmpOp::Ne: return ord != 0;
        case CmpOp::Lt: return ord < 0;
        case CmpOp::Le: return ord <= 0;
        case CmpOp::Gt: return ord > 0;
        case CmpOp::Ge: return ord >= 0;
    }
    return false;
}

bool comparable(Kind a, Kind b, CmpOp op)
{
    const bool a_str = a == Kind::Str;
    const bool b_str = b == Kind::Str;
    if (a_str != b_str)
        return false;
    if (a_str)
        return op == CmpOp::Eq || op == CmpOp::Ne;
    return true;
}

std::strong_ordering compare(const Value &a, const Value &b)
{
    if (a.kind() == Kind::Str || b.kind() == Kind::Str) {
        if (a.kind() != b.kind())
            throw SemanticError("cannot compare " + std::string(kind_name(a.kind())) + " with " +
                                std::string(kind_name(b.kind())));
        return a.as_str() <=> b.as_str();
    }
    if (a.kind() == Kind::Int && b.kind() == Kind::Int)
        return a.as_int() <=> b.as_int();
    const int128 x = a.scaled();
    const int128 y = b.scaled();
    return x < y ? std::strong_ordering::less : x > y ? std::strong_ordering::greater : std::strong_ordering::equal;
}

bool compare(const Value &a, CmpOp op, const Value &b)
{
    if (!comparable(a.kind(), b.kind(), op))
        throw SemanticError("operator " + std::string(to_string(op)) + " is not defined between " +
                            std::string(kind_name(a.kind())) + " and " + std::string(kind_name(b.kind())));
    return holds(op, compare(a, b));
}

Value checked_add(const Value &a, const Value &b)
{
    if (a.kind() != b.kind() || a.kind() == Kind::Str)
        throw SemanticError("cannot add " + std::string(kind_name(a.kind())) + " and " +
                            std::string(kind_name(b.kind())));
    std::int64_t out;
    if (a.kind() == Kind::Int) {
        if (__builtin_add_overflow(a.as_int(), b.as_int(), &out))
            throw SemanticError("integer overflow in aggregate");
        return Value(out);
    }
    if (__builtin_add_overflow(a.as_dec().units(), b.as_dec().units(), &out))
        throw SemanticError("decimal overflow in aggregate");
    return Value(Decimal::from_units(out));
}

Value average(const Value &sum, std::int64_t count)
{
    if (count <= 0)
        throw SemanticError("avg over an empty subset is undefined");
    const int128 num = sum.scaled();
    int128 q = num / count;
    int128 r = num % count;
    if (r < 0) {
        // Floor division so the remainder is non-negative.
        q -= 1;
        r += count;
    }
    const int128 twice = r * 2;
    if (twice > count || (twice == count && (q & 1) != 0))
        q += 1;
    if (q > std::numeric_limits<std::int64_t>::max() || q < std::numeric_limits<std::int64_t>::min())
        throw SemanticError("decimal overflow in avg");
    return Value(Decimal::from_units(static_cast<std::int64_t>(q)));
}

}
