#include "ssq/sql/parser.hpp"

#include "ssq/error.hpp"
#include "ssq/ident.hpp"

#include <array>

namespace ssq::sql {

namespace {

constexpr std::array kAggregates = {"sum", "count", "min", "max", "avg"};

class Parser
{
public:
    explicit Parser(std::span<const Token> tokens) : toks_(tokens) {}

    bool at_end() const { return pos_ >= toks_.size(); }

    Ast query()
    {
        Ast left = primary();
        while (auto op = combinator())
            left = Ast::compound(std::move(left), *op, primary());
        return left;
    }

    void skip_semicolons()
    {
        while (peek_kind(Token::Kind::Semicolon))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string &what) const
    {
        if (toks_.empty())
            throw ParseError(what, 1, 1);
        const Token &t = at_end() ? toks_.back() : toks_[pos_];
        throw ParseError(what, t.line, t.column);
    }

    std::string describe() const
    {
        if (at_end())
            return "end of input";
        const Token &t = toks_[pos_];
        if (t.kind == Token::Kind::Str)
            return "string \"" + t.text + "\"";
        return "'" + t.text + "'";
    }

private:
    const Token *peek(std::size_t ahead = 0) const
    {
        return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
    }

    bool peek_kind(Token::Kind k, std::size_t ahead = 0) const
    {
        const Token *t = peek(ahead);
        return t && t->kind == k;
    }

    bool peek_keyword(std::string_view kw, std::size_t ahead = 0) const
    {
        const Token *t = peek(ahead);
        return t && t->is_keyword(kw);
    }

    bool accept_keyword(std::string_view kw)
    {
        if (!peek_keyword(kw))
            return false;
        ++pos_;
        return true;
    }

    void expect_keyword(std::string_view kw, std::string_view context = {})
    {
        if (!accept_keyword(kw))
            fail("expected " + std::string(kw) + (context.empty() ? "" : " " + std::string(context)) + ", found " +
                 describe());
    }

    const Token &expect(Token::Kind k, std::string_view what = {})
    {
        if (!peek_kind(k))
            fail("expected " + (what.empty() ? std::string(to_string(k)) : std::string(what)) + ", found " +
                 describe());
        return toks_[pos_++];
    }

    Ast primary()
    {
        if (peek_kind(Token::Kind::LParen)) {
            ++pos_;
            Ast inner = query();
            expect(Token::Kind::RParen);
            return inner;
        }
        if (!peek_keyword("SELECT"))
            fail("expected SELECT or '(', found " + describe());
        Ast a;
        a.query = subset_query();
        return a;
    }

    std::optional<CompoundOp> combinator()
    {
        if (accept_keyword("UNION"))
            return CompoundOp::Union;
        if (accept_keyword("INTERSECTION"))
            return CompoundOp::Intersection;
        if (accept_keyword("CROSS")) {
            if (accept_keyword("UNION"))
                return CompoundOp::CrossUnion;
            if (accept_keyword("INTERSECTION"))
                return CompoundOp::CrossIntersection;
            fail("expected UNION or INTERSECTION after CROSS, found " + describe());
        }
        return std::nullopt;
    }

    SubsetQuery subset_query()
    {
        SubsetQuery q;
        expect_keyword("SELECT");
        q.select = select_list();
        expect_keyword("FROM");
        do {
            q.from.push_back(plain_name("table name"));
        } while (accept(Token::Kind::Comma));
        if (accept_keyword("WHERE"))
            q.where = condition();
        if (!peek_keyword("WITH")) {
            if (at_end() || peek_kind(Token::Kind::Semicolon) || peek_kind(Token::Kind::RParen))
                fail("queries without WITH SUBSETS are plain SQL; this engine only answers subset queries");
            fail("expected WITH SUBSETS, found " + describe());
        }
        ++pos_;
        expect_keyword("SUBSETS", "after WITH");
        do {
            SubsetDecl d;
            d.table = plain_name("table name");
            d.sid = plain_name("subset identifier");
            q.decls.push_back(std::move(d));
        } while (accept(Token::Kind::Comma));
        if (accept_keyword("MAXIMAL"))
            q.maxmin = MaxMinMode::Maximal;
        else if (accept_keyword("MINIMAL"))
            q.maxmin = MaxMinMode::Minimal;
        if (accept_keyword("CONSTRAINED")) {
            expect_keyword("BY", "after CONSTRAINED");
            q.constrained_by = condition();
        }
        if (accept_keyword("APPLY")) {
            expect_keyword("UNARY", "after APPLY");
            if (accept_keyword("UNION"))
                q.apply_unary = SetMode::Union;
            else if (accept_keyword("INTERSECTION"))
                q.apply_unary = SetMode::Intersection;
            else
                fail("expected UNION or INTERSECTION after APPLY UNARY, found " + describe());
        }
        if (accept_keyword("GROUP")) {
            expect_keyword("BY", "after GROUP");
            do {
                q.group_by.push_back(column_name());
            } while (accept(Token::Kind::Comma));
            if (accept_keyword("HAVING"))
                q.having = condition();
        }
        return q;
    }

    bool accept(Token::Kind k)
    {
        if (!peek_kind(k))
            return false;
        ++pos_;
        return true;
    }

    std::string plain_name(std::string_view what)
    {
        const Token &t = expect(Token::Kind::Ident, what);
        if (t.text.find('.') != std::string::npos) {
            --pos_;
            fail("expected " + std::string(what) + ", found qualified name '" + t.text + "'");
        }
        return t.text;
    }

    ColumnRef column_name()
    {
        return split(expect(Token::Kind::Ident, "column name").text);
    }

    static ColumnRef split(const std::string &text)
    {
        const auto dot = text.find('.');
        if (dot == std::string::npos)
            return {"", text};
        return {text.substr(0, dot), text.substr(dot + 1)};
    }

    std::vector<SelectEntry> select_list()
    {
        std::vector<SelectEntry> out;
        if (accept(Token::Kind::Star)) {
            out.push_back({});
            return out;
        }
        do {
            out.push_back(select_entry());
        } while (accept(Token::Kind::Comma));
        return out;
    }

    std::optional<AggFn> aggregate_name() const
    {
        const Token *t = peek();
        if (!t || t->kind != Token::Kind::Ident || !peek_kind(Token::Kind::LParen, 1))
            return std::nullopt;
        for (std::size_t i = 0; i < kAggregates.size(); ++i)
            if (iequals(t->text, kAggregates[i]))
                return static_cast<AggFn>(i);
        return std::nullopt;
    }

    /// aggfn '(' (column | sid | '*') ')', positioned at the function name.
    std::pair<AggFn, ColumnRef> aggregate_call()
    {
        const AggFn fn = *aggregate_name();
        pos_ += 2;
        ColumnRef arg;
        if (accept(Token::Kind::Star)) {
            --pos_;
            if (fn != AggFn::Count)
                fail(std::string(to_string(fn)) + "(*) is not defined; only count takes '*'");
            ++pos_;
            arg.name = "*";
        } else {
            arg = column_name();
        }
        expect(Token::Kind::RParen);
        return {fn, arg};
    }

    SelectEntry select_entry()
    {
        SelectEntry e;
        if (aggregate_name()) {
            auto [fn, arg] = aggregate_call();
            e.kind = SelectEntry::Kind::Aggregate;
            e.fn = fn;
            e.name = arg;
            return e;
        }
        if (peek_kind(Token::Kind::Star))
            fail("'*' must be the only item of the select list");
        e.kind = SelectEntry::Kind::Name;
        e.name = split(expect(Token::Kind::Ident, "select item").text);
        return e;
    }

    Expr condition()
    {
        std::vector<Expr> parts{conjunction()};
        while (accept_keyword("OR"))
            parts.push_back(conjunction());
        return Expr::any_of(std::move(parts));
    }

    Expr conjunction()
    {
        std::vector<Expr> parts{negation()};
        while (accept_keyword("AND"))
            parts.push_back(negation());
        return Expr::all_of(std::move(parts));
    }

    Expr negation()
    {
        if (accept_keyword("NOT"))
            return Expr::negate(negation());
        if (accept(Token::Kind::LParen)) {
            Expr inner = condition();
            expect(Token::Kind::RParen);
            return inner;
        }
        if (accept_keyword("TRUE"))
            return Expr::literal(true);
        if (accept_keyword("FALSE"))
            return Expr::literal(false);
        Operand lhs = operand();
        const Token &op = expect(Token::Kind::Op, "comparison operator");
        Operand rhs = operand();
        return Expr::compare(std::move(lhs), comparison(op.text), std::move(rhs));
    }

    static CmpOp comparison(const std::string &s)
    {
        if (s == "=") return CmpOp::Eq;
        if (s == "!=") return CmpOp::Ne;
        if (s == "<") return CmpOp::Lt;
        if (s == "<=") return CmpOp::Le;
        if (s == ">") return CmpOp::Gt;
        return CmpOp::Ge;
    }

    Operand operand()
    {
        if (aggregate_name()) {
            auto [fn, arg] = aggregate_call();
            if (arg.name == "*")
                return Operand::count_sid("*");
            return Operand::agg(fn, arg.name, arg.source);
        }
        const bool negative = accept(Token::Kind::Minus);
        const Token *t = peek();
        if (!t)
            fail("expected a column, aggregate or literal, found end of input");
        switch (t->kind) {
            case Token::Kind::Int: {
                const auto v = parse_int((negative ? "-" : "") + t->text);
                if (!v)
                    fail("integer literal " + t->text + " is out of range");
                ++pos_;
                return Operand::lit(*v);
            }
            case Token::Kind::Dec: {
                const auto v = Decimal::parse((negative ? "-" : "") + t->text);
                if (!v)
                    fail("decimal literal " + t->text + " needs at most " + std::to_string(Decimal::kDigits) +
                         " fractional digits and must fit the decimal range");
                ++pos_;
                return Operand::lit(*v);
            }
            default: break;
        }
        if (negative)
            fail("expected a number after '-', found " + describe());
        if (t->kind == Token::Kind::Str) {
            ++pos_;
            return Operand::lit(Value(t->text));
        }
        if (t->kind == Token::Kind::Ident) {
            const ColumnRef c = split(t->text);
            ++pos_;
            return Operand::col(c.name, c.source);
        }
        fail("expected a column, aggregate or literal, found " + describe());
    }

    std::span<const Token> toks_;
    std::size_t pos_ = 0;
};

}

Ast parse(std::span<const Token> tokens)
{
    Parser p(tokens);
    if (p.at_end())
        p.fail("empty query");
    Ast a = p.query();
    p.skip_semicolons();
    if (!p.at_end())
        p.fail("unexpected " + p.describe() + " after the end of the query");
    return a;
}

Ast parse(std::string_view text)
{
    const auto tokens = tokenize(text);
    return parse(tokens);
}

std::vector<Ast> parse_script(std::string_view text)
{
    const auto tokens = tokenize(text);
    std::vector<Ast> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= tokens.size(); ++i) {
        if (i < tokens.size() && tokens[i].kind != Token::Kind::Semicolon)
            continue;
        if (i > start)
            out.push_back(parse(std::span<const Token>(tokens).subspan(start, i - start)));
        start = i + 1;
    }
    return out;
}

}
