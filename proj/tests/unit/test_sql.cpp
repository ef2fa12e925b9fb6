#include "ssq/error.hpp"
#include "ssq/sql/lexer.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ssq;
using sql::Token;

namespace {

std::pair<std::size_t, std::size_t> error_at(const std::string &text)
{
    try {
        sql::parse(text);
    } catch (const ParseError &e) {
        return {e.line(), e.column()};
    }
    return {0, 0};
}

}

TEST_SUITE("sql")
{
    TEST_CASE("tokenizer")
    {
        auto t = sql::tokenize("sum(Weight) > 190 and count(sid) >= 4");
        CHECK(t.size() == 13);
        CHECK(t[0].kind == Token::Kind::Ident);
        CHECK(t[5].text == "190");
        CHECK(t[6].is_keyword("AND"));
        CHECK(t[11].text == ">=");

        auto s = sql::tokenize("select 'it''s', \"a\"\"b\" <> -4.50 Item.ItemId -- trailing\n;");
        CHECK(s[0].is_keyword("SELECT"));
        CHECK(s[1].kind == Token::Kind::Str);
        CHECK(s[1].text == "it's");
        CHECK(s[3].text == "a\"b");
        CHECK(s[4].text == "!=");
        CHECK(s[5].kind == Token::Kind::Minus);
        CHECK(s[6].kind == Token::Kind::Dec);
        CHECK(s[7].text == "Item.ItemId");
        CHECK(s.back().kind == Token::Kind::Semicolon);
        CHECK(s.back().line == 2);
    }

    TEST_CASE("lexical errors carry positions")
    {
        try {
            sql::tokenize("SELECT *\nFROM # x");
            FAIL("expected an error");
        } catch (const ParseError &e) {
            CHECK(e.line() == 2);
            CHECK(e.column() == 6);
        }
        CHECK_THROWS_AS(sql::tokenize("'open"), ParseError);
        CHECK_THROWS_AS(sql::tokenize("a ! b"), ParseError);
        CHECK_THROWS_AS(sql::parse("SELECT * FROM Item WHERE Price == 3 WITH SUBSETS Item sid"), ParseError);
    }

    TEST_CASE("every printed example parses and lowers")
    {
        auto c = test::fixture_catalog();
        for (const auto &q : test::printed_queries()) {
            INFO(q);
            auto text = test::strip_labels(q);
            CHECK_NOTHROW(sql::lower(sql::parse(text), c));
        }
    }

    TEST_CASE("rendering parses back to the same tree")
    {
        std::vector<std::string> extra{
            "select sid, Type, sum(Price), min(Weight) from Item where Price >= 40 and Price <= 70 "
            "with subsets Item sid constrained by sum(Weight) > 500 group by Type having sum(Price) < 110",
            "SELECT * FROM Item WITH SUBSETS Item k MINIMAL CONSTRAINED BY not (sum(Weight) < -3 or avg(Price) >= 2.5)",
            "(SELECT * FROM Shop WITH SUBSETS Shop s) UNION (SELECT * FROM Shop WITH SUBSETS Shop s) "
            "INTERSECTION (SELECT * FROM Shop WITH SUBSETS Shop s CONSTRAINED BY count(*) = 1)",
            "SELECT Name FROM Item WHERE Name = 'O''Brien' or true WITH SUBSETS Item sid",
        };
        auto all = extra;
        for (const auto &q : test::printed_queries())
            all.push_back(test::strip_labels(q));
        for (const auto &q : all) {
            INFO(q);
            auto ast = sql::parse(q);
            auto text = sql::render_sql(ast);
            CHECK(sql::parse(text) == ast);
            CHECK(sql::render_sql(sql::parse(text)) == text);
        }
    }

    TEST_CASE("compound queries associate to the left")
    {
        auto ast = sql::parse("(SELECT * FROM Shop WITH SUBSETS Shop s) UNION (SELECT * FROM Shop WITH SUBSETS Shop s) "
                              "CROSS UNION (SELECT * FROM Shop WITH SUBSETS Shop s)");
        REQUIRE(ast.kind == sql::Ast::Kind::Compound);
        CHECK(ast.op == sql::CompoundOp::CrossUnion);
        CHECK(ast.operands[0].kind == sql::Ast::Kind::Compound);
    }

    TEST_CASE("syntax errors point at the offending token")
    {
        CHECK(error_at("SELECT * FROM Item WHERE Price < WITH SUBSETS Item sid") == std::pair<std::size_t, std::size_t>{1, 34});
        CHECK(error_at("SELECT *\nFROM Item\nWITH SUBSETS Item sid CONSTRAINED sum(Weight) > 1") ==
              std::pair<std::size_t, std::size_t>{3, 35});
        CHECK(error_at("") == std::pair<std::size_t, std::size_t>{1, 1});
        CHECK(error_at("SELECT * FROM Item") == std::pair<std::size_t, std::size_t>{1, 15});
        CHECK_THROWS_WITH(sql::parse("SELECT * FROM Item"), doctest::Contains("WITH SUBSETS"));
        CHECK(error_at("SELECT * FROM Item WITH SUBSETS Item sid APPLY UNARY SUM") ==
              std::pair<std::size_t, std::size_t>{1, 54});
        CHECK(error_at("SELECT * FROM Item WITH SUBSETS Item sid; SELECT") == std::pair<std::size_t, std::size_t>{1, 43});
    }

    TEST_CASE("scripts split on semicolons")
    {
        auto s = sql::parse_script("SELECT * FROM Item WITH SUBSETS Item sid;;\n-- note\nSELECT * FROM Shop WITH SUBSETS Shop sid");
        CHECK(s.size() == 2);
        CHECK(sql::parse_script("  -- nothing\n").empty());
    }

    TEST_CASE("semantic errors from lowering")
    {
        auto c = test::fixture_catalog();
        auto fails = [&](const std::string &q, const char *msg) {
            INFO(q);
            CHECK_THROWS_WITH_AS(sql::lower(sql::parse(q), c), doctest::Contains(msg), SemanticError);
        };
        fails("SELECT * FROM Nope WITH SUBSETS Nope sid", "unknown table");
        fails("SELECT Colour FROM Item WITH SUBSETS Item sid", "Colour");
        fails("SELECT * FROM Item WHERE sum(Price) > 3 WITH SUBSETS Item sid", "aggregate");
        fails("SELECT Name, sum(Price) FROM Item WITH SUBSETS Item sid", "mix");
        fails("SELECT * FROM Item WITH SUBSETS Shop sid", "Shop");
        // Kind errors surface once the plan is bound to data.
        CHECK_THROWS_AS(test::run_sql("SELECT * FROM Item WITH SUBSETS Item sid CONSTRAINED BY sum(Name) > 3", c), SemanticError);
        CHECK_THROWS_AS(test::run_sql("SELECT * FROM Item WHERE Type > 3 WITH SUBSETS Item sid", c), SemanticError);
    }
}
