#include "ssq/csv.hpp"
#include "ssq/error.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ssq;

TEST_SUITE("csv")
{
    TEST_CASE("infers column kinds")
    {
        auto r = parse_csv("a,b,c\n1,2.5,x\n-3,4,y\n", "T");
        REQUIRE(r->size() == 2);
        CHECK(r->schema()[0].kind == Kind::Int);
        CHECK(r->schema()[1].kind == Kind::Dec);
        CHECK(r->schema()[2].kind == Kind::Str);
        CHECK(r->tuples()[1].values[1] == Value(Decimal::from_int(4)));
    }

    TEST_CASE("quoted fields, escapes and CRLF")
    {
        auto r = parse_csv("name,note\r\n\"Smith, J\",\"said \"\"hi\"\"\"\r\n\"\",x\r\n", "T");
        REQUIRE(r->size() == 2);
        CHECK(r->tuples()[0].values[0] == Value("Smith, J"));
        CHECK(r->tuples()[0].values[1] == Value("said \"hi\""));
        CHECK(r->tuples()[1].values[0] == Value(""));
    }

    TEST_CASE("header only gives an empty relation")
    {
        auto r = parse_csv("a,b\n", "T");
        CHECK(r->empty());
        CHECK(r->schema().arity() == 2);
    }

    TEST_CASE("malformed input is a load error")
    {
        CHECK_THROWS_AS(parse_csv("a,b\n1\n", "T"), LoadError);
        CHECK_THROWS_AS(parse_csv("a,a\n1,2\n", "T"), LoadError);
        CHECK_THROWS_AS(parse_csv("a\n\"open\n", "T"), LoadError);
        CHECK_THROWS_AS(parse_csv("", "T"), LoadError);
        CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", "T"), LoadError);
    }

    TEST_CASE("declared schema must match the header")
    {
        Schema s({{"A", Kind::Int, "T"}, {"B", Kind::Str, "T"}});
        CHECK_NOTHROW(parse_csv("a,b\n1,x\n", "T", s));
        CHECK_THROWS_AS(parse_csv("a,c\n1,x\n", "T", s), LoadError);
        CHECK_THROWS_AS(parse_csv("a,b\nx,x\n", "T", s), LoadError);
    }

    TEST_CASE("write and reload round trip")
    {
        auto item = load_csv(test::data_path("item.csv"), "Item");
        auto again = parse_csv(write_csv(*item), "Item");
        CHECK(again->schema() == item->schema());
        REQUIRE(again->size() == item->size());
        for (std::size_t i = 0; i < item->size(); ++i)
            CHECK(again->tuples()[i] == item->tuples()[i]);
    }

    TEST_CASE("shipped fixtures")
    {
        auto shop = load_csv(test::data_path("shop.csv"), "Shop");
        CHECK(shop->size() == 5);
        CHECK(shop->schema()[3].kind == Kind::Dec);
        CHECK(shop->tuples()[4].values[3].to_string() == "2.0");
    }
}
