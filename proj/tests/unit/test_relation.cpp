#include "ssq/error.hpp"
#include "ssq/relation.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ssq;

TEST_SUITE("relation")
{
    TEST_CASE("schema lookup is case-insensitive and catches ambiguity")
    {
        Schema s({{"ItemId", Kind::Int, "Item"}, {"ItemId", Kind::Int, "Available"}, {"Name", Kind::Str, "Item"}});
        CHECK(s.find("name") == 2u);
        CHECK(s.find("ITEMID", "available") == 1u);
        CHECK_THROWS_AS(s.find("ItemId"), SemanticError);
        CHECK_THROWS_AS(s.resolve("Price"), SemanticError);
        CHECK(s.display_name(0) == "Item.ItemId");
        CHECK_THROWS_AS(Schema({{"a", Kind::Int, "T"}, {"A", Kind::Int, "T"}}), SemanticError);
    }

    TEST_CASE("selection keeps rowids and origin")
    {
        auto item = load_csv(test::data_path("item.csv"), "Item");
        auto cheap = tuple_select(item, Expr::compare(Operand::col("Price"), CmpOp::Lt, Operand::lit(30)));
        REQUIRE(cheap->size() == 3);
        CHECK(cheap->tuples()[0].rowid == 0);
        CHECK(cheap->tuples()[1].rowid == 2);
        CHECK(cheap->tuples()[2].rowid == 5);
        CHECK(cheap->same_origin(*item));
        CHECK(cheap->slot_of(5) == 2u);
        CHECK_FALSE(cheap->slot_of(1));
    }

    TEST_CASE("bad predicates are rejected at bind time")
    {
        auto item = load_csv(test::data_path("item.csv"), "Item");
        CHECK_THROWS_AS(tuple_select(item, Expr::compare(Operand::col("Type"), CmpOp::Lt, Operand::lit(3))),
                        SemanticError);
        CHECK_THROWS_AS(tuple_select(item, Expr::compare(Operand::agg(AggFn::Sum, "Price"), CmpOp::Lt, Operand::lit(3))),
                        SemanticError);
        CHECK_THROWS_AS(tuple_select(item, Expr::compare(Operand::col("Nope"), CmpOp::Eq, Operand::lit(3))),
                        SemanticError);
    }

    TEST_CASE("product extension numbers pairs by rowid")
    {
        auto item = load_csv(test::data_path("item.csv"), "Item");
        auto shop = load_csv(test::data_path("shop.csv"), "Shop");
        auto p = product_extension(item, shop);
        CHECK(p->size() == 50);
        CHECK(p->origin().domain == 50);
        CHECK(p->tuples()[7].rowid == 1 * 5 + 2);
        CHECK(p->schema().arity() == 9);
        auto again = product_extension(item, shop);
        CHECK(p->same_origin(*again));
    }

    TEST_CASE("projection keeps rows")
    {
        auto item = load_csv(test::data_path("item.csv"), "Item");
        auto types = tuple_project(item, {"Type"});
        CHECK(types->size() == 10);
        CHECK(types->schema().arity() == 1);
        CHECK_THROWS_AS(tuple_project(item, {}), SemanticError);
    }

    TEST_CASE("merging filtered views of one table")
    {
        auto item = load_csv(test::data_path("item.csv"), "Item");
        auto a = tuple_select(item, Expr::compare(Operand::col("Price"), CmpOp::Lt, Operand::lit(30)));
        auto b = tuple_select(item, Expr::compare(Operand::col("Price"), CmpOp::Gt, Operand::lit(60)));
        auto m = merge_extensions(a, b);
        CHECK(m->size() == 6);
        auto other = load_csv(test::data_path("item.csv"), "Item");
        CHECK_THROWS_AS(merge_extensions(a, other), SemanticError);
    }
}
