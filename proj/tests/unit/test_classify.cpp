#include "ssq/classify.hpp"
#include "ssq/error.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ssq;

namespace {

Expr where_of(const std::string &sql)
{
    return *sql::parse(sql).query.constrained_by;
}

}

TEST_SUITE("classify")
{
    TEST_CASE("product query: every aggregate lands on its own source")
    {
        auto c = test::fixture_catalog();
        const auto &q = test::printed_queries()[7];
        std::vector<ClassifySource> src{{"Item", &c.find("Item")->schema(), "sid"},
                                        {"Shop", &c.find("Shop")->schema(), "sid"}};
        auto k = classify_constraints(where_of(q), src);
        CHECK(k.join_atoms.empty());
        CHECK(k.of("Item").per_tuple.is_true_literal());
        CHECK(to_sql(k.of("Item").aggregate) == "sum(Weight) > 60 and sum(Weight) < 90");
        CHECK(to_sql(k.of("Shop").aggregate) ==
              "sum(Distance) > 14 and sum(Distance) < 19 and sum(Rating) > 5.5 and sum(Rating) < 7.0");

        ClassifyOptions per_tuple{{"Distance"}};
        auto p = classify_constraints(where_of(q), src, per_tuple);
        CHECK(to_sql(p.of("Shop").per_tuple) == "Distance > 14 and Distance < 19");
        CHECK(to_sql(p.of("Shop").aggregate) == "sum(Rating) > 5.5 and sum(Rating) < 7.0");
    }

    TEST_CASE("join query: cross-source equalities become join atoms")
    {
        auto c = test::fixture_catalog();
        const auto &q = test::printed_queries()[8];
        std::vector<ClassifySource> src{{"Item", &c.find("Item")->schema(), "sid"},
                                        {"Shop", &c.find("Shop")->schema(), "sid"},
                                        {"Available", &c.find("Available")->schema(), ""}};
        auto k = classify_constraints(where_of(q), src);
        REQUIRE(k.join_atoms.size() == 2);
        CHECK(to_sql(k.join_atoms[0]) == "Item.ItemId = Available.ItemId");
        CHECK(k.of("Available").aggregate.is_true_literal());
        CHECK(k.of("Available").per_tuple.is_true_literal());
    }

    TEST_CASE("count(sid) ranges become cardinality bounds")
    {
        auto c = test::fixture_catalog();
        std::vector<ClassifySource> src{{"Item", &c.find("Item")->schema(), "sid"}};
        auto cond = Expr::all_of({Expr::compare(Operand::agg(AggFn::Sum, "Weight"), CmpOp::Gt, Operand::lit(190)),
                                  Expr::compare(Operand::count_sid(), CmpOp::Ge, Operand::lit(4)),
                                  Expr::compare(Operand::lit(5), CmpOp::Ge, Operand::count_sid())});
        auto k = classify_constraints(cond, src);
        const auto &item = k.of("Item");
        REQUIRE(item.cardinality);
        CHECK(item.cardinality->min == 4);
        CHECK(item.cardinality->max == 5);
        CHECK(to_sql(item.aggregate) == "sum(Weight) > 190");

        // Disequalities are not a range; they stay in the aggregate condition.
        auto ne = classify_constraints(
            Expr::compare(Operand::count_sid(), CmpOp::Ne, Operand::lit(2)), src);
        CHECK_FALSE(ne.of("Item").cardinality);
        CHECK_FALSE(ne.of("Item").aggregate.is_true_literal());
    }

    TEST_CASE("conjuncts that mix stages or sources are rejected")
    {
        auto c = test::fixture_catalog();
        std::vector<ClassifySource> src{{"Item", &c.find("Item")->schema(), "sid"},
                                        {"Shop", &c.find("Shop")->schema(), "sid"}};
        auto mixed = Expr::any_of({Expr::compare(Operand::col("Price"), CmpOp::Lt, Operand::lit(3)),
                                   Expr::compare(Operand::agg(AggFn::Sum, "Weight"), CmpOp::Lt, Operand::lit(3))});
        CHECK_THROWS_AS(classify_constraints(mixed, src), SemanticError);
        auto two = Expr::compare(Operand::agg(AggFn::Sum, "Weight"), CmpOp::Lt, Operand::agg(AggFn::Sum, "Distance"));
        CHECK_THROWS_AS(classify_constraints(two, src), SemanticError);
        auto unknown = Expr::compare(Operand::col("Nope"), CmpOp::Lt, Operand::lit(3));
        CHECK_THROWS_AS(classify_constraints(unknown, src), SemanticError);
    }

    TEST_CASE("per-tuple sum rewrite")
    {
        auto e = per_tuple_sums(where_of(test::printed_queries()[7]), {"distance"});
        CHECK(to_sql(e).find("Distance > 14") != std::string::npos);
        CHECK(to_sql(e).find("sum(Weight) > 60") != std::string::npos);
    }
}
