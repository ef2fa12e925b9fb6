#include "ssq/enumerator.hpp"
#include "ssq/error.hpp"
#include "ssq/kernels.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ssq;

namespace {

Expr sum_le(const char *attr, int cap)
{
    return Expr::compare(Operand::agg(AggFn::Sum, attr), CmpOp::Le, Operand::lit(cap));
}

}

TEST_SUITE("enumerator")
{
    TEST_CASE("agrees with power set plus filter on random inputs")
    {
        std::mt19937 rng(2024);
        for (int round = 0; round < 400; ++round) {
            auto r = test::random_relation(rng, round % 13);
            auto cond = test::random_aggregate_condition(rng);
            std::optional<CardinalityBounds> card;
            if (round % 3 == 0) {
                card.emplace();
                card->tighten(CmpOp::Le, 1 + round % 5);
                if (round % 2) card->tighten(CmpOp::Ge, 2);
            }
            INFO("round " << round << ": " << to_sql(cond));
            std::optional<RelationOfSubsets> expected;
            bool expect_error = false;
            try {
                auto full = card ? Expr::all_of({cond, card->to_expr()}) : cond;
                expected = constraint_filter(power_set(r), full);
            } catch (const SemanticError &) {
                expect_error = true;
            }
            if (expect_error) {
                CHECK_THROWS_AS(enumerate_subsets(r, cond, card), SemanticError);
                continue;
            }
            auto got = enumerate_subsets(r, cond, card);
            CHECK_FALSE(got.omega.validate());
            CHECK(rs_equal(got.omega, *expected));
            CHECK(got.explored <= (std::uint64_t{1} << r->size()));
        }
    }

    TEST_CASE("an unsatisfiable negative bound is cut at the first level")
    {
        auto item = load_csv(test::data_path("item.csv"), "Item");
        auto e = enumerate_subsets(item, Expr::compare(Operand::agg(AggFn::Sum, "Weight"), CmpOp::Lt, Operand::lit(0)));
        CHECK(e.omega.empty());
        CHECK(e.explored <= item->size() + 1);
    }

    TEST_CASE("a binding upper bound prunes")
    {
        auto item = load_csv(test::data_path("item.csv"), "Item");
        auto e = enumerate_subsets(item, sum_le("Weight", 100));
        auto naive = constraint_filter(power_set(item), sum_le("Weight", 100));
        CHECK(rs_equal(e.omega, naive));
        CHECK(e.explored < 1024 / 4);
    }

    TEST_CASE("a subtree known to satisfy is accepted whole")
    {
        auto item = load_csv(test::data_path("item.csv"), "Item");
        auto e = enumerate_subsets(item, Expr::compare(Operand::agg(AggFn::Sum, "Weight"), CmpOp::Gt, Operand::lit(0)));
        CHECK(e.omega.size() == 1023);
    }

    TEST_CASE("cardinality bounds alone")
    {
        auto shop = load_csv(test::data_path("shop.csv"), "Shop");
        CardinalityBounds card;
        card.tighten(CmpOp::Eq, 2);
        auto e = enumerate_subsets(shop, Expr::literal(true), card);
        CHECK(e.omega.size() == 10);
        CHECK(e.explored < 32);
    }

    TEST_CASE("limits are hard errors")
    {
        auto item = load_csv(test::data_path("item.csv"), "Item");
        Limits l;
        l.max_results = 50;
        CHECK_THROWS_AS(enumerate_subsets(item, Expr::literal(true), std::nullopt, l), LimitError);
        l = {};
        l.max_generated = 100;
        CHECK_THROWS_AS(enumerate_subsets(item, sum_le("Weight", 400), std::nullopt, l), LimitError);
        // The same caps are not hit when the constraint prunes hard enough.
        CHECK_NOTHROW(enumerate_subsets(item, sum_le("Weight", 30), std::nullopt, l));
    }

    TEST_CASE("empty relation and rejected conditions")
    {
        auto empty = parse_csv("A\n", "E");
        auto e = enumerate_subsets(empty, Expr::literal(true));
        CHECK(e.omega.empty());
        auto item = load_csv(test::data_path("item.csv"), "Item");
        CHECK_THROWS_AS(enumerate_subsets(item, Expr::compare(Operand::col("Weight"), CmpOp::Lt, Operand::lit(3))),
                        SemanticError);
        CHECK_THROWS_AS(enumerate_subsets(item, sum_le("Name", 3)), SemanticError);
    }

    TEST_CASE("scalar and avx2 dispatch give identical enumerations")
    {
        if (!kernels::isa_supported(kernels::Isa::Avx2)) return;
        auto saved = kernels::active_isa();
        std::mt19937 rng(99);
        for (int round = 0; round < 60; ++round) {
            auto r = test::random_relation(rng, 4 + round % 9);
            auto cond = test::random_aggregate_condition(rng);
            kernels::set_isa(kernels::Isa::Scalar);
            auto a = enumerate_subsets(r, cond);
            kernels::set_isa(kernels::Isa::Avx2);
            auto b = enumerate_subsets(r, cond);
            CHECK(rs_equal(a.omega, b.omega));
            CHECK(a.explored == b.explored);
        }
        kernels::set_isa(saved);
    }
}
