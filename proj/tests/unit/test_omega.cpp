#include "ssq/error.hpp"
#include "ssq/omega.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ssq;

namespace {

void valid(const RelationOfSubsets &w)
{
    auto problem = w.validate();
    INFO(problem.value_or(""));
    CHECK_FALSE(problem);
}

bool proper_subset(const Members &a, const Members &b)
{
    return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

RelationPtr shop() { return load_csv(test::data_path("shop.csv"), "Shop"); }

}

TEST_SUITE("omega")
{
    TEST_CASE("canonical order, dedup and empty members dropped")
    {
        auto r = shop();
        RelationOfSubsets w(r, {{3, 1}, {0}, {}, {1, 3}, {0, 4}});
        valid(w);
        REQUIRE(w.size() == 3);
        CHECK(w.members()[0] == Members{0});
        CHECK(w.members()[1] == Members{0, 4});
        CHECK(w.members()[2] == Members{1, 3});
        CHECK(w.at_sid(3) == Subset(r, {1, 3}));
        CHECK_THROWS_AS(RelationOfSubsets(r, {{9}}), SemanticError);
    }

    TEST_CASE("validator catches malformed families")
    {
        auto r = shop();
        CHECK(RelationOfSubsets::from_canonical(r, {{1}, {0}}).validate());
        CHECK(RelationOfSubsets::from_canonical(r, {{0}, {0}}).validate());
        CHECK(RelationOfSubsets::from_canonical(r, {{}}).validate());
        CHECK(RelationOfSubsets::from_canonical(r, {{1, 0}}).validate());
    }

    TEST_CASE("power set")
    {
        auto r = shop();
        auto w = power_set(r);
        valid(w);
        CHECK(w.size() == 31);
        CHECK(w.members().front() == Members{0});
        CHECK(w.members().back() == Members{4});
        Limits tight;
        tight.naive_cap = 4;
        CHECK_THROWS_AS(power_set(r, tight), LimitError);
        tight = {};
        tight.max_results = 10;
        CHECK_THROWS_AS(power_set(r, tight), LimitError);
    }

    TEST_CASE("constraint filter and per-tuple select")
    {
        auto r = shop();
        auto w = power_set(r);
        auto few = constraint_filter(w, Expr::compare(Operand::count_sid(), CmpOp::Le, Operand::lit(1)));
        valid(few);
        CHECK(few.size() == 5);
        auto near = rs_tuple_select(w, Expr::compare(Operand::col("Distance"), CmpOp::Lt, Operand::lit(15)));
        valid(near);
        CHECK(near.size() == 1); // every member collapses to {S.D. Road}
        CHECK_THROWS_AS(constraint_filter(w, Expr::compare(Operand::col("Distance"), CmpOp::Lt, Operand::lit(1))),
                        SemanticError);
    }

    TEST_CASE("unary combine")
    {
        auto r = shop();
        RelationOfSubsets w(r, {{0, 2}, {0, 3}, {0}});
        CHECK(unary_combine(w, SetMode::Union) == Subset(r, {0, 2, 3}));
        CHECK(unary_combine(w, SetMode::Intersection) == Subset(r, {0}));
        CHECK(unary_combine(RelationOfSubsets(r), SetMode::Union).empty());
        CHECK_THROWS_AS(unary_combine(RelationOfSubsets(r), SetMode::Intersection), SemanticError);
    }

    TEST_CASE("set and cross combinations")
    {
        auto r = shop();
        RelationOfSubsets a(r, {{0, 1}, {2}}), b(r, {{1}, {2}});
        auto u = rs_set_combine(a, b, SetMode::Union);
        valid(u);
        CHECK(u.size() == 3);
        CHECK(rs_set_combine(a, b, SetMode::Intersection).size() == 1);
        auto cu = cross_combine(a, b, SetMode::Union);
        valid(cu);
        CHECK(cu.size() == 4); // {0,1} {0,1,2} {1,2} {2}
        auto ci = cross_combine(a, b, SetMode::Intersection);
        valid(ci);
        CHECK(ci.size() == 2); // {1} {2}, the empty pairs dropped
        Limits tight;
        tight.max_generated = 3;
        CHECK_THROWS_AS(cross_combine(a, b, SetMode::Union, tight), LimitError);
        auto other = shop();
        CHECK_THROWS_AS(rs_set_combine(a, RelationOfSubsets(other, {{1}}), SetMode::Union), SemanticError);
    }

    TEST_CASE("complement family")
    {
        auto r = shop();
        auto c = rs_complement(RelationOfSubsets(r, {{0, 1, 2, 3, 4}, {0}}));
        valid(c);
        REQUIRE(c.size() == 1);
        CHECK(c.members()[0] == Members{1, 2, 3, 4});
    }

    TEST_CASE("cross product and cross join")
    {
        auto item = load_csv(test::data_path("item.csv"), "Item");
        auto avail = load_csv(test::data_path("available.csv"), "Available");
        RelationOfSubsets a(item, {{0}, {2, 5}}), b(avail, {{0, 1}, {3}});
        auto p = cross_product(a, b);
        valid(p);
        CHECK(p.size() == 4);
        CHECK(p.extension()->size() == 40);
        auto jc = Expr::compare(Operand::col("ItemId", "Item"), CmpOp::Eq, Operand::col("ItemId", "Available"));
        auto j = cross_join(a, b, jc);
        valid(j);
        REQUIRE(j.size() == 1); // only {i3,i6} x {a1,a2} joins
        CHECK(j.members()[0].size() == 2);
    }

    TEST_CASE("group by inside every member")
    {
        auto item = load_csv(test::data_path("item.csv"), "Item");
        RelationOfSubsets w(item, {{0, 2}, {2, 4}});
        auto g = rs_group_by(w, {"Type"}, {{AggFn::Count, {"", "ItemId"}}});
        REQUIRE(g.size() == 2);
        CHECK(g[0].rows.size() == 2);
        CHECK(g[1].rows.size() == 1);
        CHECK(g[1].rows[0].aggregates[0] == Value(2));
    }

    TEST_CASE("maximal and minimal")
    {
        auto r = shop();
        RelationOfSubsets w(r, {{0}, {0, 1}, {2}, {1, 2, 3}, {4}});
        auto mx = maxmin_filter(w, MaxMinMode::Maximal);
        valid(mx);
        CHECK(test::labels(mx, "s") == test::Labels{{"s1", "s2"}, {"s2", "s3", "s4"}, {"s5"}});
        CHECK(test::labels(maxmin_filter(w, MaxMinMode::Minimal), "s") == test::Labels{{"s1"}, {"s3"}, {"s5"}});
        CHECK(maxmin_filter(w, MaxMinMode::Maximal, MaxMinCriterion::Cardinality).size() == 1);
        CHECK(maxmin_filter(w, MaxMinMode::Minimal, MaxMinCriterion::Cardinality).size() == 3);
        CHECK(maxmin_filter(RelationOfSubsets(r), MaxMinMode::Maximal).empty());
    }

    TEST_CASE("maximal output is an antichain")
    {
        std::mt19937 rng(11);
        for (int round = 0; round < 300; ++round) {
            auto r = test::random_relation(rng, 1 + round % 12);
            auto w = test::random_family(rng, r, 1 + round % 40);
            for (auto mode : {MaxMinMode::Maximal, MaxMinMode::Minimal}) {
                auto m = maxmin_filter(w, mode);
                valid(m);
                for (const auto &x : m.members())
                    for (const auto &y : m.members())
                        CHECK_FALSE(proper_subset(x, y));
                // Everything dropped is dominated by a survivor.
                for (const auto &x : w.members()) {
                    bool kept = std::find(m.members().begin(), m.members().end(), x) != m.members().end();
                    if (kept) continue;
                    bool dominated = false;
                    for (const auto &y : m.members())
                        dominated |= mode == MaxMinMode::Maximal ? proper_subset(x, y) : proper_subset(y, x);
                    CHECK(dominated);
                }
            }
        }
    }

    TEST_CASE("validator passes after every operator on random inputs")
    {
        std::mt19937 rng(5);
        for (int round = 0; round < 200; ++round) {
            auto r = test::random_relation(rng, 1 + round % 9);
            auto a = test::random_family(rng, r, 1 + round % 10);
            auto b = test::random_family(rng, r, 1 + round % 7);
            valid(a);
            valid(rs_set_combine(a, b, SetMode::Union));
            valid(rs_set_combine(a, b, SetMode::Intersection));
            valid(cross_combine(a, b, SetMode::Union));
            valid(cross_combine(a, b, SetMode::Intersection));
            valid(rs_complement(a));
            valid(rs_tuple_select(a, test::random_tuple_condition(rng)));
            valid(maxmin_filter(a, MaxMinMode::Maximal, MaxMinCriterion::Cardinality));
            valid(power_set(r));
            auto s = test::random_relation(rng, 1 + round % 4, "S");
            auto c = test::random_family(rng, s, 3);
            valid(cross_product(a, c));
            valid(cross_join(a, c, Expr::compare(Operand::col("A", "R"), CmpOp::Le, Operand::col("A", "S"))));
            valid(lift(r));
        }
    }
}
