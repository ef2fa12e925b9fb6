#pragma once

#include "ssq/csv.hpp"
#include "ssq/error.hpp"
#include "ssq/engine.hpp"
#include "ssq/oracle.hpp"
#include "ssq/sql/lower.hpp"
#include "ssq/sql/parser.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace ssq::test {

inline std::string data_path(const std::string &file)
{
    return std::string(SSQ_DATA_DIR) + "/" + file;
}

inline std::string query_path(const std::string &file)
{
    return std::string(SSQ_QUERY_DIR) + "/" + file;
}

/// Item, Shop and Available from the shipped fixtures.
inline Catalog fixture_catalog()
{
    Catalog c;
    c.add(load_csv(data_path("item.csv"), "Item"));
    c.add(load_csv(data_path("shop.csv"), "Shop"));
    c.add(load_csv(data_path("available.csv"), "Available"));
    return c;
}

inline PlanNode plan_of(const std::string &sql, const Catalog &c, const sql::LowerOptions &opts = {})
{
    return sql::lower(sql::parse(sql), c, opts);
}

inline QueryResult run_sql(const std::string &sql, const Catalog &c, const sql::LowerOptions &opts = {},
                           const EvalOptions &eval = {})
{
    return evaluate(plan_of(sql, c, opts), c, eval);
}

/// Query texts exactly as printed in the worked examples, sub-query labels included.
inline const std::vector<std::string> &printed_queries()
{
    static const std::vector<std::string> q{
        R"(SELECT * FROM Item WHERE Type = "Non-Eatable" WITH SUBSETS Item sid CONSTRAINED BY sum(Weight) > 200 and sum(Weight) < 400 and sum(Price) > 150)",
        R"(SELECT sid, Location FROM Shop WHERE Rating>4.0 WITH SUBSETS Shop sid CONSTRAINED BY sum(Distance)>30 and sum(Distance)<40)",
        R"(SELECT sid, sum(Distance), max(Rating) FROM Shop WHERE Rating>4.0 WITH SUBSETS Shop sid CONSTRAINED BY sum(Distance)>30 and sum(Distance)<40)",
        R"(SELECT * FROM Shop WHERE Rating>4.0 WITH SUBSETS Shop sid CONSTRAINED BY sum(Distance)>30 and sum(Distance)<40 APPLY UNARY UNION)",
        R"(SELECT * FROM Shop WHERE Rating>4.0 WITH SUBSETS Shop sid CONSTRAINED BY sum(Distance)>30 and sum(Distance)<40 APPLY UNARY INTERSECTION)",
        R"(a) (SELECT * FROM Shop WHERE Rating>3.5 and Rating<4.7 WITH SUBSETS Shop sid CONSTRAINED BY sum(Distance)>30 and sum(Distance)<36) CROSS UNION b) (SELECT * FROM Shop WHERE Distance>14 and Distance<19 WITH SUBSETS Shop sid CONSTRAINED BY sum(Rating)>5.5 and sum(Rating)<7.0))",
        R"(a) (SELECT * FROM Shop WHERE Rating>3.5 and Rating<4.7 WITH SUBSETS Shop sid CONSTRAINED BY sum(Distance)>30 and sum(Distance)<36) CROSS INTERSECTION b) (SELECT * FROM Shop WHERE Distance>14 and Distance<19 WITH SUBSETS Shop sid CONSTRAINED BY sum(Rating)>5.5 and sum(Rating)<7.0))",
        R"(SELECT * FROM Item, Shop WHERE Price<30 WITH SUBSETS Item sid,Shop sid CONSTRAINED BY sum(Distance)>14 and sum(Distance)<19 and sum(Rating)>5.5 and sum(Rating)<7.0 and sum(Weight)>60 and sum(Weight)<90)",
        R"(SELECT * FROM Item, Shop, Available WHERE Price<30 WITH SUBSETS Item sid,Shop sid CONSTRAINED BY Item.ItemId = Available.ItemId and Shop.ShopId = Available.ShopId and sum(Distance)>14 and sum(Distance)<19 and sum(Rating)>5.5 and sum(Rating)<7.0 and sum(Weight)>60 and sum(Weight)<90)",
        R"(SELECT * FROM Item WHERE Type="Eatable" WITH SUBSETS Item sid CONSTRAINED BY sum(Weight) > 190 and count(sid) >= 4 and count(sid) <= 5)",
        R"(SELECT * FROM Item WHERE Type="Eatable" WITH SUBSETS Item sid MAXIMAL CONSTRAINED BY sum(Weight) > 175 and sum(Weight) < 200)",
    };
    return q;
}

/// Drops the "a)" / "b)" labels that mark sub-queries in printed examples.
inline std::string strip_labels(std::string text)
{
    for (const char *label : {"a) (", "b) ("}) {
        for (auto at = text.find(label); at != std::string::npos; at = text.find(label))
            text.erase(at, 3);
    }
    return text;
}

/// Members as tuple labels: prefix + (rowid + 1), e.g. "i3" for the third Item row.
inline std::vector<std::vector<std::string>> labels(const RelationOfSubsets &w, const std::string &prefix)
{
    std::vector<std::vector<std::string>> out;
    for (const auto &m : w.members()) {
        std::vector<std::string> s;
        for (RowId id : m)
            s.push_back(prefix + std::to_string(id + 1));
        out.push_back(std::move(s));
    }
    return out;
}

using Labels = std::vector<std::vector<std::string>>;

/// The family as a set of label sets, ignoring order.
inline std::set<std::set<std::string>> as_sets(const Labels &l)
{
    std::set<std::set<std::string>> out;
    for (const auto &s : l)
        out.emplace(s.begin(), s.end());
    return out;
}

/// Random relation with Int columns A (0..20), B (-10..10), Dec column C and Str column T.
inline RelationPtr random_relation(std::mt19937 &rng, std::size_t rows, const std::string &name = "R")
{
    std::uniform_int_distribution<int> a(0, 20), b(-10, 10), c(0, 5000), t(0, 2);
    const char *tags[] = {"x", "y", "z"};
    std::vector<std::vector<Value>> data;
    for (std::size_t i = 0; i < rows; ++i)
        data.push_back({Value(a(rng)), Value(b(rng)), Value(Decimal::from_units(std::int64_t(c(rng)) * 1000)),
                        Value(tags[t(rng)])});
    Schema s({{"A", Kind::Int, name}, {"B", Kind::Int, name}, {"C", Kind::Dec, name}, {"T", Kind::Str, name}});
    return Relation::make_base(name, std::move(s), std::move(data));
}

inline CmpOp random_op(std::mt19937 &rng)
{
    return static_cast<CmpOp>(std::uniform_int_distribution<int>(0, 5)(rng));
}

/// An aggregate atom over the random schema.
inline Expr random_aggregate_atom(std::mt19937 &rng)
{
    std::uniform_int_distribution<int> pick(0, 9);
    switch (pick(rng)) {
        case 0:
        case 1: return Expr::compare(Operand::agg(AggFn::Sum, "A"), random_op(rng), Operand::lit(std::uniform_int_distribution<int>(0, 80)(rng)));
        case 2: return Expr::compare(Operand::agg(AggFn::Sum, "B"), random_op(rng), Operand::lit(std::uniform_int_distribution<int>(-20, 20)(rng)));
        case 3: return Expr::compare(Operand::count_sid(), random_op(rng), Operand::lit(std::uniform_int_distribution<int>(1, 6)(rng)));
        case 4: return Expr::compare(Operand::agg(AggFn::Min, "A"), random_op(rng), Operand::lit(std::uniform_int_distribution<int>(0, 20)(rng)));
        case 5: return Expr::compare(Operand::agg(AggFn::Max, "B"), random_op(rng), Operand::lit(std::uniform_int_distribution<int>(-10, 10)(rng)));
        case 6: return Expr::compare(Operand::agg(AggFn::Avg, "A"), random_op(rng), Operand::lit(Decimal::from_units(std::uniform_int_distribution<int>(0, 20'000'000)(rng))));
        case 7: return Expr::compare(Operand::agg(AggFn::Sum, "C"), random_op(rng), Operand::lit(Decimal::from_units(std::int64_t(std::uniform_int_distribution<int>(0, 15000)(rng)) * 1000)));
        case 8: return Expr::compare(Operand::agg(AggFn::Avg, "B"), random_op(rng), Operand::agg(AggFn::Min, "B"));
        default: return Expr::compare(Operand::agg(AggFn::Max, "C"), random_op(rng), Operand::lit(Decimal::from_units(std::int64_t(std::uniform_int_distribution<int>(0, 5000)(rng)) * 1000)));
    }
}

/// Random boolean combination of aggregate atoms, depth-limited.
inline Expr random_aggregate_condition(std::mt19937 &rng, int depth = 2)
{
    std::uniform_int_distribution<int> shape(0, depth > 0 ? 4 : 0);
    switch (shape(rng)) {
        case 1:
        case 2: return Expr::all_of({random_aggregate_condition(rng, depth - 1), random_aggregate_condition(rng, depth - 1)});
        case 3: return Expr::any_of({random_aggregate_condition(rng, depth - 1), random_aggregate_condition(rng, depth - 1)});
        case 4: return Expr::negate(random_aggregate_condition(rng, depth - 1));
        default: return random_aggregate_atom(rng);
    }
}

inline Expr random_tuple_condition(std::mt19937 &rng)
{
    std::uniform_int_distribution<int> pick(0, 3);
    switch (pick(rng)) {
        case 0: return Expr::compare(Operand::col("A"), random_op(rng), Operand::lit(std::uniform_int_distribution<int>(0, 20)(rng)));
        case 1: return Expr::compare(Operand::col("B"), random_op(rng), Operand::lit(std::uniform_int_distribution<int>(-10, 10)(rng)));
        case 2: return Expr::compare(Operand::col("T"), std::bernoulli_distribution(0.5)(rng) ? CmpOp::Eq : CmpOp::Ne, Operand::lit("x"));
        default: return Expr::compare(Operand::col("A"), random_op(rng), Operand::col("B"));
    }
}

/// Small relation S(D, E) with names disjoint from random_relation's.
inline RelationPtr random_side(std::mt19937 &rng, std::size_t rows)
{
    std::uniform_int_distribution<int> d(0, 20), e(0, 9);
    std::vector<std::vector<Value>> data;
    for (std::size_t i = 0; i < rows; ++i)
        data.push_back({Value(d(rng)), Value(e(rng))});
    return Relation::make_base("S", Schema({{"D", Kind::Int, "S"}, {"E", Kind::Int, "S"}}), std::move(data));
}

/// One random test instance: a catalog holding R and S and a query text over it.
struct Instance
{
    Catalog catalog;
    std::string sql;
};

inline std::string random_subset_query(std::mt19937 &rng, bool operand)
{
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    static const char *selects[] = {"*", "sid, A, T", "sid, sum(A), count(*)", "sid, max(C), avg(B)", "T", "sid"};
    std::string q = "SELECT " + std::string(operand ? "*" : selects[pick(6)]) + " FROM R";
    if (pick(2))
        q += " WHERE " + to_sql(random_tuple_condition(rng));
    q += " WITH SUBSETS R sid";
    if (!operand && pick(4) == 0)
        q += pick(2) ? " MAXIMAL" : " MINIMAL";
    if (pick(5))
        q += " CONSTRAINED BY " + to_sql(random_aggregate_condition(rng));
    if (!operand && q.starts_with("SELECT * ") && pick(6) == 0)
        q += pick(2) ? " APPLY UNARY UNION" : " APPLY UNARY INTERSECTION";
    return q;
}

inline Instance random_instance(std::mt19937 &rng)
{
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    Instance in;
    const int form = pick(10);
    const std::size_t rows = form >= 7 ? 1 + pick(6) : std::size_t(pick(13));
    in.catalog.add(random_relation(rng, rows));
    in.catalog.add(random_side(rng, 1 + pick(3)));
    if (form < 5) {
        in.sql = random_subset_query(rng, false);
    } else if (form < 7) {
        in.sql = "SELECT sid, T, sum(A), min(B) FROM R WITH SUBSETS R sid CONSTRAINED BY " +
                 to_sql(random_aggregate_condition(rng)) + " GROUP BY T";
        if (pick(2))
            in.sql += " HAVING sum(A) > " + std::to_string(pick(30));
    } else if (form < 9) {
        static const char *ops[] = {" UNION ", " INTERSECTION ", " CROSS UNION ", " CROSS INTERSECTION "};
        in.sql = "(" + random_subset_query(rng, true) + ")" + ops[pick(4)] + "(" + random_subset_query(rng, true) + ")";
    } else {
        in.sql = "SELECT * FROM R, S WITH SUBSETS R sid, S k CONSTRAINED BY sum(A) < " + std::to_string(pick(40)) +
                 " and sum(D) > " + std::to_string(pick(25));
        if (pick(2))
            in.sql += " and R.A <= S.D";
        if (pick(3) == 0)
            in.sql += " and " + std::string(pick(2) ? "E" : "B") + " > " + std::to_string(pick(9) - 2);
    }
    return in;
}

/// Outcome of running a plan: the result, or the category of the error it raised.
struct Outcome
{
    std::optional<QueryResult> result;
    std::optional<Error::Category> error;
    std::string message;
};

template <typename Fn>
Outcome outcome_of(Fn &&fn)
{
    Outcome o;
    try {
        o.result = fn();
    } catch (const Error &e) {
        o.error = e.category();
        o.message = e.what();
    }
    return o;
}

inline bool same_outcome(const Outcome &a, const Outcome &b)
{
    if (a.result && b.result)
        return *a.result == *b.result;
    return a.error && b.error && *a.error == *b.error;
}

/// Random family over `r`: `count` random nonempty member lists.
inline RelationOfSubsets random_family(std::mt19937 &rng, const RelationPtr &r, std::size_t count)
{
    std::vector<Members> ms;
    std::bernoulli_distribution coin(0.4);
    for (std::size_t k = 0; k < count; ++k) {
        Members m;
        for (const auto &t : r->tuples())
            if (coin(rng))
                m.push_back(t.rowid);
        ms.push_back(std::move(m));
    }
    return RelationOfSubsets(r, std::move(ms));
}

}
