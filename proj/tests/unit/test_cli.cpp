#include "ssq/cli/render.hpp"
#include "ssq/cli/session.hpp"
#include "support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ssq;
using namespace ssq::cli;

namespace {

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

SessionConfig fixture_config()
{
    SessionConfig c;
    c.tables = {{"Item", test::data_path("item.csv")},
                {"Shop", test::data_path("shop.csv")},
                {"Available", test::data_path("available.csv")}};
    return c;
}

struct Run
{
    int code = 0;
    std::string out, err;
};

Run batch(const std::filesystem::path &file, const SessionConfig &config, const std::string &stdin_text = {})
{
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    Run r;
    r.code = run_batch(file, config, in, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

Run interactive(const std::string &input, SessionConfig config = fixture_config())
{
    Session s(std::move(config));
    std::istringstream in(input);
    std::ostringstream out, err;
    Run r;
    r.code = repl(s, in, out, err, false);
    r.out = out.str();
    r.err = err.str();
    return r;
}

}

TEST_SUITE("cli")
{
    TEST_CASE("query files match the golden renderings")
    {
        for (const char *name : {"query2", "shop_locations", "shop_totals", "unary", "combine", "cross_product",
                                 "cross_join", "group_by", "cardinality", "maximal"}) {
            INFO(name);
            auto config = fixture_config();
            if (std::string_view(name).starts_with("cross_"))
                config.per_tuple_sum = {"Distance"};
            auto r = batch(test::query_path(std::string(name) + ".sql"), config);
            CHECK(r.code == 0);
            CHECK(r.err.empty());
            CHECK(r.out == slurp(std::string(SSQ_GOLDEN_DIR) + "/" + name + ".txt"));
        }
    }

    TEST_CASE("the oracle answers the same files identically")
    {
        auto config = fixture_config();
        config.oracle = true;
        for (const char *name : {"query2", "shop_totals", "unary", "combine", "group_by", "maximal"}) {
            INFO(name);
            CHECK(batch(test::query_path(std::string(name) + ".sql"), config).out ==
                  slurp(std::string(SSQ_GOLDEN_DIR) + "/" + name + ".txt"));
        }
    }

    TEST_CASE("exit codes")
    {
        auto config = fixture_config();
        CHECK(batch("/nonexistent.sql", config).code == 2);
        CHECK(batch("-", config, "SELECT * FROM Item WHERE").code == 3);
        CHECK(batch("-", config, "SELECT * FROM Nope WITH SUBSETS Nope sid").code == 3);
        auto r = batch("-", config, "SELECT * FROM Item WITH SUBSETS Item sid");
        CHECK(r.code == 0);
        config.limits.max_results = 10;
        r = batch("-", config, "SELECT * FROM Item WITH SUBSETS Item sid");
        CHECK(r.code == 4);
        CHECK(r.out.empty());
        CHECK(r.err.find("max_results") != std::string::npos);
        config = fixture_config();
        config.limits.max_generated = 0;
        CHECK(batch("-", config, "SELECT * FROM Item WITH SUBSETS Item sid").code == 1);
        config = fixture_config();
        config.tables.push_back({"item", test::data_path("shop.csv")});
        CHECK(batch("-", config, "").code == 3);
        config = fixture_config();
        config.tables.push_back({"Broken", "/nonexistent.csv"});
        CHECK(batch("-", config, "").code == 2);
    }

    TEST_CASE("nothing is printed when a later query fails")
    {
        auto r = batch("-", fixture_config(),
                       "SELECT * FROM Shop WITH SUBSETS Shop sid CONSTRAINED BY count(*) = 1;\n"
                       "SELECT * FROM Nope WITH SUBSETS Nope sid;");
        CHECK(r.code == 3);
        CHECK(r.out.empty());
    }

    TEST_CASE("empty input prints nothing")
    {
        auto r = batch("-", fixture_config(), "-- only a comment\n\n");
        CHECK(r.code == 0);
        CHECK(r.out.empty());
    }

    TEST_CASE("empty answers keep their header")
    {
        auto r = batch("-", fixture_config(), "SELECT * FROM Shop WITH SUBSETS Shop sid CONSTRAINED BY count(*) > 9");
        CHECK(r.out == "sid  ShopId  Location  Distance  Rating\n---  ------  --------  --------  ------\n");
    }

    TEST_CASE("json output")
    {
        auto c = test::fixture_catalog();
        auto subsets = nlohmann::json::parse(render(test::run_sql(test::printed_queries()[1], c), Format::Json));
        REQUIRE(subsets["subsets"].size() == 2);
        CHECK(subsets["subsets"][0]["sid"] == 1);
        CHECK(subsets["subsets"][1]["rows"][1]["Location"] == "S.D. Road");

        auto rows = nlohmann::json::parse(render(test::run_sql(test::printed_queries()[2], c), Format::Json));
        REQUIRE(rows.is_array());
        CHECK(rows[0]["sum(Distance)"] == 38);
        CHECK(rows[1]["max(Rating)"].dump() == "4.8");

        auto none = render(test::run_sql("SELECT * FROM Shop WITH SUBSETS Shop sid CONSTRAINED BY count(*) > 9", c),
                           Format::Json);
        CHECK(nlohmann::json::parse(none) == nlohmann::json::parse(R"({"subsets": []})"));
    }

    TEST_CASE("csv output reloads as a relation")
    {
        auto c = test::fixture_catalog();
        auto result = test::run_sql(test::printed_queries()[0], c);
        auto text = render(result, Format::Csv);
        CHECK(text.starts_with("sid,ItemId,Name,Weight,Price,Type\n"));
        auto back = parse_csv(text, "Answer");
        REQUIRE(back->size() == result.rows.size());
        for (std::size_t i = 0; i < back->size(); ++i)
            CHECK(back->tuples()[i].values == result.rows[i]);
        // The reloaded answer can be queried in turn.
        c.add(back);
        auto again = test::run_sql("SELECT * FROM Answer WHERE sid = 2 WITH SUBSETS Answer k APPLY UNARY UNION", c);
        CHECK(again.rows.size() == 4);
    }

    TEST_CASE("csv quoting")
    {
        auto c = test::fixture_catalog();
        c.add(parse_csv("Name,Note\n\"a,b\",\"say \"\"x\"\"\"\n", "Q"));
        auto text = render(test::run_sql("SELECT * FROM Q WITH SUBSETS Q sid", c), Format::Csv);
        CHECK(text == "sid,Name,Note\n1,\"a,b\",\"say \"\"x\"\"\"\n");
    }

    TEST_CASE("repl runs queries terminated by semicolons or blank lines")
    {
        auto r = interactive("SELECT sid, sum(Distance), max(Rating) FROM Shop WHERE Rating>4.0\n"
                             "WITH SUBSETS Shop sid CONSTRAINED BY sum(Distance)>30 and sum(Distance)<40;\n"
                             "SELECT * FROM Shop WHERE Rating > 4.7 WITH SUBSETS Shop sid\n"
                             "\n");
        CHECK(r.err.empty());
        CHECK(r.out.find("1    38             4.6") != std::string::npos);
        CHECK(r.out.find("S.D. Road") != std::string::npos);
    }

    TEST_CASE("repl commands")
    {
        auto r = interactive("\\tables\n\\format csv\nSELECT * FROM Shop WHERE Rating > 4.7 WITH SUBSETS Shop sid;\n"
                             "\\limits\n\\help\n\\quit\nSELECT nothing;\n");
        CHECK(r.out.starts_with("Available\nItem\nShop\n"));
        CHECK(r.out.find("sid,ShopId,Location,Distance,Rating\n1,4,S.D. Road,12,4.8\n") != std::string::npos);
        CHECK(r.out.find("max_generated 1000000") != std::string::npos);
        CHECK(r.out.find("\\load NAME PATH") != std::string::npos);
        CHECK(r.err.empty()); // nothing after \quit runs
    }

    TEST_CASE("repl keeps going after errors")
    {
        auto r = interactive("SELECT * FROM;\n\\format yaml\n\\bogus\n\\load Extra /nonexistent.csv\n"
                             "\\load Extra " + test::data_path("shop.csv") + "\n"
                             "SELECT * FROM Extra WHERE Distance < 13 WITH SUBSETS Extra sid");
        CHECK(r.code == 0);
        CHECK(r.err.find("error: 1:10") != std::string::npos);
        CHECK(r.err.find("unknown format") != std::string::npos);
        CHECK(r.err.find("unknown command") != std::string::npos);
        CHECK(r.err.find("nonexistent.csv") != std::string::npos);
        CHECK(r.out.find("loaded 5 rows into Extra") != std::string::npos);
        CHECK(r.out.find("S.D. Road") != std::string::npos); // pending text runs at end of input
    }
}
