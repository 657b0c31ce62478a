#include <pcsp/errors.hh>
#include <pcsp/io.hh>

#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hh"

using namespace pcsp;

namespace
{
    auto parse_tmpl(const std::string & text) -> Template
    {
        std::istringstream in(text);
        return parse_template(in);
    }

    auto error_line(const std::string & text) -> int
    {
        try {
            parse_tmpl(text);
        }
        catch (const ParseError & e) {
            return e.line();
        }
        return -1;
    }
}

TEST_CASE("relation specs")
{
    CHECK(parse_relation_spec("rin 1 3") == build_family(Family::exact, 1, 3));
    CHECK(parse_relation_spec("nae 4") == build_family(Family::nae, 0, 4));
    CHECK(parse_relation_spec("neq").is_neq());
    CHECK(parse_relation_spec("atleast 2 5") == build_family(Family::atleast, 2, 5));
    CHECK(parse_relation_spec("const 3") == build_family(Family::constant, 0, 3));
    auto e = parse_relation_spec("explicit 2 10");
    CHECK(e.contains(Tuple{1, 0}));
    CHECK_FALSE(e.contains(Tuple{0, 1}));
    CHECK(parse_relation_spec("explicit 3 100,010,001").symmetric());
    CHECK_THROWS_AS(parse_relation_spec("rin 4 3"), ParseError);
    CHECK_THROWS_AS(parse_relation_spec("explicit 2 102"), ParseError);
    CHECK_THROWS_AS(parse_relation_spec("explicit 2 1"), ParseError);
    CHECK_THROWS_AS(parse_relation_spec("wat 3"), ParseError);
    CHECK_THROWS_AS(parse_relation_spec("nae 3 3"), ParseError);
}

TEST_CASE("template files")
{
    auto t = parse_tmpl("# comment\ntemplate\npair rin 2 4 atmost 3 4  # trailing\n\npair neq neq\nend\n");
    REQUIRE(t.size() == 2);
    CHECK(t.has_neq());
    CHECK(t.pairs()[0].b == build_family(Family::atmost, 3, 4));

    std::ostringstream out;
    write_template(out, t);
    auto back = parse_tmpl(out.str());
    REQUIRE(back.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(back.pairs()[i].a == t.pairs()[i].a);
        CHECK(back.pairs()[i].b == t.pairs()[i].b);
    }
}

TEST_CASE("template errors carry the offending line")
{
    CHECK(error_line("template\nrin 4 3\nend\n") == 2);
    CHECK(error_line("template\npair rin 4 3 nae 3\nend\n") == 2);
    CHECK(error_line("template\npair rin 1 3 nae 4\nend\n") == 2);
    CHECK(error_line("template\npair odd 3 nae 3\nend\n") == 2);
    CHECK(error_line("template\npair nae 3 nae 3\n") == 3);
    CHECK(error_line("") == 1);
    CHECK(error_line("template\nend\n") == 2);
    CHECK(error_line("template\npair neq neq\nend\npair neq neq\n") == 4);
    CHECK(error_line("nope\n") == 1);
}

TEST_CASE("instance files round-trip")
{
    std::mt19937 rng(3);
    Template t({{build_family(Family::exact, 1, 3), build_family(Family::nae, 0, 3)},
        {BoolRelation::disequality(), BoolRelation::disequality()}});
    for (int trial = 0; trial < 30; ++trial) {
        auto x = testing::random_instance(rng, t, 8, 6);
        std::stringstream io;
        write_instance(io, x);
        auto y = parse_instance(io);
        CHECK(y.var_count == x.var_count);
        REQUIRE(y.constraints.size() == x.constraints.size());
        for (std::size_t i = 0; i < x.constraints.size(); ++i) {
            CHECK(y.constraints[i].pair_index == x.constraints[i].pair_index);
            CHECK(y.constraints[i].vars == x.constraints[i].vars);
        }
    }
}

TEST_CASE("instance errors")
{
    auto fails = [](const std::string & text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(parse_instance(in), ParseError);
    };
    fails("");
    fails("vars x\n");
    fails("vars 2\nc 0 0 2\n");
    fails("vars 2\nc -1 0 1\n");
    fails("vars 2\nd 0 0 1\n");
    fails("c 0 0\n");
}

TEST_CASE("function files round-trip")
{
    for (auto f : {majority(3), parity(4), alternating_threshold(5), constant_function(2, 2, 3)}) {
        std::stringstream io;
        write_function(io, f);
        CHECK(parse_function(io) == f);
    }
    std::istringstream bad("fn 2 2\n0110 1\n");
    CHECK_THROWS_AS(parse_function(bad), ParseError);
    std::istringstream short_table("fn 2 2\n011\n");
    CHECK_THROWS_AS(parse_function(short_table), ParseError);
    std::istringstream extra("fn 1 2\n01\n01\n");
    CHECK_THROWS_AS(parse_function(extra), ParseError);
}
