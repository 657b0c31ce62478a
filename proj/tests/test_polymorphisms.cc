#include <pcsp/polymorphisms.hh>

#include <doctest.h>

#include <bit>
#include <random>

#include "helpers.hh"

using namespace pcsp;

namespace
{
    auto one_in_three_nae() -> Template
    {
        return Template({{build_family(Family::exact, 1, 3), build_family(Family::nae, 0, 3)}});
    }

    auto odd3_neq() -> Template
    {
        return Template({{build_family(Family::odd, 0, 3), build_family(Family::odd, 0, 3)},
            {BoolRelation::disequality(), BoolRelation::disequality()}});
    }

    auto identity_1() -> BoolFunction { return projection(1, 0); }

    auto negation_1() -> BoolFunction { return BoolFunction::from_string(1, 2, "10"); }
}

TEST_CASE("truth-table layout puts the first argument first")
{
    auto f = projection(3, 0);
    CHECK(f.to_string() == "00001111");
    CHECK(f.index_of(std::vector<int>{1, 0, 1}) == 5);
    CHECK(f.args_of(6) == std::vector<int>{1, 1, 0});
    CHECK_THROWS(BoolFunction::from_string(2, 2, "012"));
    CHECK_THROWS(BoolFunction::from_string(2, 2, "0120"));
    CHECK_THROWS(BoolFunction(30));
}

TEST_CASE("minors")
{
    CHECK(minor(projection(2, 0), MinorMap{2, 1, {0, 0}}) == identity_1());
    CHECK(minor(majority(3), MinorMap{3, 2, {0, 0, 1}}) == projection(2, 0));
    CHECK_THROWS(minor(majority(3), MinorMap{2, 2, {0, 1}}));
    CHECK_THROWS(minor(majority(3), MinorMap{3, 2, {0, 1, 2}}));
}

TEST_CASE("minor composition law")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto f = testing::random_function(rng, 4);
        auto pi = testing::random_minor_map(rng, 4, 3);
        auto rho = testing::random_minor_map(rng, 3, 5);
        CHECK(minor(minor(f, pi), rho) == minor(f, pi.then(rho)));
    }
}

TEST_CASE("h1 identities")
{
    CHECK(satisfies_h1(majority(3), majority(3), H1Identity{3, {0, 1, 2}, {2, 0, 1}}));
    CHECK_FALSE(satisfies_h1(projection(2, 0), projection(2, 0), H1Identity{2, {0, 1}, {1, 0}}));
    std::mt19937 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        auto f = testing::random_function(rng, 3);
        CHECK(satisfies_h1(f, f, H1Identity{3, {0, 2, 1}, {0, 2, 1}}));
    }
    CHECK_THROWS(satisfies_h1(majority(3), majority(3), H1Identity{2, {0, 1}, {0, 1, 1}}));
    CHECK_THROWS(satisfies_h1(majority(3), majority(3), H1Identity{2, {0, 1, 2}, {0, 1, 1}}));
}

TEST_CASE("polymorphism checks")
{
    CHECK(is_polymorphism(parity(3), odd3_neq()));
    CHECK(is_polymorphism(alternating_threshold(3), one_in_three_nae()));
    CHECK(is_polymorphism(alternating_threshold(5), one_in_three_nae()));
    CHECK_FALSE(is_polymorphism(constant_function(3, 1), one_in_three_nae()));
    CHECK_FALSE(is_polymorphism(majority(3), one_in_three_nae()));
    CHECK(is_polymorphism(parity(5), odd3_neq()));
    CHECK_FALSE(is_polymorphism(parity(4), odd3_neq()));
}

TEST_CASE("polymorphisms are closed under minors")
{
    std::mt19937 rng(13);
    auto t = one_in_three_nae();
    auto pols = collect_polymorphisms(t, 3);
    REQUIRE_FALSE(pols.empty());
    for (const auto & f : pols)
        for (int trial = 0; trial < 5; ++trial) {
            auto target = std::uniform_int_distribution<int>(1, 4)(rng);
            CHECK(is_polymorphism(minor(f, testing::random_minor_map(rng, 3, target)), t));
        }
}

TEST_CASE("cyclic functions")
{
    CHECK(is_cyclic(majority(3)));
    CHECK_FALSE(is_cyclic(projection(3, 0)));
    CHECK(is_cyclic(negation_1()));
    CHECK(is_cyclic(alternating_threshold(1)));
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial)
        CHECK(is_cyclic(testing::random_cyclic(rng, 4, 3)));
}

TEST_CASE("symmetric functions are cyclic")
{
    for (int n = 1; n <= 6; ++n) {
        CHECK(is_cyclic(parity(n)));
        CHECK(is_cyclic(constant_function(n, 1)));
        if (n % 2 == 1)
            CHECK(is_cyclic(majority(n)));
    }
}

TEST_CASE("composition of cyclic functions")
{
    CHECK(compose_eq1(parity(3), 3) == parity(9));
    std::mt19937 rng(19);
    for (int d = 2; d <= 3; ++d) {
        auto c = testing::random_function(rng, 3, d);
        auto t = compose_eq1(c, 3);
        for (int a = 0; a < d; ++a) {
            std::vector<int> all(9, a), col(3, a);
            auto inner = c(col);
            std::vector<int> outer(3, inner);
            CHECK(t(all) == c(outer));
        }
    }
    CHECK_THROWS(compose_eq1(parity(2), 3));
}

TEST_CASE("doubly cyclic functions")
{
    std::mt19937 rng(23);
    for (int trial = 0; trial < 20; ++trial)
        CHECK(is_doubly_cyclic(compose_eq1(testing::random_cyclic(rng, 3, 3), 3), 3));
    CHECK_FALSE(is_doubly_cyclic(projection(9, 0), 3));
    CHECK(is_doubly_cyclic(parity(9), 3));
    CHECK_THROWS(is_doubly_cyclic(parity(8), 3));
}

TEST_CASE("sigma transform")
{
    std::mt19937 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        auto t = testing::random_function(rng, 9);
        CHECK(sigma_transform(sigma_transform(t, 3), 3) == t);
    }
    auto seen_change = false;
    for (int trial = 0; trial < 10 && ! seen_change; ++trial) {
        auto t = testing::random_function(rng, 9);
        seen_change = ! (sigma_transform(t, 3) == t);
    }
    CHECK(seen_change);
    for (int d = 2; d <= 3; ++d)
        for (int trial = 0; trial < 20; ++trial) {
            auto t = compose_eq1(testing::random_cyclic(rng, 3, d), 3);
            CHECK(is_cyclic(sigma_transform(t, 3)));
        }
    CHECK_THROWS(sigma_transform(parity(8), 3));
}

TEST_CASE("block equivalences")
{
    auto sim = derive_sim(parity(3));
    CHECK(sim.block_count() == 2);
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v)
            CHECK((sim.block_of[static_cast<std::size_t>(u)] == sim.block_of[static_cast<std::size_t>(v)])
                == (std::popcount(static_cast<unsigned>(u)) % 2 == std::popcount(static_cast<unsigned>(v)) % 2));
    CHECK(derive_sim(majority(3)).block_count() <= 16);
    CHECK(derive_sim(identity_1()).block_count() <= 2);
}

TEST_CASE("b-bounded functions")
{
    std::mt19937 rng(31);
    for (int d = 2; d <= 3; ++d)
        for (int trial = 0; trial < 10; ++trial) {
            auto c = testing::random_cyclic(rng, 3, d);
            CHECK(is_b_bounded(compose_eq1(c, 3), 3, derive_sim(c)));
        }
    BlockEquivalence one{3, std::vector<int>(8, 0)};
    CHECK_FALSE(is_b_bounded(parity(9), 3, one));
    BlockEquivalence singletons{3, {0, 1, 2, 3, 4, 5, 6, 7}};
    CHECK(is_b_bounded(parity(9), 3, singletons));
    CHECK(is_b_bounded(compose_eq1(majority(3), 3), 3, singletons));
    BlockEquivalence broken{3, {0, 1, 2}};
    CHECK_THROWS(is_b_bounded(parity(9), 3, broken));
}

TEST_CASE("polymorphism enumeration")
{
    Template neq({{BoolRelation::disequality(), BoolRelation::disequality()}});
    auto unary = collect_polymorphisms(neq, 1);
    REQUIRE(unary.size() == 2);
    CHECK(unary[0] == identity_1());
    CHECK(unary[1] == negation_1());

    auto t = one_in_three_nae();
    auto one = collect_polymorphisms(t, 1);
    REQUIRE(one.size() == 2);
    CHECK(one[0] == identity_1());
    CHECK(one[1] == negation_1());

    EnumerationOptions exhaustive;
    exhaustive.mode = EnumerationOptions::Mode::exhaustive;
    EnumerationOptions guided;
    guided.mode = EnumerationOptions::Mode::guided;
    auto a = collect_polymorphisms(t, 3, exhaustive);
    auto b = collect_polymorphisms(t, 3, guided);
    CHECK(a.size() == 36);
    CHECK(a == b);
    for (const auto & f : a)
        CHECK(is_polymorphism(f, t));

    EnumerationOptions too_big;
    too_big.mode = EnumerationOptions::Mode::exhaustive;
    CHECK_THROWS(collect_polymorphisms(t, 5, too_big));
}

TEST_CASE("invariance-restricted enumeration finds exactly the invariant polymorphisms")
{
    auto t = one_in_three_nae();
    EnumerationOptions cyclic;
    cyclic.invariance = cyclic_generators(4);
    auto restricted = collect_polymorphisms(t, 4, cyclic);
    std::size_t cyclic_count = 0;
    for (const auto & f : collect_polymorphisms(t, 4))
        cyclic_count += is_cyclic(f) ? 1 : 0;
    CHECK(restricted.size() == cyclic_count);
    for (const auto & f : restricted)
        CHECK(is_cyclic(f));
}
