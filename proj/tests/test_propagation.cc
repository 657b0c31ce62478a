#include <pcsp/certificates.hh>

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace pcsp;

namespace
{
    auto q_of(const ProofContext & ctx) -> BoolRelation { return ctx.relations().second; }
}

TEST_CASE("engine basics")
{
    auto neq = BoolRelation::disequality();
    PropagationEngine e(5);
    e.add_constraint({0, 1}, neq);
    e.add_constraint({1, 2}, neq);
    CHECK(e.run());
    CHECK(e.relation(0, 2) == 0);
    CHECK(e.relation(0, 1) == 1);
    CHECK_FALSE(e.relation(0, 3));
    CHECK_FALSE(e.absolute(0));

    e.add_constraint({0, 2}, neq);
    CHECK_FALSE(e.run());
    CHECK(e.contradiction());
    CHECK_FALSE(e.reason().empty());
}

TEST_CASE("constant tuples outside NAE fix nothing but refute")
{
    PropagationEngine e(3);
    e.add_constraint({1, 1, 1}, build_family(Family::nae, 0, 3));
    CHECK_FALSE(e.run());
}

TEST_CASE("negations tie u_k to u_{n-k}")
{
    PropagationEngine e(9);
    e.add_negation(2);
    CHECK(e.run());
    CHECK(e.relation(2, 7) == 1);
}

TEST_CASE("(1,3) at p = 7 forces the threshold pattern")
{
    auto ctx = ProofContext::make(1, 3, CaseTag::four_a, 7, 0, full_preset());
    auto result = propagate(gen_stepone_chain(ctx), q_of(ctx), ctx);
    CHECK(result.status == PropagationResult::Status::complete);
    CHECK(result.mismatched.empty());
    for (long k = 0; k <= 32; ++k) {
        REQUIRE(result.relative.contains(k));
        CHECK(result.relative.at(k) == (k <= 16 ? 0 : 1));
    }
}

TEST_CASE("case 1 fixes u_0 absolutely")
{
    auto ctx = ProofContext::make(2, 5, CaseTag::one, 11, 0, desk_preset());
    auto result = propagate(gen_stepone_chain(ctx), q_of(ctx), ctx);
    CHECK(result.status == PropagationResult::Status::complete);
    REQUIRE(result.absolute.contains(0));
    CHECK(result.absolute.at(0) == 0);
}

TEST_CASE("a chain with a tuple removed is reported unforced")
{
    auto ctx = ProofContext::make(1, 3, CaseTag::four_a, 7, 0, desk_preset());
    auto chain = gen_stepone_chain(ctx);
    chain.erase(chain.begin() + 3);
    auto result = propagate(chain, q_of(ctx), ctx);
    CHECK(result.status == PropagationResult::Status::unforced);
    CHECK_FALSE(result.unforced.empty());
    CHECK(result.mismatched.empty());
}

TEST_CASE("the fixpoint does not depend on constraint order")
{
    std::mt19937 rng(83);
    std::vector<ProofContext> contexts{ProofContext::make(1, 3, CaseTag::four_a, 7, 0, desk_preset()),
        ProofContext::make(2, 4, CaseTag::three, 5, 0, desk_preset()),
        ProofContext::make(2, 5, CaseTag::four_b, 11, 0, desk_preset())};
    for (const auto & ctx : contexts) {
        auto chain = gen_stepone_chain(ctx);
        auto reference = propagate(chain, q_of(ctx), ctx);
        for (int trial = 0; trial < 10; ++trial) {
            auto shuffled = chain;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            auto result = propagate(shuffled, q_of(ctx), ctx);
            CHECK(result.status == reference.status);
            CHECK(result.relative == reference.relative);
            CHECK(result.absolute == reference.absolute);
        }
        // dropping a random tuple also gives the same answer in any order
        auto partial = chain;
        partial.erase(partial.begin() + static_cast<long>(rng() % partial.size()));
        auto partial_ref = propagate(partial, q_of(ctx), ctx);
        std::shuffle(partial.begin(), partial.end(), rng);
        CHECK(propagate(partial, q_of(ctx), ctx).relative == partial_ref.relative);
    }
}
