#include <pcsp/certificates.hh>
#include <pcsp/errors.hh>

#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "mutations.hh"

using namespace pcsp;

namespace
{
    auto ctx137(int b = 0) -> ProofContext { return ProofContext::make(1, 3, CaseTag::four_a, 7, b, desk_preset()); }

    auto ctx245() -> ProofContext { return ProofContext::make(2, 4, CaseTag::four_a, 5, 0, desk_preset()); }

    auto sum_of(const std::vector<long> & ks) -> long { return std::accumulate(ks.begin(), ks.end(), 0L); }

    /// s non-negative entries in [0, n] summing to total.
    auto random_split(std::mt19937 & rng, int s, long n, long total) -> std::vector<long>
    {
        std::vector<long> ks(static_cast<std::size_t>(s), 0);
        auto left = total;
        for (int i = 0; i < s; ++i) {
            auto rest = static_cast<long>(s - i - 1) * n;
            auto lo = std::max(0L, left - rest);
            auto hi = std::min(n, left);
            auto k = std::uniform_int_distribution<long>(lo, hi)(rng);
            ks[static_cast<std::size_t>(i)] = k;
            left -= k;
        }
        std::shuffle(ks.begin(), ks.end(), rng);
        return ks;
    }

    /// An almost rectangle with the given step, rotated so it starts with its first run.
    auto random_almost_rectangle(std::mt19937 & rng, long p, int low, int step) -> EvalTuple
    {
        auto high_count = std::uniform_int_distribution<long>(1, p - 1)(rng);
        EvalTuple z(static_cast<std::size_t>(p), low);
        for (long i = 0; i < high_count; ++i)
            z[static_cast<std::size_t>(i)] = low + step;
        return z;
    }
}

TEST_CASE("contexts")
{
    auto ctx = ProofContext::make(1, 3, CaseTag::four_a, 7, 0);
    CHECK(ctx.n == 49);
    CHECK(ctx.a == 16);
    CHECK(ctx.theta() == mpq_class(1, 3));
    CHECK(ctx.m_far() == 1);
    CHECK(ctx.m_close() == 2);
    CHECK(ctx245().a == 12);
    CHECK_THROWS_AS(ProofContext::make(1, 3, CaseTag::four_a, 8, 0), std::invalid_argument);
    CHECK_THROWS_AS(ProofContext::make(1, 3, CaseTag::four_a, 11, 0), std::invalid_argument);
    CHECK_THROWS_AS(ProofContext::make(1, 3, CaseTag::two, 7, 0), std::invalid_argument);
    CHECK(parse_case_tag("4", 1, 3) == CaseTag::four_a);
    CHECK(parse_case_tag("4", 2, 5) == CaseTag::four_b);
    CHECK_THROWS(parse_case_tag("5", 1, 3));
    CHECK(is_prime(13));
    CHECK_FALSE(is_prime(49));
    CHECK(preset_by_name("desk") == desk_preset());
    CHECK_THROWS(preset_by_name("lab"));
}

TEST_CASE("areas")
{
    CHECK(area(EvalTuple(7, 7)) == 1);
    CHECK(area(EvalTuple(7, 0)) == 0);
    CHECK(area(step_one_tuple(16, 7)) == mpq_class(16, 49));
    CHECK(area_1d(16, 49) == mpq_class(16, 49));
    CHECK(step_one_tuple(16, 7) == EvalTuple{3, 3, 2, 2, 2, 2, 2});
}

TEST_CASE("tuple calculus")
{
    EvalTuple z{3, 3, 3, 2, 2, 2, 2};
    CHECK(is_almost_rectangle(z));
    CHECK(step_size(z) == 1);
    CHECK_FALSE(is_almost_rectangle(EvalTuple{3, 2, 3, 2, 2, 2, 2}));
    CHECK(cyclic_shift(z, 1) == EvalTuple{2, 3, 3, 3, 2, 2, 2});
    CHECK(canonical_rotation(cyclic_shift(z, 4)) == z);
    CHECK(complement(z, 7) == EvalTuple{4, 4, 4, 5, 5, 5, 5});
}

TEST_CASE("1-D plausibility")
{
    auto ctx = ctx137();
    CHECK(is_plausible_1d({16, 16, 17}, ctx));
    CHECK_FALSE(is_plausible_1d({16, 16, 16}, ctx));
    CHECK_FALSE(is_plausible_1d({50, 0, -1}, ctx));
    CHECK_THROWS(is_plausible_1d({16, 33}, ctx));
    auto two = ProofContext::make(2, 4, CaseTag::two, 5, 0, desk_preset());
    CHECK(is_plausible_1d({0, 0, 0, 0}, two));
}

TEST_CASE("1-D shift matrices")
{
    auto ctx = ctx137();
    auto m = build_shift_matrix_1d({16, 16, 17}, ctx);
    REQUIRE(m.valid);
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 49);
    for (std::size_t c = 0; c < m.cols(); ++c)
        CHECK(m.column_weight(c) == 1);
    for (std::size_t r = 0; r < 3; ++r)
        CHECK(std::accumulate(m.bits[r].begin(), m.bits[r].end(), 0) == (r == 2 ? 17 : 16));

    auto even = ProofContext::make(2, 4, CaseTag::four_a, 5, 0, desk_preset());
    auto tiled = build_shift_matrix_1d({10, 10, 10, 20}, even);
    REQUIRE(tiled.valid);
    for (std::size_t c = 0; c < tiled.cols(); ++c)
        CHECK(tiled.column_weight(c) == 2);

    CHECK_THROWS(build_shift_matrix_1d({16, 16, 16}, ctx));
}

TEST_CASE("shift matrices of random plausible tuples land in P")
{
    std::mt19937 rng(61);
    for (auto ctx : {ctx137(), ctx245(), ProofContext::make(2, 5, CaseTag::four_b, 11, 0, desk_preset())}) {
        auto [p_rel, q_rel] = ctx.relations();
        for (int trial = 0; trial < 100; ++trial) {
            auto ks = random_split(rng, ctx.s, ctx.n, ctx.r * ctx.n);
            REQUIRE(is_plausible_1d(ks, ctx));
            auto m = build_shift_matrix_1d(ks, ctx, p_rel);
            CHECK(m.valid);
            for (std::size_t c = 0; c < m.cols(); ++c)
                CHECK(m.column_weight(c) == ctx.r);
            CHECK(shift_columns_in(ks, ctx.n, p_rel));
        }
    }
}

TEST_CASE("2-D shift matrices of random plausible tuples land in P")
{
    std::mt19937 rng(67);
    for (auto ctx : {ctx137(), ctx245()}) {
        auto [p_rel, q_rel] = ctx.relations();
        for (int trial = 0; trial < 100; ++trial) {
            // column-wise random splits of r*p give a 2-D plausible family
            std::vector<EvalTuple> rows(static_cast<std::size_t>(ctx.s), EvalTuple(static_cast<std::size_t>(ctx.p)));
            for (long i = 0; i < ctx.p; ++i) {
                auto column = random_split(rng, ctx.s, ctx.p, ctx.r * ctx.p);
                for (int j = 0; j < ctx.s; ++j)
                    rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                        static_cast<int>(column[static_cast<std::size_t>(j)]);
            }
            REQUIRE(is_plausible_2d(rows, ctx));
            auto m = build_shift_matrix_2d(rows, ctx, p_rel);
            CHECK(m.valid);
            CHECK(m.cols() == static_cast<std::size_t>(ctx.n));
            for (std::size_t c = 0; c < m.cols(); ++c)
                CHECK(m.column_weight(c) == ctx.r);
            CHECK(shift_columns_in_2d(rows, ctx, p_rel));
        }
    }
}

TEST_CASE("completion of an almost rectangle")
{
    auto ctx = ctx137();
    EvalTuple z{3, 3, 3, 2, 2, 2, 2};
    CHECK(area(z) == mpq_class(17, 49));
    auto done = complete_plausible(z, ctx.m_far(), ctx);
    REQUIRE(done.rows.size() == 1);
    CHECK(done.rows[0] == z);
    for (std::size_t i = 0; i < z.size(); ++i)
        CHECK(done.rows[0][i] + done.l[i] == 7);
    CHECK(is_almost_rectangle(done.l));

    auto rect = complete_plausible(EvalTuple(7, 2), ctx.m_far(), ctx, false);
    CHECK(step_size(rect.l) == 0);

    CHECK_THROWS(complete_plausible(EvalTuple{3, 2, 3, 2, 2, 2, 2}, 1, ctx));
    CHECK_THROWS(complete_plausible(z, 3, ctx));
}

TEST_CASE("completion postconditions")
{
    auto ctx = ctx245();
    auto [p_rel, q_rel] = ctx.relations();
    std::mt19937 rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        auto z = random_almost_rectangle(rng, ctx.p, std::uniform_int_distribution<int>(1, 2)(rng), 1);
        for (auto m : {ctx.m_far(), ctx.m_close()}) {
            Completion done;
            try {
                done = complete_plausible(z, m, ctx, false);
            }
            catch (const std::invalid_argument &) {
                continue;
            }
            CHECK(done.rows.size() == static_cast<std::size_t>(m));
            mpq_class total = area(done.l);
            for (const auto & row : done.rows) {
                CHECK(area(row) == area(z));
                total += area(row);
            }
            CHECK(total == ctx.r);
            if (m == ctx.m_close()) {
                auto rows = done.rows;
                rows.push_back(done.l);
                CHECK(is_plausible_2d(rows, ctx));
                CHECK(shift_columns_in_2d(rows, ctx, p_rel));
            }
            else if (step_size(done.l) >= 2) {
                auto rows = done.rows;
                auto [l1, l2] = halve(done.l);
                rows.push_back(l1);
                rows.push_back(l2);
                CHECK(is_plausible_2d(rows, ctx));
            }
        }
    }
}

TEST_CASE("halving")
{
    auto [lo, hi] = halve(EvalTuple{5, 5, 3, 3});
    CHECK(lo == EvalTuple{2, 2, 1, 1});
    CHECK(hi == EvalTuple{3, 3, 2, 2});
    CHECK_THROWS(halve(EvalTuple{3, 3, 2, 2}));

    std::mt19937 rng(73);
    for (int trial = 0; trial < 100; ++trial) {
        auto step = std::uniform_int_distribution<int>(2, 6)(rng);
        auto l = random_almost_rectangle(rng, 11, std::uniform_int_distribution<int>(0, 4)(rng), step);
        auto [l1, l2] = halve(l);
        CHECK(area(l1) + area(l2) == area(l));
        CHECK(step_size(l1) < step_size(l));
        CHECK(step_size(l2) < step_size(l));
        CHECK(is_almost_rectangle(l1));
        CHECK(is_almost_rectangle(l2));
    }
}

TEST_CASE("step-one chain for (1,3) at p = 7")
{
    auto ctx = ctx137();
    auto chain = gen_stepone_chain(ctx);
    std::vector<std::vector<long>> tuples;
    for (const auto & step : chain)
        if (step.kind == ChainStep::Kind::constraint) {
            CHECK(is_plausible_1d(step.ks, ctx));
            CHECK(sum_of(step.ks) == 49);
            tuples.push_back(step.ks);
        }
    REQUIRE(tuples.size() >= 2);
    CHECK(tuples[0] == std::vector<long>{16, 16, 17});
    CHECK(tuples[1] == std::vector<long>{15, 17, 17});
    auto contains = [&](std::vector<long> ks) {
        return std::find(tuples.begin(), tuples.end(), ks) != tuples.end();
    };
    for (long i = 2; i <= 16; ++i)
        CHECK(contains({16 + i, 15, 18 - i}));
    for (long i = 1; i <= 16; ++i)
        CHECK(contains({16 - i, 16 + i, 17}));
}

TEST_CASE("step-one chains are plausible in every case")
{
    std::vector<ProofContext> contexts{ctx137(), ctx245(), ProofContext::make(2, 4, CaseTag::three, 5, 0, desk_preset()),
        ProofContext::make(2, 4, CaseTag::two, 5, 0, desk_preset()),
        ProofContext::make(2, 5, CaseTag::one, 11, 0, desk_preset()),
        ProofContext::make(2, 5, CaseTag::four_b, 11, 0, desk_preset()),
        ProofContext::make(1, 5, CaseTag::four_a, 11, 0, desk_preset())};
    for (const auto & ctx : contexts) {
        auto chain = gen_stepone_chain(ctx);
        auto [p_rel, q_rel] = ctx.relations();
        for (const auto & step : chain)
            if (step.kind == ChainStep::Kind::constraint) {
                CHECK(is_plausible_1d(step.ks, ctx));
                CHECK(shift_columns_in(step.ks, ctx.n, p_rel));
            }
            else
                CHECK(ctx.uses_negation());
    }
}

TEST_CASE("first step for (2,4) at p = 5")
{
    auto chain = gen_stepone_chain(ctx245());
    REQUIRE_FALSE(chain.empty());
    CHECK(chain[0].ks == std::vector<long>{12, 12, 13, 13});
    CHECK(sum_of(chain[0].ks) == 50);
}

TEST_CASE("case 2 chain is made of constant tuples")
{
    auto ctx = ProofContext::make(2, 4, CaseTag::two, 5, 0, desk_preset());
    auto chain = gen_stepone_chain(ctx);
    std::set<long> constants;
    for (const auto & step : chain)
        if (step.kind == ChainStep::Kind::constraint) {
            CHECK(std::adjacent_find(step.ks.begin(), step.ks.end(), std::not_equal_to<>()) == step.ks.end());
            CHECK(step.ks[0] <= ctx.a);
            constants.insert(step.ks[0]);
        }
    for (long k = 0; k <= ctx.a; ++k)
        CHECK(constants.contains(k));
}

TEST_CASE("base-chain certificates verify")
{
    for (auto ctx : {ctx137(), ctx245(), ProofContext::make(2, 5, CaseTag::one, 11, 0, desk_preset())}) {
        auto cert = gen_certificate(ctx);
        CHECK(cert.conclusion == Claim::Kind::step_one_tameness);
        auto v = verify_certificate(cert, ctx.template_for());
        CHECK_MESSAGE(v.ok, v.reason);
        CHECK(cert.nodes[static_cast<std::size_t>(cert.conclusion_node)].claim.k == 2 * ctx.a);
    }
}

TEST_CASE("full certificate for (1,3) with b = 1")
{
    auto ctx = ProofContext::make(1, 3, CaseTag::four_a, 13, 1, desk_preset());
    auto cert = gen_certificate(ctx);
    CHECK(cert.conclusion == Claim::Kind::contradiction);
    auto v = verify_certificate(cert, ctx.template_for());
    CHECK_MESSAGE(v.ok, v.reason);

    SUBCASE("json round-trip")
    {
        auto text = certificate_to_json(cert);
        CHECK(certificate_from_json(text) == cert);
        CHECK(certificate_to_json(certificate_from_json(text)) == text);
        CHECK_THROWS_AS(certificate_from_json("{}"), ParseError);
        CHECK_THROWS_AS(certificate_from_json(text.substr(0, text.size() / 2)), ParseError);
    }

    SUBCASE("generation is deterministic")
    {
        CHECK(gen_certificate(ctx) == cert);
    }

    SUBCASE("mutations are rejected")
    {
        std::mt19937 rng(79);
        for (int trial = 0; trial < 40; ++trial) {
            auto bad = cert;
            auto what = testing::mutate(bad, rng);
            auto result = verify_certificate(bad, ctx.template_for());
            CHECK_MESSAGE(! result.ok, what);
        }
    }

    SUBCASE("replay against a larger Q is rejected")
    {
        Template full({{build_family(Family::exact, 1, 3), build_family(Family::full, 0, 3)}});
        CHECK_FALSE(verify_certificate(cert, full).ok);
    }
}

TEST_CASE("minimal p search")
{
    CHECK(search_minimal_p(1, 3, CaseTag::four_a, 1, desk_preset(), 13) == 13L);
    CHECK_FALSE(search_minimal_p(1, 3, CaseTag::four_a, 1, desk_preset(), 12));
    CHECK_THROWS_AS(gen_certificate(ProofContext::make(1, 3, CaseTag::four_a, 7, 1, desk_preset())), ProofSearchFailure);
}
