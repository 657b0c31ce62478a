// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <pcsp/certificates.hh>
#include <pcsp/classifier.hh>
#include <pcsp/errors.hh>
#include <pcsp/polymorphisms.hh>
#include <pcsp/solvers.hh>

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "helpers.hh"
#include "mutations.hh"

using namespace pcsp;

namespace
{
    // Wall-clock budgets in seconds.
    constexpr double budget_table = 1.0;
    constexpr double budget_promise = 60.0;
    constexpr double budget_pipeline = 30.0;
    constexpr double budget_shift = 30.0;
    constexpr double budget_chains = 5.0;
    constexpr double budget_roundtrip = 30.0;
    constexpr double budget_pigeonhole = 600.0;
    constexpr double budget_concrete = 60.0;

    constexpr int promise_instances = 1000;
    constexpr int promise_max_vars = 10;
    constexpr int promise_max_constraints = 15;
    constexpr int pipeline_functions = 20;
    constexpr int shift_tuples = 200;
    constexpr int mutations_per_certificate = 100;
    constexpr long minimal_p_expected = 13;
    constexpr long minimal_p_search_limit = 1009;

    struct Outcome
    {
        bool ok = true;
        std::string detail;
    };

    int failures = 0;

    auto run(int id, const std::string & title, double budget, const std::function<Outcome()> & body) -> void
    {
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = body();
        }
        catch (const std::exception & e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        auto in_time = seconds <= budget;
        auto pass = out.ok && in_time;
        failures += pass ? 0 : 1;
        std::printf("criterion %d: %s  %s  [%.2fs, budget %.0fs%s]  %s\n", id, pass ? "PASS" : "FAIL", title.c_str(), seconds,
            budget, in_time ? "" : ", over budget", out.detail.c_str());
        std::fflush(stdout);
    }

    auto expected_cell(const std::string & family, int r, int s) -> char
    {
        if (family.starts_with("(odd"))
            return 'F';
        if (family.starts_with("(<=r"))
            return r == 1 || s <= 2 ? 'F' : 'N';
        if (family.find("nae") != std::string::npos)
            return (r % 2 == 1 && s % 2 == 0) || s <= 2 ? 'F' : 'N';
        // (r-in-s, <=(2r-1)-in-s): r = 1 sits inside 2-SAT; 1 < r < s/2 is item 1; r = s/2 even is item 3;
        // r = s/2 odd is the open case
        if (r == 1 || s <= 2)
            return 'F';
        if (2 * r < s)
            return 'N';
        return r % 2 == 0 ? 'N' : '?';
    }
}

namespace
{
    auto criterion_table() -> Outcome
    {
        auto rows = classification_table(8);
        int cells = 0;
        for (const auto & row : rows) {
            auto width = row.family.starts_with("(odd") ? 1 : row.family.starts_with("(r-in-s, nae") ? row.s - 1 : row.s / 2;
            if (static_cast<int>(row.cells.size()) != width)
                return {false, row.family + " s=" + std::to_string(row.s) + " has " + std::to_string(row.cells.size()) + " cells"};
            for (int r = 1; r <= width; ++r) {
                auto want = expected_cell(row.family, r, row.s);
                auto got = row.cells[static_cast<std::size_t>(r - 1)];
                if (want != got)
                    return {false, row.family + " s=" + std::to_string(row.s) + " r=" + std::to_string(r) + ": got " + got
                            + ", want " + want};
                ++cells;
            }
        }
        auto v = classify(threshold_template(1, 3, false));
        if (v.complexity != Complexity::tractable || v.finiteness != Finiteness::not_finitely_tractable)
            return {false, "(1-in-3, NAE-3): " + v.line()};
        return {true, std::to_string(cells) + " cells plus (1-in-3, NAE-3) matched"};
    }

    auto catalog() -> std::vector<std::pair<std::string, Template>>
    {
        std::vector<std::pair<std::string, Template>> out;
        for (int s = 2; s <= 5; ++s) {
            out.emplace_back("odd-in-" + std::to_string(s), parity_template(s, true, true));
            out.emplace_back("even-in-" + std::to_string(s), parity_template(s, false, true));
            for (int r = 1; 2 * r <= s; ++r) {
                out.emplace_back("<=" + std::to_string(r) + "-in-" + std::to_string(s), majority_template(r, s, true));
                out.emplace_back(std::to_string(r) + "-in-" + std::to_string(s) + ", <=" + std::to_string(2 * r - 1),
                    Template({{build_family(Family::exact, r, s), build_family(Family::atmost, 2 * r - 1, s)},
                        {BoolRelation::disequality(), BoolRelation::disequality()}}));
            }
            for (int r = 1; r < s; ++r) {
                out.emplace_back(std::to_string(r) + "-in-" + std::to_string(s) + " nae", threshold_template(r, s, false));
                out.emplace_back(std::to_string(r) + "-in-" + std::to_string(s) + " nae+neq", threshold_template(r, s, true));
            }
        }
        return out;
    }

    auto criterion_promise() -> Outcome
    {
        std::mt19937 rng(2024);
        long checked = 0, gap = 0, skipped = 0;
        for (const auto & [name, t] : catalog()) {
            if (classify(t).complexity != Complexity::tractable) {
                ++skipped;
                continue;
            }
            for (int i = 0; i < promise_instances; ++i) {
                auto x = testing::random_instance(rng, t, promise_max_vars, promise_max_constraints);
                auto truth = brute_force_promise(t, x);
                auto got = solve_pcsp(t, x);
                if (truth.a_sat && got.answer == Answer::no)
                    return {false, name + ": answered No although X -> A"};
                if (! truth.b_sat && got.answer == Answer::yes)
                    return {false, name + ": answered Yes although X -/-> B"};
                if (got.witness && ! satisfies(x, t, Side::b, *got.witness))
                    return {false, name + ": witness is not a B-solution"};
                gap += ! truth.a_sat && truth.b_sat ? 1 : 0;
                ++checked;
            }
        }
        return {checked > 0, std::to_string(checked) + " instances, 0 violations, " + std::to_string(gap)
                + " in the promise gap, " + std::to_string(skipped) + " non-tractable templates skipped"};
    }

    auto criterion_pipeline() -> Outcome
    {
        std::mt19937 rng(7);
        int done = 0;
        for (int d = 2; d <= 3; ++d)
            for (int i = 0; i < pipeline_functions; ++i) {
                auto c = testing::random_cyclic(rng, 3, d);
                auto t = compose_eq1(c, 3);
                if (! is_doubly_cyclic(t, 3))
                    return {false, "composition not doubly cyclic: " + c.to_string()};
                auto sim = derive_sim(c);
                long limit = 1;
                for (int k = 0; k < d * d; ++k)
                    limit *= d;
                if (sim.block_count() > limit)
                    return {false, "too many blocks for " + c.to_string()};
                if (! is_b_bounded(t, 3, sim))
                    return {false, "not b-bounded: " + c.to_string()};
                if (! is_cyclic(sigma_transform(t, 3)))
                    return {false, "transpose not cyclic: " + c.to_string()};
                ++done;
            }
        return {true, std::to_string(done) + " cyclic inner functions over domains 2 and 3"};
    }
}

namespace
{
    auto random_split(std::mt19937 & rng, int s, long n, long total) -> std::vector<long>
    {
        std::vector<long> ks(static_cast<std::size_t>(s), 0);
        auto left = total;
        for (int i = 0; i < s; ++i) {
            auto lo = std::max(0L, left - static_cast<long>(s - i - 1) * n);
            auto k = std::uniform_int_distribution<long>(lo, std::min(n, left))(rng);
            ks[static_cast<std::size_t>(i)] = k;
            left -= k;
        }
        std::shuffle(ks.begin(), ks.end(), rng);
        return ks;
    }

    auto columns_in(const ShiftMatrix & m, const BoolRelation & p_rel) -> bool
    {
        if (! m.valid)
            return false;
        std::vector<int> column(m.rows());
        for (std::size_t c = 0; c < m.cols(); ++c) {
            for (std::size_t r = 0; r < m.rows(); ++r)
                column[r] = m.bits[r][c];
            if (! p_rel.contains(column))
                return false;
        }
        return true;
    }

    auto criterion_shift() -> Outcome
    {
        std::mt19937 rng(11);
        int done = 0;
        for (auto ctx : {ProofContext::make(1, 3, CaseTag::four_a, 7, 0), ProofContext::make(2, 4, CaseTag::four_a, 5, 0)}) {
            auto p_rel = ctx.relations().first;
            for (int i = 0; i < shift_tuples; ++i) {
                auto ks = random_split(rng, ctx.s, ctx.n, ctx.r * ctx.n);
                if (! is_plausible_1d(ks, ctx) || ! columns_in(build_shift_matrix_1d(ks, ctx), p_rel))
                    return {false, "1-D tuple failed in (" + std::to_string(ctx.r) + "," + std::to_string(ctx.s) + ")"};
                std::vector<EvalTuple> rows(static_cast<std::size_t>(ctx.s), EvalTuple(static_cast<std::size_t>(ctx.p)));
                for (long col = 0; col < ctx.p; ++col) {
                    auto split = random_split(rng, ctx.s, ctx.p, ctx.r * ctx.p);
                    for (int j = 0; j < ctx.s; ++j)
                        rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(col)] =
                            static_cast<int>(split[static_cast<std::size_t>(j)]);
                }
                if (! is_plausible_2d(rows, ctx) || ! columns_in(build_shift_matrix_2d(rows, ctx), p_rel))
                    return {false, "2-D family failed in (" + std::to_string(ctx.r) + "," + std::to_string(ctx.s) + ")"};
                done += 2;
            }
        }
        return {true, std::to_string(done) + " constructions, every column in P"};
    }

    auto criterion_chains() -> Outcome
    {
        std::string detail;
        for (auto ctx : {ProofContext::make(1, 3, CaseTag::four_a, 7, 0), ProofContext::make(2, 4, CaseTag::four_a, 5, 0)}) {
            auto chain = gen_stepone_chain(ctx);
            for (const auto & step : chain)
                if (step.kind == ChainStep::Kind::constraint && ! is_plausible_1d(step.ks, ctx))
                    return {false, "implausible chain tuple"};
            auto result = propagate(chain, ctx.relations().second, ctx);
            if (result.status != PropagationResult::Status::complete)
                return {false, "propagation incomplete: " + result.reason};
            for (long k = 0; k <= 2 * ctx.a; ++k) {
                auto it = result.relative.find(k);
                if (it == result.relative.end() || it->second != (k > ctx.a ? 1 : 0))
                    return {false, "u_" + std::to_string(k) + " off pattern at p=" + std::to_string(ctx.p)};
            }
            detail += "(" + std::to_string(ctx.r) + "," + std::to_string(ctx.s) + "," + std::to_string(ctx.p)
                + "): split at a=" + std::to_string(ctx.a) + " ";
        }
        return {true, detail};
    }

    auto criterion_roundtrip() -> Outcome
    {
        std::mt19937 rng(13);
        int rejected = 0;
        for (auto ctx : {ProofContext::make(1, 3, CaseTag::four_a, 7, 0), ProofContext::make(2, 4, CaseTag::four_a, 5, 0)}) {
            auto t = ctx.template_for();
            auto cert = gen_certificate(ctx);
            auto v = verify_certificate(cert, t);
            if (! v.ok)
                return {false, "generated certificate rejected: " + v.reason};
            if (certificate_from_json(certificate_to_json(cert)) != cert)
                return {false, "json round-trip changed the certificate"};
            for (int i = 0; i < mutations_per_certificate; ++i) {
                auto bad = cert;
                auto what = testing::mutate(bad, rng);
                auto result = verify_certificate(bad, t);
                auto global = what == "context" || what == "conclusion node";
                if (result.ok)
                    return {false, "mutation accepted: " + what};
                if (! global && result.node < 0)
                    return {false, "rejection without a node id: " + what};
                ++rejected;
            }
        }
        return {true, std::to_string(rejected) + " mutations rejected"};
    }
}

namespace
{
    auto criterion_pigeonhole() -> Outcome
    {
        auto preset = desk_preset();
        auto p = search_minimal_p(1, 3, CaseTag::four_a, 1, preset, minimal_p_search_limit);
        if (! p)
            return {false, "no workable p up to " + std::to_string(minimal_p_search_limit)};
        if (*p != minimal_p_expected)
            return {false, "minimal p is " + std::to_string(*p) + ", expected " + std::to_string(minimal_p_expected)};
        auto ctx = ProofContext::make(1, 3, CaseTag::four_a, *p, 1, preset);
        auto cert = gen_certificate(ctx);
        if (cert.conclusion != Claim::Kind::contradiction)
            return {false, "conclusion is " + to_string(cert.conclusion)};
        auto v = verify_certificate(cert, ctx.template_for());
        if (! v.ok)
            return {false, "rejected at node " + std::to_string(v.node) + ": " + v.reason};

        // integers strictly between θp - 2b and θp, with θ = 1/3
        std::vector<long> heights;
        for (long h = 0; h <= ctx.p; ++h)
            if (3 * h > ctx.p - 6L * ctx.b && 3 * h < ctx.p)
                heights.push_back(h);
        std::set<std::pair<long, long>> covered;
        const auto & last = cert.nodes[static_cast<std::size_t>(cert.conclusion_node)];
        for (auto ref : last.refs) {
            const auto & claim = cert.nodes[static_cast<std::size_t>(ref)].claim;
            if (claim.kind == Claim::Kind::pair_refuted)
                covered.emplace(claim.z21, claim.z22);
        }
        long pairs = 0;
        for (std::size_t i = 0; i < heights.size(); ++i)
            for (std::size_t j = i + 1; j < heights.size(); ++j) {
                if (! covered.contains({heights[i], heights[j]}))
                    return {false, "pair (" + std::to_string(heights[i]) + "," + std::to_string(heights[j]) + ") uncovered"};
                ++pairs;
            }
        return {true, "p=" + std::to_string(*p) + ", " + std::to_string(cert.nodes.size()) + " nodes, "
                + std::to_string(pairs) + " of " + std::to_string(pairs) + " pairs refuted"};
    }

    /// t^σ evaluated on ⟨k⟩: k ones followed by zeros.
    auto u_values(const BoolFunction & ts, long n) -> std::vector<int>
    {
        std::vector<int> u;
        for (long k = 0; k <= n; ++k) {
            std::vector<int> arg(static_cast<std::size_t>(n), 0);
            std::fill(arg.begin(), arg.begin() + k, 1);
            u.push_back(ts(arg));
        }
        return u;
    }

    auto criterion_concrete() -> Outcome
    {
        auto t = threshold_template(1, 3, false);
        auto nae = build_family(Family::nae, 0, 3);

        // p = 3: enumerate the 9-ary doubly cyclic polymorphisms and run the exhaustive 1-D chain
        EnumerationOptions options;
        options.mode = EnumerationOptions::Mode::guided;
        options.invariance = doubly_cyclic_generators(3);
        auto nine = collect_polymorphisms(t, 9, options);
        PropagationEngine engine(9);
        for (long k1 = 0; k1 <= 9; ++k1)
            for (long k2 = 0; k1 + k2 <= 9; ++k2)
                engine.add_constraint({k1, k2, 9 - k1 - k2}, nae);
        auto refuted = ! engine.run();
        if (refuted != nine.empty())
            return {false, "p=3: engine and enumeration disagree (" + std::to_string(nine.size()) + " functions)"};

        // p = 2 in a relaxed context (n = 4 ≡ 1 mod 3): the base chain's forced values against concrete functions
        auto ctx = ProofContext::make(1, 3, CaseTag::four_a, 2, 0, desk_preset(), false);
        auto chain = gen_stepone_chain(ctx);
        auto forced = propagate(chain, nae, ctx);
        if (forced.status != PropagationResult::Status::complete)
            return {false, "p=2 chain incomplete: " + forced.reason};
        options.invariance = doubly_cyclic_generators(2);
        auto four = collect_polymorphisms(t, 4, options);
        long claims = 0;
        for (const auto & f : four) {
            auto u = u_values(sigma_transform(f, 2), ctx.n);
            for (const auto & [k, bit] : forced.relative) {
                if ((u[static_cast<std::size_t>(k)] ^ u[0]) != bit)
                    return {false, "p=2: " + f.to_string() + " breaks the forced value of u_" + std::to_string(k)};
                ++claims;
            }
            for (const auto & step : chain)
                if (step.kind == ChainStep::Kind::constraint) {
                    std::vector<int> image;
                    for (auto k : step.ks)
                        image.push_back(u[static_cast<std::size_t>(k)]);
                    if (! nae.contains(image))
                        return {false, "p=2: " + f.to_string() + " violates a chain constraint"};
                }
        }
        if (four.empty())
            return {false, "p=2: no 4-ary doubly cyclic polymorphisms to test"};
        return {true, "p=3: " + std::to_string(nine.size()) + " functions, chain refuted=" + (refuted ? "yes" : "no")
                + "; p=2: " + std::to_string(four.size()) + " functions, " + std::to_string(claims) + " forced values held"};
    }
}

auto main() -> int
{
    run(1, "classification table", budget_table, criterion_table);
    run(2, "promise soundness", budget_promise, criterion_promise);
    run(3, "composition pipeline", budget_pipeline, criterion_pipeline);
    run(4, "shift constructions", budget_shift, criterion_shift);
    run(5, "step-one chains", budget_chains, criterion_chains);
    run(6, "certificate round-trip and tampering", budget_roundtrip, criterion_roundtrip);
    run(7, "pigeonhole certificate", budget_pigeonhole, criterion_pigeonhole);
    run(8, "concrete functions", budget_concrete, criterion_concrete);
    return failures == 0 ? 0 : 1;
}
