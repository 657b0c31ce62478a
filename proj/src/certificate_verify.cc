#include <pcsp/certificates.hh>
#include <pcsp/errors.hh>

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>

#include "certificate_detail.hh"

namespace pcsp
{
    namespace
    {
        using detail::sum_of;

        struct Reject
        {
            std::string reason;
        };

        /// Where a row's t-value comes from in a local deduction.
        enum class Source
        {
            x,
            y,
            below, ///< tame with λ < θ: u₀
            above, ///< tame with λ > θ: 1 - u₀
            pad    ///< all-zero tuple: u₀
        };

        auto tame_source(const EvalTuple & z, const ProofContext & ctx) -> Source
        {
            return side(z, ctx) > 0 ? Source::above : Source::below;
        }

        class Verifier
        {
        private:
            const Certificate & _cert;
            const ProofContext & _ctx;
            std::optional<BoolRelation> _p;
            std::optional<BoolRelation> _q;
            bool _neq = false;
            std::map<int, std::unique_ptr<PropagationEngine>> _engines;

            auto claim_at(int ref, Claim::Kind kind) const -> const Claim &
            {
                const auto & claim = _cert.nodes[static_cast<std::size_t>(ref)].claim;
                if (claim.kind != kind)
                    throw Reject{"reference " + std::to_string(ref) + " is " + to_string(claim.kind) + ", expected "
                        + to_string(kind)};
                return claim;
            }

            auto expect(bool ok, const std::string & why) const -> void
            {
                if (! ok)
                    throw Reject{why};
            }

            auto tuple_ok(const EvalTuple & z) const -> void
            {
                try {
                    detail::check_shape(z, _ctx);
                }
                catch (const std::invalid_argument & e) {
                    throw Reject{e.what()};
                }
                expect(side(z, _ctx) != 0, "tuple area equals θ");
            }

            auto zero_ref_ok(const ProofNode & node, std::size_t at) const -> void
            {
                if (_ctx.tag != CaseTag::one)
                    return;
                expect(node.refs.size() > at, "missing reference to t<0> = 0");
                const auto & zero = claim_at(node.refs[at], Claim::Kind::forced_value);
                expect(zero.k == 0 && zero.bit == 0 && zero.absolute, "reference does not fix t<0> = 0");
            }

            /// Columns in P for the rows and (cases 1-3) their complementary twin.
            auto rows_ok(const std::vector<EvalTuple> & rows, int padding) const -> void
            {
                expect(shift_columns_in_2d(rows, _ctx, *_p), "2-D construction has a column outside P");
                if (! _ctx.uses_negation())
                    return;
                expect(_neq, "complementary twin needs (≠, ≠) in the template");
                auto twin = rows;
                for (std::size_t i = 0; i + static_cast<std::size_t>(padding) < twin.size(); ++i)
                    twin[i] = complement(twin[i], _ctx.p);
                expect(shift_columns_in_2d(twin, _ctx, *_p), "complementary construction has a column outside P");
            }

            /// All (u₀, x, y) compatible with the Q-constraints of the rows (and their twin).
            auto consistent(const std::vector<Source> & rows) const -> std::vector<std::array<int, 3>>
            {
                std::vector<std::array<int, 3>> out;
                auto u0_values = _ctx.tag == CaseTag::one ? 1 : 2;
                for (int u0 = 0; u0 < u0_values; ++u0)
                    for (int x = 0; x < 2; ++x)
                        for (int y = 0; y < 2; ++y) {
                            Tuple values;
                            Tuple twin;
                            for (auto src : rows) {
                                int v = 0;
                                switch (src) {
                                case Source::x: v = x; break;
                                case Source::y: v = y; break;
                                case Source::below: v = u0; break;
                                case Source::above: v = 1 - u0; break;
                                case Source::pad: v = u0; break;
                                }
                                values.push_back(v);
                                twin.push_back(src == Source::pad ? u0 : 1 - v);
                            }
                            if (! _q->contains(values))
                                continue;
                            if (_ctx.uses_negation() && ! _q->contains(twin))
                                continue;
                            out.push_back({u0, x, y});
                        }
                return out;
            }

            auto padded(std::vector<EvalTuple> rows) const -> std::vector<EvalTuple>
            {
                for (int i = 0; i < _ctx.padding(); ++i)
                    rows.emplace_back(static_cast<std::size_t>(_ctx.p), 0);
                return rows;
            }

            auto sources(int m, std::vector<Source> tail) const -> std::vector<Source>
            {
                std::vector<Source> out(static_cast<std::size_t>(m), Source::x);
                out.insert(out.end(), tail.begin(), tail.end());
                for (int i = 0; i < _ctx.padding(); ++i)
                    out.push_back(Source::pad);
                return out;
            }

            auto completion(const EvalTuple & z, int m) const -> Completion
            {
                try {
                    return complete_plausible(z, m, _ctx, false);
                }
                catch (const std::invalid_argument & e) {
                    throw Reject{std::string("completion: ") + e.what()};
                }
            }

            auto check_constraint(const ProofNode & node) const -> void
            {
                const auto & ks = node.claim.ks;
                expect(static_cast<int>(ks.size()) == _ctx.s, "tuple length differs from s");
                expect(is_plausible_1d(ks, _ctx), "tuple is not plausible");
                expect(shift_columns_in(ks, _ctx.n, *_p), "shift matrix has a column outside P");
            }

            auto check_closure(const ProofNode & node) -> void
            {
                auto engine = std::make_unique<PropagationEngine>(_ctx.n);
                for (auto ref : node.refs) {
                    const auto & claim = _cert.nodes[static_cast<std::size_t>(ref)].claim;
                    if (claim.kind == Claim::Kind::constraint_1d)
                        engine->add_constraint(claim.ks, *_q);
                    else if (claim.kind == Claim::Kind::negation_1d)
                        engine->add_negation(claim.k);
                    else
                        throw Reject{"closure references a " + to_string(claim.kind) + " node"};
                }
                expect(engine->run(), "chain is contradictory: " + engine->reason());
                _engines[node.id] = std::move(engine);
            }

            auto check_forced(const ProofNode & node) -> void
            {
                const auto & claim = node.claim;
                expect(node.refs.size() == 1, "forced value needs exactly one closure reference");
                claim_at(node.refs[0], Claim::Kind::chain_closure);
                expect(claim.k >= 0 && claim.k <= _ctx.n, "k out of range");
                auto & engine = *_engines.at(node.refs[0]);
                auto value = claim.absolute ? engine.absolute(claim.k) : engine.relation(claim.k, 0);
                expect(value.has_value(), "u_" + std::to_string(claim.k) + " is not forced");
                expect(*value == claim.bit, "u_" + std::to_string(claim.k) + " is forced to the other value");
            }

            auto check_step_one(const ProofNode & node) const -> void
            {
                const auto & z = node.claim.z;
                auto k = node.justification.k;
                expect(sum_of(z) == k, "block sum differs from K");
                expect(k <= 2 * _ctx.a, "K exceeds 2a");
                expect(canonical_rotation(z) == canonical_rotation(step_one_tuple(k, _ctx.p)),
                    "tuple is not a rotation of the step-one tuple for K");
                expect(node.refs.size() == 1, "step-one tameness needs one forced value");
                const auto & forced = claim_at(node.refs[0], Claim::Kind::forced_value);
                expect(forced.k == k && ! forced.absolute && forced.bit == (k > _ctx.a ? 1 : 0),
                    "forced value does not match K");
            }

            auto check_halving(const ProofNode & node) const -> void
            {
                const auto & z = node.claim.z;
                expect(node.justification.m == _ctx.m_far(), "halving uses m = r/θ - 2");
                auto done = completion(z, node.justification.m);
                expect(step_size(done.l) >= 2, "completion has step size below 2");
                auto [l1, l2] = halve(done.l);
                expect(node.refs.size() == (_ctx.tag == CaseTag::one ? 3U : 2U), "wrong number of references");
                const auto & t1 = claim_at(node.refs[0], Claim::Kind::tame);
                const auto & t2 = claim_at(node.refs[1], Claim::Kind::tame);
                expect(canonical_rotation(t1.z) == canonical_rotation(l1), "first half does not match");
                expect(canonical_rotation(t2.z) == canonical_rotation(l2), "second half does not match");
                zero_ref_ok(node, 2);
                auto rows = done.rows;
                rows.push_back(l1);
                rows.push_back(l2);
                rows_ok(padded(rows), _ctx.padding());
                auto want = side(z, _ctx) > 0 ? 1 : 0;
                for (auto [u0, x, y] : consistent(sources(done.rows.size(), {tame_source(l1, _ctx), tame_source(l2, _ctx)})))
                    expect(x == (u0 ^ want), "Q does not force the tame value");
            }

            auto check_distinct(const ProofNode & node) const -> void
            {
                const auto & claim = node.claim;
                tuple_ok(claim.z);
                tuple_ok(claim.w);
                expect(node.justification.m == _ctx.m_close(), "completion uses m = r/θ - 1");
                auto done = completion(claim.z, node.justification.m);
                expect(canonical_rotation(done.l) == canonical_rotation(claim.w), "completion differs from w");
                expect(node.refs.size() == (_ctx.tag == CaseTag::one ? 1U : 0U), "wrong number of references");
                zero_ref_ok(node, 0);
                auto rows = done.rows;
                rows.push_back(done.l);
                rows_ok(padded(rows), _ctx.padding());
                for (auto [u0, x, y] : consistent(sources(done.rows.size(), {Source::y})))
                    expect(x != y, "Q does not force t(z) != t(w)");
            }

            auto check_flip(const ProofNode & node) const -> void
            {
                expect(node.refs.size() == 2, "flip needs a disequality and a tameness reference");
                const auto & distinct = claim_at(node.refs[0], Claim::Kind::distinct);
                const auto & tame = claim_at(node.refs[1], Claim::Kind::tame);
                expect(canonical_rotation(distinct.z) == canonical_rotation(node.claim.z), "disequality is about another tuple");
                expect(canonical_rotation(distinct.w) == canonical_rotation(tame.z), "tameness is about another tuple");
                expect(side(node.claim.z, _ctx) == -side(tame.z, _ctx), "areas are on the same side of θ");
            }

            auto interval_heights() const -> std::vector<long>
            {
                std::vector<long> out;
                auto num = _ctx.theta_num;
                auto den = _ctx.theta_den;
                for (long z = 1; z * den < num * _ctx.p; ++z)
                    if (z * den > num * _ctx.p - 2L * _ctx.b * den)
                        out.push_back(z);
                return out;
            }

            auto check_pair(const ProofNode & node) const -> void
            {
                const auto & claim = node.claim;
                expect(_ctx.b >= 1, "pigeonhole pairs need b >= 1");
                auto heights = interval_heights();
                auto inside = [&](long z) { return std::find(heights.begin(), heights.end(), z) != heights.end(); };
                expect(claim.z21 < claim.z22 && inside(claim.z21) && inside(claim.z22),
                    "pair is not inside (θp-2b, θp)");
                auto p = _ctx.p;
                auto m = (p - 1) / 2;
                auto num = _ctx.theta_num;
                auto den = _ctx.theta_den;
                auto budget = num * _ctx.n - 1 - (p - m) * claim.z21 * den;
                expect(budget >= 0 && claim.z_top == budget / (m * den), "top height is not the largest below θ");
                expect(claim.z_top <= p, "top height exceeds p");
                expect(claim.z_top * den > num * p && claim.z_top * den < num * p + 3L * _ctx.b * den,
                    "top height outside (pθ, pθ+3b)");
                expect(claim.z_top - claim.z21 <= 5L * _ctx.b && claim.z_top - claim.z22 <= 5L * _ctx.b,
                    "step size above 5b");
                EvalTuple z1(static_cast<std::size_t>(p), static_cast<int>(claim.z21));
                EvalTuple z2(static_cast<std::size_t>(p), static_cast<int>(claim.z22));
                for (long i = 0; i < m; ++i) {
                    z1[static_cast<std::size_t>(i)] = static_cast<int>(claim.z_top);
                    z2[static_cast<std::size_t>(i)] = static_cast<int>(claim.z_top);
                }
                expect(side(z1, _ctx) < 0 && side(z2, _ctx) > 0, "areas do not straddle θ");
                expect(node.refs.size() == 2, "pair needs two tameness references");
                const auto & t1 = claim_at(node.refs[0], Claim::Kind::tame);
                const auto & t2 = claim_at(node.refs[1], Claim::Kind::tame);
                expect(canonical_rotation(t1.z) == canonical_rotation(z1), "first tameness reference is about another tuple");
                expect(canonical_rotation(t2.z) == canonical_rotation(z2), "second tameness reference is about another tuple");
            }

            auto check_contradiction(const ProofNode & node) const -> void
            {
                expect(_ctx.b >= 1, "contradiction needs b >= 1");
                auto heights = interval_heights();
                expect(static_cast<long>(heights.size()) >= _ctx.b + 1, "interval holds at most b integers");
                std::set<std::pair<long, long>> covered;
                for (auto ref : node.refs) {
                    const auto & pair = claim_at(ref, Claim::Kind::pair_refuted);
                    covered.emplace(pair.z21, pair.z22);
                }
                for (std::size_t i = 0; i < heights.size(); ++i)
                    for (std::size_t j = i + 1; j < heights.size(); ++j)
                        expect(covered.contains({heights[i], heights[j]}),
                            "pair (" + std::to_string(heights[i]) + ", " + std::to_string(heights[j]) + ") not refuted");
            }

            auto check_step_one_tameness(const ProofNode & node) const -> void
            {
                expect(node.claim.k == 2 * _ctx.a, "claim must cover k up to 2a");
                std::set<long> covered;
                for (auto ref : node.refs) {
                    const auto & forced = claim_at(ref, Claim::Kind::forced_value);
                    if (! forced.absolute && forced.bit == (forced.k > _ctx.a ? 1 : 0))
                        covered.insert(forced.k);
                }
                for (long k = 0; k <= 2 * _ctx.a; ++k)
                    expect(covered.contains(k), "u_" + std::to_string(k) + " not covered");
            }

            auto check(const ProofNode & node) -> void
            {
                for (auto ref : node.refs)
                    expect(ref >= 0 && ref < node.id, "reference " + std::to_string(ref) + " is not an earlier node");
                const auto & claim = node.claim;
                auto just = node.justification.kind;
                using J = Justification::Kind;
                switch (claim.kind) {
                case Claim::Kind::constraint_1d:
                    expect(just == J::plausible_1d && node.refs.empty(), "constraint must be a plausible tuple");
                    return check_constraint(node);
                case Claim::Kind::negation_1d:
                    expect(just == J::negation && node.refs.empty(), "negation must be justified by ≠");
                    expect(_neq, "negation needs (≠, ≠) in the template");
                    expect(claim.k >= 0 && claim.k <= _ctx.n && 2 * claim.k != _ctx.n, "k out of range");
                    return;
                case Claim::Kind::chain_closure:
                    expect(just == J::propagation, "closure must be justified by propagation");
                    return check_closure(node);
                case Claim::Kind::forced_value:
                    expect(just == J::propagation, "forced value must be justified by propagation");
                    return check_forced(node);
                case Claim::Kind::tame:
                    tuple_ok(claim.z);
                    if (just == J::step_one)
                        return check_step_one(node);
                    if (just == J::halving)
                        return check_halving(node);
                    if (just == J::flip)
                        return check_flip(node);
                    throw Reject{"tameness cannot be justified by " + to_string(just)};
                case Claim::Kind::distinct:
                    expect(just == J::completion, "disequality must be justified by a completion");
                    return check_distinct(node);
                case Claim::Kind::pair_refuted:
                    expect(just == J::boundedness, "pair must be justified by boundedness");
                    return check_pair(node);
                case Claim::Kind::contradiction:
                    expect(just == J::pigeonhole, "contradiction must be justified by pigeonhole");
                    return check_contradiction(node);
                case Claim::Kind::step_one_tameness:
                    expect(just == J::chain, "step-one tameness must be justified by the chain");
                    return check_step_one_tameness(node);
                }
                throw Reject{"unknown claim"};
            }

        public:
            Verifier(const Certificate & cert, const Template & t) : _cert(cert), _ctx(cert.context)
            {
                auto [p_rel, q_rel] = _ctx.relations();
                for (const auto & pair : t.pairs()) {
                    if (pair.a == p_rel) {
                        _p = pair.a;
                        _q = pair.b;
                        break;
                    }
                    if (pair.a.swapped() == p_rel) {
                        _p = p_rel;
                        _q = pair.b.swapped();
                        break;
                    }
                }
                _neq = t.has_neq();
            }

            auto run() -> VerifyResult
            {
                try {
                    auto fresh = ProofContext::make(_ctx.r, _ctx.s, _ctx.tag, _ctx.p, _ctx.b, _ctx.preset, _ctx.strict);
                    if (! (fresh == _ctx))
                        return {false, -1, "context fields are inconsistent"};
                }
                catch (const std::invalid_argument & e) {
                    return {false, -1, std::string("invalid context: ") + e.what()};
                }
                if (! _p)
                    return {false, -1, "template has no pair with A-side " + _ctx.relations().first.describe()};
                for (std::size_t i = 0; i < _cert.nodes.size(); ++i) {
                    const auto & node = _cert.nodes[i];
                    if (node.id != static_cast<int>(i))
                        return {false, static_cast<int>(i), "node ids must be consecutive"};
                    try {
                        check(node);
                    }
                    catch (const Reject & e) {
                        return {false, node.id, e.reason};
                    }
                    catch (const std::exception & e) {
                        return {false, node.id, e.what()};
                    }
                }
                auto c = _cert.conclusion_node;
                if (c < 0 || c >= static_cast<int>(_cert.nodes.size()))
                    return {false, -1, "conclusion node out of range"};
                const auto & kind = _cert.nodes[static_cast<std::size_t>(c)].claim.kind;
                if (kind != _cert.conclusion
                    || (kind != Claim::Kind::contradiction && kind != Claim::Kind::step_one_tameness))
                    return {false, c, "conclusion node does not carry the conclusion"};
                return {true, -1, ""};
            }
        };
    }

    auto verify_certificate(const Certificate & cert, const Template & t) -> VerifyResult
    {
        return Verifier(cert, t).run();
    }
}
