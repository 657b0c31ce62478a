#include <pcsp/certificates.hh>
#include <pcsp/errors.hh>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "certificate_detail.hh"

namespace pcsp
{
    namespace
    {
        using detail::sum_of;
        using detail::within;

        struct TamePlan
        {
            EvalTuple z;
            Justification::Kind how = Justification::Kind::step_one;
            long k = 0;          // step_one
            int left = -1;       // halving: l1; flip: w
            int right = -1;      // halving: l2
            EvalTuple w;         // flip
        };

        class Prover
        {
        private:
            const ProofContext & _ctx;
            int _flip_cap;
            std::vector<TamePlan> _plans;
            std::map<EvalTuple, int> _proved;
            std::map<EvalTuple, int> _failed_at;

            auto step_one(const EvalTuple & z) -> std::optional<int>
            {
                auto k = sum_of(z);
                if (k > 2 * _ctx.a || canonical_rotation(step_one_tuple(k, _ctx.p)) != z)
                    return std::nullopt;
                TamePlan plan;
                plan.z = z;
                plan.k = k;
                return add(std::move(plan));
            }

            auto add(TamePlan plan) -> int
            {
                auto id = static_cast<int>(_plans.size());
                _proved.emplace(plan.z, id);
                _plans.push_back(std::move(plan));
                return id;
            }

            auto halving(const EvalTuple & z, int flips) -> std::optional<int>
            {
                Completion done;
                try {
                    done = complete_plausible(z, _ctx.m_far(), _ctx);
                }
                catch (const std::invalid_argument &) {
                    return std::nullopt;
                }
                if (step_size(done.l) < 2)
                    return std::nullopt;
                auto [l1, l2] = halve(done.l);
                auto want = -side(z, _ctx);
                if (side(l1, _ctx) != want || side(l2, _ctx) != want)
                    return std::nullopt;
                auto left = prove(l1, flips);
                if (! left)
                    return std::nullopt;
                auto right = prove(l2, flips);
                if (! right)
                    return std::nullopt;
                TamePlan plan;
                plan.z = z;
                plan.how = Justification::Kind::halving;
                plan.left = *left;
                plan.right = *right;
                return add(std::move(plan));
            }

            auto flip(const EvalTuple & z, int flips) -> std::optional<int>
            {
                if (flips >= _flip_cap)
                    return std::nullopt;
                Completion done;
                try {
                    done = complete_plausible(z, _ctx.m_close(), _ctx);
                }
                catch (const std::invalid_argument &) {
                    return std::nullopt;
                }
                if (side(done.l, _ctx) != -side(z, _ctx))
                    return std::nullopt;
                auto w = canonical_rotation(done.l);
                auto sub = prove(w, flips + 1);
                if (! sub)
                    return std::nullopt;
                TamePlan plan;
                plan.z = z;
                plan.how = Justification::Kind::flip;
                plan.left = *sub;
                plan.w = w;
                return add(std::move(plan));
            }

        public:
            explicit Prover(const ProofContext & ctx) : _ctx(ctx)
            {
                // each flip multiplies |λ-θ| by m_close; the smallest nonzero distance is 1/(n·den)
                auto ratio = std::log(static_cast<double>(ctx.n) * static_cast<double>(ctx.theta_den))
                    - (ctx.b + ctx.preset.close_offset) * std::log(static_cast<double>(ctx.s));
                auto base = std::log(static_cast<double>(ctx.m_close()));
                _flip_cap = std::max(1, static_cast<int>(std::ceil(ratio / base)) + 1);
            }

            auto plans() const -> const std::vector<TamePlan> & { return _plans; }

            auto prove(const EvalTuple & raw, int flips = 0) -> std::optional<int>
            {
                auto z = canonical_rotation(raw);
                if (auto hit = _proved.find(z); hit != _proved.end())
                    return hit->second;
                if (auto miss = _failed_at.find(z); miss != _failed_at.end() && miss->second <= flips)
                    return std::nullopt;
                std::optional<int> result;
                if (step_size(z) <= 1)
                    result = step_one(z);
                else if (is_almost_rectangle(z) && within(sum_of(z), _ctx.preset.window, _ctx, false)) {
                    auto too_close = within(sum_of(z), _ctx.b + _ctx.preset.close_offset, _ctx, true);
                    if (too_close) {
                        result = flip(z, flips);
                        if (! result)
                            result = halving(z, flips);
                    }
                    else {
                        result = halving(z, flips);
                        if (! result)
                            result = flip(z, flips);
                    }
                }
                if (! result) {
                    auto & slot = _failed_at.try_emplace(z, flips).first->second;
                    slot = std::min(slot, flips);
                }
                return result;
            }
        };

        struct PairPlan
        {
            long low = 0;
            long high = 0;
            long top = 0;
            int first = -1;
            int second = -1;
        };

        auto pair_tuple(long top, long height, const ProofContext & ctx) -> EvalTuple
        {
            auto m = (ctx.p - 1) / 2;
            EvalTuple z(static_cast<std::size_t>(ctx.p), static_cast<int>(height));
            for (long i = 0; i < m; ++i)
                z[static_cast<std::size_t>(i)] = static_cast<int>(top);
            return z;
        }

        auto too_small(const std::string & why) -> ProofSearchFailure
        {
            return ProofSearchFailure("p too small for b: " + why);
        }

        auto finale(const ProofContext & ctx, Prover & prover) -> std::vector<PairPlan>
        {
            auto p = ctx.p;
            auto num = ctx.theta_num;
            auto den = ctx.theta_den;
            auto m = (p - 1) / 2;
            std::vector<long> heights;
            for (long z = 1; z * den < num * p; ++z)
                if (z * den > num * p - 2L * ctx.b * den)
                    heights.push_back(z);
            if (static_cast<long>(heights.size()) < ctx.b + 1)
                throw too_small("interval (θp-2b, θp) holds " + std::to_string(heights.size()) + " integers");

            std::vector<PairPlan> out;
            for (std::size_t i = 0; i < heights.size(); ++i)
                for (std::size_t j = i + 1; j < heights.size(); ++j) {
                    PairPlan plan;
                    plan.low = heights[i];
                    plan.high = heights[j];
                    // largest top with (m·top + (p-m)·low)·den < num·n
                    auto budget = num * ctx.n - 1 - (p - m) * plan.low * den;
                    plan.top = budget < 0 ? -1 : budget / (m * den);
                    auto label = "pair (" + std::to_string(plan.low) + ", " + std::to_string(plan.high) + ")";
                    if (plan.top < 0 || plan.top > p)
                        throw too_small(label + " has no admissible top height");
                    if (! (plan.top * den > num * p && plan.top * den < num * p + 3L * ctx.b * den))
                        throw too_small(label + " top height outside (pθ, pθ+3b)");
                    if (plan.top - plan.low > 5L * ctx.b || plan.top - plan.high > 5L * ctx.b)
                        throw too_small(label + " step size above 5b");
                    auto z1 = pair_tuple(plan.top, plan.low, ctx);
                    auto z2 = pair_tuple(plan.top, plan.high, ctx);
                    if (side(z1, ctx) >= 0 || side(z2, ctx) <= 0)
                        throw too_small(label + " areas do not straddle θ");
                    for (const auto * z : {&z1, &z2})
                        if (! within(sum_of(*z), step_size(*z) + ctx.preset.near_offset, ctx, true))
                            throw too_small(label + " is not near the threshold");
                    auto first = prover.prove(z1);
                    auto second = first ? prover.prove(z2) : std::nullopt;
                    if (! first || ! second)
                        throw too_small(label + " has no tameness derivation");
                    plan.first = *first;
                    plan.second = *second;
                    out.push_back(plan);
                }
            return out;
        }

        class Emitter
        {
        private:
            Certificate & _cert;

        public:
            explicit Emitter(Certificate & cert) : _cert(cert) {}

            auto push(Claim claim, Justification just, std::vector<int> refs = {}) -> int
            {
                ProofNode node;
                node.id = static_cast<int>(_cert.nodes.size());
                node.claim = std::move(claim);
                node.justification = just;
                node.refs = std::move(refs);
                _cert.nodes.push_back(std::move(node));
                return _cert.nodes.back().id;
            }
        };

        auto claim_of(Claim::Kind kind) -> Claim
        {
            Claim c;
            c.kind = kind;
            return c;
        }

        auto just_of(Justification::Kind kind, long k = 0, int m = 0) -> Justification
        {
            Justification j;
            j.kind = kind;
            j.k = k;
            j.m = m;
            return j;
        }
    }

    auto gen_certificate(const ProofContext & ctx) -> Certificate
    {
        Prover prover(ctx);
        std::vector<PairPlan> pairs;
        if (ctx.b >= 1)
            pairs = finale(ctx, prover);

        std::set<long> needed;
        auto needs_zero = false;
        for (const auto & plan : prover.plans()) {
            if (plan.how == Justification::Kind::step_one)
                needed.insert(plan.k);
            else
                needs_zero = ctx.tag == CaseTag::one;
        }
        // tameness is relative to u₀, which only the full chain reaches
        long lo = 0;
        long hi = 2 * ctx.a;
        if (ctx.b >= 1) {
            lo = needed.empty() ? 0 : *needed.begin();
            hi = needed.empty() ? 0 : *needed.rbegin();
        }
        else
            for (auto k = lo; k <= hi; ++k)
                needed.insert(k);

        auto chain = gen_stepone_chain(ctx);
        auto q = ctx.relations().second;
        auto forced = propagate(chain, q, ctx, lo, hi);
        if (forced.status != PropagationResult::Status::complete)
            throw InternalCheckFailure("step-one chain does not force the tame pattern: " + forced.reason);

        Certificate cert;
        cert.context = ctx;
        Emitter out(cert);
        std::vector<int> chain_ids;
        for (const auto & step : chain) {
            if (step.kind == ChainStep::Kind::negation) {
                auto c = claim_of(Claim::Kind::negation_1d);
                c.k = step.k;
                chain_ids.push_back(out.push(c, just_of(Justification::Kind::negation)));
            }
            else {
                auto c = claim_of(Claim::Kind::constraint_1d);
                c.ks = step.ks;
                auto j = just_of(Justification::Kind::plausible_1d);
                j.reconstructed = step.reconstructed;
                chain_ids.push_back(out.push(c, j));
            }
        }
        auto closure = out.push(claim_of(Claim::Kind::chain_closure), just_of(Justification::Kind::propagation),
            chain_ids);

        std::map<long, int> forced_ids;
        for (auto k : needed) {
            auto c = claim_of(Claim::Kind::forced_value);
            c.k = k;
            c.bit = k > ctx.a ? 1 : 0;
            forced_ids[k] = out.push(c, just_of(Justification::Kind::propagation), {closure});
        }
        std::vector<int> zero_ref;
        if (needs_zero) {
            auto c = claim_of(Claim::Kind::forced_value);
            c.k = 0;
            c.bit = 0;
            c.absolute = true;
            zero_ref.push_back(out.push(c, just_of(Justification::Kind::propagation), {closure}));
        }

        std::vector<int> tame_ids;
        for (const auto & plan : prover.plans()) {
            auto c = claim_of(Claim::Kind::tame);
            c.z = plan.z;
            switch (plan.how) {
            case Justification::Kind::step_one:
                tame_ids.push_back(out.push(c, just_of(plan.how, plan.k), {forced_ids.at(plan.k)}));
                break;
            case Justification::Kind::halving: {
                std::vector<int> refs{tame_ids.at(static_cast<std::size_t>(plan.left)),
                    tame_ids.at(static_cast<std::size_t>(plan.right))};
                refs.insert(refs.end(), zero_ref.begin(), zero_ref.end());
                tame_ids.push_back(out.push(c, just_of(plan.how, 0, ctx.m_far()), refs));
                break;
            }
            default: {
                auto d = claim_of(Claim::Kind::distinct);
                d.z = plan.z;
                d.w = plan.w;
                auto distinct = out.push(d, just_of(Justification::Kind::completion, 0, ctx.m_close()), zero_ref);
                tame_ids.push_back(
                    out.push(c, just_of(plan.how), {distinct, tame_ids.at(static_cast<std::size_t>(plan.left))}));
                break;
            }
            }
        }

        if (ctx.b >= 1) {
            std::vector<int> pair_ids;
            for (const auto & plan : pairs) {
                auto c = claim_of(Claim::Kind::pair_refuted);
                c.z21 = plan.low;
                c.z22 = plan.high;
                c.z_top = plan.top;
                pair_ids.push_back(out.push(c, just_of(Justification::Kind::boundedness),
                    {tame_ids.at(static_cast<std::size_t>(plan.first)),
                        tame_ids.at(static_cast<std::size_t>(plan.second))}));
            }
            cert.conclusion = Claim::Kind::contradiction;
            cert.conclusion_node = out.push(claim_of(Claim::Kind::contradiction),
                just_of(Justification::Kind::pigeonhole), pair_ids);
        }
        else {
            std::vector<int> refs;
            for (const auto & [k, id] : forced_ids)
                refs.push_back(id);
            auto c = claim_of(Claim::Kind::step_one_tameness);
            c.k = 2 * ctx.a;
            cert.conclusion = Claim::Kind::step_one_tameness;
            cert.conclusion_node = out.push(c, just_of(Justification::Kind::chain), refs);
        }

        auto check = verify_certificate(cert, ctx.template_for());
        if (! check.ok)
            throw InternalCheckFailure(
                "generated certificate fails verification at node " + std::to_string(check.node) + ": " + check.reason);
        return cert;
    }

    auto search_minimal_p(int r, int s, CaseTag tag, int b, const ExponentPreset & preset, long p_max)
        -> std::optional<long>
    {
        for (long p = s + 1; p <= p_max; p += s) {
            if (! is_prime(p))
                continue;
            try {
                gen_certificate(ProofContext::make(r, s, tag, p, b, preset));
                return p;
            }
            catch (const ProofSearchFailure &) {
            }
        }
        return std::nullopt;
    }
}
