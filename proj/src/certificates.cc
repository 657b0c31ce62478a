#include <pcsp/certificates.hh>
#include <pcsp/errors.hh>

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "certificate_detail.hh"

namespace pcsp
{
    using detail::check_shape;
    using detail::sign_of;
    using detail::sum_of;
    using detail::within;

    auto to_string(CaseTag tag) -> std::string
    {
        switch (tag) {
        case CaseTag::one: return "1";
        case CaseTag::two: return "2";
        case CaseTag::three: return "3";
        case CaseTag::four_a: return "4a";
        case CaseTag::four_b: return "4b";
        }
        return "?";
    }

    auto parse_case_tag(const std::string & text, int r, int s) -> CaseTag
    {
        if (text == "1")
            return CaseTag::one;
        if (text == "2")
            return CaseTag::two;
        if (text == "3")
            return CaseTag::three;
        if (text == "4a")
            return CaseTag::four_a;
        if (text == "4b")
            return CaseTag::four_b;
        if (text == "4")
            return (r % 2 == s % 2) ? CaseTag::four_a : CaseTag::four_b;
        throw std::invalid_argument("unknown case tag '" + text + "'");
    }

    auto case_applies(CaseTag tag, int r, int s) -> bool
    {
        if (r < 1 || s < 2 || 2 * r > s)
            return false;
        switch (tag) {
        case CaseTag::one: return r > 1 && 2 * r < s;
        case CaseTag::two: return r > 1 && 2 * r == s;
        case CaseTag::three: return r > 1 && 2 * r == s && r % 2 == 0;
        case CaseTag::four_a: return s > 2 && r % 2 == s % 2;
        case CaseTag::four_b: return s > 2 && r % 2 == 0 && s % 2 == 1;
        }
        return false;
    }

    auto full_preset() -> ExponentPreset { return {"full", 10, 12, 5}; }

    auto desk_preset() -> ExponentPreset { return {"desk", 1, 2, 1}; }

    auto preset_by_name(const std::string & name) -> ExponentPreset
    {
        if (name == "full")
            return full_preset();
        if (name == "desk")
            return desk_preset();
        throw std::invalid_argument("unknown exponent preset '" + name + "'");
    }

    auto is_prime(long p) -> bool
    {
        if (p < 2)
            return false;
        for (long d = 2; d * d <= p; ++d)
            if (p % d == 0)
                return false;
        return true;
    }

    auto ProofContext::make(int r, int s, CaseTag tag, long p, int b, ExponentPreset preset, bool strict)
        -> ProofContext
    {
        if (! case_applies(tag, r, s))
            throw std::invalid_argument(
                "case " + to_string(tag) + " does not apply to r=" + std::to_string(r) + ", s=" + std::to_string(s));
        if (p < 2 || p > 46340)
            throw std::invalid_argument("p out of range");
        if (b < 0)
            throw std::invalid_argument("b must be non-negative");
        ProofContext ctx;
        ctx.r = r;
        ctx.s = s;
        ctx.tag = tag;
        ctx.p = p;
        ctx.n = p * p;
        ctx.b = b;
        ctx.preset = std::move(preset);
        ctx.strict = strict;
        if (strict && (! is_prime(p) || p % s != 1))
            throw std::invalid_argument("p must be a prime with p = 1 (mod s)");
        if (ctx.n % s != 1)
            throw std::invalid_argument("n = p^2 must be 1 (mod s)");
        auto four = tag == CaseTag::four_a || tag == CaseTag::four_b;
        auto g = std::gcd(r, s);
        ctx.theta_num = four ? r / g : 1;
        ctx.theta_den = four ? s / g : 2;
        ctx.a = ctx.n * ctx.theta_num / ctx.theta_den;
        return ctx;
    }

    auto ProofContext::m_far() const -> int
    {
        return (tag == CaseTag::four_a || tag == CaseTag::four_b) ? s - 2 : 2 * r - 2;
    }

    auto ProofContext::m_close() const -> int
    {
        return (tag == CaseTag::four_a || tag == CaseTag::four_b) ? s - 1 : 2 * r - 1;
    }

    auto ProofContext::uses_negation() const -> bool
    {
        return tag == CaseTag::one || tag == CaseTag::two || tag == CaseTag::three;
    }

    auto ProofContext::padding() const -> int { return tag == CaseTag::one ? s - 2 * r : 0; }

    auto ProofContext::relations() const -> std::pair<BoolRelation, BoolRelation>
    {
        switch (tag) {
        case CaseTag::one:
        case CaseTag::three:
            return {build_family(Family::exact, r, s), build_family(Family::atmost, 2 * r - 1, s)};
        case CaseTag::two:
            return {build_family(Family::atmost, r, s), build_family(Family::atmost, 2 * r - 1, s)};
        case CaseTag::four_a:
        case CaseTag::four_b:
            break;
        }
        return {build_family(Family::exact, r, s), build_family(Family::nae, 0, s)};
    }

    auto ProofContext::template_for() const -> Template
    {
        auto [p_rel, q_rel] = relations();
        std::vector<RelationPair> pairs{{p_rel, q_rel}};
        if (uses_negation())
            pairs.push_back({BoolRelation::disequality(), BoolRelation::disequality()});
        return Template(std::move(pairs));
    }

    auto area(const EvalTuple & z) -> mpq_class
    {
        if (z.empty())
            throw std::invalid_argument("empty tuple");
        long sum = 0;
        for (auto h : z)
            sum += h;
        auto p = static_cast<long>(z.size());
        mpq_class result(sum, p * p);
        result.canonicalize();
        return result;
    }

    auto area_1d(long k, long n) -> mpq_class
    {
        mpq_class result(k, n);
        result.canonicalize();
        return result;
    }

    namespace detail
    {
        auto sum_of(const EvalTuple & z) -> long
        {
            long sum = 0;
            for (auto h : z)
                sum += h;
            return sum;
        }

        auto sign_of(long k, const ProofContext & ctx) -> int
        {
            // λ - θ = (k·den - num·n) / (n·den)
            auto diff = k * ctx.theta_den - ctx.theta_num * ctx.n;
            return (diff > 0) - (diff < 0);
        }

        auto check_shape(const EvalTuple & z, const ProofContext & ctx) -> void
        {
            if (static_cast<long>(z.size()) != ctx.p)
                throw std::invalid_argument("tuple has " + std::to_string(z.size()) + " blocks, expected p");
            for (auto h : z)
                if (h < 0 || h > ctx.p)
                    throw std::invalid_argument("block height out of range");
        }
    }

    auto side(const EvalTuple & z, const ProofContext & ctx) -> int { return sign_of(sum_of(z), ctx); }

    auto side_1d(long k, const ProofContext & ctx) -> int { return sign_of(k, ctx); }

    auto step_size(const EvalTuple & z) -> int
    {
        if (z.empty())
            return 0;
        auto [lo, hi] = std::minmax_element(z.begin(), z.end());
        return *hi - *lo;
    }

    auto is_almost_rectangle(const EvalTuple & z) -> bool
    {
        if (z.empty())
            return false;
        auto [lo, hi] = std::minmax_element(z.begin(), z.end());
        std::size_t changes = 0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (z[i] != *lo && z[i] != *hi)
                return false;
            if (z[i] != z[(i + 1) % z.size()])
                ++changes;
        }
        return changes <= 2;
    }

    auto cyclic_shift(const EvalTuple & z, int by) -> EvalTuple
    {
        auto p = static_cast<long>(z.size());
        EvalTuple out(z.size());
        for (long i = 0; i < p; ++i)
            out[static_cast<std::size_t>(((i + by) % p + p) % p)] = z[static_cast<std::size_t>(i)];
        return out;
    }

    auto canonical_rotation(const EvalTuple & z) -> EvalTuple
    {
        auto best = z;
        auto p = static_cast<int>(z.size());
        for (int i = 1; i < p; ++i) {
            auto candidate = cyclic_shift(z, i);
            if (candidate > best)
                best = std::move(candidate);
        }
        return best;
    }

    auto complement(const EvalTuple & z, long p) -> EvalTuple
    {
        EvalTuple out(z.size());
        for (std::size_t i = 0; i < z.size(); ++i)
            out[i] = static_cast<int>(p) - z[i];
        return out;
    }

    auto step_one_tuple(long k, long p) -> EvalTuple
    {
        if (k < 0 || k > p * p)
            throw std::invalid_argument("k out of range");
        auto q = k / p;
        auto rho = k % p;
        EvalTuple out(static_cast<std::size_t>(p), static_cast<int>(q));
        for (long i = 0; i < rho; ++i)
            out[static_cast<std::size_t>(i)] = static_cast<int>(q + 1);
        return out;
    }

    auto is_plausible_1d(const std::vector<long> & ks, const ProofContext & ctx) -> bool
    {
        if (static_cast<int>(ks.size()) != ctx.s)
            throw std::invalid_argument("plausibility check needs exactly s entries");
        long sum = 0;
        for (auto k : ks) {
            if (k < 0 || k > ctx.n)
                return false;
            sum += k;
        }
        return ctx.plausible_le() ? sum <= ctx.r * ctx.n : sum == ctx.r * ctx.n;
    }

    auto is_plausible_2d(const std::vector<EvalTuple> & rows, const ProofContext & ctx) -> bool
    {
        if (static_cast<int>(rows.size()) != ctx.s)
            throw std::invalid_argument("2-D plausibility needs exactly s tuples");
        for (const auto & row : rows)
            check_shape(row, ctx);
        for (long i = 0; i < ctx.p; ++i) {
            long sum = 0;
            for (const auto & row : rows)
                sum += row[static_cast<std::size_t>(i)];
            if (sum != ctx.r * ctx.p)
                return false;
        }
        return true;
    }

    auto ShiftMatrix::column_weight(std::size_t col) const -> int
    {
        auto w = 0;
        for (const auto & row : bits)
            w += row[col];
        return w;
    }

    namespace
    {
        auto in_run(long pos, long start, long len, long modulus) -> bool
        {
            return ((pos - start) % modulus + modulus) % modulus < len;
        }
    }

    auto build_shift_matrix_1d(const std::vector<long> & ks, const ProofContext & ctx) -> ShiftMatrix
    {
        return build_shift_matrix_1d(ks, ctx, ctx.relations().first);
    }

    auto build_shift_matrix_1d(const std::vector<long> & ks, const ProofContext & ctx, const BoolRelation & p_rel)
        -> ShiftMatrix
    {
        if (! is_plausible_1d(ks, ctx))
            throw std::invalid_argument("tuple is not plausible");
        ShiftMatrix out;
        long start = 0;
        for (auto k : ks) {
            std::vector<std::uint8_t> row(static_cast<std::size_t>(ctx.n), 0);
            for (long j = 0; j < k; ++j)
                row[static_cast<std::size_t>((start + j) % ctx.n)] = 1;
            out.bits.push_back(std::move(row));
            start += k;
        }
        out.valid = true;
        Tuple column(ks.size());
        for (std::size_t c = 0; c < out.cols() && out.valid; ++c) {
            for (std::size_t i = 0; i < ks.size(); ++i)
                column[i] = out.bits[i][c];
            out.valid = p_rel.arity() == static_cast<int>(ks.size()) && p_rel.contains(column);
        }
        return out;
    }

    auto shift_columns_in(const std::vector<long> & ks, long n, const BoolRelation & p_rel) -> bool
    {
        if (p_rel.arity() != static_cast<int>(ks.size()) || n <= 0)
            return false;
        std::vector<long> starts;
        std::vector<long> breaks{0};
        long start = 0;
        for (auto k : ks) {
            if (k < 0 || k > n)
                return false;
            starts.push_back(start % n);
            breaks.push_back(start % n);
            breaks.push_back((start + k) % n);
            start += k;
        }
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        Tuple column(ks.size());
        for (auto pos : breaks) {
            for (std::size_t i = 0; i < ks.size(); ++i)
                column[i] = in_run(pos, starts[i], ks[i], n) ? 1 : 0;
            if (! p_rel.contains(column))
                return false;
        }
        return true;
    }

    namespace
    {
        /// Builds Xᵢ for block i; returns false when a row is not a shifted ⟨k⟩_p.
        auto block_matrix(const std::vector<EvalTuple> & rows, std::size_t i, const ProofContext & ctx,
            std::vector<std::vector<std::uint8_t>> & x) -> bool
        {
            auto width = ctx.r * ctx.p;
            x.assign(rows.size(), std::vector<std::uint8_t>(static_cast<std::size_t>(ctx.p), 0));
            long start = 0;
            for (std::size_t j = 0; j < rows.size(); ++j) {
                long k = rows[j][i];
                for (long q = 0; q < k; ++q) {
                    auto pos = (start + q) % width;
                    auto & cell = x[j][static_cast<std::size_t>(pos % ctx.p)];
                    if (cell)
                        return false;
                    cell = 1;
                }
                // the k ones of the row must form one cyclic run in Z_p
                auto first = start % ctx.p;
                for (long c = 0; c < ctx.p; ++c)
                    if ((x[j][static_cast<std::size_t>(c)] != 0) != in_run(c, first, k, ctx.p))
                        return false;
                start += k;
            }
            return true;
        }

        auto columns_ok(const std::vector<std::vector<std::uint8_t>> & x, const BoolRelation & p_rel) -> bool
        {
            Tuple column(x.size());
            for (std::size_t c = 0; c < x[0].size(); ++c) {
                for (std::size_t j = 0; j < x.size(); ++j)
                    column[j] = x[j][c];
                if (! p_rel.contains(column))
                    return false;
            }
            return true;
        }
    }

    auto build_shift_matrix_2d(const std::vector<EvalTuple> & rows, const ProofContext & ctx) -> ShiftMatrix
    {
        return build_shift_matrix_2d(rows, ctx, ctx.relations().first);
    }

    auto build_shift_matrix_2d(const std::vector<EvalTuple> & rows, const ProofContext & ctx,
        const BoolRelation & p_rel) -> ShiftMatrix
    {
        if (! is_plausible_2d(rows, ctx))
            throw std::invalid_argument("tuples are not 2-D plausible");
        if (p_rel.arity() != ctx.s)
            throw std::invalid_argument("relation arity differs from s");
        ShiftMatrix out;
        out.bits.assign(rows.size(), {});
        out.valid = true;
        std::vector<std::vector<std::uint8_t>> x;
        for (std::size_t i = 0; i < static_cast<std::size_t>(ctx.p); ++i) {
            if (! block_matrix(rows, i, ctx, x))
                throw InternalCheckFailure("row of a summed block is not a cyclic shift of its block");
            out.valid = out.valid && columns_ok(x, p_rel);
            for (std::size_t j = 0; j < rows.size(); ++j)
                out.bits[j].insert(out.bits[j].end(), x[j].begin(), x[j].end());
        }
        return out;
    }

    auto shift_columns_in_2d(const std::vector<EvalTuple> & rows, const ProofContext & ctx,
        const BoolRelation & p_rel) -> bool
    {
        if (p_rel.arity() != ctx.s || ! is_plausible_2d(rows, ctx))
            return false;
        std::vector<std::vector<std::uint8_t>> x;
        for (std::size_t i = 0; i < static_cast<std::size_t>(ctx.p); ++i)
            if (! block_matrix(rows, i, ctx, x) || ! columns_ok(x, p_rel))
                return false;
        return true;
    }

    namespace detail
    {
        auto within(long sum, int e, const ProofContext & ctx, bool strict_less) -> bool
        {
            mpz_class diff = mpz_class(sum) * ctx.theta_den - mpz_class(ctx.theta_num) * ctx.n;
            diff = abs(diff);
            mpz_class scale;
            mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(ctx.s), static_cast<unsigned long>(e));
            mpz_class lhs = diff * scale;
            mpz_class rhs = mpz_class(ctx.n) * ctx.theta_den;
            return strict_less ? lhs < rhs : lhs <= rhs;
        }

    }

    namespace
    {
        auto leading_run(const EvalTuple & z) -> int
        {
            auto c = 0;
            while (c < static_cast<int>(z.size()) && z[static_cast<std::size_t>(c)] == z[0])
                ++c;
            return c;
        }
    }

    auto complete_plausible(const EvalTuple & z, int m, const ProofContext & ctx, bool enforce_window) -> Completion
    {
        check_shape(z, ctx);
        if (m != ctx.m_far() && m != ctx.m_close())
            throw std::invalid_argument("m must be r/θ-2 or r/θ-1");
        if (m < 1)
            throw std::invalid_argument("m must be positive");
        if (! is_almost_rectangle(z) || (z.front() == z.back() && step_size(z) != 0))
            throw std::invalid_argument("tuple is not an almost rectangle starting with its first run");
        if (enforce_window && ! within(sum_of(z), ctx.preset.window, ctx, false))
            throw std::invalid_argument("area too far from threshold");
        auto c = leading_run(z);
        Completion out;
        out.rows.push_back(z);
        for (int i = 1; i < m; ++i)
            out.rows.push_back(cyclic_shift(out.rows.back(), c));
        out.l.assign(z.size(), 0);
        for (std::size_t i = 0; i < z.size(); ++i) {
            long sum = 0;
            for (const auto & row : out.rows)
                sum += row[i];
            auto l = ctx.r * ctx.p - sum;
            if (l < 0 || l > ctx.p)
                throw std::invalid_argument("column completion out of range");
            out.l[i] = static_cast<int>(l);
        }
        if (enforce_window && (! is_almost_rectangle(out.l) || step_size(out.l) != step_size(z)))
            throw InternalCheckFailure("completion is not an almost rectangle with the same step size");
        return out;
    }

    auto halve(const EvalTuple & l) -> std::pair<EvalTuple, EvalTuple>
    {
        if (step_size(l) < 2)
            throw std::invalid_argument("halving needs step size at least 2");
        EvalTuple lo(l.size());
        EvalTuple hi(l.size());
        for (std::size_t i = 0; i < l.size(); ++i) {
            lo[i] = l[i] / 2;
            hi[i] = l[i] - l[i] / 2;
        }
        return {lo, hi};
    }

    namespace
    {
        class ChainBuilder
        {
        private:
            const ProofContext & _ctx;
            std::vector<ChainStep> _steps;
            std::vector<long> _negated;

        public:
            explicit ChainBuilder(const ProofContext & ctx) : _ctx(ctx) {}

            /// Appends (count₁ × k₁, count₂ × k₂, ...); twin adds the complementary tuple and negations.
            auto tuple(std::initializer_list<std::pair<long, long>> parts, bool twin, bool reconstructed = false)
                -> void
            {
                ChainStep step;
                step.reconstructed = reconstructed;
                for (auto [count, k] : parts)
                    for (long i = 0; i < count; ++i)
                        step.ks.push_back(k);
                if (! is_plausible_1d(step.ks, _ctx))
                    throw InternalCheckFailure("chain tuple is not plausible");
                if (twin) {
                    ChainStep comp = step;
                    for (auto & k : comp.ks) {
                        negation(k);
                        k = _ctx.n - k;
                    }
                    if (! is_plausible_1d(comp.ks, _ctx))
                        throw InternalCheckFailure("complementary chain tuple is not plausible");
                    _steps.push_back(std::move(step));
                    _steps.push_back(std::move(comp));
                }
                else
                    _steps.push_back(std::move(step));
            }

            auto negation(long k) -> void
            {
                auto key = std::min(k, _ctx.n - k);
                if (std::find(_negated.begin(), _negated.end(), key) != _negated.end())
                    return;
                _negated.push_back(key);
                ChainStep step;
                step.kind = ChainStep::Kind::negation;
                step.k = key;
                _steps.push_back(std::move(step));
            }

            auto take() -> std::vector<ChainStep> { return std::move(_steps); }
        };

        auto threshold_chain(const ProofContext & ctx, long reach, bool twin) -> std::vector<ChainStep>
        {
            ChainBuilder out(ctx);
            long r = ctx.r;
            long s = ctx.s;
            auto a = ctx.a;
            auto last = reach < 0 ? a : std::min(a, reach);
            auto four_b = ctx.tag == CaseTag::four_b;
            out.tuple({{s - r, a}, {r, a + 1}}, twin);
            if (four_b) {
                out.tuple({{s - 1, a}, {1, a + r}}, twin);
                out.tuple({{(s - 1) / 2, a - 1}, {(s - 1) / 2, a + 1}, {1, a + r}}, twin);
            }
            else
                out.tuple({{(s - r) / 2, a - 1}, {(s + r) / 2, a + 1}}, twin);
            for (long i = 2; i <= last; ++i) {
                if (four_b)
                    out.tuple({{r / 2, a + i}, {s - r, a}, {r / 2, a - i + 2}}, twin, true);
                else if (((s + r) / 2) % 2 == 0)
                    out.tuple({{(s + r) / 4, a + i}, {(s - r) / 2, a - 1}, {(s + r) / 4, a - i + 2}}, twin);
                else
                    out.tuple({{(s + r + 2) / 4, a + i}, {(s - r - 2) / 2, a - 1}, {2, a - i + 1},
                                  {(s + r - 6) / 4, a - i + 2}},
                        twin);
                if (four_b)
                    out.tuple({{(s - 1) / 2, a - i}, {(s - 1) / 2, a + i}, {1, a + r}}, twin);
                else
                    out.tuple({{(s - r) / 2, a - i}, {(s - r) / 2, a + i}, {r, a + 1}}, twin);
            }
            return out.take();
        }
    }

    auto gen_stepone_chain(const ProofContext & ctx, long reach) -> std::vector<ChainStep>
    {
        long r = ctx.r;
        long s = ctx.s;
        auto a = ctx.a;
        auto n = ctx.n;
        switch (ctx.tag) {
        case CaseTag::two: {
            ChainBuilder out(ctx);
            auto from = reach < 0 ? 0 : std::max(0L, a - reach);
            if (from > 0) {
                out.tuple({{s, 0}}, false);
                out.negation(0);
            }
            for (auto k = from; k <= a; ++k) {
                out.tuple({{s, k}}, false);
                out.negation(k);
            }
            return out.take();
        }
        case CaseTag::one: {
            ChainBuilder out(ctx);
            out.tuple({{2 * r, a}, {1, r}, {s - 2 * r - 1, 0}}, false);
            out.negation(a);
            for (auto k = a - 1; k >= 0; --k) {
                out.tuple({{r, k}, {r, n - k - 1}, {1, r}, {s - 2 * r - 1, 0}}, false);
                out.negation(k);
            }
            return out.take();
        }
        case CaseTag::three: return threshold_chain(ctx, reach, true);
        case CaseTag::four_a:
        case CaseTag::four_b: break;
        }
        return threshold_chain(ctx, reach, false);
    }

    auto to_string(Claim::Kind kind) -> std::string
    {
        switch (kind) {
        case Claim::Kind::constraint_1d: return "constraint_1d";
        case Claim::Kind::negation_1d: return "negation_1d";
        case Claim::Kind::chain_closure: return "chain_closure";
        case Claim::Kind::forced_value: return "forced_value";
        case Claim::Kind::tame: return "tame";
        case Claim::Kind::distinct: return "distinct";
        case Claim::Kind::pair_refuted: return "pair_refuted";
        case Claim::Kind::contradiction: return "contradiction";
        case Claim::Kind::step_one_tameness: return "step_one_tameness";
        }
        return "?";
    }

    auto to_string(Justification::Kind kind) -> std::string
    {
        switch (kind) {
        case Justification::Kind::plausible_1d: return "plausible_1d";
        case Justification::Kind::negation: return "negation";
        case Justification::Kind::propagation: return "propagation";
        case Justification::Kind::step_one: return "step_one";
        case Justification::Kind::halving: return "halving";
        case Justification::Kind::flip: return "flip";
        case Justification::Kind::completion: return "completion";
        case Justification::Kind::boundedness: return "boundedness";
        case Justification::Kind::pigeonhole: return "pigeonhole";
        case Justification::Kind::chain: return "chain";
        }
        return "?";
    }
}
