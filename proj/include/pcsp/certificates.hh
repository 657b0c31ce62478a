#pragma once

#include <pcsp/structures.hh>

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pcsp
{
    enum class CaseTag
    {
        one,
        two,
        three,
        four_a,
        four_b
    };

    auto to_string(CaseTag tag) -> std::string;
    /// Accepts "1", "2", "3", "4a", "4b"; "4" resolves to 4a or 4b from the parity of r and s.
    auto parse_case_tag(const std::string & text, int r, int s) -> CaseTag;
    /// Whether (r, s) meets the side conditions of the case (r ≤ s/2 normal form).
    auto case_applies(CaseTag tag, int r, int s) -> bool;

    /// Exponent offsets for the distance-to-threshold windows.
    struct ExponentPreset
    {
        std::string name;
        int near_offset = 10;  ///< near-threshold iff |λ-θ| < 1/s^(Δz+near_offset)
        int close_offset = 12; ///< too close iff |λ-θ| < 1/s^(b+close_offset)
        int window = 5;        ///< completion needs |λ-θ| ≤ 1/s^window

        auto operator==(const ExponentPreset &) const -> bool = default;
    };

    auto full_preset() -> ExponentPreset;
    auto desk_preset() -> ExponentPreset;
    auto preset_by_name(const std::string & name) -> ExponentPreset;

    struct ProofContext
    {
        int r = 1;
        int s = 3;
        CaseTag tag = CaseTag::four_a;
        long p = 7;
        long n = 49;
        long theta_num = 1;
        long theta_den = 3;
        long a = 16;
        int b = 0;
        ExponentPreset preset;
        /// Strict contexts need p prime with p ≡ 1 (mod s); relaxed ones only n ≡ 1 (mod s).
        bool strict = true;

        /// Validates and fills the derived fields; throws std::invalid_argument.
        static auto make(int r, int s, CaseTag tag, long p, int b, ExponentPreset preset = full_preset(),
            bool strict = true) -> ProofContext;

        auto theta() const -> mpq_class { return mpq_class(theta_num, theta_den); }
        /// Rows completed by halving: s-2 in case 4, 2r-2 otherwise.
        auto m_far() const -> int;
        /// Rows completed by the area flip: s-1 in case 4, 2r-1 otherwise.
        auto m_close() const -> int;
        /// Cases 1-3 use ≠ and complementary twins.
        auto uses_negation() const -> bool;
        /// Rows of zeros appended to reach s rows (case 1 only).
        auto padding() const -> int;
        auto plausible_le() const -> bool { return tag == CaseTag::two; }
        /// The template pair (P, Q) the case is about.
        auto relations() const -> std::pair<BoolRelation, BoolRelation>;
        /// (P, Q), plus (≠, ≠) in cases 1-3.
        auto template_for() const -> Template;

        auto operator==(const ProofContext &) const -> bool = default;
    };

    auto is_prime(long p) -> bool;

    /// ⟨k¹,…,k^p⟩ as the block heights.
    using EvalTuple = std::vector<int>;

    auto area(const EvalTuple & z) -> mpq_class;
    auto area_1d(long k, long n) -> mpq_class;
    /// Sign of λ(z) - θ as -1, 0, 1.
    auto side(const EvalTuple & z, const ProofContext & ctx) -> int;
    auto side_1d(long k, const ProofContext & ctx) -> int;
    /// |max - min| over the blocks.
    auto step_size(const EvalTuple & z) -> int;
    /// True iff the blocks take at most two values, each forming one cyclic run.
    auto is_almost_rectangle(const EvalTuple & z) -> bool;
    /// Lexicographically largest rotation; double cyclicity makes rotations interchangeable.
    auto canonical_rotation(const EvalTuple & z) -> EvalTuple;
    auto cyclic_shift(const EvalTuple & z, int by) -> EvalTuple;
    auto complement(const EvalTuple & z, long p) -> EvalTuple;
    /// (q+1)×ρ, q×(p-ρ) with k = qp + ρ: the tuple t^σ⟨k⟩ₙ evaluates t on.
    auto step_one_tuple(long k, long p) -> EvalTuple;

    auto is_plausible_1d(const std::vector<long> & ks, const ProofContext & ctx) -> bool;
    auto is_plausible_2d(const std::vector<EvalTuple> & rows, const ProofContext & ctx) -> bool;

    struct ShiftMatrix
    {
        std::vector<std::vector<std::uint8_t>> bits;
        /// Every column lies in P (and, for 2-D, every row of each Xᵢ is a shifted ⟨k⟩).
        bool valid = false;

        auto rows() const -> std::size_t { return bits.size(); }
        auto cols() const -> std::size_t { return bits.empty() ? 0 : bits[0].size(); }
        auto column_weight(std::size_t col) const -> int;
    };

    /// Row i is the (Σ_{j<i} k_j)-th cyclic shift of ⟨kᵢ⟩ₙ. Throws std::invalid_argument if not plausible.
    auto build_shift_matrix_1d(const std::vector<long> & ks, const ProofContext & ctx) -> ShiftMatrix;
    auto build_shift_matrix_1d(const std::vector<long> & ks, const ProofContext & ctx, const BoolRelation & p_rel)
        -> ShiftMatrix;
    /// Column check of the 1-D construction without materializing it (columns are constant between breakpoints).
    auto shift_columns_in(const std::vector<long> & ks, long n, const BoolRelation & p_rel) -> bool;

    /// Blocks Mᵢ of width rp, summed into Xᵢ and concatenated. Throws std::invalid_argument if not plausible.
    auto build_shift_matrix_2d(const std::vector<EvalTuple> & rows, const ProofContext & ctx) -> ShiftMatrix;
    auto build_shift_matrix_2d(const std::vector<EvalTuple> & rows, const ProofContext & ctx,
        const BoolRelation & p_rel) -> ShiftMatrix;
    /// Same checks as build_shift_matrix_2d, one block at a time.
    auto shift_columns_in_2d(const std::vector<EvalTuple> & rows, const ProofContext & ctx,
        const BoolRelation & p_rel) -> bool;

    struct Completion
    {
        /// The m rows: z and its successive c-th cyclic shifts.
        std::vector<EvalTuple> rows;
        /// rp minus the column sums.
        EvalTuple l;
    };

    /// Throws std::invalid_argument when the area window or the range 0 ≤ lⁱ ≤ p is violated.
    auto complete_plausible(const EvalTuple & z, int m, const ProofContext & ctx, bool enforce_window = true)
        -> Completion;
    auto halve(const EvalTuple & l) -> std::pair<EvalTuple, EvalTuple>;

    struct ChainStep
    {
        enum class Kind
        {
            constraint,
            negation
        };

        Kind kind = Kind::constraint;
        std::vector<long> ks; ///< constraint: the plausible tuple
        long k = 0;           ///< negation: u_{n-k} = 1 - u_k
        bool reconstructed = false;
    };

    /// The case-specific tuples that force u_k for 0 ≤ k ≤ 2a. With reach ≥ 0 only k within
    /// reach of a are covered (case 1 always runs down to 0).
    auto gen_stepone_chain(const ProofContext & ctx, long reach = -1) -> std::vector<ChainStep>;

    class PropagationEngine
    {
    private:
        long _size;
        std::vector<long> _parent;
        std::vector<int> _parity; ///< relative to parent
        std::vector<int> _fixed;  ///< per root: -1 unknown, else value of the root
        std::vector<std::vector<long>> _constraints;
        std::vector<const BoolRelation *> _relations;
        bool _contradiction = false;
        std::string _reason;

        auto find(long v) -> std::pair<long, int>;
        auto unite(long u, long v, int parity) -> bool;
        auto fix(long v, int value) -> bool;

    public:
        explicit PropagationEngine(long n);

        auto add_constraint(std::vector<long> ks, const BoolRelation & q) -> void;
        auto add_negation(long k) -> void;
        /// Runs deductions to the fixpoint; false on contradiction.
        auto run() -> bool;

        auto contradiction() const -> bool { return _contradiction; }
        auto reason() const -> const std::string & { return _reason; }
        /// u_k ⊕ u_v when forced.
        auto relation(long k, long v) -> std::optional<int>;
        auto absolute(long k) -> std::optional<int>;
    };

    struct PropagationResult
    {
        enum class Status
        {
            complete,
            unforced,
            contradiction
        };

        Status status = Status::complete;
        /// k ↦ u_k ⊕ u₀ for every k that is forced.
        std::map<long, int> relative;
        /// k ↦ u_k where the value is forced outright.
        std::map<long, int> absolute;
        std::vector<long> unforced;
        std::vector<long> mismatched;
        std::string reason;
    };

    /// Forces u_k over [lo, hi] (default 0..2a) and compares with the tame pattern.
    auto propagate(const std::vector<ChainStep> & chain, const BoolRelation & q, const ProofContext & ctx,
        long lo = 0, long hi = -1) -> PropagationResult;

    struct Claim
    {
        enum class Kind
        {
            constraint_1d,
            negation_1d,
            chain_closure,
            forced_value,
            tame,
            distinct,
            pair_refuted,
            contradiction,
            step_one_tameness
        };

        Kind kind = Kind::constraint_1d;
        std::vector<long> ks; ///< constraint_1d
        long k = 0;           ///< negation_1d, forced_value, step_one_tameness (largest k covered)
        int bit = 0;          ///< forced_value
        bool absolute = false;
        EvalTuple z; ///< tame, distinct
        EvalTuple w; ///< distinct
        long z21 = 0;
        long z22 = 0;
        long z_top = 0; ///< pair_refuted: height z¹ of the first m blocks

        auto operator==(const Claim &) const -> bool = default;
    };

    struct Justification
    {
        enum class Kind
        {
            plausible_1d,
            negation,
            propagation,
            step_one,
            halving,
            flip,
            completion,
            boundedness,
            pigeonhole,
            chain
        };

        Kind kind = Kind::plausible_1d;
        long k = 0; ///< step_one: the K with z = t^σ⟨K⟩
        int m = 0;  ///< halving, completion
        bool reconstructed = false;

        auto operator==(const Justification &) const -> bool = default;
    };

    struct ProofNode
    {
        int id = 0;
        Claim claim;
        Justification justification;
        std::vector<int> refs;

        auto operator==(const ProofNode &) const -> bool = default;
    };

    struct Certificate
    {
        ProofContext context;
        std::vector<ProofNode> nodes;
        Claim::Kind conclusion = Claim::Kind::contradiction;
        int conclusion_node = -1;

        auto operator==(const Certificate &) const -> bool = default;
    };

    auto to_string(Claim::Kind kind) -> std::string;
    auto to_string(Justification::Kind kind) -> std::string;

    /// Throws ProofSearchFailure ("p too small for b: ...") when some window or range check fails.
    auto gen_certificate(const ProofContext & ctx) -> Certificate;

    struct VerifyResult
    {
        bool ok = false;
        int node = -1; ///< -1 for context or conclusion failures
        std::string reason;
    };

    auto verify_certificate(const Certificate & cert, const Template & t) -> VerifyResult;

    /// Smallest p (prime, ≡ 1 mod s, p ≤ p_max) for which gen_certificate succeeds.
    auto search_minimal_p(int r, int s, CaseTag tag, int b, const ExponentPreset & preset, long p_max)
        -> std::optional<long>;

    auto certificate_to_json(const Certificate & cert) -> std::string;
    /// Throws ParseError (line 0) on malformed documents.
    auto certificate_from_json(const std::string & text) -> Certificate;
}
