#pragma once

#include <pcsp/structures.hh>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pcsp
{
    /**
     * A function D^n -> D for a small domain D = {0, ..., d-1}, d <= 4, stored
     * as a packed table. Index i encodes the argument tuple in base d with the
     * first argument as the most significant digit.
     *
     * Tables are capped at d^n <= 2^24 entries unless a larger max_arity is
     * passed explicitly.
     */
    class BoolFunction
    {
    private:
        int _arity;
        int _domain_size;
        int _bits;
        std::uint64_t _size;
        std::vector<std::uint64_t> _words;

    public:
        static constexpr int default_max_arity = 24;

        explicit BoolFunction(int arity, int domain_size = 2, int max_arity = default_max_arity);

        static auto from_string(int arity, int domain_size, const std::string & table) -> BoolFunction;
        static auto from_rule(int arity, int domain_size, const std::function<int(std::span<const int>)> & rule) -> BoolFunction;

        auto arity() const noexcept -> int { return _arity; }
        auto domain_size() const noexcept -> int { return _domain_size; }
        auto table_size() const noexcept -> std::uint64_t { return _size; }

        auto value(std::uint64_t index) const -> int
        {
            auto bit = index * static_cast<std::uint64_t>(_bits);
            return static_cast<int>((_words[bit / 64] >> (bit % 64)) & ((std::uint64_t{1} << _bits) - 1));
        }

        auto set(std::uint64_t index, int v) -> void;

        auto index_of(std::span<const int> args) const -> std::uint64_t;
        auto args_of(std::uint64_t index) const -> std::vector<int>;
        auto operator()(std::span<const int> args) const -> int { return value(index_of(args)); }

        auto to_string() const -> std::string;
        auto operator==(const BoolFunction & other) const -> bool;
    };

    /// pi : [source_arity] -> [target_arity], zero-based.
    struct MinorMap
    {
        int source_arity;
        int target_arity;
        std::vector<int> map;

        auto validate() const -> void;
        /// (rho o pi) as a MinorMap from source_arity to rho.target_arity.
        auto then(const MinorMap & rho) const -> MinorMap;
    };

    /// lhs_function(lhs pattern) ~ rhs_function(rhs pattern) over variables 0..var_count-1.
    struct H1Identity
    {
        int var_count;
        std::vector<int> lhs;
        std::vector<int> rhs;
    };

    /**
     * Equivalence on the 2^p x/y-patterns of length p. Pattern codes are p-bit
     * numbers, most significant bit for the first position, bit 1 meaning x.
     */
    struct BlockEquivalence
    {
        int p;
        std::vector<int> block_of;

        auto block_count() const -> int;
        auto validate() const -> void;
    };

    auto minor(const BoolFunction & f, const MinorMap & pi) -> BoolFunction;
    auto satisfies_h1(const BoolFunction & f, const BoolFunction & g, const H1Identity & id) -> bool;
    auto is_polymorphism(const BoolFunction & f, const Template & t) -> bool;
    auto is_cyclic(const BoolFunction & f) -> bool;

    /// t(x_11..x_p1, x_12..x_p2, ...) = c(c(column 1), ..., c(column p)).
    auto compose_eq1(const BoolFunction & c, int p) -> BoolFunction;

    /// Checked on the two generators: rotating the first block by one, and
    /// shifting whole blocks by one. Conjugating the first by powers of the
    /// second rotates every block, so these generate the full group.
    auto is_doubly_cyclic(const BoolFunction & t, int p) -> bool;

    /// t^sigma(a) = t(b) with b[j*p + i] = a[i*p + j] (row-wise vs column-wise reading).
    auto sigma_transform(const BoolFunction & t, int p) -> BoolFunction;

    auto is_b_bounded(const BoolFunction & t, int p, const BlockEquivalence & sim) -> bool;
    auto derive_sim(const BoolFunction & c) -> BlockEquivalence;

    // Argument permutations; a function is invariant under perm when f(x) = f(x o perm).
    using Permutation = std::vector<int>;
    auto cyclic_generators(int n) -> std::vector<Permutation>;
    auto doubly_cyclic_generators(int p) -> std::vector<Permutation>;

    struct EnumerationOptions
    {
        enum class Mode
        {
            automatic,
            exhaustive,
            guided
        };
        Mode mode = Mode::automatic;
        /// Restrict to functions invariant under these argument permutations.
        std::vector<Permutation> invariance;
        std::uint64_t max_column_selections = 20'000'000;
        int max_arity = 16;
    };

    /**
     * Polymorphisms of arity n of a Boolean template, each once, in table order
     * (lexicographic in f(0), f(1), ...). Exhaustive mode tries all 2^(2^n)
     * tables and needs n <= 4; guided mode backtracks over table entries (or
     * over orbits of entries, when invariance generators are given) with the
     * column constraints.
     */
    class PolymorphismStream
    {
    private:
        struct Imp;
        std::unique_ptr<Imp> _imp;

    public:
        PolymorphismStream(const Template & t, int n, EnumerationOptions options = {});
        ~PolymorphismStream();
        PolymorphismStream(PolymorphismStream &&) noexcept;
        auto operator=(PolymorphismStream &&) noexcept -> PolymorphismStream &;

        auto next() -> std::optional<BoolFunction>;
    };

    auto enumerate_polymorphisms(const Template & t, int n, EnumerationOptions options = {}) -> PolymorphismStream;
    auto collect_polymorphisms(const Template & t, int n, EnumerationOptions options = {}) -> std::vector<BoolFunction>;

    // A few named functions used across the tool and tests.
    auto projection(int arity, int coordinate) -> BoolFunction;
    auto parity(int arity) -> BoolFunction;
    auto majority(int arity) -> BoolFunction;
    /// Odd arity: 1 iff x_1 - x_2 + x_3 - ... > 0.
    auto alternating_threshold(int arity) -> BoolFunction;
    auto constant_function(int arity, int value, int domain_size = 2) -> BoolFunction;
}
