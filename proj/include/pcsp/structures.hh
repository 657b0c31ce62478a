#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pcsp
{
    using Tuple = std::vector<int>;

    enum class Family
    {
        odd,
        even,
        exact,
        atmost,
        atleast,
        nae,
        neq,
        full,
        constant
    };

    /**
     * A Boolean relation. Symmetric relations are stored as the set of
     * admissible Hamming weights; anything else keeps an explicit tuple list.
     * The disequality relation keeps both (weights {1} and its two tuples).
     */
    class BoolRelation
    {
    private:
        int _arity = 0;
        bool _symmetric = false;
        std::vector<bool> _weights;            // indexed 0..arity, valid when symmetric
        std::optional<std::vector<Tuple>> _explicit;
        bool _neq = false;

        BoolRelation() = default;

    public:
        static auto from_weights(int arity, const std::vector<int> & weights) -> BoolRelation;

        /// Explicit tuple list; detected as symmetric when it is a union of whole weight classes.
        static auto from_tuples(int arity, std::vector<Tuple> tuples) -> BoolRelation;

        static auto disequality() -> BoolRelation;

        auto arity() const noexcept -> int { return _arity; }
        auto symmetric() const noexcept -> bool { return _symmetric; }
        auto is_neq() const noexcept -> bool { return _neq; }

        /// Admissible weights in increasing order. Throws for non-symmetric relations.
        auto weights() const -> std::vector<int>;
        auto has_weight(int w) const -> bool;

        auto contains(std::span<const int> tuple) const -> bool;

        /// All member tuples, in lexicographic order with 1 before 0
        /// (so (1,0,0) precedes (0,1,0) for 1-in-3).
        auto tuples() const -> std::vector<Tuple>;
        auto size() const -> std::uint64_t;
        auto empty() const -> bool { return size() == 0; }

        /// Image under the 0/1 swap.
        auto swapped() const -> BoolRelation;

        /// Template-file spelling, e.g. "rin 1 3" or "nae 3".
        auto describe() const -> std::string;

        auto operator==(const BoolRelation & other) const -> bool;
    };

    auto build_family(Family kind, int r, int s) -> BoolRelation;
    auto contains(const BoolRelation & rel, std::span<const int> tuple) -> bool;

    struct RelationPair
    {
        BoolRelation a;
        BoolRelation b;
    };

    /// A Boolean PCSP template, given as the list of relation pairs (A-side, B-side).
    class Template
    {
    private:
        std::vector<RelationPair> _pairs;

    public:
        /// Checks equal arities per pair and that the identity-free search finds A -> B.
        explicit Template(std::vector<RelationPair> pairs);

        auto pairs() const noexcept -> const std::vector<RelationPair> & { return _pairs; }
        auto size() const noexcept -> std::size_t { return _pairs.size(); }
        auto has_neq() const -> bool;
        auto swapped() const -> Template;
    };

    struct Constraint
    {
        int pair_index;
        std::vector<int> vars;
    };

    struct Instance
    {
        int var_count = 0;
        std::vector<Constraint> constraints;

        /// Throws std::invalid_argument if an index is out of range or an arity disagrees with t.
        auto validate(const Template & t) const -> void;
    };

    using Assignment = std::vector<int>;

    /// A finite relational structure over the domain {0, ..., domain_size-1}.
    struct Structure
    {
        int domain_size = 0;
        std::vector<int> arities;
        std::vector<std::vector<Tuple>> relations;

        auto similar_to(const Structure & other) const -> bool;
    };

    enum class Side
    {
        a,
        b
    };

    auto template_structure(const Template & t, Side side) -> Structure;
    auto instance_structure(const Instance & x, const Template & t) -> Structure;

    /// Backtracking search with generalised arc consistency. Variables are
    /// branched in index order, values from the largest element down, so the
    /// witness is reproducible.
    auto find_homomorphism(const Structure & source, const Structure & target) -> std::optional<Assignment>;

    auto hom_exists(const Instance & x, const Template & t, Side side) -> std::optional<Assignment>;

    /// True iff t_prime is a homomorphic relaxation of t: A' -> A and B -> B'.
    auto is_relaxation(const Template & t_prime, const Template & t) -> bool;

    auto satisfies(const Instance & x, const Template & t, Side side, const Assignment & values) -> bool;
}
