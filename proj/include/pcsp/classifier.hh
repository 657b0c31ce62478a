#pragma once

#include <pcsp/structures.hh>

#include <optional>
#include <string>
#include <vector>

namespace pcsp
{
    enum class BasicItem
    {
        a_parity,
        b_majority,
        c_threshold
    };

    /// One of the basic tractable shapes, with parameters as written in the template.
    struct BasicCase
    {
        BasicItem item;
        int r = 0;
        int s = 0;
        bool mirrored = false;
        bool has_neq = false;

        auto describe() const -> std::string;
        auto operator==(const BasicCase &) const -> bool = default;
    };

    enum class Complexity
    {
        tractable,
        np_hard,
        unknown
    };

    enum class Finiteness
    {
        finitely_tractable,
        not_finitely_tractable,
        unknown
    };

    enum class SandwichSolver
    {
        gf2,
        lp,
        diophantine,
        constant
    };

    /// How one template pair is encoded for the sandwich backend.
    struct PairRecipe
    {
        enum class Kind
        {
            parity,      // sum = rhs (mod 2)
            at_most,     // sum <= rhs
            at_least,    // sum >= rhs
            exact_sum,   // sum = rhs over the integers
            disequality, // x + y = 1
            unconstrained,
            impossible
        };
        Kind kind;
        int rhs = 0;

        auto operator==(const PairRecipe &) const -> bool = default;
    };

    struct SandwichSpec
    {
        SandwichSolver solver;
        int r = 0;
        int s = 0;
        bool mirrored = false;
        std::vector<PairRecipe> pairs;
        int constant = 0;
        bool externally_justified = false;
        /// Boolean map from the base B side into this template's B side: 0 identity, 1 negation, 2/3 constant 0/1.
        int b_map = 0;
    };

    struct Verdict
    {
        Complexity complexity = Complexity::unknown;
        Finiteness finiteness = Finiteness::unknown;
        std::optional<BasicCase> basic;
        std::optional<int> theorem_item;
        std::optional<SandwichSpec> sandwich;
        std::string reason;

        /// "complexity=... finiteness=... case=... theorem_item=..."
        auto line() const -> std::string;
    };

    auto to_string(Complexity c) -> std::string;
    auto to_string(Finiteness f) -> std::string;
    auto to_string(SandwichSolver s) -> std::string;

    /// Exact match of the non-disequality pairs (all identical) against the basic items, up to 0/1 swap.
    auto match_basic(const Template & t) -> std::optional<BasicCase>;
    auto classify(const Template & t) -> Verdict;

    /// Throws UnsupportedTemplate when classify finds no recipe.
    auto sandwich(const Template & t) -> SandwichSpec;

    /// The basic templates with s <= max_s, one row per (item, s), for the README and golden tests.
    struct TableRow
    {
        std::string family;
        int s;
        std::string cells;  // one character per r: F finitely tractable, N not, ? unknown
    };
    auto classification_table(int max_s) -> std::vector<TableRow>;
    auto render_table(const std::vector<TableRow> & rows) -> std::string;

    // Catalog templates, handy for tests and the CLI.
    auto parity_template(int s, bool odd, bool with_neq) -> Template;
    auto majority_template(int r, int s, bool with_neq) -> Template;
    auto threshold_template(int r, int s, bool with_neq) -> Template;
}
