#pragma once

#include <pcsp/classifier.hh>
#include <pcsp/structures.hh>

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pcsp
{
    /// Rows over GF(2), packed 64 columns per word.
    class GF2System
    {
    private:
        int _var_count;
        std::vector<std::vector<std::uint64_t>> _rows;
        std::vector<int> _rhs;

    public:
        explicit GF2System(int var_count);

        /// Adds sum of vars = rhs (mod 2); a variable listed twice cancels.
        auto add_equation(const std::vector<int> & vars, int rhs) -> void;

        auto var_count() const noexcept -> int { return _var_count; }
        auto equation_count() const noexcept -> std::size_t { return _rows.size(); }
        auto coefficient(std::size_t row, int var) const -> int;
        auto rhs(std::size_t row) const -> int { return _rhs[row]; }
        auto satisfied_by(const std::vector<int> & x) const -> bool;

        friend auto solve_gf2(const GF2System & sys) -> std::optional<std::vector<int>>;
    };

    /// Gaussian elimination with pivots taken in column order; free variables are 0.
    auto solve_gf2(const GF2System & sys) -> std::optional<std::vector<int>>;

    struct IntLinearSystem
    {
        int var_count = 0;
        std::vector<std::vector<mpz_class>> a;
        std::vector<mpz_class> b;

        auto add_equation(std::vector<mpz_class> row, mpz_class rhs) -> void;
        auto satisfied_by(const std::vector<mpz_class> & x) const -> bool;
    };

    struct DiophantineSolution
    {
        std::vector<mpz_class> point;
        /// A lattice basis of the integer solutions of Ax = 0.
        std::vector<std::vector<mpz_class>> kernel;
    };

    /// Integer solution of Ax = b via a column Hermite normal form A U = H with U unimodular.
    auto solve_diophantine(const IntLinearSystem & sys) -> std::optional<std::vector<mpz_class>>;
    auto solve_diophantine_full(const IntLinearSystem & sys) -> std::optional<DiophantineSolution>;

    enum class Sense
    {
        le,
        eq,
        ge
    };

    struct RationalInequalitySystem
    {
        struct Row
        {
            std::vector<mpq_class> coeffs;
            Sense sense;
            mpq_class rhs;
        };

        int var_count = 0;
        std::vector<Row> rows;
        /// Adds 0 <= x <= 1 for every variable; otherwise variables are only non-negative.
        bool unit_box = true;

        auto add_row(std::vector<mpq_class> coeffs, Sense sense, mpq_class rhs) -> void;
        auto satisfied_by(const std::vector<mpq_class> & x) const -> bool;
    };

    enum class LpStatus
    {
        optimal,
        infeasible,
        unbounded
    };

    struct LpResult
    {
        LpStatus status;
        mpq_class value;
        std::vector<mpq_class> point;
    };

    /// Exact two-phase simplex with Bland's rule.
    auto maximize_lp(const RationalInequalitySystem & sys, const std::vector<mpq_class> & objective) -> LpResult;
    auto solve_lp_feasible(const RationalInequalitySystem & sys) -> std::optional<std::vector<mpq_class>>;

    /**
     * A point of the system whose coordinates all have odd denominators, or
     * nothing when the polytope has none. Works from the affine hull of the
     * feasible region: odd-denominator points are dense in it whenever it
     * has one, so the search reduces to an integer system plus rounding.
     */
    auto find_odd_denominator_point(const RationalInequalitySystem & sys) -> std::optional<std::vector<mpq_class>>;

    enum class Answer
    {
        yes,
        no
    };

    struct PromiseAnswer
    {
        Answer answer;
        SandwichSolver backend;
        /// For Yes: an assignment satisfying the instance on the B side, when the backend gives one.
        std::optional<Assignment> witness;
        /// The sandwich-side point, printed exactly (integers, rationals or bits).
        std::vector<std::string> point;
        bool externally_justified = false;
    };

    auto solve_pcsp(const Template & t, const Instance & x) -> PromiseAnswer;
    auto solve_pcsp(const Template & t, const SandwichSpec & spec, const Instance & x) -> PromiseAnswer;

    struct BruteForceResult
    {
        bool a_sat;
        bool b_sat;
    };

    constexpr int default_brute_force_cap = 16;

    /// Tries all 2^var_count assignments; throws ResourceLimit above the cap.
    auto brute_force_promise(const Template & t, const Instance & x, int cap = default_brute_force_cap) -> BruteForceResult;
}
