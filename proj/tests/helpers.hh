#pragma once

#include <pcsp/polymorphisms.hh>
#include <pcsp/structures.hh>

#include <algorithm>
#include <cstdint>
#include <random>

namespace pcsp::testing
{
    inline auto random_instance(std::mt19937 & rng, const Template & t, int max_vars, int max_constraints)
        -> Instance
    {
        Instance x;
        x.var_count = std::uniform_int_distribution<int>(1, max_vars)(rng);
        auto count = std::uniform_int_distribution<int>(0, max_constraints)(rng);
        std::uniform_int_distribution<int> pick_pair(0, static_cast<int>(t.size()) - 1);
        std::uniform_int_distribution<int> pick_var(0, x.var_count - 1);
        for (int c = 0; c < count; ++c) {
            Constraint con;
            con.pair_index = pick_pair(rng);
            auto arity = t.pairs()[static_cast<std::size_t>(con.pair_index)].a.arity();
            for (int i = 0; i < arity; ++i)
                con.vars.push_back(pick_var(rng));
            x.constraints.push_back(std::move(con));
        }
        return x;
    }

    /// Exhaustive satisfiability over all 2^var_count Boolean assignments.
    inline auto exhaustive_sat(const Instance & x, const Template & t, Side side) -> bool
    {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << x.var_count); ++mask) {
            auto ok = true;
            for (const auto & c : x.constraints) {
                const auto & pair = t.pairs()[static_cast<std::size_t>(c.pair_index)];
                const auto & rel = side == Side::a ? pair.a : pair.b;
                Tuple tuple;
                for (auto v : c.vars)
                    tuple.push_back(static_cast<int>((mask >> v) & 1));
                if (! rel.contains(tuple)) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                return true;
        }
        return false;
    }
}

namespace pcsp::testing
{
    inline auto random_function(std::mt19937 & rng, int arity, int domain_size = 2) -> BoolFunction
    {
        BoolFunction f(arity, domain_size);
        std::uniform_int_distribution<int> pick(0, domain_size - 1);
        for (std::uint64_t i = 0; i < f.table_size(); ++i)
            f.set(i, pick(rng));
        return f;
    }

    /// Uniform over cyclic functions: one random value per rotation orbit.
    inline auto random_cyclic(std::mt19937 & rng, int arity, int domain_size) -> BoolFunction
    {
        BoolFunction f(arity, domain_size);
        std::uniform_int_distribution<int> pick(0, domain_size - 1);
        std::vector<bool> done(f.table_size(), false);
        for (std::uint64_t i = 0; i < f.table_size(); ++i) {
            if (done[i])
                continue;
            auto v = pick(rng);
            auto args = f.args_of(i);
            for (int r = 0; r < arity; ++r) {
                auto j = f.index_of(args);
                done[j] = true;
                f.set(j, v);
                std::rotate(args.begin(), args.begin() + 1, args.end());
            }
        }
        return f;
    }

    inline auto random_minor_map(std::mt19937 & rng, int source, int target) -> MinorMap
    {
        MinorMap pi{source, target, {}};
        std::uniform_int_distribution<int> pick(0, target - 1);
        for (int i = 0; i < source; ++i)
            pi.map.push_back(pick(rng));
        return pi;
    }
}
