#pragma once

#include <pcsp/certificates.hh>

namespace pcsp::detail
{
    auto sum_of(const EvalTuple & z) -> long;
    auto sign_of(long k, const ProofContext & ctx) -> int;
    /// Throws std::invalid_argument unless z has p blocks in [0, p].
    auto check_shape(const EvalTuple & z, const ProofContext & ctx) -> void;
    /// |λ - θ| ≤ 1/s^e (or < with strict_less) for a tuple with block sum `sum`.
    auto within(long sum, int e, const ProofContext & ctx, bool strict_less) -> bool;
}
