#pragma once

#include <pcsp/certificates.hh>

#include <random>
#include <string>

namespace pcsp::testing
{
    /// Applies one random damaging edit; returns a short label of what changed.
    inline auto mutate(Certificate & cert, std::mt19937 & rng) -> std::string
    {
        auto pick_node = [&]() -> ProofNode & {
            return cert.nodes[std::uniform_int_distribution<std::size_t>(0, cert.nodes.size() - 1)(rng)];
        };
        auto find_kind = [&](Claim::Kind kind) -> ProofNode * {
            std::vector<ProofNode *> hits;
            for (auto & node : cert.nodes)
                if (node.claim.kind == kind)
                    hits.push_back(&node);
            if (hits.empty())
                return nullptr;
            return hits[std::uniform_int_distribution<std::size_t>(0, hits.size() - 1)(rng)];
        };
        for (;;) {
            switch (std::uniform_int_distribution<int>(0, 7)(rng)) {
            case 0:
                if (auto node = find_kind(Claim::Kind::constraint_1d)) {
                    node->claim.ks[std::uniform_int_distribution<std::size_t>(0, node->claim.ks.size() - 1)(rng)] += 1;
                    return "constraint height";
                }
                break;
            case 1:
                if (auto node = find_kind(Claim::Kind::forced_value)) {
                    node->claim.bit ^= 1;
                    return "forced bit";
                }
                break;
            case 2:
                if (auto node = find_kind(Claim::Kind::tame)) {
                    auto & z = node->claim.z;
                    auto i = std::uniform_int_distribution<std::size_t>(0, z.size() - 1)(rng);
                    z[i] = z[i] > 0 ? z[i] - 1 : z[i] + 1;
                    return "tame block height";
                }
                break;
            case 3: {
                auto & node = pick_node();
                if (node.refs.empty())
                    break;
                node.refs[0] = node.id;
                return "self reference";
            }
            case 4:
                cert.context.n += 1;
                return "context";
            case 5:
                if (auto node = find_kind(Claim::Kind::pair_refuted)) {
                    node->claim.z_top += 1;
                    return "pair height";
                }
                break;
            case 6: {
                auto & node = pick_node();
                node.justification.kind = node.justification.kind == Justification::Kind::propagation
                    ? Justification::Kind::plausible_1d
                    : Justification::Kind::propagation;
                return "justification kind";
            }
            case 7:
                if (cert.conclusion_node > 0) {
                    cert.conclusion_node -= 1;
                    return "conclusion node";
                }
                break;
            }
        }
    }
}
