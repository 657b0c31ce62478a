#include <pcsp/certificates.hh>

#include <algorithm>
#include <stdexcept>

namespace pcsp
{
    namespace
    {
        constexpr std::size_t max_enumerated_roots = 10;
    }

    PropagationEngine::PropagationEngine(long n) :
        _size(n + 1),
        _parent(static_cast<std::size_t>(n + 1)),
        _parity(static_cast<std::size_t>(n + 1), 0),
        _fixed(static_cast<std::size_t>(n + 1), -1)
    {
        if (n < 0)
            throw std::invalid_argument("propagation engine needs n >= 0");
        for (long v = 0; v < _size; ++v)
            _parent[static_cast<std::size_t>(v)] = v;
    }

    auto PropagationEngine::find(long v) -> std::pair<long, int>
    {
        auto parity = 0;
        auto root = v;
        while (_parent[static_cast<std::size_t>(root)] != root) {
            parity ^= _parity[static_cast<std::size_t>(root)];
            root = _parent[static_cast<std::size_t>(root)];
        }
        // path compression, keeping parities relative to the root
        auto walk = v;
        auto acc = parity;
        while (_parent[static_cast<std::size_t>(walk)] != root && walk != root) {
            auto next = _parent[static_cast<std::size_t>(walk)];
            auto own = _parity[static_cast<std::size_t>(walk)];
            _parent[static_cast<std::size_t>(walk)] = root;
            _parity[static_cast<std::size_t>(walk)] = acc;
            acc ^= own;
            walk = next;
        }
        return {root, parity};
    }

    auto PropagationEngine::unite(long u, long v, int parity) -> bool
    {
        auto [ru, pu] = find(u);
        auto [rv, pv] = find(v);
        if (ru == rv) {
            if ((pu ^ pv) != parity) {
                _contradiction = true;
                _reason = "u_" + std::to_string(u) + " and u_" + std::to_string(v) + " forced both equal and distinct";
                return false;
            }
            return false;
        }
        auto link = pu ^ pv ^ parity; // value(rv) = value(ru) ^ link
        _parent[static_cast<std::size_t>(rv)] = ru;
        _parity[static_cast<std::size_t>(rv)] = link;
        auto fv = _fixed[static_cast<std::size_t>(rv)];
        if (fv >= 0) {
            auto implied = fv ^ link;
            auto & fu = _fixed[static_cast<std::size_t>(ru)];
            if (fu >= 0 && fu != implied) {
                _contradiction = true;
                _reason = "u_" + std::to_string(u) + " forced to both values";
                return false;
            }
            fu = implied;
        }
        return true;
    }

    auto PropagationEngine::fix(long v, int value) -> bool
    {
        auto [root, parity] = find(v);
        auto & f = _fixed[static_cast<std::size_t>(root)];
        auto implied = value ^ parity;
        if (f == implied)
            return false;
        if (f >= 0) {
            _contradiction = true;
            _reason = "u_" + std::to_string(v) + " forced to both values";
            return false;
        }
        f = implied;
        return true;
    }

    auto PropagationEngine::add_constraint(std::vector<long> ks, const BoolRelation & q) -> void
    {
        if (static_cast<int>(ks.size()) != q.arity())
            throw std::invalid_argument("constraint length does not match the relation arity");
        for (auto k : ks)
            if (k < 0 || k >= _size)
                throw std::invalid_argument("constraint index out of range");
        _constraints.push_back(std::move(ks));
        _relations.push_back(&q);
    }

    auto PropagationEngine::add_negation(long k) -> void
    {
        if (k < 0 || k >= _size)
            throw std::invalid_argument("negation index out of range");
        if (unite(k, _size - 1 - k, 1) || _contradiction)
            return;
    }

    auto PropagationEngine::run() -> bool
    {
        auto changed = true;
        while (changed && ! _contradiction) {
            changed = false;
            // allowed (x, y) combinations per root pair, bit 2x+y
            std::map<std::pair<long, long>, int> pair_masks;
            for (std::size_t c = 0; c < _constraints.size() && ! _contradiction; ++c) {
                const auto & ks = _constraints[c];
                const auto & q = *_relations[c];
                std::vector<long> roots;
                std::vector<int> parity(ks.size());
                std::vector<int> slot(ks.size(), -1);
                Tuple tuple(ks.size(), 0);
                for (std::size_t i = 0; i < ks.size(); ++i) {
                    auto [root, par] = find(ks[i]);
                    auto f = _fixed[static_cast<std::size_t>(root)];
                    if (f >= 0) {
                        tuple[i] = f ^ par;
                        continue;
                    }
                    parity[i] = par;
                    auto it = std::find(roots.begin(), roots.end(), root);
                    slot[i] = static_cast<int>(it - roots.begin());
                    if (it == roots.end())
                        roots.push_back(root);
                }
                if (roots.size() > max_enumerated_roots)
                    continue;

                auto count = std::size_t{1} << roots.size();
                std::vector<std::size_t> sat;
                for (std::size_t mask = 0; mask < count; ++mask) {
                    for (std::size_t i = 0; i < ks.size(); ++i)
                        if (slot[i] >= 0)
                            tuple[i] = static_cast<int>((mask >> slot[i]) & 1) ^ parity[i];
                    if (q.contains(tuple))
                        sat.push_back(mask);
                }
                if (sat.empty()) {
                    _contradiction = true;
                    _reason = "no admissible values for constraint " + std::to_string(c);
                    break;
                }
                for (std::size_t i = 0; i < roots.size(); ++i) {
                    auto first = (sat[0] >> i) & 1;
                    auto forced = std::all_of(sat.begin(), sat.end(), [&](auto m) { return ((m >> i) & 1) == first; });
                    if (forced)
                        changed |= fix(roots[i], static_cast<int>(first));
                }
                for (std::size_t i = 0; i < roots.size(); ++i)
                    for (std::size_t j = i + 1; j < roots.size(); ++j) {
                        auto mask = 0;
                        for (auto m : sat)
                            mask |= 1 << (2 * ((m >> i) & 1) + ((m >> j) & 1));
                        auto key = std::minmax(roots[i], roots[j]);
                        if (key.first != roots[i])
                            mask = (mask & 0b1001) | ((mask & 0b0010) << 1) | ((mask & 0b0100) >> 1);
                        auto [it, fresh] = pair_masks.emplace(key, mask);
                        if (! fresh)
                            it->second &= mask;
                    }
            }
            for (const auto & [key, mask] : pair_masks) {
                if (_contradiction)
                    break;
                auto [x, y] = key;
                if (mask == 0) {
                    _contradiction = true;
                    _reason = "u_" + std::to_string(x) + ", u_" + std::to_string(y) + " admit no joint values";
                    break;
                }
                if ((mask & 0b0110) == 0)
                    changed |= unite(x, y, 0);
                else if ((mask & 0b1001) == 0)
                    changed |= unite(x, y, 1);
                if ((mask & 0b0011) == 0)
                    changed |= fix(x, 1);
                else if ((mask & 0b1100) == 0)
                    changed |= fix(x, 0);
                if ((mask & 0b0101) == 0)
                    changed |= fix(y, 1);
                else if ((mask & 0b1010) == 0)
                    changed |= fix(y, 0);
            }
        }
        return ! _contradiction;
    }

    auto PropagationEngine::relation(long k, long v) -> std::optional<int>
    {
        auto [rk, pk] = find(k);
        auto [rv, pv] = find(v);
        if (rk == rv)
            return pk ^ pv;
        auto fk = _fixed[static_cast<std::size_t>(rk)];
        auto fv = _fixed[static_cast<std::size_t>(rv)];
        if (fk >= 0 && fv >= 0)
            return (fk ^ pk) ^ (fv ^ pv);
        return std::nullopt;
    }

    auto PropagationEngine::absolute(long k) -> std::optional<int>
    {
        auto [root, par] = find(k);
        auto f = _fixed[static_cast<std::size_t>(root)];
        if (f < 0)
            return std::nullopt;
        return f ^ par;
    }

    auto propagate(const std::vector<ChainStep> & chain, const BoolRelation & q, const ProofContext & ctx, long lo,
        long hi) -> PropagationResult
    {
        if (hi < 0)
            hi = 2 * ctx.a;
        PropagationEngine engine(ctx.n);
        for (const auto & step : chain) {
            if (step.kind == ChainStep::Kind::negation)
                engine.add_negation(step.k);
            else
                engine.add_constraint(step.ks, q);
        }
        PropagationResult result;
        if (! engine.run()) {
            result.status = PropagationResult::Status::contradiction;
            result.reason = engine.reason();
            return result;
        }
        for (auto k = lo; k <= hi; ++k) {
            if (auto v = engine.absolute(k))
                result.absolute[k] = *v;
            auto rel = engine.relation(k, 0);
            if (! rel) {
                result.unforced.push_back(k);
                continue;
            }
            result.relative[k] = *rel;
            if (*rel != (k > ctx.a ? 1 : 0))
                result.mismatched.push_back(k);
        }
        if (! result.mismatched.empty()) {
            result.status = PropagationResult::Status::contradiction;
            result.reason = "forced value disagrees with the tame pattern at k=" + std::to_string(result.mismatched[0]);
        }
        else if (! result.unforced.empty()) {
            result.status = PropagationResult::Status::unforced;
            result.reason = std::to_string(result.unforced.size()) + " values unforced, first k="
                + std::to_string(result.unforced[0]);
        }
        return result;
    }
}
