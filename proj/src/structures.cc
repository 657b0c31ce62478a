#include <pcsp/errors.hh>
#include <pcsp/structures.hh>

#include <algorithm>
#include <bit>
#include <functional>
#include <stdexcept>

using std::invalid_argument;
using std::optional;
using std::span;
using std::string;
using std::to_string;
using std::vector;

namespace pcsp
{
    namespace
    {
        constexpr int max_enumerable_arity = 24;

        auto weight_of(span<const int> tuple) -> int
        {
            int w = 0;
            for (auto v : tuple) {
                if (v != 0 && v != 1)
                    throw invalid_argument("tuple entry " + to_string(v) + " is not a bit");
                w += v;
            }
            return w;
        }

        auto binomial(int n, int k) -> std::uint64_t
        {
            if (k < 0 || k > n)
                return 0;
            k = std::min(k, n - k);
            std::uint64_t result = 1;
            for (int i = 1; i <= k; ++i)
                result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
            return result;
        }

        auto apply_map(int f0, int f1, const Tuple & t) -> Tuple
        {
            Tuple out(t.size());
            for (std::size_t i = 0; i < t.size(); ++i)
                out[i] = t[i] ? f1 : f0;
            return out;
        }

        // Does the map 0 -> f0, 1 -> f1 send every tuple of from into to?
        auto maps_into(int f0, int f1, const BoolRelation & from, const BoolRelation & to) -> bool
        {
            if (from.arity() != to.arity())
                return false;
            int s = from.arity();
            if (from.symmetric() && to.symmetric()) {
                for (auto w : from.weights()) {
                    int image = 0;
                    if (f1 == 1)
                        image += w;
                    if (f0 == 1)
                        image += s - w;
                    if (! to.has_weight(image))
                        return false;
                }
                return true;
            }
            for (auto & t : from.tuples())
                if (! to.contains(apply_map(f0, f1, t)))
                    return false;
            return true;
        }

        auto boolean_hom_exists(const vector<const BoolRelation *> & from, const vector<const BoolRelation *> & to) -> bool
        {
            if (from.size() != to.size())
                throw invalid_argument("signature mismatch: different numbers of relations");
            for (std::size_t i = 0; i < from.size(); ++i)
                if (from[i]->arity() != to[i]->arity())
                    throw invalid_argument("signature mismatch: relation " + to_string(i) + " arities differ");
            for (int f0 = 0; f0 <= 1; ++f0)
                for (int f1 = 0; f1 <= 1; ++f1) {
                    bool ok = true;
                    for (std::size_t i = 0; ok && i < from.size(); ++i)
                        ok = maps_into(f0, f1, *from[i], *to[i]);
                    if (ok)
                        return true;
                }
            return false;
        }
    }

    auto BoolRelation::from_weights(int arity, const vector<int> & weights) -> BoolRelation
    {
        if (arity < 1)
            throw invalid_argument("relation arity must be positive");
        BoolRelation result;
        result._arity = arity;
        result._symmetric = true;
        result._weights.assign(arity + 1, false);
        for (auto w : weights) {
            if (w < 0 || w > arity)
                throw invalid_argument("weight " + to_string(w) + " outside 0.." + to_string(arity));
            result._weights[w] = true;
        }
        return result;
    }

    auto BoolRelation::from_tuples(int arity, vector<Tuple> tuples) -> BoolRelation
    {
        if (arity < 1)
            throw invalid_argument("relation arity must be positive");
        if (arity > max_enumerable_arity)
            throw ResourceLimit("explicit relations are limited to arity " + to_string(max_enumerable_arity));
        for (auto & t : tuples) {
            if (static_cast<int>(t.size()) != arity)
                throw invalid_argument("explicit tuple has wrong length");
            weight_of(t);
        }
        std::sort(tuples.begin(), tuples.end(), std::greater<>());
        tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());

        BoolRelation result;
        result._arity = arity;
        vector<std::uint64_t> per_weight(arity + 1, 0);
        for (auto & t : tuples)
            ++per_weight[weight_of(t)];
        bool whole_classes = true;
        for (int w = 0; w <= arity; ++w)
            if (per_weight[w] != 0 && per_weight[w] != binomial(arity, w))
                whole_classes = false;
        if (whole_classes) {
            result._symmetric = true;
            result._weights.assign(arity + 1, false);
            for (int w = 0; w <= arity; ++w)
                result._weights[w] = per_weight[w] != 0;
        }
        result._explicit = std::move(tuples);
        return result;
    }

    auto BoolRelation::disequality() -> BoolRelation
    {
        auto result = from_tuples(2, {{0, 1}, {1, 0}});
        result._neq = true;
        return result;
    }

    auto BoolRelation::weights() const -> vector<int>
    {
        if (! _symmetric)
            throw std::logic_error("weights() on a non-symmetric relation");
        vector<int> result;
        for (int w = 0; w <= _arity; ++w)
            if (_weights[w])
                result.push_back(w);
        return result;
    }

    auto BoolRelation::has_weight(int w) const -> bool
    {
        if (! _symmetric)
            throw std::logic_error("has_weight() on a non-symmetric relation");
        return w >= 0 && w <= _arity && _weights[w];
    }

    auto BoolRelation::contains(span<const int> tuple) const -> bool
    {
        if (static_cast<int>(tuple.size()) != _arity)
            throw invalid_argument("tuple of length " + to_string(tuple.size()) + " queried against relation of arity " + to_string(_arity));
        int w = weight_of(tuple);
        if (_symmetric)
            return _weights[w];
        Tuple t(tuple.begin(), tuple.end());
        return std::binary_search(_explicit->begin(), _explicit->end(), t, std::greater<>());
    }

    auto BoolRelation::tuples() const -> vector<Tuple>
    {
        if (_explicit)
            return *_explicit;
        if (_arity > max_enumerable_arity)
            throw ResourceLimit("refusing to enumerate a relation of arity " + to_string(_arity));
        vector<Tuple> result;
        std::uint64_t total = std::uint64_t{1} << _arity;
        for (std::uint64_t code = total; code-- > 0;) {
            if (! _weights[std::popcount(code)])
                continue;
            Tuple t(_arity);
            for (int i = 0; i < _arity; ++i)
                t[i] = (code >> (_arity - 1 - i)) & 1;
            result.push_back(std::move(t));
        }
        return result;
    }

    auto BoolRelation::size() const -> std::uint64_t
    {
        if (_explicit)
            return _explicit->size();
        std::uint64_t total = 0;
        for (int w = 0; w <= _arity; ++w)
            if (_weights[w])
                total += binomial(_arity, w);
        return total;
    }

    auto BoolRelation::swapped() const -> BoolRelation
    {
        if (_explicit) {
            vector<Tuple> flipped;
            for (auto & t : *_explicit)
                flipped.push_back(apply_map(1, 0, t));
            auto result = from_tuples(_arity, std::move(flipped));
            result._neq = _neq;
            return result;
        }
        vector<int> ws;
        for (auto w : weights())
            ws.push_back(_arity - w);
        return from_weights(_arity, ws);
    }

    auto BoolRelation::describe() const -> string
    {
        if (_neq)
            return "neq";
        if (_symmetric) {
            auto ws = weights();
            int s = _arity;
            auto is_range = [&](int lo, int hi) {
                if (ws.empty() || lo > hi)
                    return false;
                if (static_cast<int>(ws.size()) != hi - lo + 1)
                    return false;
                return ws.front() == lo && ws.back() == hi;
            };
            bool all_odd = ! ws.empty(), all_even = ! ws.empty();
            for (auto w : ws) {
                all_odd = all_odd && w % 2 == 1;
                all_even = all_even && w % 2 == 0;
            }
            if (is_range(0, s))
                return "full " + to_string(s);
            if (s >= 2 && is_range(1, s - 1))
                return "nae " + to_string(s);
            if (ws.size() == 1)
                return "rin " + to_string(ws.front()) + " " + to_string(s);
            if (is_range(0, ws.back()))
                return "atmost " + to_string(ws.back()) + " " + to_string(s);
            if (is_range(ws.front(), s))
                return "atleast " + to_string(ws.front()) + " " + to_string(s);
            if (all_odd && static_cast<int>(ws.size()) == (s + 1) / 2)
                return "odd " + to_string(s);
            if (all_even && static_cast<int>(ws.size()) == s / 2 + 1)
                return "even " + to_string(s);
            if (ws.size() == 2 && ws[0] == 0 && ws[1] == s)
                return "const " + to_string(s);
        }
        string out = "explicit " + to_string(_arity) + " ";
        bool first = true;
        for (auto & t : tuples()) {
            if (! first)
                out += ",";
            first = false;
            for (auto v : t)
                out += static_cast<char>('0' + v);
        }
        return out;
    }

    auto BoolRelation::operator==(const BoolRelation & other) const -> bool
    {
        if (_arity != other._arity || _symmetric != other._symmetric)
            return false;
        if (_symmetric)
            return _weights == other._weights;
        return tuples() == other.tuples();
    }

    auto build_family(Family kind, int r, int s) -> BoolRelation
    {
        if (kind == Family::neq)
            return BoolRelation::disequality();
        if (s < 1)
            throw invalid_argument("relation arity s must be at least 1");
        auto needs_r = kind == Family::exact || kind == Family::atmost || kind == Family::atleast;
        if (needs_r && (r < 0 || r > s))
            throw invalid_argument("r = " + to_string(r) + " outside 0.." + to_string(s));

        vector<int> ws;
        for (int w = 0; w <= s; ++w) {
            bool in = false;
            switch (kind) {
            case Family::odd: in = w % 2 == 1; break;
            case Family::even: in = w % 2 == 0; break;
            case Family::exact: in = w == r; break;
            case Family::atmost: in = w <= r; break;
            case Family::atleast: in = w >= r; break;
            case Family::nae: in = w != 0 && w != s; break;
            case Family::full: in = true; break;
            case Family::constant: in = w == 0 || w == s; break;
            case Family::neq: break;
            }
            if (in)
                ws.push_back(w);
        }
        return BoolRelation::from_weights(s, ws);
    }

    auto contains(const BoolRelation & rel, span<const int> tuple) -> bool
    {
        return rel.contains(tuple);
    }

    Template::Template(vector<RelationPair> pairs) :
        _pairs(std::move(pairs))
    {
        vector<const BoolRelation *> as, bs;
        for (std::size_t i = 0; i < _pairs.size(); ++i) {
            if (_pairs[i].a.arity() != _pairs[i].b.arity())
                throw invalid_argument("pair " + to_string(i) + " has relations of different arities");
            as.push_back(&_pairs[i].a);
            bs.push_back(&_pairs[i].b);
        }
        if (! boolean_hom_exists(as, bs))
            throw invalid_argument("not a PCSP template: no homomorphism from the A side to the B side");
    }

    auto Template::has_neq() const -> bool
    {
        return std::any_of(_pairs.begin(), _pairs.end(), [](const RelationPair & p) { return p.a.is_neq() && p.b.is_neq(); });
    }

    auto Template::swapped() const -> Template
    {
        vector<RelationPair> flipped;
        for (auto & p : _pairs)
            flipped.push_back(RelationPair{p.a.swapped(), p.b.swapped()});
        return Template{std::move(flipped)};
    }

    auto Instance::validate(const Template & t) const -> void
    {
        if (var_count < 0)
            throw invalid_argument("negative variable count");
        for (auto & c : constraints) {
            if (c.pair_index < 0 || c.pair_index >= static_cast<int>(t.size()))
                throw invalid_argument("constraint refers to pair " + to_string(c.pair_index) + " which does not exist");
            if (static_cast<int>(c.vars.size()) != t.pairs()[c.pair_index].a.arity())
                throw invalid_argument("constraint on pair " + to_string(c.pair_index) + " has the wrong number of variables");
            for (auto v : c.vars)
                if (v < 0 || v >= var_count)
                    throw invalid_argument("variable index " + to_string(v) + " out of range");
        }
    }

    auto Structure::similar_to(const Structure & other) const -> bool
    {
        return arities == other.arities;
    }

    auto template_structure(const Template & t, Side side) -> Structure
    {
        Structure result;
        result.domain_size = 2;
        for (auto & p : t.pairs()) {
            auto & rel = side == Side::a ? p.a : p.b;
            result.arities.push_back(rel.arity());
            result.relations.push_back(rel.tuples());
        }
        return result;
    }

    auto instance_structure(const Instance & x, const Template & t) -> Structure
    {
        x.validate(t);
        Structure result;
        result.domain_size = x.var_count;
        for (auto & p : t.pairs())
            result.arities.push_back(p.a.arity());
        result.relations.resize(t.size());
        for (auto & c : x.constraints)
            result.relations[c.pair_index].push_back(c.vars);
        return result;
    }

    namespace
    {
        using Domains = vector<std::uint64_t>;

        struct Searcher
        {
            const Structure & source;
            const Structure & target;

            // Generalised arc consistency over every source tuple.
            auto propagate(Domains & domains) const -> bool
            {
                bool changed = true;
                while (changed) {
                    changed = false;
                    for (std::size_t r = 0; r < source.relations.size(); ++r) {
                        for (auto & st : source.relations[r]) {
                            Domains support(st.size(), 0);
                            for (auto & tt : target.relations[r]) {
                                bool ok = true;
                                for (std::size_t j = 0; ok && j < st.size(); ++j) {
                                    if (! ((domains[st[j]] >> tt[j]) & 1))
                                        ok = false;
                                    for (std::size_t k = 0; ok && k < j; ++k)
                                        if (st[k] == st[j] && tt[k] != tt[j])
                                            ok = false;
                                }
                                if (ok)
                                    for (std::size_t j = 0; j < st.size(); ++j)
                                        support[j] |= std::uint64_t{1} << tt[j];
                            }
                            for (std::size_t j = 0; j < st.size(); ++j) {
                                auto narrowed = domains[st[j]] & support[j];
                                if (narrowed != domains[st[j]]) {
                                    domains[st[j]] = narrowed;
                                    changed = true;
                                }
                                if (narrowed == 0)
                                    return false;
                            }
                        }
                    }
                }
                return true;
            }

            auto search(Domains domains) const -> optional<Assignment>
            {
                if (! propagate(domains))
                    return std::nullopt;
                for (std::size_t v = 0; v < domains.size(); ++v) {
                    if (std::popcount(domains[v]) <= 1)
                        continue;
                    for (int value = target.domain_size - 1; value >= 0; --value) {
                        if (! ((domains[v] >> value) & 1))
                            continue;
                        auto next = domains;
                        next[v] = std::uint64_t{1} << value;
                        if (auto result = search(std::move(next)))
                            return result;
                    }
                    return std::nullopt;
                }
                Assignment result(domains.size());
                for (std::size_t v = 0; v < domains.size(); ++v)
                    result[v] = std::countr_zero(domains[v]);
                return result;
            }
        };
    }

    auto find_homomorphism(const Structure & source, const Structure & target) -> optional<Assignment>
    {
        if (! source.similar_to(target))
            throw invalid_argument("signature mismatch between source and target structures");
        if (target.domain_size > 64)
            throw ResourceLimit("target domains above 64 elements are not supported");
        if (source.domain_size == 0)
            return Assignment{};
        if (target.domain_size == 0)
            return std::nullopt;
        std::uint64_t all = target.domain_size == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << target.domain_size) - 1;
        Domains domains(source.domain_size, all);
        return Searcher{source, target}.search(std::move(domains));
    }

    auto hom_exists(const Instance & x, const Template & t, Side side) -> optional<Assignment>
    {
        return find_homomorphism(instance_structure(x, t), template_structure(t, side));
    }

    auto is_relaxation(const Template & t_prime, const Template & t) -> bool
    {
        if (t_prime.size() != t.size())
            throw invalid_argument("signature mismatch: templates have different numbers of pairs");
        vector<const BoolRelation *> a_prime, a, b, b_prime;
        for (std::size_t i = 0; i < t.size(); ++i) {
            a_prime.push_back(&t_prime.pairs()[i].a);
            b_prime.push_back(&t_prime.pairs()[i].b);
            a.push_back(&t.pairs()[i].a);
            b.push_back(&t.pairs()[i].b);
        }
        return boolean_hom_exists(a_prime, a) && boolean_hom_exists(b, b_prime);
    }

    auto satisfies(const Instance & x, const Template & t, Side side, const Assignment & values) -> bool
    {
        if (static_cast<int>(values.size()) != x.var_count)
            return false;
        for (auto & c : x.constraints) {
            Tuple image;
            for (auto v : c.vars)
                image.push_back(values[v]);
            auto & rel = side == Side::a ? t.pairs()[c.pair_index].a : t.pairs()[c.pair_index].b;
            if (! rel.contains(image))
                return false;
        }
        return true;
    }
}
