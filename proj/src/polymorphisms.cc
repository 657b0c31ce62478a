#include <pcsp/errors.hh>
#include <pcsp/polymorphisms.hh>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

using std::invalid_argument;
using std::optional;
using std::span;
using std::string;

using std::uint64_t;
using std::vector;

namespace pcsp
{
    namespace
    {
        auto checked_power(int base, int exponent, uint64_t limit) -> uint64_t
        {
            uint64_t result = 1;
            for (int i = 0; i < exponent; ++i) {
                result *= static_cast<uint64_t>(base);
                if (result > limit)
                    throw ResourceLimit("table with " + std::to_string(base) + "^" + std::to_string(exponent) + " entries exceeds the configured limit");
            }
            return result;
        }

        auto permute(const Permutation & perm, const vector<int> & args) -> vector<int>
        {
            vector<int> out(args.size());
            for (std::size_t j = 0; j < args.size(); ++j)
                out[j] = args[perm[j]];
            return out;
        }

        auto invariant_under(const BoolFunction & f, const Permutation & perm) -> bool
        {
            for (uint64_t i = 0; i < f.table_size(); ++i)
                if (f.value(i) != f(permute(perm, f.args_of(i))))
                    return false;
            return true;
        }
    }

    BoolFunction::BoolFunction(int arity, int domain_size, int max_arity) :
        _arity(arity),
        _domain_size(domain_size)
    {
        if (arity < 1)
            throw invalid_argument("function arity must be positive");
        if (domain_size < 2 || domain_size > 4)
            throw invalid_argument("domain size must be between 2 and 4");
        _bits = domain_size == 2 ? 1 : 2;
        _size = checked_power(domain_size, arity, max_arity >= 62 ? ~uint64_t{0} >> 2 : uint64_t{1} << max_arity);
        _words.assign((_size * static_cast<uint64_t>(_bits) + 63) / 64, 0);
    }

    auto BoolFunction::from_string(int arity, int domain_size, const string & table) -> BoolFunction
    {
        BoolFunction f(arity, domain_size);
        if (table.size() != f.table_size())
            throw invalid_argument("table has " + std::to_string(table.size()) + " entries, expected " + std::to_string(f.table_size()));
        for (uint64_t i = 0; i < f.table_size(); ++i) {
            int v = table[i] - '0';
            if (v < 0 || v >= domain_size)
                throw invalid_argument("table entry '" + string(1, table[i]) + "' outside the domain");
            f.set(i, v);
        }
        return f;
    }

    auto BoolFunction::from_rule(int arity, int domain_size, const std::function<int(span<const int>)> & rule) -> BoolFunction
    {
        BoolFunction f(arity, domain_size);
        for (uint64_t i = 0; i < f.table_size(); ++i)
            f.set(i, rule(f.args_of(i)));
        return f;
    }

    auto BoolFunction::set(uint64_t index, int v) -> void
    {
        if (v < 0 || v >= _domain_size)
            throw invalid_argument("value outside the domain");
        auto bit = index * static_cast<uint64_t>(_bits);
        auto mask = ((uint64_t{1} << _bits) - 1) << (bit % 64);
        _words[bit / 64] = (_words[bit / 64] & ~mask) | (static_cast<uint64_t>(v) << (bit % 64));
    }

    auto BoolFunction::index_of(span<const int> args) const -> uint64_t
    {
        if (static_cast<int>(args.size()) != _arity)
            throw invalid_argument("function of arity " + std::to_string(_arity) + " applied to " + std::to_string(args.size()) + " arguments");
        uint64_t index = 0;
        for (auto a : args) {
            if (a < 0 || a >= _domain_size)
                throw invalid_argument("argument outside the domain");
            index = index * static_cast<uint64_t>(_domain_size) + static_cast<uint64_t>(a);
        }
        return index;
    }

    auto BoolFunction::args_of(uint64_t index) const -> vector<int>
    {
        vector<int> args(_arity);
        for (int j = _arity - 1; j >= 0; --j) {
            args[j] = static_cast<int>(index % static_cast<uint64_t>(_domain_size));
            index /= static_cast<uint64_t>(_domain_size);
        }
        return args;
    }

    auto BoolFunction::to_string() const -> string
    {
        string out;
        out.reserve(_size);
        for (uint64_t i = 0; i < _size; ++i)
            out.push_back(static_cast<char>('0' + value(i)));
        return out;
    }

    auto BoolFunction::operator==(const BoolFunction & other) const -> bool
    {
        return _arity == other._arity && _domain_size == other._domain_size && _words == other._words;
    }

    auto MinorMap::validate() const -> void
    {
        if (source_arity < 1 || target_arity < 1 || static_cast<int>(map.size()) != source_arity)
            throw invalid_argument("minor map has inconsistent arities");
        for (auto v : map)
            if (v < 0 || v >= target_arity)
                throw invalid_argument("minor map value out of range");
    }

    auto MinorMap::then(const MinorMap & rho) const -> MinorMap
    {
        validate();
        rho.validate();
        if (rho.source_arity != target_arity)
            throw invalid_argument("minor maps do not compose");
        MinorMap result{source_arity, rho.target_arity, {}};
        for (auto v : map)
            result.map.push_back(rho.map[v]);
        return result;
    }

    auto BlockEquivalence::block_count() const -> int
    {
        return block_of.empty() ? 0 : *std::max_element(block_of.begin(), block_of.end()) + 1;
    }

    auto BlockEquivalence::validate() const -> void
    {
        if (p < 1 || p > 20 || block_of.size() != (std::size_t{1} << p))
            throw invalid_argument("block equivalence must assign a block to each of the 2^p patterns");
        vector<bool> used(block_of.size(), false);
        for (auto b : block_of) {
            if (b < 0 || b >= static_cast<int>(block_of.size()))
                throw invalid_argument("block equivalence uses an invalid block id");
            used[b] = true;
        }
        for (int b = 0; b < block_count(); ++b)
            if (! used[b])
                throw invalid_argument("block equivalence block ids are not contiguous");
    }

    auto minor(const BoolFunction & f, const MinorMap & pi) -> BoolFunction
    {
        pi.validate();
        if (pi.source_arity != f.arity())
            throw invalid_argument("minor map source arity does not match the function");
        BoolFunction result(pi.target_arity, f.domain_size());
        vector<int> inner(f.arity());
        for (uint64_t i = 0; i < result.table_size(); ++i) {
            auto args = result.args_of(i);
            for (int j = 0; j < f.arity(); ++j)
                inner[j] = args[pi.map[j]];
            result.set(i, f(inner));
        }
        return result;
    }

    auto satisfies_h1(const BoolFunction & f, const BoolFunction & g, const H1Identity & id) -> bool
    {
        if (static_cast<int>(id.lhs.size()) != f.arity() || static_cast<int>(id.rhs.size()) != g.arity())
            throw invalid_argument("identity pattern lengths do not match the function arities");
        if (f.domain_size() != g.domain_size())
            throw invalid_argument("functions over different domains");
        if (id.var_count < 1)
            throw invalid_argument("identity needs at least one variable");
        for (auto v : id.lhs)
            if (v < 0 || v >= id.var_count)
                throw invalid_argument("identity pattern refers to an undeclared variable");
        for (auto v : id.rhs)
            if (v < 0 || v >= id.var_count)
                throw invalid_argument("identity pattern refers to an undeclared variable");
        BoolFunction env(id.var_count, f.domain_size());
        vector<int> l(id.lhs.size()), r(id.rhs.size());
        for (uint64_t i = 0; i < env.table_size(); ++i) {
            auto vals = env.args_of(i);
            for (std::size_t j = 0; j < l.size(); ++j)
                l[j] = vals[id.lhs[j]];
            for (std::size_t j = 0; j < r.size(); ++j)
                r[j] = vals[id.rhs[j]];
            if (f(l) != g(r))
                return false;
        }
        return true;
    }

    auto is_polymorphism(const BoolFunction & f, const Template & t) -> bool
    {
        if (f.domain_size() != 2)
            throw invalid_argument("polymorphisms of Boolean templates must be Boolean functions");
        int n = f.arity();
        for (auto & pair : t.pairs()) {
            int k = pair.a.arity();
            auto columns = pair.a.tuples();
            if (columns.empty())
                continue;

            // For symmetric pairs a joint row permutation maps selections to
            // selections and outputs to outputs, so column 0 can be fixed to
            // one representative per weight class.
            vector<Tuple> first_columns;
            if (pair.a.symmetric() && pair.b.symmetric()) {
                for (auto w : pair.a.weights()) {
                    Tuple rep(k, 0);
                    std::fill(rep.begin(), rep.begin() + w, 1);
                    first_columns.push_back(rep);
                }
            }
            else
                first_columns = columns;

            vector<uint64_t> rows(k, 0);
            Tuple out(k);
            std::function<bool(int)> walk = [&](int column) -> bool {
                if (column == n) {
                    for (int i = 0; i < k; ++i)
                        out[i] = f.value(rows[i]);
                    return pair.b.contains(out);
                }
                auto & choices = column == 0 ? first_columns : columns;
                for (auto & c : choices) {
                    for (int i = 0; i < k; ++i)
                        rows[i] = rows[i] * 2 + static_cast<uint64_t>(c[i]);
                    bool ok = walk(column + 1);
                    for (int i = 0; i < k; ++i)
                        rows[i] /= 2;
                    if (! ok)
                        return false;
                }
                return true;
            };
            if (! walk(0))
                return false;
        }
        return true;
    }

    auto cyclic_generators(int n) -> vector<Permutation>
    {
        Permutation rot(n);
        for (int j = 0; j < n; ++j)
            rot[j] = (j + 1) % n;
        return {rot};
    }

    auto doubly_cyclic_generators(int p) -> vector<Permutation>
    {
        Permutation inner(p * p), outer(p * p);
        for (int b = 0; b < p; ++b)
            for (int o = 0; o < p; ++o) {
                inner[b * p + o] = b == 0 ? (o + 1) % p : b * p + o;
                outer[b * p + o] = ((b + 1) % p) * p + o;
            }
        return {inner, outer};
    }

    auto is_cyclic(const BoolFunction & f) -> bool
    {
        return invariant_under(f, cyclic_generators(f.arity()).front());
    }

    auto compose_eq1(const BoolFunction & c, int p) -> BoolFunction
    {
        if (c.arity() != p)
            throw invalid_argument("compose_eq1 needs a p-ary inner function");
        BoolFunction t(p * p, c.domain_size());
        vector<int> inner(p);
        for (uint64_t i = 0; i < t.table_size(); ++i) {
            auto args = t.args_of(i);
            for (int col = 0; col < p; ++col)
                inner[col] = c(span<const int>(args).subspan(static_cast<std::size_t>(col * p), static_cast<std::size_t>(p)));
            t.set(i, c(inner));
        }
        return t;
    }

    auto is_doubly_cyclic(const BoolFunction & t, int p) -> bool
    {
        if (p < 1 || t.arity() != p * p)
            throw invalid_argument("doubly cyclic check needs arity p^2");
        for (auto & g : doubly_cyclic_generators(p))
            if (! invariant_under(t, g))
                return false;
        return true;
    }

    auto sigma_transform(const BoolFunction & t, int p) -> BoolFunction
    {
        if (p < 1 || t.arity() != p * p)
            throw invalid_argument("sigma transform needs arity p^2");
        BoolFunction result(t.arity(), t.domain_size());
        vector<int> b(t.arity());
        for (uint64_t idx = 0; idx < result.table_size(); ++idx) {
            auto a = result.args_of(idx);
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < p; ++j)
                    b[j * p + i] = a[i * p + j];
            result.set(idx, t(b));
        }
        return result;
    }

    auto is_b_bounded(const BoolFunction & t, int p, const BlockEquivalence & sim) -> bool
    {
        sim.validate();
        if (sim.p != p || t.arity() != p * p)
            throw invalid_argument("b-boundedness needs arity p^2 and an equivalence on p-ary patterns");
        if (p * p > 24)
            throw ResourceLimit("b-boundedness check enumerates 2^(p^2) pattern tuples");

        int patterns = 1 << p;
        vector<int> representative(patterns, -1);
        for (int u = 0; u < patterns; ++u)
            if (representative[sim.block_of[u]] == -1)
                representative[sim.block_of[u]] = u;

        int d = t.domain_size();
        auto minor_equal = [&](const vector<int> & lhs, const vector<int> & rhs) {
            vector<int> a(p * p), b(p * p);
            for (int x = 0; x < d; ++x)
                for (int y = 0; y < d; ++y) {
                    for (int blk = 0; blk < p; ++blk)
                        for (int o = 0; o < p; ++o) {
                            int bit = p - 1 - o;
                            a[blk * p + o] = ((lhs[blk] >> bit) & 1) ? x : y;
                            b[blk * p + o] = ((rhs[blk] >> bit) & 1) ? x : y;
                        }
                    if (t(a) != t(b))
                        return false;
                }
            return true;
        };

        // Changing one block at a time suffices, by transitivity.
        uint64_t total = uint64_t{1} << (p * p);
        vector<int> blocks(p);
        for (uint64_t code = 0; code < total; ++code) {
            for (int blk = 0; blk < p; ++blk)
                blocks[blk] = static_cast<int>((code >> (p * (p - 1 - blk))) & static_cast<uint64_t>(patterns - 1));
            for (int blk = 0; blk < p; ++blk) {
                int rep = representative[sim.block_of[blocks[blk]]];
                if (rep == blocks[blk])
                    continue;
                auto other = blocks;
                other[blk] = rep;
                if (! minor_equal(blocks, other))
                    return false;
            }
        }
        return true;
    }

    auto derive_sim(const BoolFunction & c) -> BlockEquivalence
    {
        int p = c.arity();
        if (p > 20)
            throw ResourceLimit("too many patterns");
        int d = c.domain_size();
        BlockEquivalence result{p, vector<int>(std::size_t{1} << p, -1)};
        std::map<vector<int>, int> ids;
        vector<int> args(p);
        for (int u = 0; u < (1 << p); ++u) {
            vector<int> binary;
            for (int x = 0; x < d; ++x)
                for (int y = 0; y < d; ++y) {
                    for (int o = 0; o < p; ++o)
                        args[o] = ((u >> (p - 1 - o)) & 1) ? x : y;
                    binary.push_back(c(args));
                }
            auto [it, inserted] = ids.try_emplace(binary, static_cast<int>(ids.size()));
            result.block_of[u] = it->second;
        }
        return result;
    }

    struct PolymorphismStream::Imp
    {
        int n;
        const Template tmpl;
        EnumerationOptions options;
        bool exhaustive;
        bool finished = false;

        // Exhaustive mode.
        uint64_t next_code = 0;
        uint64_t code_limit = 0;

        // Guided mode.
        uint64_t table_size = 0;
        vector<int> var_of_index;
        int var_count = 0;
        struct GuidedConstraint
        {
            vector<int> vars;
            const BoolRelation * relation;
        };
        vector<vector<GuidedConstraint>> completed_at;
        vector<int> values;
        int pos = 0;
        bool started = false;

        Imp(const Template & t, int arity, EnumerationOptions opts) :
            n(arity),
            tmpl(t),
            options(std::move(opts))
        {
            if (n < 1)
                throw invalid_argument("arity must be positive");
            using Mode = EnumerationOptions::Mode;
            exhaustive = options.mode == Mode::exhaustive || (options.mode == Mode::automatic && n <= 4 && options.invariance.empty());
            if (exhaustive) {
                if (n > 4)
                    throw ResourceLimit("exhaustive polymorphism enumeration is limited to arity 4");
                code_limit = uint64_t{1} << (uint64_t{1} << n);
            }
            else
                setup_guided();
        }

        auto setup_guided() -> void
        {
            if (n > options.max_arity)
                throw ResourceLimit("guided enumeration limited to arity " + std::to_string(options.max_arity));
            for (auto & g : options.invariance)
                if (static_cast<int>(g.size()) != n)
                    throw invalid_argument("invariance permutation has the wrong length");

            table_size = uint64_t{1} << n;
            BoolFunction shape(n);
            vector<uint64_t> parent(table_size);
            std::iota(parent.begin(), parent.end(), 0);
            std::function<uint64_t(uint64_t)> find = [&](uint64_t x) {
                while (parent[x] != x)
                    x = parent[x] = parent[parent[x]];
                return x;
            };
            for (auto & g : options.invariance)
                for (uint64_t i = 0; i < table_size; ++i) {
                    auto a = find(i), b = find(shape.index_of(permute(g, shape.args_of(i))));
                    if (a != b)
                        parent[std::max(a, b)] = std::min(a, b);
                }
            // Roots are orbit minima, so numbering roots in index order numbers
            // orbits by their first table position.
            var_of_index.assign(table_size, -1);
            vector<int> var_of_root(table_size, -1);
            for (uint64_t i = 0; i < table_size; ++i) {
                auto root = find(i);
                if (var_of_root[root] == -1)
                    var_of_root[root] = var_count++;
                var_of_index[i] = var_of_root[root];
            }

            completed_at.assign(var_count, {});
            uint64_t selections = 0;
            for (auto & pair : tmpl.pairs()) {
                int k = pair.a.arity();
                auto columns = pair.a.tuples();
                if (columns.empty())
                    continue;
                vector<Tuple> first_columns;
                if (pair.a.symmetric() && pair.b.symmetric()) {
                    for (auto w : pair.a.weights()) {
                        Tuple rep(k, 0);
                        std::fill(rep.begin(), rep.begin() + w, 1);
                        first_columns.push_back(rep);
                    }
                }
                else
                    first_columns = columns;

                std::set<vector<int>> seen;
                vector<uint64_t> rows(k, 0);
                std::function<void(int)> walk = [&](int column) {
                    if (column == n) {
                        if (++selections > options.max_column_selections)
                            throw ResourceLimit("too many column selections for guided enumeration");
                        vector<int> vars(k);
                        for (int i = 0; i < k; ++i)
                            vars[i] = var_of_index[rows[i]];
                        if (seen.insert(vars).second) {
                            int last = *std::max_element(vars.begin(), vars.end());
                            completed_at[last].push_back(GuidedConstraint{vars, &pair.b});
                        }
                        return;
                    }
                    auto & choices = column == 0 ? first_columns : columns;
                    for (auto & c : choices) {
                        for (int i = 0; i < k; ++i)
                            rows[i] = rows[i] * 2 + static_cast<uint64_t>(c[i]);
                        walk(column + 1);
                        for (int i = 0; i < k; ++i)
                            rows[i] /= 2;
                    }
                };
                walk(0);
            }
            values.assign(var_count, -1);
        }

        auto consistent(int var) const -> bool
        {
            Tuple out;
            for (auto & c : completed_at[var]) {
                out.resize(c.vars.size());
                for (std::size_t i = 0; i < c.vars.size(); ++i)
                    out[i] = values[c.vars[i]];
                if (! c.relation->contains(out))
                    return false;
            }
            return true;
        }

        auto materialise() const -> BoolFunction
        {
            BoolFunction f(n);
            for (uint64_t i = 0; i < table_size; ++i)
                f.set(i, values[var_of_index[i]]);
            return f;
        }

        auto next_exhaustive() -> optional<BoolFunction>
        {
            uint64_t entries = uint64_t{1} << n;
            while (next_code < code_limit) {
                auto code = next_code++;
                BoolFunction f(n);
                for (uint64_t i = 0; i < entries; ++i)
                    f.set(i, static_cast<int>((code >> (entries - 1 - i)) & 1));
                bool ok = true;
                for (auto & g : options.invariance)
                    ok = ok && invariant_under(f, g);
                if (ok && is_polymorphism(f, tmpl))
                    return f;
            }
            return std::nullopt;
        }

        auto next_guided() -> optional<BoolFunction>
        {
            if (var_count == 0)
                return std::nullopt;
            if (! started) {
                started = true;
                pos = 0;
            }
            else
                pos = var_count - 1;
            while (pos >= 0) {
                ++values[pos];
                if (values[pos] > 1) {
                    values[pos] = -1;
                    --pos;
                    continue;
                }
                if (! consistent(pos))
                    continue;
                if (pos + 1 == var_count)
                    return materialise();
                ++pos;
            }
            return std::nullopt;
        }

        auto next() -> optional<BoolFunction>
        {
            if (finished)
                return std::nullopt;
            auto result = exhaustive ? next_exhaustive() : next_guided();
            if (! result)
                finished = true;
            return result;
        }
    };

    PolymorphismStream::PolymorphismStream(const Template & t, int n, EnumerationOptions options) :
        _imp(std::make_unique<Imp>(t, n, std::move(options)))
    {
    }

    PolymorphismStream::~PolymorphismStream() = default;
    PolymorphismStream::PolymorphismStream(PolymorphismStream &&) noexcept = default;
    auto PolymorphismStream::operator=(PolymorphismStream &&) noexcept -> PolymorphismStream & = default;

    auto PolymorphismStream::next() -> optional<BoolFunction>
    {
        return _imp->next();
    }

    auto enumerate_polymorphisms(const Template & t, int n, EnumerationOptions options) -> PolymorphismStream
    {
        return PolymorphismStream(t, n, std::move(options));
    }

    auto collect_polymorphisms(const Template & t, int n, EnumerationOptions options) -> vector<BoolFunction>
    {
        vector<BoolFunction> result;
        auto stream = enumerate_polymorphisms(t, n, std::move(options));
        while (auto f = stream.next())
            result.push_back(std::move(*f));
        return result;
    }

    auto projection(int arity, int coordinate) -> BoolFunction
    {
        if (coordinate < 0 || coordinate >= arity)
            throw invalid_argument("projection coordinate out of range");
        return BoolFunction::from_rule(arity, 2, [=](span<const int> x) { return x[coordinate]; });
    }

    auto parity(int arity) -> BoolFunction
    {
        return BoolFunction::from_rule(arity, 2, [](span<const int> x) { return std::accumulate(x.begin(), x.end(), 0) % 2; });
    }

    auto majority(int arity) -> BoolFunction
    {
        return BoolFunction::from_rule(arity, 2, [=](span<const int> x) { return 2 * std::accumulate(x.begin(), x.end(), 0) > arity ? 1 : 0; });
    }

    auto alternating_threshold(int arity) -> BoolFunction
    {
        if (arity % 2 == 0)
            throw invalid_argument("alternating thresholds are defined for odd arity");
        return BoolFunction::from_rule(arity, 2, [](span<const int> x) {
            int sum = 0;
            for (std::size_t i = 0; i < x.size(); ++i)
                sum += i % 2 == 0 ? x[i] : -x[i];
            return sum > 0 ? 1 : 0;
        });
    }

    auto constant_function(int arity, int value, int domain_size) -> BoolFunction
    {
        return BoolFunction::from_rule(arity, domain_size, [=](span<const int>) { return value; });
    }
}
