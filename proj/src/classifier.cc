#include <pcsp/classifier.hh>
#include <pcsp/errors.hh>

#include <algorithm>
#include <functional>
#include <sstream>

using std::optional;
using std::string;
using std::vector;

namespace pcsp
{
    using std::to_string;

    namespace
    {
        using Kind = PairRecipe::Kind;

        enum class PairRole
        {
            core,
            disequality,
            trivial
        };

        auto is_disequality(const BoolRelation & rel) -> bool
        {
            return rel.arity() == 2 && rel == BoolRelation::disequality();
        }

        auto is_full(const BoolRelation & rel) -> bool
        {
            if (rel.symmetric())
                return static_cast<int>(rel.weights().size()) == rel.arity() + 1;
            return rel.size() == (std::uint64_t{1} << rel.arity());
        }

        auto role_of(const RelationPair & pair) -> PairRole
        {
            if (is_disequality(pair.a) && is_disequality(pair.b))
                return PairRole::disequality;
            if (pair.a.empty() || is_full(pair.b))
                return PairRole::trivial;
            return PairRole::core;
        }

        auto trivial_recipe(const RelationPair & pair) -> PairRecipe
        {
            return is_full(pair.b) ? PairRecipe{Kind::unconstrained, 0} : PairRecipe{Kind::impossible, 0};
        }

        // Boolean maps: 0 identity, 1 negation, 2 constant 0, 3 constant 1.
        auto maps_into(const BoolRelation & src, int h, const BoolRelation & dst) -> bool
        {
            if (src.empty())
                return true;
            int k = src.arity();
            if (h >= 2)
                return dst.contains(Tuple(k, h - 2));
            if (src.symmetric() && dst.symmetric()) {
                for (auto w : src.weights())
                    if (! dst.has_weight(h == 0 ? w : k - w))
                        return false;
                return true;
            }
            for (auto t : src.tuples()) {
                if (h == 1)
                    for (auto & v : t)
                        v = 1 - v;
                if (! dst.contains(t))
                    return false;
            }
            return true;
        }

        auto family(Family f, int r, int s) -> BoolRelation { return build_family(f, r, s); }

        struct Candidate
        {
            RelationPair pair;
            PairRecipe recipe;
            bool finitely_tractable_alone;  // the single-pair base (with or without neq) is finitely tractable
            bool two_sat;                   // relation pair is a CSP relation expressible in 2-SAT
            bool mirrored;
        };

        auto candidates(BasicItem item, int s) -> vector<Candidate>
        {
            vector<Candidate> out;
            switch (item) {
            case BasicItem::a_parity:
                out.push_back({{family(Family::odd, 0, s), family(Family::odd, 0, s)}, {Kind::parity, 1}, true, false, false});
                out.push_back({{family(Family::even, 0, s), family(Family::even, 0, s)}, {Kind::parity, 0}, true, false, false});
                break;
            case BasicItem::b_majority:
                // Finitely tractable candidates first.
                for (int r = 1; r <= s; ++r) {
                    if (2 * r <= s)
                        out.push_back({{family(Family::atmost, r, s), family(Family::atmost, 2 * r - 1, s)}, {Kind::at_most, r}, r == 1, r == 1, false});
                    if (2 * r >= s && r < s)
                        out.push_back({{family(Family::atleast, r, s), family(Family::atleast, 2 * r - s + 1, s)}, {Kind::at_least, r}, r == s - 1, r == s - 1, true});
                }
                std::stable_partition(out.begin(), out.end(), [](const Candidate & c) { return c.two_sat; });
                break;
            case BasicItem::c_threshold:
                if (s >= 2)
                    for (int r = 1; r < s; ++r)
                        out.push_back({{family(Family::exact, r, s), family(Family::nae, 0, s)}, {Kind::exact_sum, r}, (r % 2 == 1 && s % 2 == 0) || s <= 2, false, false});
                std::stable_partition(out.begin(), out.end(), [](const Candidate & c) { return c.finitely_tractable_alone; });
                break;
            }
            return out;
        }

        auto solver_for(BasicItem item) -> SandwichSolver
        {
            switch (item) {
            case BasicItem::a_parity: return SandwichSolver::gf2;
            case BasicItem::b_majority: return SandwichSolver::lp;
            case BasicItem::c_threshold: return SandwichSolver::diophantine;
            }
            return SandwichSolver::gf2;
        }

        auto item_letter(BasicItem item) -> string
        {
            switch (item) {
            case BasicItem::a_parity: return "a";
            case BasicItem::b_majority: return "b";
            case BasicItem::c_threshold: return "c";
            }
            return "?";
        }

        struct Parts
        {
            vector<PairRole> roles;
            bool has_neq = false;
            bool all_symmetric = true;
            vector<int> core;
        };

        auto partition(const Template & t) -> Parts
        {
            Parts parts;
            for (std::size_t i = 0; i < t.size(); ++i) {
                auto & pair = t.pairs()[i];
                auto role = role_of(pair);
                parts.roles.push_back(role);
                parts.has_neq = parts.has_neq || role == PairRole::disequality;
                parts.all_symmetric = parts.all_symmetric && pair.a.symmetric() && pair.b.symmetric();
                if (role == PairRole::core)
                    parts.core.push_back(static_cast<int>(i));
            }
            return parts;
        }

        // A single relation pair repeated at every core position, no trivial pairs.
        auto single_core_pair(const Template & t, const Parts & parts) -> optional<RelationPair>
        {
            if (parts.core.empty())
                return std::nullopt;
            for (auto role : parts.roles)
                if (role == PairRole::trivial)
                    return std::nullopt;
            auto & first = t.pairs()[parts.core.front()];
            for (auto i : parts.core) {
                auto & p = t.pairs()[i];
                if (! (p.a == first.a && p.b == first.b))
                    return std::nullopt;
                if (! p.a.symmetric() || ! p.b.symmetric())
                    return std::nullopt;
            }
            return first;
        }

        auto make_sandwich(const Template & t, const Parts & parts, SandwichSolver solver, const std::function<PairRecipe(int)> & core_recipe) -> SandwichSpec
        {
            SandwichSpec spec{solver, 0, 0, false, {}, 0, solver == SandwichSolver::lp, 0};
            for (std::size_t i = 0; i < t.size(); ++i) {
                switch (parts.roles[i]) {
                case PairRole::disequality: spec.pairs.push_back({Kind::disequality, 0}); break;
                case PairRole::trivial: spec.pairs.push_back(trivial_recipe(t.pairs()[i])); break;
                case PairRole::core: spec.pairs.push_back(core_recipe(static_cast<int>(i))); break;
                }
            }
            return spec;
        }

        // Some constant c whose constant tuple lies in every B relation paired with a nonempty A relation.
        auto constant_sandwich(const Template & t, const Parts & parts) -> optional<int>
        {
            if (parts.has_neq)
                return std::nullopt;
            for (int c = 0; c <= 1; ++c) {
                bool ok = true;
                for (auto & pair : t.pairs())
                    ok = ok && (pair.a.empty() || pair.b.contains(Tuple(pair.b.arity(), c)));
                if (ok)
                    return c;
            }
            return std::nullopt;
        }

        // Templates listed as not finitely tractable, for a core arity s, laid out like t.
        struct HardShape
        {
            int item;
            RelationPair pair;
        };

        auto hard_shapes(int s) -> vector<HardShape>
        {
            vector<HardShape> out;
            for (int r = 1; r < s; ++r) {
                if (1 < r && 2 * r < s)
                    out.push_back({1, {family(Family::exact, r, s), family(Family::atmost, 2 * r - 1, s)}});
                if (2 * r > s && r < s - 1)
                    out.push_back({1, {family(Family::exact, r, s), family(Family::atleast, 2 * r - s + 1, s)}});
                if (s % 2 == 0 && 2 * r == s && r > 1) {
                    out.push_back({2, {family(Family::atmost, r, s), family(Family::atmost, 2 * r - 1, s)}});
                    out.push_back({2, {family(Family::atleast, r, s), family(Family::atleast, 2 * r - s + 1, s)}});
                    if (r % 2 == 0) {
                        out.push_back({3, {family(Family::exact, r, s), family(Family::atmost, 2 * r - 1, s)}});
                        out.push_back({3, {family(Family::exact, r, s), family(Family::atleast, 2 * r - s + 1, s)}});
                    }
                }
                if (s > 2 && (r % 2 == 0 || s % 2 == 1))
                    out.push_back({4, {family(Family::exact, r, s), family(Family::nae, 0, s)}});
            }
            return out;
        }

        // Returns the theorem item of a listed template that is a homomorphic relaxation of t.
        auto hard_relaxation(const Template & t, const Parts & parts) -> optional<int>
        {
            if (parts.core.empty())
                return std::nullopt;
            int s = t.pairs()[parts.core.front()].a.arity();
            for (auto i : parts.core)
                if (t.pairs()[i].a.arity() != s)
                    return std::nullopt;
            for (auto & shape : hard_shapes(s)) {
                // Items (1)-(3) need the disequality pair.
                if (shape.item != 4 && ! parts.has_neq)
                    continue;
                vector<RelationPair> pairs;
                for (std::size_t i = 0; i < t.size(); ++i) {
                    int k = t.pairs()[i].a.arity();
                    switch (parts.roles[i]) {
                    case PairRole::core: pairs.push_back(shape.pair); break;
                    case PairRole::disequality: pairs.push_back({BoolRelation::disequality(), BoolRelation::disequality()}); break;
                    case PairRole::trivial: pairs.push_back({BoolRelation::from_weights(k, {}), family(Family::full, 0, k)}); break;
                    }
                }
                if (is_relaxation(Template(std::move(pairs)), t))
                    return shape.item;
            }
            return std::nullopt;
        }

        auto describe_pair(const RelationPair & p) -> string
        {
            return "(" + p.a.describe() + ", " + p.b.describe() + ")";
        }

        auto verdict_for_basic(const Template & t, const Parts & parts, const BasicCase & basic) -> Verdict
        {
            Verdict v;
            v.complexity = Complexity::tractable;
            v.basic = basic;
            int r = basic.r, s = basic.s;
            auto solver = solver_for(basic.item);
            v.sandwich = make_sandwich(t, parts, solver, [&](int) -> PairRecipe {
                switch (basic.item) {
                case BasicItem::a_parity: return {Kind::parity, r};
                case BasicItem::b_majority: return {basic.mirrored ? Kind::at_least : Kind::at_most, r};
                case BasicItem::c_threshold: return {Kind::exact_sum, r};
                }
                return {Kind::unconstrained, 0};
            });
            v.sandwich->r = r;
            v.sandwich->s = s;
            v.sandwich->mirrored = basic.mirrored;

            switch (basic.item) {
            case BasicItem::a_parity:
                v.finiteness = Finiteness::finitely_tractable;
                v.reason = "linear equations over GF(2)";
                break;
            case BasicItem::b_majority: {
                int rn = basic.mirrored ? s - r : r;
                if (! basic.has_neq) {
                    v.finiteness = Finiteness::finitely_tractable;
                    v.reason = "relaxation of a one-element structure";
                }
                else if (rn == 1) {
                    v.finiteness = Finiteness::finitely_tractable;
                    v.reason = "2-SAT";
                }
                else {
                    v.finiteness = Finiteness::not_finitely_tractable;
                    v.theorem_item = 2 * rn == s ? 2 : 1;
                    v.reason = 2 * rn == s ? "listed template" : "has a listed template as a relaxation";
                }
                break;
            }
            case BasicItem::c_threshold:
                if ((r % 2 == 1 && s % 2 == 0) || s <= 2) {
                    v.finiteness = Finiteness::finitely_tractable;
                    v.reason = "relaxation of (odd " + to_string(s) + ", odd " + to_string(s) + ")";
                }
                else {
                    v.finiteness = Finiteness::not_finitely_tractable;
                    v.theorem_item = 4;
                    v.reason = basic.has_neq ? "contains a listed template" : "listed template";
                }
                break;
            }
            return v;
        }

        // (r-in-s, <=(2r-1)-in-s) and its mirror, which are relaxations of the majority item.
        auto classify_exact_majority(const Template & t, const Parts & parts) -> optional<Verdict>
        {
            auto single = single_core_pair(t, parts);
            if (! single)
                return std::nullopt;
            int s = single->a.arity();
            for (int r = 1; r < s + 1; ++r) {
                bool plain = 2 * r <= s && single->a == family(Family::exact, r, s) && single->b == family(Family::atmost, 2 * r - 1, s);
                bool mirrored = 2 * r >= s && r < s && single->a == family(Family::exact, r, s) && single->b == family(Family::atleast, 2 * r - s + 1, s);
                if (! plain && ! mirrored)
                    continue;
                Verdict v;
                v.complexity = Complexity::tractable;
                int rn = plain ? r : s - r;
                v.sandwich = make_sandwich(t, parts, SandwichSolver::lp, [&](int) -> PairRecipe {
                    return {plain ? Kind::at_most : Kind::at_least, r};
                });
                v.sandwich->r = r;
                v.sandwich->s = s;
                v.sandwich->mirrored = ! plain;
                string base = plain ? describe_pair({family(Family::atmost, r, s), family(Family::atmost, 2 * r - 1, s)})
                                    : describe_pair({family(Family::atleast, r, s), family(Family::atleast, 2 * r - s + 1, s)});
                if (! parts.has_neq) {
                    v.finiteness = Finiteness::finitely_tractable;
                    v.reason = "relaxation of a one-element structure";
                }
                else if (rn == 1) {
                    v.finiteness = Finiteness::finitely_tractable;
                    v.reason = "relaxation of " + base + " with neq, which is 2-SAT";
                }
                else if (2 * rn < s) {
                    v.finiteness = Finiteness::not_finitely_tractable;
                    v.theorem_item = 1;
                    v.reason = "listed template";
                }
                else if (rn % 2 == 0) {
                    v.finiteness = Finiteness::not_finitely_tractable;
                    v.theorem_item = 3;
                    v.reason = "listed template";
                }
                else
                    v.reason = "relaxation of " + base + " with neq; finite tractability open for odd r = s/2";
                return v;
            }
            return std::nullopt;
        }

        auto classify_general(const Template & t, const Parts & parts) -> Verdict
        {
            Verdict v;
            for (auto item : {BasicItem::a_parity, BasicItem::b_majority, BasicItem::c_threshold}) {
                for (int h1 = 0; h1 < 4; ++h1)
                    for (int h2 = 0; h2 < 4; ++h2) {
                        if (parts.has_neq && (h1 >= 2 || h2 >= 2))
                            continue;
                        vector<optional<Candidate>> chosen(t.size());
                        bool ok = true;
                        for (auto i : parts.core) {
                            auto & pair = t.pairs()[i];
                            for (auto & c : candidates(item, pair.a.arity()))
                                if (maps_into(pair.a, h1, c.pair.a) && maps_into(c.pair.b, h2, pair.b)) {
                                    chosen[i] = c;
                                    break;
                                }
                            if (! chosen[i]) {
                                ok = false;
                                break;
                            }
                        }
                        if (! ok)
                            continue;

                        v.complexity = Complexity::tractable;
                        v.sandwich = make_sandwich(t, parts, solver_for(item), [&](int i) { return chosen[i]->recipe; });
                        v.sandwich->b_map = h2;
                        string base;
                        bool all_same = true, all_ft = true, all_two_sat = true, all_plain = true, all_mirrored = true;
                        for (auto i : parts.core) {
                            auto & c = *chosen[i];
                            if (! base.empty() && base != describe_pair(c.pair))
                                all_same = false;
                            if (base.empty())
                                base = describe_pair(c.pair);
                            all_ft = all_ft && c.finitely_tractable_alone;
                            all_two_sat = all_two_sat && c.two_sat;
                            all_plain = all_plain && ! c.mirrored;
                            all_mirrored = all_mirrored && c.mirrored;
                        }
                        bool base_ft = false;
                        switch (item) {
                        case BasicItem::a_parity: base_ft = true; break;
                        case BasicItem::b_majority: base_ft = all_two_sat || (! parts.has_neq && (all_plain || all_mirrored)); break;
                        case BasicItem::c_threshold: base_ft = all_ft; break;
                        }
                        v.reason = parts.core.empty() ? "only disequality and trivial pairs"
                                                      : "relaxation of item " + item_letter(item) + (all_same ? " pair " + base : " pairs");
                        if (base_ft)
                            v.finiteness = Finiteness::finitely_tractable;
                        else if (constant_sandwich(t, parts)) {
                            v.finiteness = Finiteness::finitely_tractable;
                            v.reason += "; relaxation of a one-element structure";
                        }
                        else if (auto hard = hard_relaxation(t, parts)) {
                            v.finiteness = Finiteness::not_finitely_tractable;
                            v.theorem_item = *hard;
                            v.reason += "; has a listed template as a relaxation";
                        }
                        return v;
                    }
            }
            if (auto c = constant_sandwich(t, parts)) {
                v.complexity = Complexity::tractable;
                v.finiteness = Finiteness::finitely_tractable;
                v.sandwich = SandwichSpec{SandwichSolver::constant, 0, 0, false, {}, *c, false, 0};
                v.reason = "relaxation of a one-element structure";
                return v;
            }
            if (parts.has_neq && parts.all_symmetric) {
                v.complexity = Complexity::np_hard;
                v.reason = "no relaxation of a basic tractable template";
            }
            else
                v.reason = "outside the recognised catalog";
            return v;
        }
    }

    auto BasicCase::describe() const -> string
    {
        string out = item_letter(item) + "(";
        if (item == BasicItem::a_parity)
            out += r == 1 ? "odd" : "even";
        else
            out += "r=" + to_string(r);
        out += ",s=" + to_string(s);
        if (mirrored)
            out += ",mirrored";
        return out + ")";
    }

    auto to_string(Complexity c) -> string
    {
        switch (c) {
        case Complexity::tractable: return "Tractable";
        case Complexity::np_hard: return "NPHard";
        case Complexity::unknown: return "Unknown";
        }
        return "Unknown";
    }

    auto to_string(Finiteness f) -> string
    {
        switch (f) {
        case Finiteness::finitely_tractable: return "FinitelyTractable";
        case Finiteness::not_finitely_tractable: return "NotFinitelyTractable";
        case Finiteness::unknown: return "Unknown";
        }
        return "Unknown";
    }

    auto to_string(SandwichSolver s) -> string
    {
        switch (s) {
        case SandwichSolver::gf2: return "GF2";
        case SandwichSolver::lp: return "LP";
        case SandwichSolver::diophantine: return "Diophantine";
        case SandwichSolver::constant: return "Constant";
        }
        return "?";
    }

    auto Verdict::line() const -> string
    {
        return "complexity=" + to_string(complexity) + " finiteness=" + to_string(finiteness) + " case=" + (basic ? basic->describe() : "none") +
            " theorem_item=" + (theorem_item ? to_string(*theorem_item) : "none");
    }

    auto match_basic(const Template & t) -> optional<BasicCase>
    {
        auto parts = partition(t);
        auto single = single_core_pair(t, parts);
        if (! single)
            return std::nullopt;
        auto & [p, q] = *single;
        int s = p.arity();
        if (p == q && (p == family(Family::odd, 0, s) || p == family(Family::even, 0, s)))
            return BasicCase{BasicItem::a_parity, p == family(Family::odd, 0, s) ? 1 : 0, s, false, parts.has_neq};
        for (int r = 1; r <= s; ++r) {
            if (2 * r <= s && p == family(Family::atmost, r, s) && q == family(Family::atmost, 2 * r - 1, s))
                return BasicCase{BasicItem::b_majority, r, s, false, parts.has_neq};
            if (2 * r >= s && p == family(Family::atleast, r, s) && q == family(Family::atleast, 2 * r - s + 1, s))
                return BasicCase{BasicItem::b_majority, r, s, true, parts.has_neq};
        }
        if (s >= 2 && q == family(Family::nae, 0, s))
            for (int r = 1; r < s; ++r)
                if (p == family(Family::exact, r, s))
                    return BasicCase{BasicItem::c_threshold, r, s, false, parts.has_neq};
        return std::nullopt;
    }

    auto classify(const Template & t) -> Verdict
    {
        auto parts = partition(t);
        if (auto basic = match_basic(t))
            return verdict_for_basic(t, parts, *basic);
        if (auto v = classify_exact_majority(t, parts))
            return *v;
        return classify_general(t, parts);
    }

    auto sandwich(const Template & t) -> SandwichSpec
    {
        auto v = classify(t);
        if (! v.sandwich)
            throw UnsupportedTemplate("no sandwich recipe for this template (" + v.reason + ")");
        return *v.sandwich;
    }

    auto parity_template(int s, bool odd, bool with_neq) -> Template
    {
        auto rel = family(odd ? Family::odd : Family::even, 0, s);
        vector<RelationPair> pairs{{rel, rel}};
        if (with_neq)
            pairs.push_back({BoolRelation::disequality(), BoolRelation::disequality()});
        return Template(std::move(pairs));
    }

    auto majority_template(int r, int s, bool with_neq) -> Template
    {
        vector<RelationPair> pairs{{family(Family::atmost, r, s), family(Family::atmost, 2 * r - 1, s)}};
        if (with_neq)
            pairs.push_back({BoolRelation::disequality(), BoolRelation::disequality()});
        return Template(std::move(pairs));
    }

    auto threshold_template(int r, int s, bool with_neq) -> Template
    {
        vector<RelationPair> pairs{{family(Family::exact, r, s), family(Family::nae, 0, s)}};
        if (with_neq)
            pairs.push_back({BoolRelation::disequality(), BoolRelation::disequality()});
        return Template(std::move(pairs));
    }

    auto classification_table(int max_s) -> vector<TableRow>
    {
        auto cell = [](const Template & t) {
            switch (classify(t).finiteness) {
            case Finiteness::finitely_tractable: return 'F';
            case Finiteness::not_finitely_tractable: return 'N';
            case Finiteness::unknown: return '?';
            }
            return '?';
        };
        vector<TableRow> rows;
        for (int s = 1; s <= max_s; ++s)
            rows.push_back({"(odd-in-s, odd-in-s) + neq", s, string(1, cell(parity_template(s, true, true)))});
        for (int s = 2; s <= max_s; ++s) {
            string cells;
            for (int r = 1; 2 * r <= s; ++r)
                cells += cell(majority_template(r, s, true));
            rows.push_back({"(<=r-in-s, <=(2r-1)-in-s) + neq", s, cells});
        }
        for (int s = 2; s <= max_s; ++s) {
            string cells;
            for (int r = 1; 2 * r <= s; ++r)
                cells += cell(Template({{family(Family::exact, r, s), family(Family::atmost, 2 * r - 1, s)},
                                        {BoolRelation::disequality(), BoolRelation::disequality()}}));
            rows.push_back({"(r-in-s, <=(2r-1)-in-s) + neq", s, cells});
        }
        for (int s = 2; s <= max_s; ++s) {
            string cells;
            for (int r = 1; r < s; ++r)
                cells += cell(threshold_template(r, s, false));
            rows.push_back({"(r-in-s, nae-s)", s, cells});
        }
        return rows;
    }

    auto render_table(const vector<TableRow> & rows) -> string
    {
        std::ostringstream out;
        out << "F = finitely tractable, N = not finitely tractable, ? = open; cells list r = 1, 2, ...\n\n";
        string current;
        for (auto & row : rows) {
            if (row.family != current) {
                if (! current.empty())
                    out << "\n";
                out << row.family << "\n";
                current = row.family;
            }
            out << "  s=" << row.s << "  " << row.cells << "\n";
        }
        return out.str();
    }
}
