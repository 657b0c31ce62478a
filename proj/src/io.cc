#include <pcsp/errors.hh>
#include <pcsp/io.hh>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

using std::istream;
using std::ostream;
using std::string;
using std::vector;

namespace pcsp
{
    namespace
    {
        auto strip_comment(const string & line) -> string
        {
            auto hash = line.find('#');
            return hash == string::npos ? line : line.substr(0, hash);
        }

        auto tokenise(const string & line) -> vector<string>
        {
            std::istringstream ss(strip_comment(line));
            vector<string> tokens;
            string tok;
            while (ss >> tok)
                tokens.push_back(tok);
            return tokens;
        }

        auto to_int(const string & tok, int line, const string & what) -> int
        {
            int value = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc{} || ptr != tok.data() + tok.size())
                throw ParseError(line, "expected an integer for " + what + ", got '" + tok + "'");
            return value;
        }

        struct Cursor
        {
            const vector<string> & tokens;
            std::size_t pos;
            int line;

            auto more() const -> bool { return pos < tokens.size(); }

            auto take(const string & what) -> const string &
            {
                if (! more())
                    throw ParseError(line, "missing " + what);
                return tokens[pos++];
            }

            auto take_int(const string & what) -> int { return to_int(take(what), line, what); }
        };

        auto parse_explicit_tuples(int arity, const string & text, int line) -> vector<Tuple>
        {
            vector<Tuple> tuples;
            std::size_t start = 0;
            while (start <= text.size()) {
                auto comma = text.find(',', start);
                auto item = text.substr(start, comma == string::npos ? string::npos : comma - start);
                if (static_cast<int>(item.size()) != arity)
                    throw ParseError(line, "tuple '" + item + "' does not have " + std::to_string(arity) + " bits");
                Tuple t;
                for (char c : item) {
                    if (c != '0' && c != '1')
                        throw ParseError(line, "tuple '" + item + "' is not a bit string");
                    t.push_back(c - '0');
                }
                tuples.push_back(t);
                if (comma == string::npos)
                    break;
                start = comma + 1;
            }
            return tuples;
        }

        auto parse_relation(Cursor & cur) -> BoolRelation
        {
            auto kind = cur.take("relation kind");
            auto build = [&](Family family, bool has_r) {
                int r = has_r ? cur.take_int("r") : 0;
                int s = cur.take_int("s");
                try {
                    return build_family(family, r, s);
                }
                catch (const std::invalid_argument & e) {
                    throw ParseError(cur.line, e.what());
                }
            };
            if (kind == "neq")
                return BoolRelation::disequality();
            if (kind == "odd")
                return build(Family::odd, false);
            if (kind == "even")
                return build(Family::even, false);
            if (kind == "rin")
                return build(Family::exact, true);
            if (kind == "atmost")
                return build(Family::atmost, true);
            if (kind == "atleast")
                return build(Family::atleast, true);
            if (kind == "nae")
                return build(Family::nae, false);
            if (kind == "full")
                return build(Family::full, false);
            if (kind == "const")
                return build(Family::constant, false);
            if (kind == "explicit") {
                int s = cur.take_int("arity");
                if (s < 1 || s > 24)
                    throw ParseError(cur.line, "explicit relation arity must be between 1 and 24");
                vector<Tuple> tuples;
                // An explicit relation with no tuples is written with nothing after the arity.
                if (cur.more() && cur.tokens[cur.pos].find_first_not_of("01,") == string::npos)
                    tuples = parse_explicit_tuples(s, cur.take("tuples"), cur.line);
                try {
                    return BoolRelation::from_tuples(s, std::move(tuples));
                }
                catch (const std::invalid_argument & e) {
                    throw ParseError(cur.line, e.what());
                }
            }
            throw ParseError(cur.line, "unknown relation kind '" + kind + "'");
        }

        auto open(const string & path) -> std::ifstream
        {
            std::ifstream in(path);
            if (! in)
                throw std::runtime_error("cannot open " + path);
            return in;
        }
    }

    auto parse_relation_spec(const string & spec, int line) -> BoolRelation
    {
        auto tokens = tokenise(spec);
        Cursor cur{tokens, 0, line};
        auto rel = parse_relation(cur);
        if (cur.more())
            throw ParseError(line, "unexpected '" + tokens[cur.pos] + "' after relation");
        return rel;
    }

    auto parse_template(istream & in) -> Template
    {
        string raw;
        int line = 0;
        bool started = false, ended = false;
        vector<RelationPair> pairs;
        while (std::getline(in, raw)) {
            ++line;
            auto tokens = tokenise(raw);
            if (tokens.empty())
                continue;
            if (ended)
                throw ParseError(line, "content after 'end'");
            if (! started) {
                if (tokens.size() != 1 || tokens[0] != "template")
                    throw ParseError(line, "expected 'template'");
                started = true;
                continue;
            }
            if (tokens[0] == "end") {
                if (tokens.size() != 1)
                    throw ParseError(line, "unexpected text after 'end'");
                ended = true;
                continue;
            }
            if (tokens[0] != "pair")
                throw ParseError(line, "expected 'pair' or 'end', got '" + tokens[0] + "'");
            Cursor cur{tokens, 1, line};
            auto a = parse_relation(cur);
            auto b = parse_relation(cur);
            if (cur.more())
                throw ParseError(line, "unexpected '" + tokens[cur.pos] + "' after the relation pair");
            if (a.arity() != b.arity())
                throw ParseError(line, "relations in a pair must have equal arity");
            pairs.push_back(RelationPair{std::move(a), std::move(b)});
            try {
                Template check({pairs.back()});
            }
            catch (const std::invalid_argument & e) {
                throw ParseError(line, e.what());
            }
        }
        if (! started)
            throw ParseError(line + 1, "empty template file");
        if (! ended)
            throw ParseError(line + 1, "missing 'end'");
        if (pairs.empty())
            throw ParseError(line, "template has no pairs");
        return Template(std::move(pairs));
    }

    auto write_template(ostream & out, const Template & t) -> void
    {
        out << "template\n";
        for (auto & pair : t.pairs())
            out << "pair " << pair.a.describe() << " " << pair.b.describe() << "\n";
        out << "end\n";
    }

    auto parse_instance(istream & in) -> Instance
    {
        string raw;
        int line = 0;
        bool header = false;
        Instance x;
        while (std::getline(in, raw)) {
            ++line;
            auto tokens = tokenise(raw);
            if (tokens.empty())
                continue;
            if (! header) {
                if (tokens.size() != 2 || tokens[0] != "vars")
                    throw ParseError(line, "expected 'vars <n>'");
                x.var_count = to_int(tokens[1], line, "variable count");
                if (x.var_count < 0)
                    throw ParseError(line, "variable count must be non-negative");
                header = true;
                continue;
            }
            if (tokens[0] != "c" || tokens.size() < 3)
                throw ParseError(line, "expected 'c <pair_index> <variables...>'");
            Constraint c{to_int(tokens[1], line, "pair index"), {}};
            if (c.pair_index < 0)
                throw ParseError(line, "negative pair index");
            for (std::size_t i = 2; i < tokens.size(); ++i) {
                int v = to_int(tokens[i], line, "variable");
                if (v < 0 || v >= x.var_count)
                    throw ParseError(line, "variable " + tokens[i] + " out of range");
                c.vars.push_back(v);
            }
            x.constraints.push_back(std::move(c));
        }
        if (! header)
            throw ParseError(line + 1, "missing 'vars <n>'");
        return x;
    }

    auto write_instance(ostream & out, const Instance & x) -> void
    {
        out << "vars " << x.var_count << "\n";
        for (auto & c : x.constraints) {
            out << "c " << c.pair_index;
            for (auto v : c.vars)
                out << " " << v;
            out << "\n";
        }
    }

    auto parse_function(istream & in) -> BoolFunction
    {
        string raw;
        int line = 0;
        int arity = -1, domain = -1;
        while (std::getline(in, raw)) {
            ++line;
            auto tokens = tokenise(raw);
            if (tokens.empty())
                continue;
            if (arity < 0) {
                if (tokens.size() != 3 || tokens[0] != "fn")
                    throw ParseError(line, "expected 'fn <arity> <domain_size>'");
                arity = to_int(tokens[1], line, "arity");
                domain = to_int(tokens[2], line, "domain size");
                continue;
            }
            if (tokens.size() != 1)
                throw ParseError(line, "expected the table on a single line");
            try {
                auto f = BoolFunction::from_string(arity, domain, tokens[0]);
                while (std::getline(in, raw)) {
                    ++line;
                    if (! tokenise(raw).empty())
                        throw ParseError(line, "unexpected content after the table");
                }
                return f;
            }
            catch (const std::invalid_argument & e) {
                throw ParseError(line, e.what());
            }
            catch (const ResourceLimit & e) {
                throw ParseError(line, e.what());
            }
        }
        throw ParseError(line + 1, arity < 0 ? "missing 'fn' header" : "missing table");
    }

    auto write_function(ostream & out, const BoolFunction & f) -> void
    {
        out << "fn " << f.arity() << " " << f.domain_size() << "\n" << f.to_string() << "\n";
    }

    auto read_template_file(const string & path) -> Template
    {
        auto in = open(path);
        return parse_template(in);
    }

    auto read_instance_file(const string & path) -> Instance
    {
        auto in = open(path);
        return parse_instance(in);
    }

    auto read_function_file(const string & path) -> BoolFunction
    {
        auto in = open(path);
        return parse_function(in);
    }
}
