#include <pcsp/certificates.hh>
#include <pcsp/errors.hh>

#include <json.hpp>

namespace pcsp
{
    namespace
    {
        using Json = nlohmann::ordered_json;

        template <typename Kind>
        auto kind_from(const std::string & text, Kind last) -> Kind
        {
            for (int i = 0; i <= static_cast<int>(last); ++i)
                if (to_string(static_cast<Kind>(i)) == text)
                    return static_cast<Kind>(i);
            throw ParseError(0, "unknown kind '" + text + "'");
        }

        auto claim_json(const Claim & c) -> Json
        {
            Json j;
            j["kind"] = to_string(c.kind);
            switch (c.kind) {
            case Claim::Kind::constraint_1d: j["ks"] = c.ks; break;
            case Claim::Kind::negation_1d: j["k"] = c.k; break;
            case Claim::Kind::forced_value:
                j["k"] = c.k;
                j["bit"] = c.bit;
                j["absolute"] = c.absolute;
                break;
            case Claim::Kind::tame: j["z"] = c.z; break;
            case Claim::Kind::distinct:
                j["z"] = c.z;
                j["w"] = c.w;
                break;
            case Claim::Kind::pair_refuted:
                j["z21"] = c.z21;
                j["z22"] = c.z22;
                j["z_top"] = c.z_top;
                break;
            case Claim::Kind::step_one_tameness: j["k"] = c.k; break;
            case Claim::Kind::chain_closure:
            case Claim::Kind::contradiction: break;
            }
            return j;
        }

        auto just_json(const Justification & just) -> Json
        {
            Json j;
            j["kind"] = to_string(just.kind);
            switch (just.kind) {
            case Justification::Kind::plausible_1d: j["reconstructed"] = just.reconstructed; break;
            case Justification::Kind::step_one: j["k"] = just.k; break;
            case Justification::Kind::halving:
            case Justification::Kind::completion: j["m"] = just.m; break;
            default: break;
            }
            return j;
        }

        template <typename T>
        auto field(const Json & j, const char * name) -> T
        {
            if (! j.is_object() || ! j.contains(name))
                throw ParseError(0, std::string("missing field '") + name + "'");
            try {
                return j.at(name).get<T>();
            }
            catch (const nlohmann::json::exception &) {
                throw ParseError(0, std::string("field '") + name + "' has the wrong type");
            }
        }

        auto claim_from(const Json & j) -> Claim
        {
            Claim c;
            c.kind = kind_from(field<std::string>(j, "kind"), Claim::Kind::step_one_tameness);
            switch (c.kind) {
            case Claim::Kind::constraint_1d: c.ks = field<std::vector<long>>(j, "ks"); break;
            case Claim::Kind::negation_1d:
            case Claim::Kind::step_one_tameness: c.k = field<long>(j, "k"); break;
            case Claim::Kind::forced_value:
                c.k = field<long>(j, "k");
                c.bit = field<int>(j, "bit");
                c.absolute = field<bool>(j, "absolute");
                break;
            case Claim::Kind::tame: c.z = field<EvalTuple>(j, "z"); break;
            case Claim::Kind::distinct:
                c.z = field<EvalTuple>(j, "z");
                c.w = field<EvalTuple>(j, "w");
                break;
            case Claim::Kind::pair_refuted:
                c.z21 = field<long>(j, "z21");
                c.z22 = field<long>(j, "z22");
                c.z_top = field<long>(j, "z_top");
                break;
            case Claim::Kind::chain_closure:
            case Claim::Kind::contradiction: break;
            }
            return c;
        }

        auto just_from(const Json & j) -> Justification
        {
            Justification just;
            just.kind = kind_from(field<std::string>(j, "kind"), Justification::Kind::chain);
            switch (just.kind) {
            case Justification::Kind::plausible_1d: just.reconstructed = field<bool>(j, "reconstructed"); break;
            case Justification::Kind::step_one: just.k = field<long>(j, "k"); break;
            case Justification::Kind::halving:
            case Justification::Kind::completion: just.m = field<int>(j, "m"); break;
            default: break;
            }
            return just;
        }

        auto theta_text(const ProofContext & ctx) -> std::string
        {
            return std::to_string(ctx.theta_num) + "/" + std::to_string(ctx.theta_den);
        }
    }

    auto certificate_to_json(const Certificate & cert) -> std::string
    {
        const auto & ctx = cert.context;
        Json context;
        context["r"] = ctx.r;
        context["s"] = ctx.s;
        context["case"] = to_string(ctx.tag);
        context["p"] = ctx.p;
        context["n"] = ctx.n;
        context["b"] = ctx.b;
        context["theta"] = theta_text(ctx);
        context["a"] = ctx.a;
        context["exponent_preset"] = ctx.preset.name;
        context["strict"] = ctx.strict;
        // one node per line keeps large certificates diffable
        std::string out = "{\"context\":" + context.dump() + ",\n\"nodes\":[";
        for (std::size_t i = 0; i < cert.nodes.size(); ++i) {
            const auto & node = cert.nodes[i];
            Json j;
            j["id"] = node.id;
            j["claim"] = claim_json(node.claim);
            j["justification"] = just_json(node.justification);
            j["refs"] = node.refs;
            out += (i == 0 ? "\n" : ",\n") + j.dump();
        }
        Json conclusion;
        conclusion["kind"] = to_string(cert.conclusion);
        conclusion["node"] = cert.conclusion_node;
        out += "\n],\n\"conclusion\":" + conclusion.dump() + "}\n";
        return out;
    }

    auto certificate_from_json(const std::string & text) -> Certificate
    {
        Json doc;
        try {
            doc = Json::parse(text);
        }
        catch (const nlohmann::json::parse_error & e) {
            throw ParseError(0, std::string("malformed JSON: ") + e.what());
        }
        Certificate cert;
        auto context = field<Json>(doc, "context");
        auto & ctx = cert.context;
        ctx.r = field<int>(context, "r");
        ctx.s = field<int>(context, "s");
        try {
            ctx.tag = parse_case_tag(field<std::string>(context, "case"), ctx.r, ctx.s);
            ctx.preset = preset_by_name(field<std::string>(context, "exponent_preset"));
        }
        catch (const std::invalid_argument & e) {
            throw ParseError(0, e.what());
        }
        ctx.p = field<long>(context, "p");
        ctx.n = field<long>(context, "n");
        ctx.b = field<int>(context, "b");
        ctx.a = field<long>(context, "a");
        ctx.strict = field<bool>(context, "strict");
        auto theta = field<std::string>(context, "theta");
        auto slash = theta.find('/');
        if (slash == std::string::npos)
            throw ParseError(0, "theta must read num/den");
        try {
            ctx.theta_num = std::stol(theta.substr(0, slash));
            ctx.theta_den = std::stol(theta.substr(slash + 1));
        }
        catch (const std::exception &) {
            throw ParseError(0, "theta must read num/den");
        }
        auto nodes = field<Json>(doc, "nodes");
        if (! nodes.is_array())
            throw ParseError(0, "nodes must be an array");
        for (const auto & j : nodes) {
            ProofNode node;
            node.id = field<int>(j, "id");
            node.claim = claim_from(field<Json>(j, "claim"));
            node.justification = just_from(field<Json>(j, "justification"));
            node.refs = field<std::vector<int>>(j, "refs");
            cert.nodes.push_back(std::move(node));
        }
        auto conclusion = field<Json>(doc, "conclusion");
        cert.conclusion = kind_from(field<std::string>(conclusion, "kind"), Claim::Kind::step_one_tameness);
        cert.conclusion_node = field<int>(conclusion, "node");
        return cert;
    }
}
