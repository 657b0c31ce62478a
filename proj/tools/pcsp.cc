// Command-line front end: classify, solve, poly, certify, verify, table.

#include <pcsp/certificates.hh>
#include <pcsp/classifier.hh>
#include <pcsp/errors.hh>
#include <pcsp/io.hh>
#include <pcsp/polymorphisms.hh>
#include <pcsp/solvers.hh>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace pcsp;

namespace
{
    constexpr int exit_ok = 0;
    constexpr int exit_negative = 1;
    constexpr int exit_usage = 2;
    constexpr int exit_internal = 3;

    auto brute_cap() -> int
    {
        if (const char * env = std::getenv("PCSP_MAX_BRUTE")) {
            try {
                return std::stoi(env);
            }
            catch (const std::exception &) {
                throw std::invalid_argument("PCSP_MAX_BRUTE must be an integer");
            }
        }
        return default_brute_force_cap;
    }

    auto read_text(const std::string & path) -> std::string
    {
        std::ifstream in(path);
        if (! in)
            throw std::runtime_error("cannot open " + path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }

    auto write_output(const std::string & path, const std::string & text) -> void
    {
        if (path.empty() || path == "-") {
            std::cout << text;
            return;
        }
        std::ofstream out(path);
        if (! out)
            throw std::runtime_error("cannot write " + path);
        out << text;
    }

    auto verdict_json(const Verdict & v) -> std::string
    {
        nlohmann::ordered_json j;
        j["complexity"] = to_string(v.complexity);
        j["finiteness"] = to_string(v.finiteness);
        j["case"] = v.basic ? nlohmann::ordered_json(v.basic->describe()) : nlohmann::ordered_json();
        j["theorem_item"] = v.theorem_item ? nlohmann::ordered_json(*v.theorem_item) : nlohmann::ordered_json();
        j["solver"] = v.sandwich ? nlohmann::ordered_json(to_string(v.sandwich->solver)) : nlohmann::ordered_json();
        j["reason"] = v.reason;
        return j.dump() + "\n";
    }

    struct ClassifyArgs
    {
        std::string template_path;
        bool json = false;
    };

    auto run_classify(const ClassifyArgs & args) -> int
    {
        auto verdict = classify(read_template_file(args.template_path));
        std::cout << verdict.line() << "\n";
        if (args.json)
            std::cout << verdict_json(verdict);
        return exit_ok;
    }

    struct SolveArgs
    {
        std::string template_path;
        std::string instance_path;
        bool witness = false;
        bool check = false;
    };

    auto run_solve(const SolveArgs & args) -> int
    {
        auto t = read_template_file(args.template_path);
        auto x = read_instance_file(args.instance_path);
        x.validate(t);
        auto answer = solve_pcsp(t, x);
        auto yes = answer.answer == Answer::yes;
        std::cout << (yes ? "YES" : "NO") << "\n";
        if (args.witness) {
            std::cout << "backend=" << to_string(answer.backend) << "\n";
            if (answer.witness) {
                std::cout << "assignment=";
                for (auto v : *answer.witness)
                    std::cout << v;
                std::cout << "\n";
            }
            if (! answer.point.empty()) {
                std::cout << "point=";
                for (std::size_t i = 0; i < answer.point.size(); ++i)
                    std::cout << (i ? " " : "") << answer.point[i];
                std::cout << "\n";
            }
            if (answer.externally_justified)
                std::cout << "note=sandwich justified by the classification, not re-derived\n";
        }
        if (args.check) {
            auto cap = brute_cap();
            if (x.var_count > cap)
                std::cout << "check=skipped (" << x.var_count << " variables exceed PCSP_MAX_BRUTE=" << cap << ")\n";
            else {
                auto oracle = brute_force_promise(t, x, cap);
                auto sound = ! (oracle.a_sat && ! yes) && ! (! oracle.b_sat && yes);
                std::cout << "check=" << (sound ? "consistent" : "VIOLATION") << " a_sat=" << oracle.a_sat
                          << " b_sat=" << oracle.b_sat << "\n";
                if (! sound)
                    return exit_internal;
            }
        }
        return yes ? exit_ok : exit_negative;
    }

    struct PolyArgs
    {
        std::string template_path;
        std::string function_path;
        std::string polymorphism_path;
        std::string output;
        bool cyclic = false;
        int doubly_cyclic = 0;
        int compose_p = 0;
        int sigma_p = 0;
        int enumerate_n = 0;
        bool list = false;
    };

    auto function_text(const BoolFunction & f) -> std::string
    {
        std::ostringstream out;
        write_function(out, f);
        return out.str();
    }

    auto need(const std::string & path, const char * what) -> const std::string &
    {
        if (path.empty())
            throw CLI::ValidationError(std::string("this check needs ") + what);
        return path;
    }

    auto run_poly(const PolyArgs & args) -> int
    {
        if (! args.polymorphism_path.empty()) {
            auto f = read_function_file(args.polymorphism_path);
            auto ok = is_polymorphism(f, read_template_file(need(args.template_path, "-t")));
            std::cout << "polymorphism=" << (ok ? "true" : "false") << "\n";
            return ok ? exit_ok : exit_negative;
        }
        if (args.compose_p > 0) {
            auto c = read_function_file(need(args.function_path, "-f"));
            write_output(args.output, function_text(compose_eq1(c, args.compose_p)));
            return exit_ok;
        }
        if (args.sigma_p > 0) {
            auto t = read_function_file(need(args.function_path, "-f"));
            write_output(args.output, function_text(sigma_transform(t, args.sigma_p)));
            return exit_ok;
        }
        if (args.enumerate_n > 0) {
            auto t = read_template_file(need(args.template_path, "-t"));
            EnumerationOptions options;
            if (args.cyclic)
                options.invariance = cyclic_generators(args.enumerate_n);
            if (args.doubly_cyclic > 0) {
                if (args.doubly_cyclic * args.doubly_cyclic != args.enumerate_n)
                    throw CLI::ValidationError("--doubly-cyclic p needs --enumerate p^2");
                options.invariance = doubly_cyclic_generators(args.doubly_cyclic);
            }
            auto stream = enumerate_polymorphisms(t, args.enumerate_n, options);
            long count = 0;
            while (auto f = stream.next()) {
                ++count;
                if (args.list)
                    std::cout << f->to_string() << "\n";
            }
            std::cout << "count=" << count << "\n";
            return exit_ok;
        }
        if (args.cyclic || args.doubly_cyclic > 0) {
            auto f = read_function_file(need(args.function_path, "-f"));
            auto ok = args.doubly_cyclic > 0 ? is_doubly_cyclic(f, args.doubly_cyclic) : is_cyclic(f);
            std::cout << (args.doubly_cyclic > 0 ? "doubly_cyclic=" : "cyclic=") << (ok ? "true" : "false") << "\n";
            return ok ? exit_ok : exit_negative;
        }
        throw CLI::ValidationError("poly needs one of --is-polymorphism, --cyclic, --doubly-cyclic, --compose-eq1, "
                                   "--sigma, --enumerate");
    }

    struct CertifyArgs
    {
        int r = 1;
        int s = 3;
        std::string case_tag = "4";
        long p = 7;
        int b = 0;
        std::string preset = "full";
        std::string output;
        long search = 0;
    };

    auto run_certify(const CertifyArgs & args) -> int
    {
        auto tag = parse_case_tag(args.case_tag, args.r, args.s);
        auto preset = preset_by_name(args.preset);
        auto p = args.p;
        if (args.search > 0) {
            auto found = search_minimal_p(args.r, args.s, tag, args.b, preset, args.search);
            if (! found) {
                std::cout << "no p <= " << args.search << " works for b=" << args.b << "\n";
                return exit_negative;
            }
            p = *found;
            std::cerr << "minimal p=" << p << "\n";
        }
        auto ctx = ProofContext::make(args.r, args.s, tag, p, args.b, preset);
        try {
            auto cert = gen_certificate(ctx);
            write_output(args.output, certificate_to_json(cert));
            std::cerr << "certificate: p=" << p << " nodes=" << cert.nodes.size()
                      << " conclusion=" << to_string(cert.conclusion) << "\n";
        }
        catch (const ProofSearchFailure & e) {
            std::cout << e.what() << "\n";
            return exit_negative;
        }
        return exit_ok;
    }

    struct VerifyArgs
    {
        std::string certificate_path;
        std::string template_path;
    };

    auto run_verify(const VerifyArgs & args) -> int
    {
        auto cert = certificate_from_json(read_text(args.certificate_path));
        auto t = read_template_file(args.template_path);
        auto result = verify_certificate(cert, t);
        if (result.ok) {
            std::cout << "VALID\n";
            return exit_ok;
        }
        std::cout << "INVALID node " << result.node << ": " << result.reason << "\n";
        return exit_negative;
    }
}

auto main(int argc, char ** argv) -> int
{
    CLI::App app{"Boolean promise CSP workbench"};
    app.require_subcommand(1);

    ClassifyArgs classify_args;
    auto * classify_cmd = app.add_subcommand("classify", "Classify a template");
    classify_cmd->add_option("-t,--template", classify_args.template_path, "Template file")->required();
    classify_cmd->add_flag("--json", classify_args.json, "Also print the verdict as JSON");

    SolveArgs solve_args;
    auto * solve_cmd = app.add_subcommand("solve", "Decide an instance via the sandwich solver");
    solve_cmd->add_option("-t,--template", solve_args.template_path, "Template file")->required();
    solve_cmd->add_option("-i,--instance", solve_args.instance_path, "Instance file")->required();
    solve_cmd->add_flag("--witness", solve_args.witness, "Print the assignment or sandwich point");
    solve_cmd->add_flag("--check", solve_args.check, "Cross-check against exhaustive search (PCSP_MAX_BRUTE vars)");

    PolyArgs poly_args;
    auto * poly_cmd = app.add_subcommand("poly", "Polymorphism checks and constructions");
    poly_cmd->add_option("-t,--template", poly_args.template_path, "Template file");
    poly_cmd->add_option("-f,--function", poly_args.function_path, "Truth-table file");
    poly_cmd->add_option("--is-polymorphism", poly_args.polymorphism_path, "Truth-table file to test against -t");
    poly_cmd->add_flag("--cyclic", poly_args.cyclic, "Test -f for cyclicity, or restrict --enumerate");
    poly_cmd->add_option("--doubly-cyclic", poly_args.doubly_cyclic, "Test -f (or restrict --enumerate) for p");
    poly_cmd->add_option("--compose-eq1", poly_args.compose_p, "Compose the cyclic -f with itself for p");
    poly_cmd->add_option("--sigma", poly_args.sigma_p, "Transpose the arguments of -f as a p x p matrix");
    poly_cmd->add_option("--enumerate", poly_args.enumerate_n, "Enumerate polymorphisms of -t of this arity");
    poly_cmd->add_flag("--list", poly_args.list, "With --enumerate, print every truth table");
    poly_cmd->add_option("-o,--output", poly_args.output, "Output file for constructed functions");

    CertifyArgs certify_args;
    auto * certify_cmd = app.add_subcommand("certify", "Generate a no-bounded-polymorphism certificate");
    certify_cmd->add_option("-r", certify_args.r, "Threshold r")->required();
    certify_cmd->add_option("-s", certify_args.s, "Arity s")->required();
    certify_cmd->add_option("--case", certify_args.case_tag, "Case tag: 1, 2, 3, 4, 4a, 4b");
    certify_cmd->add_option("-p", certify_args.p, "Prime p = 1 (mod s)");
    certify_cmd->add_option("-b", certify_args.b, "Boundedness parameter");
    certify_cmd->add_option("--preset", certify_args.preset, "Exponent preset: full or desk");
    certify_cmd->add_option("--search", certify_args.search, "Search for the smallest workable p up to this bound");
    certify_cmd->add_option("-o,--output", certify_args.output, "Output file (default stdout)");

    VerifyArgs verify_args;
    auto * verify_cmd = app.add_subcommand("verify", "Check a certificate against a template");
    verify_cmd->add_option("certificate", verify_args.certificate_path, "Certificate JSON")->required();
    verify_cmd->add_option("-t,--template", verify_args.template_path, "Template file")->required();

    int max_s = 8;
    auto * table_cmd = app.add_subcommand("table", "Print the classification table");
    table_cmd->add_option("--max-s", max_s, "Largest arity");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        auto code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*classify_cmd)
            return run_classify(classify_args);
        if (*solve_cmd)
            return run_solve(solve_args);
        if (*poly_cmd)
            return run_poly(poly_args);
        if (*certify_cmd)
            return run_certify(certify_args);
        if (*verify_cmd)
            return run_verify(verify_args);
        if (*table_cmd) {
            std::cout << render_table(classification_table(max_s));
            return exit_ok;
        }
    }
    catch (const InternalCheckFailure & e) {
        std::cerr << "internal check failed: " << e.what() << "\n";
        return exit_internal;
    }
    catch (const CLI::ValidationError & e) {
        std::cerr << "usage: " << e.what() << "\n";
        return exit_usage;
    }
    catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
