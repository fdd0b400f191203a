// bislant: numerical verification of pointwise bi-slant submanifold geometry
// in flat locally product Riemannian ambients.

#include "bislant/fixtures.hpp"
#include "bislant/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace bislant;

constexpr int kExitPass = 0;
constexpr int kExitInputError = 2;

void write_json(const Report& report, const std::string& path) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << to_json(report).dump(2) << "\n";
}

ImmersionSpec load_for_cli(const std::string& path) { return load_spec_file(path); }

struct CommonArgs {
    std::string spec_path;
    int samples = 32;
    std::uint64_t seed = 42;
    int probes = 8;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_spec = true) {
    if (with_spec)
        cmd->add_option("spec", args.spec_path, "spec file (.lps)")->required();
    cmd->add_option("--samples", args.samples, "sample points per suite")->capture_default_str();
    cmd->add_option("--seed", args.seed, "sampling seed")->capture_default_str();
    cmd->add_option("--probes", args.probes, "probe directions per point")->capture_default_str();
    cmd->add_option("-o,--out", args.out_path, "write the JSON report here");
}

int finish(const Report& report, const std::string& out_path) {
    write_json(report, out_path);
    std::cout << summarize(report);
    return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical verification of pointwise bi-slant submanifold geometry"};
    app.require_subcommand(1);

    CommonArgs classify_args;
    CLI::App* classify = app.add_subcommand(
        "classify", "bi-slant axioms, slant functions, classification, claim comparison");
    add_common(classify, classify_args);

    CommonArgs verify_args;
    std::vector<std::string> verify_suites;
    CLI::App* verify = app.add_subcommand("verify", "run identity suites");
    add_common(verify, verify_args);
    verify->add_option("--suite", verify_suites, "suite name or 'all' (repeatable)");

    CommonArgs warped_args;
    CLI::App* warped =
        app.add_subcommand("warped", "warped-product detection and warping recovery");
    add_common(warped, warped_args);

    CommonArgs export_args;
    std::string export_dist;
    int export_grid = 16;
    std::vector<std::string> export_fixes;
    CLI::App* export_cmd =
        app.add_subcommand("export-slant", "slant function on a grid, as CSV");
    add_common(export_cmd, export_args);
    export_cmd->add_option("--dist", export_dist, "distribution name")->required();
    export_cmd->add_option("--grid", export_grid, "grid points per free axis")
        ->capture_default_str();
    export_cmd->add_option("--fix", export_fixes, "pin a coordinate, e.g. --fix v=3.14");

    CommonArgs examples_args;
    std::string examples_action, examples_name;
    CLI::App* examples = app.add_subcommand("examples", "list or run the bundled fixtures");
    examples->add_option("action", examples_action, "'list' or 'run'")->required();
    examples->add_option("name", examples_name, "fixture name for 'run'");
    add_common(examples, examples_args, /*with_spec=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (*classify) {
            RunOptions opts{classify_args.samples, classify_args.seed, classify_args.probes};
            const ImmersionSpec spec = load_for_cli(classify_args.spec_path);
            return finish(run_classify(spec, classify_args.spec_path, opts),
                          classify_args.out_path);
        }
        if (*verify) {
            RunOptions opts{verify_args.samples, verify_args.seed, verify_args.probes};
            const ImmersionSpec spec = load_for_cli(verify_args.spec_path);
            if (verify_suites.empty()) verify_suites = {"all"};
            return finish(run_verify(spec, verify_args.spec_path, verify_suites, opts),
                          verify_args.out_path);
        }
        if (*warped) {
            RunOptions opts{warped_args.samples, warped_args.seed, warped_args.probes};
            const ImmersionSpec spec = load_for_cli(warped_args.spec_path);
            return finish(run_warped(spec, warped_args.spec_path, opts), warped_args.out_path);
        }
        if (*export_cmd) {
            RunOptions opts{export_args.samples, export_args.seed, export_args.probes};
            const ImmersionSpec spec = load_for_cli(export_args.spec_path);
            std::map<std::string, double> fixes;
            for (const auto& f : export_fixes) {
                const auto eq = f.find('=');
                if (eq == std::string::npos)
                    throw InputError("--fix needs the form coord=value, got '" + f + "'");
                fixes[f.substr(0, eq)] = std::stod(f.substr(eq + 1));
            }
            std::ofstream out;
            std::ostream* os = &std::cout;
            if (!export_args.out_path.empty()) {
                out.open(export_args.out_path, std::ios::binary);
                if (!out) throw InputError("cannot write '" + export_args.out_path + "'");
                os = &out;
            }
            const int rows = export_slant_csv(spec, export_dist, export_grid, fixes, opts, *os);
            std::cerr << rows << " rows written\n";
            return kExitPass;
        }
        if (*examples) {
            if (examples_action == "list") {
                for (const auto& f : fixtures::all())
                    if (f.listed) std::cout << f.name << "\n";
                return kExitPass;
            }
            if (examples_action != "run")
                throw InputError("examples: expected 'list' or 'run <name>'");
            const fixtures::Fixture* fx = fixtures::find(examples_name);
            if (!fx) {
                std::ostringstream os;
                os << "unknown example '" << examples_name << "'; available:";
                for (const auto& f : fixtures::all()) os << " " << f.name;
                throw InputError(os.str());
            }
            RunOptions opts{examples_args.samples, examples_args.seed, examples_args.probes};
            const ImmersionSpec spec = load_spec(std::string(fx->text));
            return finish(run_examples(spec, std::string(fx->name), opts),
                          examples_args.out_path);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ExprError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const StructureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
