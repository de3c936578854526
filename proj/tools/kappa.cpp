#include "kappa/demos.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

using namespace kappa;

namespace {

std::optional<int> env_cap(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    try {
        int n = std::stoi(v);
        if (n >= 1) return n;
    } catch (...) {
    }
    std::cerr << "warning: ignoring invalid " << name << "='" << v << "'\n";
    return std::nullopt;
}

int emit(const RunReport& r, bool json_out) {
    std::cout << (json_out ? r.json_text : r.text);
    if (json_out) std::cout << "\n";
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact rational models of suspension coalgebra structures"};
    app.require_subcommand(1);

    bool json_out = false;
    std::optional<int> weight_cap, arity_cap;
    app.add_flag("--json", json_out, "machine-readable report");
    app.add_option("--weight-cap", weight_cap, "bracket weight cap (beats file and environment)")
        ->check(CLI::PositiveNumber);
    app.add_option("--arity-cap", arity_cap, "bracket arity cap (beats file and environment)")
        ->check(CLI::PositiveNumber);

    std::string file, target, action, group, element, twist, degrees, cdga_action, lie_action;
    std::string demo_name, export_path, datum;

    CLI::Validator degree_range(
        [](std::string& s) -> std::string {
            try {
                parse_degree_range(s);
                return {};
            } catch (const std::exception& e) {
                return std::string(e.what());
            }
        },
        "A..B");

    CLI::App* cj = app.add_subcommand("check-jacobi", "generalized Jacobi identities of an algebra");
    cj->add_option("file", file, "workspace file")->required();
    cj->add_option("--target", target, "algebra name (default: the only one)");

    CLI::App* inv = app.add_subcommand("invariants", "graded dimensions of an action's invariants");
    inv->add_option("file", file, "workspace file")->required();
    inv->add_option("--group", group, "group whose (unique) action to use");
    inv->add_option("--action", action, "action name");

    CLI::App* hg = app.add_subcommand("homotopy-groups", "homotopy groups of a Maurer-Cartan component");
    hg->add_option("file", file, "workspace file")->required();
    hg->add_option("--target", target, "algebra name (default: the only one)");
    hg->add_option("--twist", twist, "Maurer-Cartan element to twist by");

    CLI::App* hf = app.add_subcommand("hofixed", "homotopy groups of the fixed-point mapping model");
    hf->add_option("file", file, "workspace file")->required();
    hf->add_option("--cdga-action", cdga_action, "action on the cdga factor");
    hf->add_option("--lie-action", lie_action, "action on the algebra factor");
    hf->add_option("--degrees", degrees, "topological degree window a..b (default 0..12)")
        ->check(degree_range);

    CLI::App* br = app.add_subcommand("browder", "delta2 and kappa values of a coalgebra datum");
    br->add_option("file", file, "workspace file")->required();
    br->add_option("--datum", datum, "datum name (default: the only one)");
    br->add_option("--element", element, "bracket expression to evaluate (default: all generators)");

    CLI::App* ob = app.add_subcommand("obstruct", "suspension obstruction scan");
    ob->add_option("file", file, "workspace file")->required();
    ob->add_option("--degrees", degrees, "topological degree window a..b")
        ->required()
        ->check(degree_range);
    ob->add_option("--datum", datum, "datum name (default: the only one)");

    CLI::App* de = app.add_subcommand("demo", "built-in worked examples");
    de->add_option("name", demo_name, "sigma3-cp2 or wedge-s5-s7")
        ->required()
        ->check(CLI::IsMember(demo_names()));
    de->add_option("--export", export_path, "write the demo's workspace file here");

    CLI::App* ru = app.add_subcommand("run", "execute a workspace's job lines");
    ru->add_option("file", file, "workspace file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CapOverrides caps;
    caps.flag_weight = weight_cap;
    caps.flag_arity = arity_cap;
    caps.env_weight = env_cap("KAPPA_WEIGHT_CAP");
    caps.env_arity = env_cap("KAPPA_ARITY_CAP");

    try {
        if (de->parsed()) return emit(run_demo(demo_name, caps, export_path), json_out);
        Workspace w = load_workspace(file, caps);
        if (cj->parsed()) return emit(run_check_jacobi(w, target), json_out);
        if (inv->parsed()) {
            if (!group.empty() && !action.empty())
                throw std::invalid_argument("give either --group or --action, not both");
            if (!group.empty()) return emit(run_job(w, {"invariants", "--group", group}), json_out);
            return emit(run_invariants(w, action), json_out);
        }
        if (hg->parsed()) return emit(run_homotopy_groups(w, target, twist), json_out);
        if (hf->parsed()) {
            int lo = 0, hi = 12;
            if (!degrees.empty()) std::tie(lo, hi) = parse_degree_range(degrees);
            return emit(run_hofixed(w, cdga_action, lie_action, lo, hi), json_out);
        }
        if (br->parsed()) return emit(run_browder(w, datum, element), json_out);
        if (ob->parsed()) {
            auto [lo, hi] = parse_degree_range(degrees);
            return emit(run_obstruct(w, datum, lo, hi), json_out);
        }
        if (ru->parsed()) return emit(run_all_jobs(w), json_out);
    } catch (const ParseError& e) {
        std::cerr << file << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
