#pragma once

#include "kappa/workspace.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kappa {

// One command's deterministic output in both shapes; the CLI picks one to
// print and uses the exit code verbatim.
struct RunReport {
    int exit_code = 0;
    std::string text;
    std::string json_text;
};

std::vector<std::string> demo_names();
// Embedded workspace source of a built-in demo; throws std::invalid_argument
// for unknown names.
const std::string& demo_workspace_text(const std::string& name);

// "a..b" in topological degrees.
std::pair<int, int> parse_degree_range(const std::string& s);

RunReport run_check_jacobi(const Workspace& w, const std::string& target = "");
RunReport run_invariants(const Workspace& w, const std::string& action = "");
RunReport run_homotopy_groups(const Workspace& w, const std::string& target = "",
                              const std::string& twist = "");
RunReport run_hofixed(const Workspace& w, const std::string& cdga_action = "",
                      const std::string& lie_action = "", int deg_lo = 0, int deg_hi = 12);
RunReport run_browder(const Workspace& w, const std::string& datum = "",
                      const std::string& element = "");
RunReport run_obstruct(const Workspace& w, const std::string& datum, int deg_lo, int deg_hi);

// Dispatches one job line (same grammar as the CLI subcommands, without the
// file argument). Unknown commands or bad flags exit with code 2.
RunReport run_job(const Workspace& w, const std::vector<std::string>& argv);
// All job lines in order; exit code is the worst one.
RunReport run_all_jobs(const Workspace& w);

// Parses the named built-in workspace and runs its jobs; when export_path is
// nonempty the workspace is serialized there first.
RunReport run_demo(const std::string& name, const CapOverrides& caps = {},
                   const std::string& export_path = "");

}  // namespace kappa
