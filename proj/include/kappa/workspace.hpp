#pragma once

#include "kappa/browder.hpp"
#include "kappa/equivariant.hpp"
#include "kappa/forms.hpp"
#include "kappa/linfty.hpp"
#include "kappa/mapmodel.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kappa {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(int line_, int col_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ", col " + std::to_string(col_) +
                             ": " + msg),
          line(line_),
          col(col_) {}
};

// Flag- and environment-provided cap overrides. Precedence when building a
// workspace: flag, then the file's caps line, then environment, then the
// defaults (weight 6, arity 3).
struct CapOverrides {
    std::optional<int> flag_weight, flag_arity;
    std::optional<int> env_weight, env_arity;
};

struct Workspace {
    int weight_cap = 6;  // resolved values every declaration was built with
    int arity_cap = 3;
    bool caps_from_file = false;

    std::map<std::string, FreeLiePtr> lies;
    std::map<std::string, std::string> dgl_base;  // dgl name -> lie name
    std::map<std::string, LInftyAlgebra> linftys;  // raw declarations and dgls
    std::map<std::string, Cdga> cdgas;
    std::map<std::string, FiniteGroup> groups;
    std::map<std::string, GroupAction> actions;
    std::map<std::string, std::string> action_target;
    std::map<std::string, CoalgebraDatum> data;
    std::vector<std::pair<int, std::vector<std::string>>> jobs;  // source line, argv

    // Declarations as written (header line, inner lines), in order; the
    // serializer re-emits these so exports parse back to the same objects.
    std::vector<std::pair<std::string, std::vector<std::string>>> decls_raw;

    // The unique declaration of a kind, or the named one; throws
    // std::invalid_argument with a readable message otherwise.
    const LInftyAlgebra& pick_linfty(const std::string& name = "") const;
    const CoalgebraDatum& pick_datum(const std::string& name = "") const;
    const GroupAction& pick_action(const std::string& name = "") const;
};

Workspace parse_workspace(const std::string& text, const CapOverrides& caps = {});
Workspace load_workspace(const std::string& path, const CapOverrides& caps = {});

// Serializations that parse back to the same objects. Lie elements print in
// the canonical basis, so a round trip is the identity on every report.
std::string write_workspace(const Workspace& w);

}  // namespace kappa
