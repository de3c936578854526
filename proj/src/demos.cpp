#include "kappa/demos.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace kappa {

using nlohmann::json;

namespace {

const std::string kSigma3Cp2 = R"(# triple suspension of the projective plane, cells e5 and e7
caps weight 6 arity 3

lie L {
  gen u 4
  gen v 6
}

datum D {
  n 3
  lie L
  provenance "triple suspension of the projective plane"
  x v = [u1,u2]
}

job browder D
job obstruct D --degrees 2..20
)";

const std::string kWedgeS5S7 = R"(# wedge of a 5-sphere and a 7-sphere, pinch coalgebra structure
caps weight 4 arity 3

lie L {
  gen u 4
  gen v 6
}

datum D {
  n 3
  lie L
  provenance "wedge of spheres, pinch only"
}

job browder D
job obstruct D --degrees 2..20
)";

json caps_json(const Workspace& w) {
    return json{{"weight", w.weight_cap}, {"arity", w.arity_cap}};
}

std::string caps_text(const Workspace& w) {
    return "caps: weight " + std::to_string(w.weight_cap) + ", arity " +
           std::to_string(w.arity_cap);
}

RunReport finish(int code, const std::string& text, json j) {
    return {code, text, j.dump(2)};
}

std::string sv_text(const LInftyAlgebra& L, const SparseVec& v) {
    return sv_show(v, L.space());
}

// The workspace name of a declared object, for report headers.
std::string name_of_linfty(const Workspace& w, const LInftyAlgebra* ptr) {
    for (const auto& [k, v] : w.linftys)
        if (&v == ptr) return k;
    return "?";
}

std::string name_of_datum(const Workspace& w, const CoalgebraDatum* ptr) {
    for (const auto& [k, v] : w.data)
        if (&v == ptr) return k;
    return "?";
}

std::string name_of_action(const Workspace& w, const GroupAction* ptr) {
    for (const auto& [k, v] : w.actions)
        if (&v == ptr) return k;
    return "?";
}

// The unique action whose group is the named one.
std::string action_for_group(const Workspace& w, const std::string& gname) {
    auto git = w.groups.find(gname);
    if (git == w.groups.end()) throw std::invalid_argument("no group named '" + gname + "'");
    std::string found;
    for (const auto& [nm, act] : w.actions) {
        if (act.group().names != git->second.names) continue;
        if (!found.empty())
            throw std::invalid_argument("several actions use group '" + gname +
                                        "'; name the action instead");
        found = nm;
    }
    if (found.empty()) throw std::invalid_argument("no action uses group '" + gname + "'");
    return found;
}

}  // namespace

std::vector<std::string> demo_names() { return {"sigma3-cp2", "wedge-s5-s7"}; }

const std::string& demo_workspace_text(const std::string& name) {
    if (name == "sigma3-cp2") return kSigma3Cp2;
    if (name == "wedge-s5-s7") return kWedgeS5S7;
    throw std::invalid_argument("unknown demo '" + name + "' (have: sigma3-cp2, wedge-s5-s7)");
}

std::pair<int, int> parse_degree_range(const std::string& s) {
    std::size_t dots = s.find("..");
    try {
        if (dots == std::string::npos) throw std::invalid_argument("");
        std::size_t ua = 0, ub = 0;
        int a = std::stoi(s.substr(0, dots), &ua);
        int b = std::stoi(s.substr(dots + 2), &ub);
        if (ua != dots || ub != s.size() - dots - 2) throw std::invalid_argument("");
        return {a, b};
    } catch (...) {
        throw std::invalid_argument("degree ranges look like 2..20, got '" + s + "'");
    }
}

RunReport run_check_jacobi(const Workspace& w, const std::string& target) {
    const LInftyAlgebra& L = w.pick_linfty(target);
    std::string name = name_of_linfty(w, &L);
    std::ostringstream text;
    json j{{"command", "check-jacobi"}, {"target", name}, {"caps", caps_json(w)}};
    text << "check-jacobi on " << name << "\n" << caps_text(w) << "\n";
    std::vector<std::string> structure = L.structure_violations();
    j["structure_violations"] = structure;
    for (const auto& s : structure) text << "structure: " << s << "\n";
    bool ok = structure.empty();
    json arr = json::array();
    for (int n = 1; n <= L.arity_cap(); ++n) {
        JacobiReport rep = check_generalized_jacobi(L, n);
        text << "identity n=" << n << ": " << (rep.ok ? "holds" : "fails") << "\n";
        json jn{{"n", n}, {"ok", rep.ok}};
        json viols = json::array();
        for (const auto& v : rep.violations) {
            json tuple = json::array();
            std::string shown;
            for (int i : v.tuple) {
                tuple.push_back(L.space().label(i));
                shown += (shown.empty() ? "" : ", ") + L.space().label(i);
            }
            viols.push_back({{"tuple", tuple}, {"residual", sv_text(L, v.residual)}});
            if (viols.size() <= 5)
                text << "  violated on (" << shown << "): residual " << sv_text(L, v.residual)
                     << "\n";
        }
        jn["violations"] = viols;
        arr.push_back(jn);
        ok = ok && rep.ok;
    }
    j["identities"] = arr;
    j["pass"] = ok;
    text << (ok ? "pass" : "fail") << "\n";
    return finish(ok ? 0 : 1, text.str(), j);
}

RunReport run_invariants(const Workspace& w, const std::string& action) {
    const GroupAction& act = w.pick_action(action);
    std::string name = name_of_action(w, &act);
    std::vector<QVec> basis = invariant_basis(act);
    GradedVectorSpace inv = invariant_space(act, basis);
    std::map<int, int> dims;
    std::map<int, std::vector<std::string>> labels;
    for (int i = 0; i < inv.dim(); ++i) {
        ++dims[inv.degree(i)];
        labels[inv.degree(i)].push_back(inv.label(i));
    }
    std::ostringstream text;
    text << "invariants of " << name << " on " << w.action_target.at(name) << "\n"
         << caps_text(w) << "\n";
    json jd = json::array(), jl = json::array();
    for (const auto& [d, n] : dims) {
        text << "degree " << d << ": dim " << n;
        for (const auto& s : labels[d]) text << "  " << s;
        text << "\n";
        jd.push_back({d, n});
        jl.push_back({{"degree", d}, {"labels", labels[d]}});
    }
    if (inv.dim() == 0) text << "no invariants\n";
    json j{{"command", "invariants"}, {"action", name},
           {"target", w.action_target.at(name)},      {"caps", caps_json(w)},
           {"dims", jd},
           {"labels", jl}};
    return finish(0, text.str(), j);
}

namespace {

SparseVec parse_twist(const Workspace& w, const std::string& name, const LInftyAlgebra& L,
                      const std::string& twist) {
    if (twist.empty()) return {};
    if (w.dgl_base.count(name)) {
        LieElement e = canonical_form(w.lies.at(w.dgl_base.at(name)), twist);
        SparseVec out;
        const std::vector<MonoKey>& keys = L.monomial_keys();
        for (const auto& [k, c] : e.terms()) {
            bool found = false;
            for (std::size_t i = 0; i < keys.size(); ++i)
                if (keys[i] == k) {
                    out[static_cast<int>(i)] = c;
                    found = true;
                    break;
                }
            if (!found)
                throw std::invalid_argument("twist monomial outside the truncation window");
        }
        return out;
    }
    std::map<std::string, int> index;
    for (int i = 0; i < L.space().dim(); ++i) index[L.space().label(i)] = i;
    SparseVec out;
    // labels of raw algebras are plain words, so space-separated terms with
    // optional rat* prefixes suffice
    std::istringstream in(twist);
    std::string tok;
    Rat sign(1);
    bool any = false;
    while (in >> tok) {
        if (tok == "+") {
            sign = Rat(1);
            continue;
        }
        if (tok == "-") {
            sign = Rat(-1);
            continue;
        }
        if (tok.size() > 1 && tok[0] == '-') {
            sign *= Rat(-1);
            tok = tok.substr(1);
        }
        Rat coeff = sign;
        std::string label = tok;
        std::size_t star = tok.find('*');
        if (star != std::string::npos) {
            coeff *= parse_rat(tok.substr(0, star));
            label = tok.substr(star + 1);
        }
        auto it = index.find(label);
        if (it == index.end()) throw std::invalid_argument("unknown basis label '" + label + "'");
        Rat v = out.count(it->second) ? out[it->second] + coeff : coeff;
        if (is_zero(v))
            out.erase(it->second);
        else
            out[it->second] = v;
        sign = Rat(1);
        any = true;
    }
    if (!any) throw std::invalid_argument("empty twist expression");
    return out;
}

}  // namespace

RunReport run_homotopy_groups(const Workspace& w, const std::string& target,
                              const std::string& twist) {
    const LInftyAlgebra& L = w.pick_linfty(target);
    std::string name = name_of_linfty(w, &L);
    SparseVec tau = parse_twist(w, name, L, twist);
    HomotopyGroups hg = mc_homotopy_groups(L, tau);
    std::ostringstream text;
    text << "homotopy groups of " << name;
    if (!twist.empty()) text << " twisted by " << sv_text(L, tau);
    text << "\n" << caps_text(w) << "\n";
    json jp = json::array();
    for (const auto& [d, n] : hg.homology_dims) {
        text << "pi_" << (d + 1) << ": dim " << n << "\n";
        jp.push_back({d + 1, n});
    }
    json j{{"command", "homotopy-groups"},
           {"target", name},
           {"twist", twist.empty() ? "0" : sv_text(L, tau)},
           {"caps", caps_json(w)},
           {"pi", jp}};
    return finish(0, text.str(), j);
}

RunReport run_hofixed(const Workspace& w, const std::string& cdga_action,
                      const std::string& lie_action, int deg_lo, int deg_hi) {
    auto pick_by_kind = [&](const std::string& given, bool want_cdga) -> const GroupAction& {
        if (!given.empty()) {
            auto it = w.actions.find(given);
            if (it == w.actions.end())
                throw std::invalid_argument("no action named '" + given + "'");
            return it->second;
        }
        const GroupAction* found = nullptr;
        for (const auto& [nm, act] : w.actions) {
            bool is_cdga = w.cdgas.count(w.action_target.at(nm)) > 0;
            if (is_cdga != want_cdga) continue;
            if (found)
                throw std::invalid_argument(std::string("several actions on ") +
                                            (want_cdga ? "cdgas" : "algebras") +
                                            "; name one explicitly");
            found = &act;
        }
        if (!found)
            throw std::invalid_argument(std::string("no action on a ") +
                                        (want_cdga ? "cdga" : "declared algebra"));
        return *found;
    };
    const GroupAction& actA = pick_by_kind(cdga_action, true);
    const GroupAction& actL = pick_by_kind(lie_action, false);
    std::string nameA = name_of_action(w, &actA), nameL = name_of_action(w, &actL);
    const Cdga& A = w.cdgas.at(w.action_target.at(nameA));
    const LInftyAlgebra& L = w.linftys.at(w.action_target.at(nameL));
    HofixedReport rep = hofixed_homotopy_groups(A, actA, L, actL, deg_lo, deg_hi);
    std::ostringstream text;
    text << "homotopy fixed points: " << w.action_target.at(nameA) << " (x) "
         << w.action_target.at(nameL) << " under " << nameA << "/" << nameL << "\n"
         << caps_text(w) << "\n";
    if (rep.truncated) text << "warning: weight cap truncated some products\n";
    json jp = json::array(), jl = json::array();
    for (const auto& [d, n] : rep.dims) {
        text << "pi_" << (d + 1) << ": dim " << n << "\n";
        jp.push_back({d + 1, n});
    }
    for (const auto& [d, ls] : rep.invariant_labels) {
        jl.push_back({{"degree", d}, {"labels", ls}});
    }
    json j{{"command", "hofixed"}, {"cdga_action", nameA},
           {"lie_action", nameL},  {"degrees", {deg_lo, deg_hi}},
           {"caps", caps_json(w)}, {"pi", jp},
           {"invariants", jl},     {"truncated", rep.truncated}};
    return finish(0, text.str(), j);
}

RunReport run_browder(const Workspace& w, const std::string& datum, const std::string& element) {
    const CoalgebraDatum& d = w.pick_datum(datum);
    std::string name = name_of_datum(w, &d);
    std::ostringstream text;
    text << "datum " << name;
    if (!d.provenance.empty()) text << " (" << d.provenance << ")";
    text << ", " << d.n << "-fold suspension\n" << caps_text(w) << "\n";
    std::vector<std::pair<std::string, LieElement>> elements;
    if (!element.empty()) {
        elements.push_back({element, canonical_form(d.L, element)});
    } else {
        for (const auto& g : d.L->generators()) elements.push_back({g.name, d.L->gen(g.name)});
    }
    json arr = json::array();
    for (const auto& [shown, e] : elements) {
        SphereTensor full = delta2(d, e);
        LieElement k = kappa(d, e);
        text << "delta2(" << shown << ") = " << full.show() << "\n";
        text << "kappa(" << shown << ") = " << k.show() << "\n";
        arr.push_back({{"element", shown},
                       {"delta2_one", full.one_part.show()},
                       {"delta2_x", full.x_part.show()},
                       {"kappa", k.show()},
                       {"truncated", full.truncated()}});
    }
    json j{{"command", "browder"},
           {"datum", name},
           {"n", d.n},
           {"provenance", d.provenance},
           {"caps", caps_json(w)},
           {"elements", arr}};
    return finish(0, text.str(), j);
}

RunReport run_obstruct(const Workspace& w, const std::string& datum, int deg_lo, int deg_hi) {
    const CoalgebraDatum& d = w.pick_datum(datum);
    std::string name = name_of_datum(w, &d);
    ObstructionReport rep = obstruction_report(d, deg_lo, deg_hi);
    std::ostringstream text;
    text << "datum " << name;
    if (!d.provenance.empty()) text << " (" << d.provenance << ")";
    text << ", " << d.n << "-fold suspension\n" << caps_text(w) << "\n";
    text << "scanned " << rep.scanned << " basis monomials, topological degrees " << deg_lo << ".."
         << deg_hi << ", weight cap " << rep.weight_cap << "\n";
    if (rep.truncated) text << "warning: some values were weight-truncated\n";
    if (rep.witness)
        text << "witness: " << *rep.witness << " with kappa = " << *rep.witness_value << "\n";
    text << "verdict: " << rep.verdict << "\n";
    json j{{"command", "obstruct"},
           {"datum", name},
           {"n", d.n},
           {"degrees", {deg_lo, deg_hi}},
           {"caps", caps_json(w)},
           {"scanned", rep.scanned},
           {"obstructed", rep.obstructed},
           {"witness", rep.witness ? json(*rep.witness) : json(nullptr)},
           {"witness_kappa", rep.witness_value ? json(*rep.witness_value) : json(nullptr)},
           {"truncated", rep.truncated},
           {"verdict", rep.verdict}};
    return finish(0, text.str(), j);
}

RunReport run_job(const Workspace& w, const std::vector<std::string>& argv) {
    if (argv.empty()) return {2, "empty job\n", "{}"};
    const std::string& cmd = argv[0];
    std::vector<std::string> pos;
    std::map<std::string, std::string> flags;
    for (std::size_t i = 1; i < argv.size(); ++i) {
        if (argv[i].rfind("--", 0) == 0) {
            std::string key = argv[i].substr(2);
            // expression flags swallow the rest of the line
            if (key == "element" || key == "twist") {
                std::string rest;
                for (std::size_t k = i + 1; k < argv.size(); ++k)
                    rest += (rest.empty() ? "" : " ") + argv[k];
                if (rest.empty()) return {2, "flag --" + key + " needs a value\n", "{}"};
                flags[key] = rest;
                break;
            }
            if (i + 1 >= argv.size()) return {2, "flag --" + key + " needs a value\n", "{}"};
            flags[key] = argv[++i];
        } else {
            pos.push_back(argv[i]);
        }
    }
    auto positional = [&](std::size_t k) { return k < pos.size() ? pos[k] : std::string(); };
    try {
        if (cmd == "check-jacobi") return run_check_jacobi(w, positional(0));
        if (cmd == "invariants")
            return run_invariants(w,
                                  flags.count("group") ? action_for_group(w, flags["group"])
                                                       : positional(0));
        if (cmd == "homotopy-groups") return run_homotopy_groups(w, positional(0), flags["twist"]);
        if (cmd == "hofixed") {
            int lo = 0, hi = 12;
            if (flags.count("degrees")) std::tie(lo, hi) = parse_degree_range(flags["degrees"]);
            return run_hofixed(w, flags["cdga-action"], flags["lie-action"], lo, hi);
        }
        if (cmd == "browder") return run_browder(w, positional(0), flags["element"]);
        if (cmd == "obstruct") {
            if (!flags.count("degrees"))
                return {2, "obstruct needs --degrees a..b\n", "{}"};
            auto [lo, hi] = parse_degree_range(flags["degrees"]);
            return run_obstruct(w, positional(0), lo, hi);
        }
    } catch (const std::invalid_argument& e) {
        return {1, std::string(e.what()) + "\n", json{{"error", e.what()}}.dump(2)};
    }
    return {2, "unknown job command '" + cmd + "'\n", "{}"};
}

RunReport run_all_jobs(const Workspace& w) {
    RunReport all;
    json arr = json::array();
    for (const auto& [line, argv] : w.jobs) {
        (void)line;
        RunReport r = run_job(w, argv);
        if (!all.text.empty()) all.text += "\n";
        all.text += r.text;
        arr.push_back(json::parse(r.json_text));
        all.exit_code = std::max(all.exit_code, r.exit_code);
    }
    all.json_text = arr.dump(2);
    return all;
}

RunReport run_demo(const std::string& name, const CapOverrides& caps,
                   const std::string& export_path) {
    const std::string& src = demo_workspace_text(name);
    Workspace w = parse_workspace(src, caps);
    if (!export_path.empty()) {
        std::ofstream out(export_path);
        if (!out) throw std::runtime_error("cannot write " + export_path);
        out << write_workspace(w);
    }
    RunReport r = run_all_jobs(w);
    json j{{"demo", name}, {"jobs", json::parse(r.json_text)}};
    r.json_text = j.dump(2);
    r.text = "demo " + name + "\n\n" + r.text;
    return r;
}

}  // namespace kappa
