#include "kappa/workspace.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace kappa {

namespace {

struct Line {
    int no = 0;
    std::string text;  // comment-stripped
};

std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
        ++no;
        bool quoted = false;
        std::string kept;
        for (char ch : raw) {
            if (ch == '"') quoted = !quoted;
            if (ch == '#' && !quoted) break;
            kept += ch;
        }
        while (!kept.empty() && std::isspace(static_cast<unsigned char>(kept.back()))) kept.pop_back();
        out.push_back({no, kept});
    }
    return out;
}

bool blank(const std::string& s) {
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    return true;
}

struct Tok {
    std::string s;
    int col = 0;  // 1-based
};

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '/' || c == '-' ||
           c == '.';
}

std::vector<Tok> tokens_of(const std::string& text) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        int col = static_cast<int>(i) + 1;
        if (c == '"') {
            std::size_t j = text.find('"', i + 1);
            if (j == std::string::npos) j = text.size() - 1;
            out.push_back({text.substr(i, j - i + 1), col});
            i = j + 1;
            continue;
        }
        if (std::string("{}():,=").find(c) != std::string::npos) {
            out.push_back({std::string(1, c), col});
            ++i;
            continue;
        }
        std::string w;
        while (i < text.size() && word_char(text[i])) w += text[i++];
        if (w.empty()) w += text[i++];  // unknown char; surfaces in errors
        out.push_back({w, col});
    }
    return out;
}

int parse_int(const Tok& t, int line) {
    try {
        std::size_t used = 0;
        int v = std::stoi(t.s, &used);
        if (used != t.s.size()) throw std::invalid_argument("trail");
        return v;
    } catch (...) {
        throw ParseError(line, t.col, "expected an integer, got '" + t.s + "'");
    }
}

Rat parse_rat_tok(const Tok& t, int line) {
    try {
        return parse_rat(t.s);
    } catch (...) {
        throw ParseError(line, t.col, "expected a rational, got '" + t.s + "'");
    }
}

// Splits "label -> value, label -> value" on commas outside brackets.
std::vector<std::pair<std::string, int>> split_depth0(const std::string& s, char sep, int col0) {
    std::vector<std::pair<std::string, int>> out;
    int depth = 0;
    std::string cur;
    int cur_col = col0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        char c = i < s.size() ? s[i] : sep;
        if (i == s.size() || (c == sep && depth == 0)) {
            out.push_back({cur, cur_col});
            cur.clear();
            cur_col = col0 + static_cast<int>(i) + 1;
            continue;
        }
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        cur += c;
    }
    return out;
}

std::string trimmed(const std::string& s, int* col_shift = nullptr) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    if (col_shift) *col_shift = static_cast<int>(a);
    return s.substr(a, b - a);
}

// Linear combination over declared labels: [-] term ((+|-) term)* where a
// term is a rational, "rat * label", "rat label", or a bare label. A bare
// rational must be 0.
SparseVec parse_combo(const std::string& raw, int line, int col0,
                      const std::map<std::string, int>& labels) {
    SparseVec out;
    std::vector<Tok> ts;
    {
        std::size_t i = 0;
        while (i < raw.size()) {
            char c = raw[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            int col = col0 + static_cast<int>(i);
            if (c == '+' || c == '-' || c == '*') {
                ts.push_back({std::string(1, c), col});
                ++i;
                continue;
            }
            std::string w;
            while (i < raw.size() && (std::isalnum(static_cast<unsigned char>(raw[i])) ||
                                      raw[i] == '_' || raw[i] == '/'))
                w += raw[i++];
            if (w.empty()) throw ParseError(line, col, std::string("unexpected '") + c + "'");
            ts.push_back({w, col});
        }
    }
    if (ts.empty()) throw ParseError(line, col0, "empty value");
    std::size_t p = 0;
    auto is_num = [](const std::string& s) {
        return !s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) != 0);
    };
    Rat sign(1);
    if (ts[0].s == "-") {
        sign = Rat(-1);
        ++p;
    } else if (ts[0].s == "+") {
        ++p;
    }
    while (true) {
        if (p >= ts.size()) throw ParseError(line, col0, "dangling sign in value");
        Rat coeff = sign;
        std::optional<std::string> label;
        if (is_num(ts[p].s)) {
            coeff *= parse_rat_tok(ts[p], line);
            ++p;
            if (p < ts.size() && ts[p].s == "*") ++p;
            if (p < ts.size() && ts[p].s != "+" && ts[p].s != "-") {
                label = ts[p].s;
                ++p;
            }
        } else {
            label = ts[p].s;
            ++p;
        }
        if (label) {
            auto it = labels.find(*label);
            if (it == labels.end())
                throw ParseError(line, ts[p - 1].col, "unknown basis label '" + *label + "'");
            Rat v = out.count(it->second) ? out[it->second] + coeff : coeff;
            if (is_zero(v))
                out.erase(it->second);
            else
                out[it->second] = v;
        } else if (!is_zero(coeff)) {
            throw ParseError(line, ts[p - 1].col, "bare rational must be 0");
        }
        if (p == ts.size()) break;
        if (ts[p].s == "+")
            sign = Rat(1);
        else if (ts[p].s == "-")
            sign = Rat(-1);
        else
            throw ParseError(line, ts[p].col, "expected + or - between terms");
        ++p;
    }
    return out;
}

struct Parser {
    std::vector<Line> lines;
    std::size_t pos = 0;
    Workspace w;
    bool weight_pinned = false, arity_pinned = false;  // a flag beats the file
    std::map<std::string, std::string> kind_of;        // global name registry

    const Line& cur() const { return lines[pos]; }
    bool done() const { return pos >= lines.size(); }

    void claim(const std::string& name, const std::string& kind, int line, int col) {
        if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
            throw ParseError(line, col, "invalid name '" + name + "'");
        if (kind_of.count(name))
            throw ParseError(line, col, "name '" + name + "' already declared as " + kind_of[name]);
        kind_of[name] = kind;
    }

    // Collects a braced block: header tokens already read, body = lines until
    // '}' alone. Returns inner lines and records the raw declaration.
    std::vector<Line> block(const std::string& header, int line) {
        std::vector<Line> inner;
        std::vector<std::string> raw;
        ++pos;
        while (true) {
            if (done()) throw ParseError(line, 1, "unterminated block: missing '}'");
            if (trimmed(cur().text) == "}") {
                ++pos;
                break;
            }
            if (!blank(cur().text)) {
                inner.push_back(cur());
                raw.push_back(trimmed(cur().text));
            }
            ++pos;
        }
        w.decls_raw.push_back({header, raw});
        return inner;
    }

    // "lhs = rhs": tokens of lhs plus the raw right side and its column.
    static std::tuple<std::vector<Tok>, std::string, int> eq_split(const Line& ln) {
        std::size_t eq = ln.text.find('=');
        if (eq == std::string::npos) throw ParseError(ln.no, 1, "expected '=' in this line");
        int shift = 0;
        std::string rhs = trimmed(ln.text.substr(eq + 1), &shift);
        if (rhs.empty()) throw ParseError(ln.no, static_cast<int>(eq) + 2, "missing right-hand side");
        return {tokens_of(ln.text.substr(0, eq)), rhs, static_cast<int>(eq) + 2 + shift};
    }

    void run() {
        while (!done()) {
            if (blank(cur().text)) {
                ++pos;
                continue;
            }
            std::vector<Tok> ts = tokens_of(cur().text);
            const std::string& head = ts[0].s;
            if (head == "caps")
                parse_caps(ts);
            else if (head == "lie")
                parse_lie(ts);
            else if (head == "dgl")
                parse_dgl(ts);
            else if (head == "linfty")
                parse_linfty(ts);
            else if (head == "cdga")
                parse_cdga(ts);
            else if (head == "group")
                parse_group(ts);
            else if (head == "action")
                parse_action(ts);
            else if (head == "datum")
                parse_datum(ts);
            else if (head == "job")
                parse_job();
            else
                throw ParseError(cur().no, ts[0].col, "unknown declaration '" + head + "'");
        }
    }

    void parse_caps(const std::vector<Tok>& ts) {
        int line = cur().no;
        if (w.caps_from_file) throw ParseError(line, ts[0].col, "caps declared twice");
        if (!kind_of.empty())
            throw ParseError(line, ts[0].col, "caps must precede every declaration");
        std::size_t i = 1;
        while (i < ts.size()) {
            if (i + 1 >= ts.size())
                throw ParseError(line, ts[i].col, "caps entries are key value pairs");
            int v = parse_int(ts[i + 1], line);
            if (v < 1) throw ParseError(line, ts[i + 1].col, "caps must be at least 1");
            if (ts[i].s == "weight") {
                if (!weight_pinned) w.weight_cap = v;
            } else if (ts[i].s == "arity") {
                if (!arity_pinned) w.arity_cap = v;
            } else {
                throw ParseError(line, ts[i].col, "caps keys are 'weight' and 'arity'");
            }
            i += 2;
        }
        w.caps_from_file = true;
        w.decls_raw.push_back({"caps weight " + std::to_string(w.weight_cap) + " arity " +
                                   std::to_string(w.arity_cap),
                               {}});
        ++pos;
    }

    static void expect(const std::vector<Tok>& ts, std::size_t i, const std::string& s, int line) {
        if (i >= ts.size() || ts[i].s != s)
            throw ParseError(line, i < ts.size() ? ts[i].col : 1, "expected '" + s + "'");
    }

    void parse_lie(const std::vector<Tok>& ts) {
        int line = cur().no;
        if (ts.size() != 3) throw ParseError(line, ts[0].col, "usage: lie NAME {");
        expect(ts, 2, "{", line);
        std::string name = ts[1].s;
        claim(name, "lie", line, ts[1].col);
        std::vector<LieGenerator> gens;
        for (const Line& ln : block("lie " + name + " {", line)) {
            std::vector<Tok> bt = tokens_of(ln.text);
            if (bt.size() != 3 || bt[0].s != "gen")
                throw ParseError(ln.no, bt[0].col, "usage: gen NAME DEGREE");
            for (const LieGenerator& g : gens)
                if (g.name == bt[1].s)
                    throw ParseError(ln.no, bt[1].col, "duplicate generator '" + bt[1].s + "'");
            gens.push_back({bt[1].s, parse_int(bt[2], ln.no)});
        }
        try {
            w.lies[name] = FreeGradedLie::make(gens, w.weight_cap);
        } catch (const std::exception& e) {
            throw ParseError(line, ts[1].col, e.what());
        }
    }

    void parse_dgl(const std::vector<Tok>& ts) {
        int line = cur().no;
        if (ts.size() != 5 || ts[2].s != "on" || ts[4].s != "{")
            throw ParseError(line, ts[0].col, "usage: dgl NAME on LIE {");
        std::string name = ts[1].s, base = ts[3].s;
        claim(name, "dgl", line, ts[1].col);
        auto lit = w.lies.find(base);
        if (lit == w.lies.end()) throw ParseError(line, ts[3].col, "unknown lie '" + base + "'");
        FreeLiePtr L = lit->second;
        std::map<std::string, LieElement> images;
        for (const auto& g : L->generators()) images[g.name] = L->zero();
        for (const Line& ln : block("dgl " + name + " on " + base + " {", line)) {
            auto [lhs, rhs, rcol] = eq_split(ln);
            if (lhs.size() != 2 || lhs[0].s != "d")
                throw ParseError(ln.no, lhs[0].col, "usage: d GEN = expression");
            if (!L->generator_index(lhs[1].s))
                throw ParseError(ln.no, lhs[1].col, "unknown generator '" + lhs[1].s + "'");
            try {
                images[lhs[1].s] = canonical_form(L, rhs);
            } catch (const std::exception& e) {
                throw ParseError(ln.no, rcol, e.what());
            }
        }
        try {
            LieDerivation d = LieDerivation::make(L, -1, images);
            w.linftys.emplace(name, LInftyAlgebra::from_dgl(L, d, w.arity_cap));
            w.dgl_base[name] = base;
        } catch (const std::exception& e) {
            throw ParseError(line, ts[1].col, e.what());
        }
    }

    void parse_linfty(const std::vector<Tok>& ts) {
        int line = cur().no;
        if (ts.size() != 3) throw ParseError(line, ts[0].col, "usage: linfty NAME {");
        expect(ts, 2, "{", line);
        std::string name = ts[1].s;
        claim(name, "linfty", line, ts[1].col);
        std::vector<std::string> labels;
        std::vector<int> degrees, weights;
        std::map<std::string, int> index;
        struct RawEll {
            int k, line, col;
            std::vector<std::string> args;
            std::string rhs;
            int rcol;
            std::vector<int> acols;
        };
        std::vector<RawEll> ells;
        for (const Line& ln : block("linfty " + name + " {", line)) {
            std::vector<Tok> bt = tokens_of(ln.text);
            if (bt[0].s == "basis") {
                if (bt.size() != 3 && !(bt.size() == 5 && bt[3].s == "weight"))
                    throw ParseError(ln.no, bt[0].col, "usage: basis LABEL DEGREE [weight W]");
                if (index.count(bt[1].s))
                    throw ParseError(ln.no, bt[1].col, "duplicate label '" + bt[1].s + "'");
                index[bt[1].s] = static_cast<int>(labels.size());
                labels.push_back(bt[1].s);
                degrees.push_back(parse_int(bt[2], ln.no));
                weights.push_back(bt.size() == 5 ? parse_int(bt[4], ln.no) : 1);
            } else if (bt[0].s == "ell") {
                auto [lhs, rhs, rcol] = eq_split(ln);
                if (lhs.size() < 5 || lhs[2].s != "(" || lhs.back().s != ")")
                    throw ParseError(ln.no, lhs[0].col, "usage: ell K ( LABELS ) = value");
                RawEll r;
                r.k = parse_int(lhs[1], ln.no);
                r.line = ln.no;
                r.col = lhs[0].col;
                r.rhs = rhs;
                r.rcol = rcol;
                for (std::size_t i = 3; i + 1 < lhs.size(); ++i) {
                    if (lhs[i].s == ",") continue;
                    r.args.push_back(lhs[i].s);
                    r.acols.push_back(lhs[i].col);
                }
                if (static_cast<int>(r.args.size()) != r.k)
                    throw ParseError(ln.no, lhs[1].col, "arity does not match the argument count");
                ells.push_back(std::move(r));
            } else {
                throw ParseError(ln.no, bt[0].col, "linfty lines start with 'basis' or 'ell'");
            }
        }
        GradedVectorSpace space(labels, degrees);
        std::map<int, LInftyAlgebra::Table> tables;
        for (int k = 1; k <= w.arity_cap; ++k) tables[k];
        for (const RawEll& r : ells) {
            if (r.k < 1 || r.k > w.arity_cap)
                throw ParseError(r.line, r.col, "arity outside 1.." + std::to_string(w.arity_cap));
            std::vector<int> tuple;
            for (std::size_t i = 0; i < r.args.size(); ++i) {
                auto it = index.find(r.args[i]);
                if (it == index.end())
                    throw ParseError(r.line, r.acols[i], "unknown basis label '" + r.args[i] + "'");
                tuple.push_back(it->second);
            }
            SparseVec val = parse_combo(r.rhs, r.line, r.rcol, index);
            NormTuple nt = normalize_tuple(space, tuple);
            if (nt.zero) {
                if (!val.empty())
                    throw ParseError(r.line, r.col,
                                     "tuple repeats an even-degree argument; the value must be 0");
                continue;
            }
            if (val.empty()) continue;
            tables[r.k][nt.tuple] = sv_scale(Rat(nt.sign), val);
        }
        try {
            w.linftys.emplace(name, LInftyAlgebra(space, weights, w.arity_cap, w.weight_cap,
                                                  tables, true));
        } catch (const std::exception& e) {
            throw ParseError(line, ts[1].col, e.what());
        }
    }

    void parse_cdga(const std::vector<Tok>& ts) {
        int line = cur().no;
        if (ts.size() != 3) throw ParseError(line, ts[0].col, "usage: cdga NAME {");
        expect(ts, 2, "{", line);
        std::string name = ts[1].s;
        claim(name, "cdga", line, ts[1].col);
        std::vector<std::string> labels;
        std::vector<int> degrees;
        std::map<std::string, int> index;
        std::optional<std::string> unit;
        struct RawMul {
            std::string a, b, rhs;
            int line, col, rcol;
        };
        std::vector<RawMul> muls, diffs;
        for (const Line& ln : block("cdga " + name + " {", line)) {
            std::vector<Tok> bt = tokens_of(ln.text);
            if (bt[0].s == "basis") {
                if (bt.size() != 3) throw ParseError(ln.no, bt[0].col, "usage: basis LABEL DEGREE");
                if (index.count(bt[1].s))
                    throw ParseError(ln.no, bt[1].col, "duplicate label '" + bt[1].s + "'");
                index[bt[1].s] = static_cast<int>(labels.size());
                labels.push_back(bt[1].s);
                degrees.push_back(parse_int(bt[2], ln.no));
            } else if (bt[0].s == "unit") {
                if (bt.size() != 2) throw ParseError(ln.no, bt[0].col, "usage: unit LABEL");
                unit = bt[1].s;
            } else if (bt[0].s == "mul") {
                auto [lhs, rhs, rcol] = eq_split(ln);
                if (lhs.size() != 3)
                    throw ParseError(ln.no, lhs[0].col, "usage: mul A B = value");
                muls.push_back({lhs[1].s, lhs[2].s, rhs, ln.no, lhs[1].col, rcol});
            } else if (bt[0].s == "d") {
                auto [lhs, rhs, rcol] = eq_split(ln);
                if (lhs.size() != 2) throw ParseError(ln.no, lhs[0].col, "usage: d LABEL = value");
                diffs.push_back({lhs[1].s, "", rhs, ln.no, lhs[1].col, rcol});
            } else {
                throw ParseError(ln.no, bt[0].col,
                                 "cdga lines start with 'basis', 'unit', 'mul' or 'd'");
            }
        }
        if (!unit) throw ParseError(line, ts[1].col, "cdga needs a 'unit LABEL' line");
        auto uit = index.find(*unit);
        if (uit == index.end()) throw ParseError(line, ts[1].col, "unit label is not in the basis");
        GradedVectorSpace space(labels, degrees);
        std::map<std::pair<int, int>, Cdga::Product> products;
        for (const RawMul& m : muls) {
            auto ia = index.find(m.a), ib = index.find(m.b);
            if (ia == index.end()) throw ParseError(m.line, m.col, "unknown label '" + m.a + "'");
            if (ib == index.end()) throw ParseError(m.line, m.col, "unknown label '" + m.b + "'");
            int i = ia->second, j = ib->second;
            if (i == uit->second || j == uit->second)
                throw ParseError(m.line, m.col, "products with the unit are implicit");
            SparseVec val = parse_combo(m.rhs, m.line, m.rcol, index);
            Rat s(1);
            if (i > j) {
                bool oi = ((degrees[static_cast<std::size_t>(i)] % 2) + 2) % 2 == 1;
                bool oj = ((degrees[static_cast<std::size_t>(j)] % 2) + 2) % 2 == 1;
                s = (oi && oj) ? Rat(-1) : Rat(1);
                std::swap(i, j);
            }
            Cdga::Product p;
            p.value = sv_scale(s, val);
            products[{i, j}] = p;
        }
        QMatrix d(space.dim(), space.dim());
        for (const RawMul& m : diffs) {
            auto ia = index.find(m.a);
            if (ia == index.end()) throw ParseError(m.line, m.col, "unknown label '" + m.a + "'");
            for (const auto& [r, c] : parse_combo(m.rhs, m.line, m.rcol, index)) d.set(r, ia->second, c);
        }
        try {
            w.cdgas.emplace(name, Cdga(space, uit->second, products, d, true));
        } catch (const std::exception& e) {
            throw ParseError(line, ts[1].col, e.what());
        }
    }

    void parse_group(const std::vector<Tok>& ts) {
        int line = cur().no;
        if (ts.size() != 4 || (ts[2].s != "symmetric" && ts[2].s != "cyclic"))
            throw ParseError(line, ts[0].col, "usage: group NAME symmetric|cyclic N");
        claim(ts[1].s, "group", line, ts[1].col);
        int nv = parse_int(ts[3], line);
        try {
            w.groups.emplace(ts[1].s, ts[2].s == "symmetric" ? FiniteGroup::symmetric(nv)
                                                             : FiniteGroup::cyclic(nv));
        } catch (const std::exception& e) {
            throw ParseError(line, ts[3].col, e.what());
        }
        w.decls_raw.push_back({"group " + ts[1].s + " " + ts[2].s + " " + std::to_string(nv), {}});
        ++pos;
    }

    void parse_action(const std::vector<Tok>& ts) {
        int line = cur().no;
        if (ts.size() != 7 || ts[2].s != "group" || ts[4].s != "on" || ts[6].s != "{")
            throw ParseError(line, ts[0].col, "usage: action NAME group G on TARGET {");
        std::string name = ts[1].s, gname = ts[3].s, target = ts[5].s;
        claim(name, "action", line, ts[1].col);
        auto git = w.groups.find(gname);
        if (git == w.groups.end()) throw ParseError(line, ts[3].col, "unknown group '" + gname + "'");
        const FiniteGroup& G = git->second;
        auto kit = kind_of.find(target);
        if (kit == kind_of.end() ||
            (kit->second != "linfty" && kit->second != "dgl" && kit->second != "cdga"))
            throw ParseError(line, ts[5].col, "action target must be a declared linfty, dgl or cdga");
        std::vector<Line> body =
            block("action " + name + " group " + gname + " on " + target + " {", line);

        // element lines: NAME : label -> value, label -> value, ...
        std::map<std::string, std::pair<std::vector<std::pair<std::string, int>>, int>> by_elt;
        for (const Line& ln : body) {
            std::size_t colon = ln.text.find(':');
            if (colon == std::string::npos)
                throw ParseError(ln.no, 1, "usage: ELEMENT : label -> value, ...");
            std::string elt = trimmed(ln.text.substr(0, colon));
            if (!G.index_of(elt))
                throw ParseError(ln.no, 1, "unknown group element '" + elt + "'");
            if (by_elt.count(elt)) throw ParseError(ln.no, 1, "element '" + elt + "' listed twice");
            by_elt[elt] = {split_depth0(ln.text.substr(colon + 1), ',', static_cast<int>(colon) + 2),
                           ln.no};
        }
        auto assignment = [](const std::pair<std::string, int>& piece, int line_no)
            -> std::tuple<std::string, std::string, int> {
            std::size_t arrow = piece.first.find("->");
            if (arrow == std::string::npos)
                throw ParseError(line_no, piece.second, "expected 'label -> value'");
            int shift = 0;
            std::string rhs = trimmed(piece.first.substr(arrow + 2), &shift);
            return {trimmed(piece.first.substr(0, arrow)), rhs,
                    piece.second + static_cast<int>(arrow) + 2 + shift};
        };

        if (kit->second == "dgl") {
            const std::string& base = w.dgl_base.at(target);
            FreeLiePtr L = w.lies.at(base);
            std::vector<std::map<std::string, LieElement>> images(
                static_cast<std::size_t>(G.order()));
            for (const auto& g : L->generators())
                images[static_cast<std::size_t>(G.identity())][g.name] = L->gen(g.name);
            for (const auto& [elt, pieces] : by_elt) {
                int gi = *G.index_of(elt);
                for (const auto& piece : pieces.first) {
                    auto [label, rhs, rcol] = assignment(piece, pieces.second);
                    if (!L->generator_index(label))
                        throw ParseError(pieces.second, piece.second,
                                         "unknown generator '" + label + "'");
                    try {
                        images[static_cast<std::size_t>(gi)][label] = canonical_form(L, rhs);
                    } catch (const std::exception& e) {
                        throw ParseError(pieces.second, rcol, e.what());
                    }
                }
            }
            for (int gi = 0; gi < G.order(); ++gi) {
                if (gi == G.identity()) continue;
                if (images[static_cast<std::size_t>(gi)].size() != L->generators().size())
                    throw ParseError(line, ts[1].col,
                                     "element " + G.names[static_cast<std::size_t>(gi)] +
                                         " is missing generator images");
            }
            try {
                w.actions.emplace(name, lie_action(G, L, w.linftys.at(target), images));
            } catch (const std::exception& e) {
                throw ParseError(line, ts[1].col, e.what());
            }
        } else {
            const GradedVectorSpace& space = kit->second == "cdga"
                                                 ? w.cdgas.at(target).space()
                                                 : w.linftys.at(target).space();
            std::map<std::string, int> index;
            for (int i = 0; i < space.dim(); ++i) index[space.label(i)] = i;
            std::vector<QMatrix> mats(static_cast<std::size_t>(G.order()),
                                      QMatrix(space.dim(), space.dim()));
            std::vector<bool> given(static_cast<std::size_t>(G.order()), false);
            mats[static_cast<std::size_t>(G.identity())] = QMatrix::identity(space.dim());
            given[static_cast<std::size_t>(G.identity())] = true;
            for (const auto& [elt, pieces] : by_elt) {
                int gi = *G.index_of(elt);
                given[static_cast<std::size_t>(gi)] = true;
                std::vector<bool> has(static_cast<std::size_t>(space.dim()), false);
                for (const auto& piece : pieces.first) {
                    auto [label, rhs, rcol] = assignment(piece, pieces.second);
                    auto it = index.find(label);
                    if (it == index.end())
                        throw ParseError(pieces.second, piece.second,
                                         "unknown basis label '" + label + "'");
                    has[static_cast<std::size_t>(it->second)] = true;
                    for (const auto& [r, c] : parse_combo(rhs, pieces.second, rcol, index))
                        mats[static_cast<std::size_t>(gi)].set(r, it->second, c);
                }
                for (int i = 0; i < space.dim(); ++i)
                    if (!has[static_cast<std::size_t>(i)])
                        throw ParseError(pieces.second, 1,
                                         "element " + elt + " does not map label '" +
                                             space.label(i) + "'");
            }
            for (int gi = 0; gi < G.order(); ++gi)
                if (!given[static_cast<std::size_t>(gi)])
                    throw ParseError(line, ts[1].col,
                                     "no images for element " +
                                         G.names[static_cast<std::size_t>(gi)]);
            try {
                w.actions.emplace(name, GroupAction(G, space, mats, true));
            } catch (const std::exception& e) {
                throw ParseError(line, ts[1].col, e.what());
            }
        }
        w.action_target[name] = target;
    }

    void parse_datum(const std::vector<Tok>& ts) {
        int line = cur().no;
        if (ts.size() != 3) throw ParseError(line, ts[0].col, "usage: datum NAME {");
        expect(ts, 2, "{", line);
        std::string name = ts[1].s;
        claim(name, "datum", line, ts[1].col);
        std::optional<int> n;
        std::optional<std::string> lie_name;
        std::string provenance;
        std::map<std::string, std::string> pinch, xpart;
        std::vector<std::pair<std::string, std::pair<int, int>>> deferred;  // gen, (line,col)
        for (const Line& ln : block("datum " + name + " {", line)) {
            std::vector<Tok> bt = tokens_of(ln.text);
            if (bt[0].s == "n") {
                if (bt.size() != 2) throw ParseError(ln.no, bt[0].col, "usage: n FOLD");
                n = parse_int(bt[1], ln.no);
            } else if (bt[0].s == "lie") {
                if (bt.size() != 2) throw ParseError(ln.no, bt[0].col, "usage: lie NAME");
                lie_name = bt[1].s;
            } else if (bt[0].s == "provenance") {
                std::size_t q = ln.text.find('"');
                if (q == std::string::npos || ln.text.rfind('"') == q)
                    throw ParseError(ln.no, bt[0].col, "usage: provenance \"text\"");
                provenance = ln.text.substr(q + 1, ln.text.rfind('"') - q - 1);
            } else if (bt[0].s == "pinch" || bt[0].s == "x") {
                auto [lhs, rhs, rcol] = eq_split(ln);
                (void)rcol;
                if (lhs.size() != 2)
                    throw ParseError(ln.no, lhs[0].col, "usage: " + bt[0].s + " GEN = expression");
                auto& slot = bt[0].s == "pinch" ? pinch : xpart;
                if (slot.count(lhs[1].s))
                    throw ParseError(ln.no, lhs[1].col, "duplicate " + bt[0].s + " entry");
                slot[lhs[1].s] = rhs;
                deferred.push_back({lhs[1].s, {ln.no, lhs[1].col}});
            } else {
                throw ParseError(ln.no, bt[0].col,
                                 "datum lines start with 'n', 'lie', 'provenance', 'pinch' or 'x'");
            }
        }
        if (!n) throw ParseError(line, ts[1].col, "datum needs an 'n FOLD' line");
        if (!lie_name) throw ParseError(line, ts[1].col, "datum needs a 'lie NAME' line");
        auto lit = w.lies.find(*lie_name);
        if (lit == w.lies.end())
            throw ParseError(line, ts[1].col, "unknown lie '" + *lie_name + "'");
        FreeLiePtr L = lit->second;
        for (const auto& [gen, at] : deferred)
            if (!L->generator_index(gen))
                throw ParseError(at.first, at.second, "unknown generator '" + gen + "'");
        for (const auto& g : L->generators()) {
            if (!pinch.count(g.name)) pinch[g.name] = g.name + "1 + " + g.name + "2";
            if (!xpart.count(g.name)) xpart[g.name] = "0";
        }
        try {
            CoalgebraDatum d = from_product_model(L, *n, pinch, xpart, provenance);
            std::vector<std::string> bad = validate(d);
            if (!bad.empty()) throw std::invalid_argument(bad.front());
            w.data.emplace(name, std::move(d));
        } catch (const std::exception& e) {
            throw ParseError(line, ts[1].col, e.what());
        }
    }

    void parse_job() {
        std::istringstream in(cur().text);
        std::string tok;
        std::vector<std::string> argv;
        in >> tok;  // "job"
        while (in >> tok) argv.push_back(tok);
        if (argv.empty()) throw ParseError(cur().no, 1, "empty job line");
        w.jobs.push_back({cur().no, argv});
        ++pos;
    }
};

}  // namespace

const LInftyAlgebra& Workspace::pick_linfty(const std::string& name) const {
    if (!name.empty()) {
        auto it = linftys.find(name);
        if (it == linftys.end()) throw std::invalid_argument("no algebra named '" + name + "'");
        return it->second;
    }
    if (linftys.size() == 1) return linftys.begin()->second;
    std::string msg = linftys.empty() ? "the workspace declares no algebra"
                                      : "several algebras declared; name one of:";
    for (const auto& [k, v] : linftys) {
        (void)v;
        msg += " " + k;
    }
    throw std::invalid_argument(msg);
}

const CoalgebraDatum& Workspace::pick_datum(const std::string& name) const {
    if (!name.empty()) {
        auto it = data.find(name);
        if (it == data.end()) throw std::invalid_argument("no datum named '" + name + "'");
        return it->second;
    }
    if (data.size() == 1) return data.begin()->second;
    std::string msg =
        data.empty() ? "the workspace declares no datum" : "several data declared; name one of:";
    for (const auto& [k, v] : data) {
        (void)v;
        msg += " " + k;
    }
    throw std::invalid_argument(msg);
}

const GroupAction& Workspace::pick_action(const std::string& name) const {
    if (!name.empty()) {
        auto it = actions.find(name);
        if (it == actions.end()) throw std::invalid_argument("no action named '" + name + "'");
        return it->second;
    }
    if (actions.size() == 1) return actions.begin()->second;
    std::string msg = actions.empty() ? "the workspace declares no action"
                                      : "several actions declared; name one of:";
    for (const auto& [k, v] : actions) {
        (void)v;
        msg += " " + k;
    }
    throw std::invalid_argument(msg);
}

Workspace parse_workspace(const std::string& text, const CapOverrides& caps) {
    // The caps line overrides the environment defaults but not explicit
    // flags; parse_caps pins the file values when it runs.
    Parser p;
    p.lines = split_lines(text);
    p.w.weight_cap = caps.flag_weight ? *caps.flag_weight : caps.env_weight ? *caps.env_weight : 6;
    p.w.arity_cap = caps.flag_arity ? *caps.flag_arity : caps.env_arity ? *caps.env_arity : 3;
    p.weight_pinned = caps.flag_weight.has_value();
    p.arity_pinned = caps.flag_arity.has_value();
    p.run();
    if (!p.w.caps_from_file)
        p.w.decls_raw.insert(p.w.decls_raw.begin(),
                             {"caps weight " + std::to_string(p.w.weight_cap) + " arity " +
                                  std::to_string(p.w.arity_cap),
                              {}});
    return std::move(p.w);
}

Workspace load_workspace(const std::string& path, const CapOverrides& caps) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_workspace(buf.str(), caps);
}

std::string write_workspace(const Workspace& w) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [header, inner] : w.decls_raw) {
        if (!first) out << "\n";
        first = false;
        out << header << "\n";
        if (header.find('{') != std::string::npos) {
            for (const auto& ln : inner) out << "  " << ln << "\n";
            out << "}\n";
        }
    }
    if (!w.jobs.empty() && !first) out << "\n";
    for (const auto& [line, argv] : w.jobs) {
        (void)line;
        out << "job";
        for (const auto& a : argv) out << " " << a;
        out << "\n";
    }
    return out.str();
}

}  // namespace kappa
