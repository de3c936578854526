#include "kappa/browder.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace kappa {

std::string SphereTensor::show() const {
    if (is_zero()) return "0";
    auto wrap = [](const LieElement& e) {
        std::string s = e.show();
        return e.terms().size() > 1 ? "(" + s + ")" : s;
    };
    std::string out;
    if (!one_part.is_zero()) out += "1\xE2\x8A\x97" + wrap(one_part);
    if (!x_part.is_zero()) {
        if (!out.empty()) out += " + ";
        out += "x\xE2\x8A\x97" + wrap(x_part);
    }
    return out;
}

SphereTensor st_add(const SphereTensor& a, const SphereTensor& b) {
    return {a.one_part + b.one_part, a.x_part + b.x_part};
}

SphereTensor st_scale(const Rat& c, const SphereTensor& a) {
    return {a.one_part.scaled(c), a.x_part.scaled(c)};
}

namespace {

// Splits into Lie-homogeneous summands so the Koszul sign below is applied
// per degree.
std::map<int, LieElement> by_degree(const LieElement& e) {
    std::map<int, LieElement> out;
    if (e.is_zero()) return out;
    const FreeLiePtr& L = e.owner();
    for (const auto& [k, c] : e.terms()) {
        int d = L->degree_of(k);
        auto it = out.find(d);
        if (it == out.end())
            out.emplace(d, L->mono(k).scaled(c));
        else
            it->second = it->second + L->mono(k).scaled(c);
    }
    if (e.truncated() && !out.empty()) out.begin()->second = out.begin()->second.marked_truncated(true);
    return out;
}

}  // namespace

SphereTensor st_bracket(int n, const SphereTensor& a, const SphereTensor& b) {
    FreeLiePtr owner;
    for (const LieElement* p : {&a.one_part, &a.x_part, &b.one_part, &b.x_part})
        if (p->owner()) owner = p->owner();
    if (!owner) return {};
    SphereTensor out{owner->zero(), owner->zero()};
    if (!a.one_part.is_zero() && !b.one_part.is_zero())
        out.one_part = out.one_part + bracket(a.one_part, b.one_part);
    if (!a.one_part.is_zero() && !b.x_part.is_zero()) {
        for (const auto& [deg, part] : by_degree(a.one_part)) {
            Rat s = ((deg % 2 != 0) && ((n - 1) % 2 != 0)) ? Rat(-1) : Rat(1);
            out.x_part = out.x_part + bracket(part, b.x_part).scaled(s);
        }
    }
    if (!a.x_part.is_zero() && !b.one_part.is_zero())
        out.x_part = out.x_part + bracket(a.x_part, b.one_part);
    // x (x) - against x (x) - vanishes: x^2 = 0 in H^*(S^{n-1}).
    return out;
}

SphereTensor twisted_swap(const CoalgebraDatum& d, const SphereTensor& t) {
    std::map<std::string, LieElement> images;
    for (const auto& g : d.L->generators()) {
        images[g.name + "1"] = d.LL.algebra->gen(g.name + "2");
        images[g.name + "2"] = d.LL.algebra->gen(g.name + "1");
    }
    LieMorphism swap = LieMorphism::make(d.LL.algebra, d.LL.algebra, images);
    Rat sx = (d.n % 2 != 0) ? Rat(-1) : Rat(1);
    return {swap.apply(t.one_part), swap.apply(t.x_part).scaled(sx)};
}

std::vector<std::string> validate(const CoalgebraDatum& d) {
    std::vector<std::string> bad;
    if (d.n < 1) bad.push_back("suspension count must be at least 1");
    if (!d.L || !d.LL.algebra) {
        bad.push_back("missing source or target algebra");
        return bad;
    }
    for (const auto& g : d.L->generators()) {
        bool ok1 = false, ok2 = false;
        for (const auto& h : d.LL.algebra->generators()) {
            if (h.name == g.name + "1" && h.degree == g.degree) ok1 = true;
            if (h.name == g.name + "2" && h.degree == g.degree) ok2 = true;
        }
        if (!ok1 || !ok2)
            bad.push_back("target lacks the tagged copies of generator " + g.name);
    }
    if (!bad.empty()) return bad;
    for (const auto& [name, img] : d.images) {
        bool known = false;
        for (const auto& g : d.L->generators()) known = known || g.name == name;
        if (!known) bad.push_back("image given for unknown generator " + name);
    }
    for (const auto& g : d.L->generators()) {
        auto it = d.images.find(g.name);
        if (it == d.images.end()) {
            bad.push_back("no image for generator " + g.name);
            continue;
        }
        const SphereTensor& img = it->second;
        LieElement pinch = d.LL.algebra->gen(g.name + "1") + d.LL.algebra->gen(g.name + "2");
        if (!(img.one_part == pinch))
            bad.push_back("unit part of " + g.name + " is not the pinch image " + pinch.show());
        if (!img.x_part.is_zero()) {
            auto deg = img.x_part.degree();
            if (!deg)
                bad.push_back("x part of " + g.name + " is not homogeneous");
            else if (*deg != g.degree + d.n - 1)
                bad.push_back("x part of " + g.name + " has degree " + std::to_string(*deg) +
                              ", expected " + std::to_string(g.degree + d.n - 1));
        }
        if (!(twisted_swap(d, img) == img))
            bad.push_back("image of " + g.name + " is not invariant under the twisted swap");
    }
    return bad;
}

SphereTensor delta2(const CoalgebraDatum& d, const LieElement& e) {
    std::vector<std::string> bad = validate(d);
    if (!bad.empty()) throw std::invalid_argument("invalid coalgebra datum: " + bad.front());
    if (e.is_zero() || !e.owner())
        return {d.LL.algebra->zero().marked_truncated(e.truncated()), d.LL.algebra->zero()};
    if (!e.owner()->structurally_equal(*d.L))
        throw std::invalid_argument("element does not live in the datum's source algebra");
    std::map<MonoKey, SphereTensor> memo;
    std::function<SphereTensor(const MonoKey&)> rec = [&](const MonoKey& k) -> SphereTensor {
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        SphereTensor out;
        if (k.weight() == 1 && !k.sq) {
            out = d.images.at(d.L->generators().at(static_cast<std::size_t>(k.word[0])).name);
        } else {
            auto [l, r] = d.L->children(k);
            out = st_bracket(d.n, rec(l), rec(r));
        }
        memo.emplace(k, out);
        return out;
    };
    SphereTensor acc{d.LL.algebra->zero(), d.LL.algebra->zero()};
    for (const auto& [k, c] : e.terms()) acc = st_add(acc, st_scale(c, rec(k)));
    acc.one_part = acc.one_part.marked_truncated(e.truncated());
    return acc;
}

LieElement kappa(const CoalgebraDatum& d, const LieElement& e) {
    SphereTensor full = delta2(d, e);
    return full.x_part.marked_truncated(full.one_part.truncated());
}

ObstructionReport obstruction_report(const CoalgebraDatum& d, int lo, int hi) {
    std::vector<std::string> bad = validate(d);
    if (!bad.empty()) throw std::invalid_argument("invalid coalgebra datum: " + bad.front());
    ObstructionReport r;
    r.degree_lo = lo;
    r.degree_hi = hi;
    r.weight_cap = d.L->weight_cap();
    for (const MonoKey& k : d.L->basis(d.L->weight_cap(), hi - 1)) {
        int top = d.L->degree_of(k) + 1;
        if (top < lo || top > hi) continue;
        ++r.scanned;
        LieElement val = kappa(d, d.L->mono(k));
        r.truncated = r.truncated || val.truncated();
        if (!val.is_zero() && !r.obstructed) {
            r.obstructed = true;
            r.witness = d.L->show_key(k);
            r.witness_value = val.show();
        }
    }
    r.verdict = r.obstructed ? "not a " + std::to_string(d.n + 1) + "-fold suspension"
                             : "no obstruction found (inconclusive)";
    return r;
}

CoalgebraDatum from_product_model(const FreeLiePtr& L, int n,
                                  const std::map<std::string, std::string>& base_cell_images,
                                  const std::map<std::string, std::string>& x_cell_images,
                                  std::string provenance) {
    CoalgebraDatum d;
    d.n = n;
    d.L = L;
    d.LL = free_product({L, L}, {"1", "2"}, 2 * L->weight_cap());
    d.provenance = std::move(provenance);
    for (const auto& g : L->generators()) {
        auto base = base_cell_images.find(g.name);
        auto xc = x_cell_images.find(g.name);
        if (base == base_cell_images.end())
            throw std::invalid_argument("missing base cell image for generator " + g.name);
        if (xc == x_cell_images.end())
            throw std::invalid_argument("missing x cell image for generator " + g.name);
        d.images[g.name] = {canonical_form(d.LL.algebra, base->second),
                            canonical_form(d.LL.algebra, xc->second)};
    }
    return d;
}

CoalgebraDatum sphere_datum(int n, int weight_cap) {
    if (n < 1) throw std::invalid_argument("sphere_datum: n must be at least 1");
    FreeLiePtr L = FreeGradedLie::make({{"e", n - 1}}, weight_cap);
    return from_product_model(L, n, {{"e", "e1 + e2"}}, {{"e", "[e1, e2]"}},
                              "top cell of the sphere product");
}

CoalgebraDatum wedge_pinch_datum(const FreeLiePtr& L, int n, std::string provenance) {
    std::map<std::string, std::string> base, xc;
    for (const auto& g : L->generators()) {
        base[g.name] = g.name + "1 + " + g.name + "2";
        xc[g.name] = "0";
    }
    return from_product_model(L, n, base, xc, std::move(provenance));
}

CoalgebraDatum sigma3_cp2_datum(int weight_cap) {
    FreeLiePtr L = FreeGradedLie::make({{"u", 4}, {"v", 6}}, weight_cap);
    return from_product_model(L, 3, {{"u", "u1 + u2"}, {"v", "v1 + v2"}},
                              {{"u", "0"}, {"v", "[u1, u2]"}},
                              "triple suspension of the projective plane");
}

}  // namespace kappa
