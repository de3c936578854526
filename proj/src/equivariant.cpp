#include "kappa/equivariant.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace kappa {

int FiniteGroup::mul(int g, int h) const {
    return mult.at(static_cast<std::size_t>(g)).at(static_cast<std::size_t>(h));
}

int FiniteGroup::inverse(int g) const {
    for (int h = 0; h < order(); ++h)
        if (mul(g, h) == identity()) return h;
    throw std::logic_error("FiniteGroup: no inverse for " + names.at(static_cast<std::size_t>(g)));
}

std::optional<int> FiniteGroup::index_of(const std::string& name) const {
    for (int i = 0; i < order(); ++i)
        if (names[static_cast<std::size_t>(i)] == name) return i;
    return std::nullopt;
}

std::vector<std::string> FiniteGroup::violations() const {
    std::vector<std::string> out;
    int n = order();
    if (n == 0) {
        out.push_back("empty group");
        return out;
    }
    std::set<std::string> seen;
    for (const auto& nm : names)
        if (!seen.insert(nm).second) out.push_back("duplicate element name " + nm);
    if (static_cast<int>(mult.size()) != n) {
        out.push_back("multiplication table has wrong shape");
        return out;
    }
    for (const auto& row : mult) {
        if (static_cast<int>(row.size()) != n) {
            out.push_back("multiplication table has wrong shape");
            return out;
        }
        for (int v : row)
            if (v < 0 || v >= n) {
                out.push_back("multiplication table entry out of range");
                return out;
            }
    }
    for (int g = 0; g < n; ++g) {
        if (mul(0, g) != g || mul(g, 0) != g) out.push_back("element 0 is not an identity");
    }
    for (int g = 0; g < n; ++g) {
        bool has_inv = false;
        for (int h = 0; h < n; ++h)
            if (mul(g, h) == 0 && mul(h, g) == 0) has_inv = true;
        if (!has_inv) out.push_back("no inverse for " + names[static_cast<std::size_t>(g)]);
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (mul(mul(a, b), c) != mul(a, mul(b, c))) {
                    out.push_back("associativity fails");
                    return out;
                }
    return out;
}

FiniteGroup FiniteGroup::trivial() {
    FiniteGroup g;
    g.names = {"e"};
    g.mult = {{0}};
    return g;
}

FiniteGroup FiniteGroup::cyclic(int n) {
    if (n < 1) throw std::invalid_argument("cyclic: order must be >= 1");
    FiniteGroup g;
    for (int i = 0; i < n; ++i) g.names.push_back(i == 0 ? "e" : "r" + std::to_string(i));
    g.mult.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g.mult[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
    return g;
}

FiniteGroup FiniteGroup::symmetric(int r, std::vector<std::vector<int>>* perms_out) {
    if (r < 1) throw std::invalid_argument("symmetric: r must be >= 1");
    std::vector<int> base(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) base[static_cast<std::size_t>(i)] = i;
    std::vector<std::vector<int>> perms;
    std::vector<int> p = base;
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    FiniteGroup g;
    for (const auto& q : perms) {
        std::string nm = "p";
        for (int v : q) nm += std::to_string(v);
        g.names.push_back(nm);
    }
    int n = static_cast<int>(perms.size());
    g.mult.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    auto find = [&](const std::vector<int>& q) {
        for (int i = 0; i < n; ++i)
            if (perms[static_cast<std::size_t>(i)] == q) return i;
        throw std::logic_error("symmetric: composition escaped the table");
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::vector<int> comp(static_cast<std::size_t>(r));
            for (int x = 0; x < r; ++x)
                comp[static_cast<std::size_t>(x)] = perms[static_cast<std::size_t>(a)][static_cast<std::size_t>(
                    perms[static_cast<std::size_t>(b)][static_cast<std::size_t>(x)])];
            g.mult[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = find(comp);
        }
    if (perms_out) *perms_out = perms;
    return g;
}

GroupAction::GroupAction(FiniteGroup group, GradedVectorSpace space, std::vector<QMatrix> mats, bool strict)
    : group_(std::move(group)), space_(std::move(space)), mats_(std::move(mats)) {
    if (strict) {
        auto v = violations();
        if (!v.empty()) throw std::invalid_argument("GroupAction: " + v.front());
    }
}

std::vector<std::string> GroupAction::violations() const {
    std::vector<std::string> out = group_.violations();
    if (!out.empty()) return out;
    if (static_cast<int>(mats_.size()) != group_.order()) {
        out.push_back("one matrix per group element required");
        return out;
    }
    int n = space_.dim();
    for (int g = 0; g < group_.order(); ++g) {
        const QMatrix& m = mats_[static_cast<std::size_t>(g)];
        if (m.rows() != n || m.cols() != n) {
            out.push_back("matrix of " + group_.names[static_cast<std::size_t>(g)] + " has wrong shape");
            return out;
        }
        for (const auto& [rc, v] : m.entries()) {
            (void)v;
            if (space_.degree(rc.first) != space_.degree(rc.second)) {
                out.push_back("matrix of " + group_.names[static_cast<std::size_t>(g)] +
                              " does not preserve degree");
                break;
            }
        }
    }
    if (!(mats_[0] == QMatrix::identity(n))) out.push_back("identity element must act as the identity");
    for (int g = 0; g < group_.order(); ++g)
        for (int h = 0; h < group_.order(); ++h) {
            QMatrix lhs = mats_[static_cast<std::size_t>(g)] * mats_[static_cast<std::size_t>(h)];
            if (!(lhs == mats_[static_cast<std::size_t>(group_.mul(g, h))])) {
                out.push_back("action is not multiplicative on (" + group_.names[static_cast<std::size_t>(g)] +
                              "," + group_.names[static_cast<std::size_t>(h)] + ")");
                return out;
            }
        }
    return out;
}

QVec GroupAction::act(int g, const QVec& v) const { return matrix(g).apply(v); }

SparseVec GroupAction::act_sparse(int g, const SparseVec& v) const {
    SparseVec r;
    const QMatrix& m = matrix(g);
    for (const auto& [i, c] : v)
        for (const auto& [rc, w] : m.entries())
            if (rc.second == i) {
                Rat nv = r[rc.first] + w * c;
                if (is_zero(nv))
                    r.erase(rc.first);
                else
                    r[rc.first] = nv;
            }
    return r;
}

EquivarianceReport check_equivariance(const GroupAction& act, const LInftyAlgebra& L) {
    EquivarianceReport rep;
    if (!(act.space() == L.space())) {
        rep.ok = false;
        rep.violations.push_back("action and algebra use different graded bases");
        return rep;
    }
    for (const auto& [k, table] : L.brackets()) {
        for (const auto& [tuple, val] : table) {
            (void)val;
            for (int g = 1; g < act.group().order(); ++g) {
                SparseVec lhs = act.act_sparse(g, L.ell(k, tuple));
                std::vector<SparseVec> args;
                for (int i : tuple) args.push_back(act.act_sparse(g, SparseVec{{i, Rat(1)}}));
                SparseVec rhs = L.ell_multi(k, args);
                if (!(sv_add(lhs, sv_scale(Rat(-1), rhs)).empty())) {
                    std::string t = "(";
                    for (std::size_t i = 0; i < tuple.size(); ++i) {
                        if (i) t += ",";
                        t += L.space().label(tuple[i]);
                    }
                    t += ")";
                    rep.violations.push_back("ell_" + std::to_string(k) + t + " is not equivariant under " +
                                             act.group().names[static_cast<std::size_t>(g)]);
                }
            }
        }
    }
    rep.ok = rep.violations.empty();
    return rep;
}

QMatrix reynolds(const GroupAction& act) {
    int n = act.space().dim();
    QMatrix acc(n, n);
    for (int g = 0; g < act.group().order(); ++g) acc = acc + act.matrix(g);
    return acc.scaled(Rat(1, act.group().order()));
}

std::vector<QVec> invariant_basis(const GroupAction& act) {
    int n = act.space().dim();
    QMatrix p = reynolds(act) - QMatrix::identity(n);
    std::vector<QVec> basis;
    for (const QVec& v : kernel_image(p).kernel) basis.push_back(qvec_primitive(v));
    return basis;
}

GradedVectorSpace invariant_space(const GroupAction& act, const std::vector<QVec>& basis) {
    std::vector<std::string> labels;
    std::vector<int> degrees;
    for (const QVec& v : basis) {
        int deg = 0;
        bool seen = false;
        for (int i = 0; i < act.space().dim(); ++i) {
            if (is_zero(v[static_cast<std::size_t>(i)])) continue;
            if (!seen) {
                deg = act.space().degree(i);
                seen = true;
            } else if (act.space().degree(i) != deg) {
                throw std::logic_error("invariant_space: inhomogeneous invariant vector");
            }
        }
        if (!seen) throw std::logic_error("invariant_space: zero vector in basis");
        labels.push_back(show_vec(v, act.space()));
        degrees.push_back(deg);
    }
    return GradedVectorSpace(labels, degrees);
}

LInftyAlgebra invariant_subalgebra(const GroupAction& act, const LInftyAlgebra& L,
                                   std::vector<QVec>* basis_out) {
    EquivarianceReport eq = check_equivariance(act, L);
    if (!eq.ok)
        throw std::invalid_argument("invariant_subalgebra: action is not equivariant: " + eq.violations.front());
    std::vector<QVec> basis = invariant_basis(act);
    if (basis_out) *basis_out = basis;
    GradedVectorSpace sp = invariant_space(act, basis);
    int n = static_cast<int>(basis.size());
    // Filtration weight of a combination: the least weight in its support.
    std::vector<int> weights;
    for (const QVec& v : basis) {
        int w = L.weight_cap();
        for (int i = 0; i < L.space().dim(); ++i)
            if (!is_zero(v[static_cast<std::size_t>(i)]))
                w = std::min(w, L.filtration_weights()[static_cast<std::size_t>(i)]);
        weights.push_back(w);
    }
    std::map<int, LInftyAlgebra::Table> tables;
    for (const auto& [k, table] : L.brackets()) {
        (void)table;
        // enumerate canonical tuples over the invariant basis
        std::function<void(int, std::vector<int>&)> gen = [&](int start, std::vector<int>& tup) {
            if (static_cast<int>(tup.size()) == k) {
                std::vector<SparseVec> args;
                for (int b : tup) args.push_back(sv_sparse(basis[static_cast<std::size_t>(b)]));
                SparseVec val = L.ell_multi(k, args);
                if (val.empty()) return;
                auto coords = coordinates_in_span(basis, sv_dense(val, L.space().dim()));
                if (!coords)
                    throw std::logic_error("invariant_subalgebra: bracket left the invariant subspace");
                SparseVec out = sv_sparse(*coords);
                if (!out.empty()) tables[k][tup] = out;
                return;
            }
            for (int i = start; i < n; ++i) {
                if (!tup.empty() && tup.back() == i && ((sp.degree(i) % 2) + 2) % 2 == 0) continue;
                tup.push_back(i);
                gen(i, tup);
                tup.pop_back();
            }
        };
        std::vector<int> tup;
        gen(0, tup);
    }
    return LInftyAlgebra(sp, weights, L.arity_cap(), L.weight_cap(), std::move(tables));
}

GroupAction homology_action(const GroupAction& act, const ChainComplex& c, int degree) {
    for (int g = 0; g < act.group().order(); ++g) {
        QMatrix gm = act.matrix(g);
        if (!((gm * c.differential()) == (c.differential() * gm)))
            throw std::invalid_argument("homology_action: differential is not equivariant");
    }
    HomologyData h = homology_data(c, degree);
    std::vector<std::string> labels;
    std::vector<int> degrees;
    for (int i = 0; i < h.dim(); ++i) {
        labels.push_back("h" + std::to_string(degree) + "_" + std::to_string(i));
        degrees.push_back(degree);
    }
    GradedVectorSpace hs(labels, degrees);
    std::vector<QMatrix> mats;
    for (int g = 0; g < act.group().order(); ++g) {
        QMatrix m(h.dim(), h.dim());
        for (int j = 0; j < h.dim(); ++j) {
            QVec moved = act.act(g, h.reps[static_cast<std::size_t>(j)]);
            QVec coords = h.coords(moved);
            for (int i = 0; i < h.dim(); ++i) m.set(i, j, coords[static_cast<std::size_t>(i)]);
        }
        mats.push_back(m);
    }
    return GroupAction(act.group(), hs, mats);
}

CommutationVerdict invariants_commute_with_homology(const GroupAction& act, const ChainComplex& c) {
    for (int g = 0; g < act.group().order(); ++g) {
        QMatrix gm = act.matrix(g);
        if (!((gm * c.differential()) == (c.differential() * gm)))
            throw std::invalid_argument("invariants_commute_with_homology: differential is not equivariant");
    }
    CommutationVerdict v;
    // Route 1: restrict the complex to the invariant subspace, then take homology.
    std::vector<QVec> basis = invariant_basis(act);
    if (!basis.empty()) {
        GradedVectorSpace sp = invariant_space(act, basis);
        QMatrix d(static_cast<int>(basis.size()), static_cast<int>(basis.size()));
        for (int j = 0; j < static_cast<int>(basis.size()); ++j) {
            QVec img = c.differential().apply(basis[static_cast<std::size_t>(j)]);
            auto coords = coordinates_in_span(basis, img);
            if (!coords) throw std::logic_error("differential left the invariant subspace");
            for (int i = 0; i < static_cast<int>(basis.size()); ++i)
                d.set(i, j, (*coords)[static_cast<std::size_t>(i)]);
        }
        v.homology_of_invariants = homology_dims(ChainComplex(sp, d));
    }
    // Route 2: homology first, then invariants of the induced action.
    for (const auto& [deg, n] : c.space().dims_by_degree()) {
        (void)n;
        GroupAction ha = homology_action(act, c, deg);
        if (ha.space().dim() == 0) continue;
        int dim_inv = static_cast<int>(invariant_basis(ha).size());
        if (dim_inv > 0) v.invariants_of_homology[deg] = dim_inv;
    }
    v.ok = v.homology_of_invariants == v.invariants_of_homology;
    return v;
}

GroupAction lie_action(const FiniteGroup& G, const FreeLiePtr& L, const LInftyAlgebra& A,
                       const std::vector<std::map<std::string, LieElement>>& images) {
    if (static_cast<int>(images.size()) != G.order())
        throw std::invalid_argument("lie_action: one image map per group element required");
    const std::vector<MonoKey>& keys = A.monomial_keys();
    if (keys.empty() && A.space().dim() > 0)
        throw std::invalid_argument("lie_action: algebra was not built from a free Lie model");
    std::map<MonoKey, int> index;
    for (std::size_t i = 0; i < keys.size(); ++i) index[keys[i]] = static_cast<int>(i);
    std::vector<QMatrix> mats;
    for (int g = 0; g < G.order(); ++g) {
        LieMorphism phi = LieMorphism::make(L, L, images[static_cast<std::size_t>(g)]);
        QMatrix m(A.space().dim(), A.space().dim());
        for (std::size_t j = 0; j < keys.size(); ++j) {
            LieElement img = phi.apply(L->mono(keys[j]));
            for (const auto& [k, cf] : img.terms()) {
                auto it = index.find(k);
                if (it == index.end())
                    throw std::invalid_argument("lie_action: image of " + L->show_key(keys[j]) +
                                                " leaves the modeled degree window");
                m.set(it->second, static_cast<int>(j), cf);
            }
        }
        mats.push_back(m);
    }
    return GroupAction(G, A.space(), mats);
}

}  // namespace kappa
