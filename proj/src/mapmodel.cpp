#include "kappa/mapmodel.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace kappa {

namespace {
int par(int d) { return ((d % 2) + 2) % 2; }
}  // namespace

Cdga::Cdga(GradedVectorSpace space, int unit_index, std::map<std::pair<int, int>, Product> products,
           QMatrix d, bool strict)
    : space_(std::move(space)), unit_(unit_index), products_(std::move(products)), d_(std::move(d)) {
    if (strict) {
        auto v = violations();
        if (!v.empty()) throw std::invalid_argument("Cdga: " + v.front());
    }
}

Cdga::Eval Cdga::mul(int a, int b) const {
    if (a < 0 || a >= space_.dim() || b < 0 || b >= space_.dim())
        throw std::out_of_range("Cdga::mul index");
    Eval e;
    if (a == unit_) {
        e.value[b] = Rat(1);
        return e;
    }
    if (b == unit_) {
        e.value[a] = Rat(1);
        return e;
    }
    int i = std::min(a, b), j = std::max(a, b);
    auto it = products_.find({i, j});
    if (it == products_.end()) return e;  // unspecified products are zero
    if (it->second.overflow) {
        e.truncated = true;
        return e;
    }
    Rat sign(1);
    if (a > b && par(space_.degree(a)) == 1 && par(space_.degree(b)) == 1) sign = -1;
    e.value = sv_scale(sign, it->second.value);
    return e;
}

Cdga::Eval Cdga::mul_vec(const SparseVec& a, const SparseVec& b) const {
    Eval acc;
    for (const auto& [i, ci] : a)
        for (const auto& [j, cj] : b) {
            Eval t = mul(i, j);
            acc.truncated = acc.truncated || t.truncated;
            acc.value = sv_add(acc.value, sv_scale(ci * cj, t.value));
        }
    return acc;
}

std::vector<std::string> Cdga::violations() const {
    std::vector<std::string> out;
    int n = space_.dim();
    if (unit_ < 0 || unit_ >= n) {
        out.push_back("unit index out of range");
        return out;
    }
    if (space_.degree(unit_) != 0) out.push_back("unit must sit in degree 0");
    if (d_.rows() != n || d_.cols() != n) {
        out.push_back("differential shape mismatch");
        return out;
    }
    for (const auto& [key, p] : products_) {
        auto [i, j] = key;
        if (i < 0 || j < 0 || i >= n || j >= n || i > j) {
            out.push_back("product key must be an ordered basis pair");
            continue;
        }
        if (i == unit_ || j == unit_) {
            int other = (i == unit_) ? j : i;
            if (p.overflow || p.value != SparseVec{{other, Rat(1)}})
                out.push_back("product with the unit must be the identity on " + space_.label(other));
            continue;
        }
        if (p.overflow) continue;
        int dsum = space_.degree(i) + space_.degree(j);
        for (const auto& [o, c] : p.value) {
            if (is_zero(c)) continue;
            if (o < 0 || o >= n) {
                out.push_back("product output index out of range");
                continue;
            }
            if (space_.degree(o) != dsum)
                out.push_back("product " + space_.label(i) + "*" + space_.label(j) +
                              " violates the degree law");
        }
        if (i == j && par(space_.degree(i)) == 1 && !p.value.empty())
            out.push_back("square of odd class " + space_.label(i) + " must vanish");
    }
    for (const auto& [rc, v] : d_.entries()) {
        (void)v;
        if (space_.degree(rc.first) != space_.degree(rc.second) + 1) {
            out.push_back("differential entry " + space_.label(rc.first) + " <- " + space_.label(rc.second) +
                          " is not degree +1");
        }
    }
    if (!(d_ * d_).is_zero()) out.push_back("d*d != 0");
    // Associativity on basis triples, skipping any association that meets an overflow slot.
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                Eval ab = mul(a, b);
                Eval bc = mul(b, c);
                if (ab.truncated || bc.truncated) continue;
                Eval l = mul_vec(ab.value, SparseVec{{c, Rat(1)}});
                Eval r = mul_vec(SparseVec{{a, Rat(1)}}, bc.value);
                if (l.truncated || r.truncated) continue;
                if (!sv_add(l.value, sv_scale(Rat(-1), r.value)).empty()) {
                    out.push_back("associativity fails on (" + space_.label(a) + "," + space_.label(b) + "," +
                                  space_.label(c) + ")");
                }
            }
    // Leibniz on basis pairs where every product involved is represented.
    auto apply_d = [&](const SparseVec& v) {
        SparseVec r;
        for (const auto& [i, c] : v)
            for (const auto& [rc, w] : d_.entries())
                if (rc.second == i) r = sv_add(r, SparseVec{{rc.first, w * c}});
        return r;
    };
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            Eval ab = mul(a, b);
            if (ab.truncated) continue;
            SparseVec lhs = apply_d(ab.value);
            SparseVec da, db;
            for (const auto& [rc, w] : d_.entries()) {
                if (rc.second == a) da[rc.first] = w;
                if (rc.second == b) db[rc.first] = w;
            }
            Eval t1 = mul_vec(da, SparseVec{{b, Rat(1)}});
            Eval t2 = mul_vec(SparseVec{{a, Rat(1)}}, db);
            if (t1.truncated || t2.truncated) continue;
            Rat s = par(space_.degree(a)) == 1 ? Rat(-1) : Rat(1);
            SparseVec rhs = sv_add(t1.value, sv_scale(s, t2.value));
            if (!sv_add(lhs, sv_scale(Rat(-1), rhs)).empty())
                out.push_back("Leibniz fails on (" + space_.label(a) + "," + space_.label(b) + ")");
        }
    return out;
}

Cdga Cdga::rationals() {
    return Cdga(GradedVectorSpace({"1"}, {0}), 0, {}, QMatrix(1, 1));
}

Cdga Cdga::sphere_cohomology(int n) {
    if (n < 1) throw std::invalid_argument("sphere_cohomology: n must be >= 1");
    GradedVectorSpace sp({"1", "x"}, {0, n - 1});
    // x*x = 0 in every suspension range handled here, including n = 1.
    std::map<std::pair<int, int>, Product> products;
    products[{1, 1}] = Product{};
    return Cdga(std::move(sp), 0, std::move(products), QMatrix(2, 2));
}

GroupAction sphere_swap_action(int n, const Cdga& A) {
    std::vector<std::vector<int>> perms;
    FiniteGroup s2 = FiniteGroup::symmetric(2, &perms);
    QMatrix id = QMatrix::identity(A.space().dim());
    QMatrix swap = id;
    auto xi = A.space().index_of("x");
    if (!xi) throw std::invalid_argument("sphere_swap_action: expected the sphere CDGA basis");
    swap.set(*xi, *xi, (n % 2 == 0) ? Rat(1) : Rat(-1));
    return GroupAction(s2, A.space(), {id, swap});
}

int TensorModel::index_of(int ai, int li) const {
    for (std::size_t t = 0; t < pairs.size(); ++t)
        if (pairs[t] == std::make_pair(ai, li)) return static_cast<int>(t);
    throw std::out_of_range("TensorModel::index_of");
}

TensorModel tensor_model(const Cdga& A, const LInftyAlgebra& L) {
    std::vector<std::string> labels;
    std::vector<int> degrees;
    std::vector<int> weights;
    std::vector<std::pair<int, int>> pairs;
    for (int li = 0; li < L.space().dim(); ++li) {
        for (int ai = 0; ai < A.space().dim(); ++ai) {
            labels.push_back(ai == A.unit_index() ? L.space().label(li)
                                                  : A.space().label(ai) + "\xE2\x8A\x97" + L.space().label(li));
            degrees.push_back(L.space().degree(li) - A.space().degree(ai));
            weights.push_back(L.filtration_weights()[static_cast<std::size_t>(li)]);
            pairs.push_back({ai, li});
        }
    }
    GradedVectorSpace sp(labels, degrees);
    std::map<int, std::map<int, int>> index;  // (ai, li) -> tensor index
    for (std::size_t t = 0; t < pairs.size(); ++t) index[pairs[t].first][pairs[t].second] = static_cast<int>(t);

    bool truncated = false;
    std::map<int, LInftyAlgebra::Table> tables;
    for (int k = 1; k <= L.arity_cap(); ++k) {
        for_each_canonical_tuple(sp, k, [&](const std::vector<int>& tuple) {
            SparseVec out;
            std::vector<int> ais, lis;
            for (int t : tuple) {
                ais.push_back(pairs[static_cast<std::size_t>(t)].first);
                lis.push_back(pairs[static_cast<std::size_t>(t)].second);
            }
            auto assemble = [&](const SparseVec& av, const SparseVec& lv, const Rat& c) {
                for (const auto& [ao, ca] : av)
                    for (const auto& [lo, cl] : lv) {
                        int idx = index.at(ao).at(lo);
                        Rat v = out[idx] + c * ca * cl;
                        if (is_zero(v))
                            out.erase(idx);
                        else
                            out[idx] = v;
                    }
            };
            if (k == 1) {
                // ell_1(a (x) x) = (dA a) (x) x + (-1)^{|a|} a (x) ell_1 x
                SparseVec da;
                for (const auto& [rc, w] : A.differential().entries())
                    if (rc.second == ais[0]) da[rc.first] = w;
                assemble(da, SparseVec{{lis[0], Rat(1)}}, Rat(1));
                Rat s = par(A.space().degree(ais[0])) == 1 ? Rat(-1) : Rat(1);
                assemble(SparseVec{{ais[0], Rat(1)}}, L.ell(1, {lis[0]}), s);
            } else {
                // Koszul sign for moving each a_j left across x_i, i < j.
                int sgn = 1;
                for (std::size_t jj = 1; jj < tuple.size(); ++jj)
                    for (std::size_t ii = 0; ii < jj; ++ii)
                        if (par(L.space().degree(lis[ii])) == 1 &&
                            par(A.space().degree(ais[jj])) == 1)
                            sgn = -sgn;
                Cdga::Eval prod;
                prod.value[A.unit_index()] = Rat(1);
                for (int ai : ais) {
                    prod = A.mul_vec(prod.value, SparseVec{{ai, Rat(1)}});
                    if (prod.truncated) break;
                }
                if (prod.truncated) {
                    truncated = true;
                    return;
                }
                SparseVec lv = L.ell(k, lis);
                assemble(prod.value, lv, Rat(sgn));
            }
            if (!out.empty()) tables[k][tuple] = out;
        });
    }
    TensorModel tm{sp, pairs,
                   LInftyAlgebra(sp, weights, L.arity_cap(), L.weight_cap(), std::move(tables)),
                   truncated};
    return tm;
}

GroupAction diagonal_action(const TensorModel& T, const GroupAction& on_cdga,
                            const GroupAction& on_lie) {
    if (on_cdga.group().names != on_lie.group().names || on_cdga.group().mult != on_lie.group().mult)
        throw std::invalid_argument("diagonal_action: the two actions are of different groups");
    std::map<int, std::map<int, int>> index;
    for (std::size_t t = 0; t < T.pairs.size(); ++t)
        index[T.pairs[t].first][T.pairs[t].second] = static_cast<int>(t);
    std::vector<QMatrix> mats;
    for (int g = 0; g < on_cdga.group().order(); ++g) {
        QMatrix m(T.space.dim(), T.space.dim());
        for (std::size_t t = 0; t < T.pairs.size(); ++t) {
            auto [ai, li] = T.pairs[t];
            for (const auto& [rca, va] : on_cdga.matrix(g).entries()) {
                if (rca.second != ai) continue;
                for (const auto& [rcl, vl] : on_lie.matrix(g).entries()) {
                    if (rcl.second != li) continue;
                    int row = index.at(rca.first).at(rcl.first);
                    m.set(row, static_cast<int>(t), m.get(row, static_cast<int>(t)) + va * vl);
                }
            }
        }
        mats.push_back(m);
    }
    return GroupAction(on_cdga.group(), T.space, mats);
}

HofixedReport hofixed_homotopy_groups(const Cdga& A, const GroupAction& on_cdga,
                                      const LInftyAlgebra& L, const GroupAction& on_lie, int deg_lo,
                                      int deg_hi, const SparseVec& tau) {
    TensorModel T = tensor_model(A, L);
    GroupAction act = diagonal_action(T, on_cdga, on_lie);
    std::vector<QVec> basis;
    LInftyAlgebra inv = invariant_subalgebra(act, T.algebra, &basis);
    SparseVec tau_inv;
    if (!tau.empty()) {
        auto coords = coordinates_in_span(basis, sv_dense(tau, T.space.dim()));
        if (!coords)
            throw std::invalid_argument("hofixed_homotopy_groups: the twist is not invariant");
        tau_inv = sv_sparse(*coords);
    }
    HofixedReport rep;
    rep.weight_cap = L.weight_cap();
    rep.arity_cap = L.arity_cap();
    rep.truncated = T.truncated;
    for (const auto& [d, n] : mc_homotopy_groups(inv, tau_inv).homology_dims) {
        if (d < deg_lo || d > deg_hi) continue;
        rep.dims[d] = n;
    }
    for (int i = 0; i < inv.space().dim(); ++i) {
        int d = inv.space().degree(i);
        if (d < deg_lo || d > deg_hi) continue;
        rep.invariant_labels[d].push_back(inv.space().label(i));
    }
    return rep;
}

}  // namespace kappa
