#include "kappa/forms.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace kappa {

namespace {

struct FormMono {
    std::vector<int> exp;  // exponent per variable
    unsigned mask = 0;     // wedge of dt's, bit k = dt_{k+1}
    bool operator==(const FormMono&) const = default;
};

std::vector<FormMono> form_basis(int n, int cap) {
    std::vector<std::vector<int>> exps;
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == n) {
            exps.push_back(cur);
            return;
        }
        for (int a = 0; a <= left; ++a) {
            cur[static_cast<std::size_t>(pos)] = a;
            rec(pos + 1, left - a);
        }
        cur[static_cast<std::size_t>(pos)] = 0;
    };
    rec(0, cap);
    std::sort(exps.begin(), exps.end());
    std::vector<FormMono> basis;
    for (unsigned mask = 0; mask < (1u << n); ++mask)
        for (const auto& e : exps) basis.push_back({e, mask});
    return basis;
}

std::string var_name(int n, int k) { return n == 1 ? "t" : "t" + std::to_string(k + 1); }
std::string dvar_name(int n, int k) { return n == 1 ? "dt" : "dt" + std::to_string(k + 1); }

std::string form_label(int n, const FormMono& m) {
    std::string poly;
    for (int k = 0; k < n; ++k) {
        int a = m.exp[static_cast<std::size_t>(k)];
        if (a == 0) continue;
        if (!poly.empty()) poly += "*";
        poly += var_name(n, k);
        if (a >= 2) poly += "^" + std::to_string(a);
    }
    std::string wedge;
    for (int k = 0; k < n; ++k) {
        if (!(m.mask & (1u << k))) continue;
        if (!wedge.empty()) wedge += "^";
        wedge += dvar_name(n, k);
    }
    if (poly.empty() && wedge.empty()) return "1";
    if (poly.empty()) return wedge;
    if (wedge.empty()) return poly;
    return poly + "*" + wedge;
}

int popcount(unsigned m) {
    int c = 0;
    while (m) {
        c += static_cast<int>(m & 1u);
        m >>= 1;
    }
    return c;
}

// #{(a in s, b in t) : a > b}; the sign of merging two ascending wedges.
int mask_inversions(unsigned s, unsigned t) {
    int inv = 0;
    for (int a = 0; a < 8; ++a)
        if (s & (1u << a))
            for (int b = 0; b < a; ++b)
                if (t & (1u << b)) ++inv;
    return inv;
}

int find_mono(const std::vector<FormMono>& basis, const FormMono& m) {
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (basis[i] == m) return static_cast<int>(i);
    throw std::logic_error("apl_forms: basis monomial not found");
}

QMatrix form_differential(int n, int cap, const std::vector<FormMono>& basis) {
    int dim = static_cast<int>(basis.size());
    QMatrix d(dim, dim);
    (void)cap;
    for (int j = 0; j < dim; ++j) {
        const FormMono& m = basis[static_cast<std::size_t>(j)];
        for (int k = 0; k < n; ++k) {
            int a = m.exp[static_cast<std::size_t>(k)];
            if (a == 0 || (m.mask & (1u << k))) continue;
            FormMono tgt = m;
            tgt.exp[static_cast<std::size_t>(k)] -= 1;
            tgt.mask |= (1u << k);
            int below = 0;
            for (int s = 0; s < k; ++s)
                if (m.mask & (1u << s)) ++below;
            Rat sign = (below % 2 == 0) ? Rat(1) : Rat(-1);
            int i = find_mono(basis, tgt);
            d.set(i, j, d.get(i, j) + sign * Rat(a));
        }
    }
    return d;
}

}  // namespace

Cdga apl_forms(int n, int poly_cap) {
    if (n < 0 || n > 2) throw std::invalid_argument("apl_forms: only simplicial levels 0..2 are modeled");
    if (poly_cap < 1) throw std::invalid_argument("apl_forms: polynomial cap must be >= 1");
    std::vector<FormMono> basis = form_basis(n, poly_cap);
    std::vector<std::string> labels;
    std::vector<int> degrees;
    for (const auto& m : basis) {
        labels.push_back(form_label(n, m));
        degrees.push_back(popcount(m.mask));
    }
    GradedVectorSpace sp(labels, degrees);
    std::map<std::pair<int, int>, Cdga::Product> products;
    int dim = sp.dim();
    for (int i = 1; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            const FormMono& a = basis[static_cast<std::size_t>(i)];
            const FormMono& b = basis[static_cast<std::size_t>(j)];
            if (a.mask & b.mask) continue;  // repeated dt: zero, the default
            int total = 0;
            FormMono tgt;
            tgt.exp.resize(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) {
                tgt.exp[static_cast<std::size_t>(k)] =
                    a.exp[static_cast<std::size_t>(k)] + b.exp[static_cast<std::size_t>(k)];
                total += tgt.exp[static_cast<std::size_t>(k)];
            }
            if (total > poly_cap) {
                products[{i, j}] = Cdga::Product{true, {}};
                continue;
            }
            tgt.mask = a.mask | b.mask;
            Rat sign = (mask_inversions(a.mask, b.mask) % 2 == 0) ? Rat(1) : Rat(-1);
            Cdga::Product p;
            p.value[find_mono(basis, tgt)] = sign;
            products[{i, j}] = p;
        }
    }
    return Cdga(std::move(sp), 0, std::move(products), form_differential(n, poly_cap, basis));
}

namespace {

struct Affine {
    Rat c0;
    std::vector<Rat> lin;  // coefficient per target variable
};

// Pullback matrix for a variable substitution from n source variables into m
// target variables; affine images never overflow the polynomial cap.
QMatrix substitution_matrix(int n, int m, int cap, const std::vector<Affine>& images) {
    std::vector<FormMono> src = form_basis(n, cap);
    std::vector<FormMono> tgt = form_basis(m, cap);
    Cdga target = apl_forms(std::max(m, 0), cap);
    auto var_index = [&](int k) {
        FormMono t;
        t.exp.assign(static_cast<std::size_t>(m), 0);
        t.exp[static_cast<std::size_t>(k)] = 1;
        return find_mono(tgt, t);
    };
    auto dvar_index = [&](int k) {
        FormMono t;
        t.exp.assign(static_cast<std::size_t>(m), 0);
        t.mask = 1u << k;
        return find_mono(tgt, t);
    };
    QMatrix out(static_cast<int>(tgt.size()), static_cast<int>(src.size()));
    for (std::size_t j = 0; j < src.size(); ++j) {
        const FormMono& mono = src[j];
        Cdga::Eval acc;
        acc.value[0] = Rat(1);  // the unit monomial is index 0 in form_basis order
        auto times = [&](const SparseVec& f) {
            acc = target.mul_vec(acc.value, f);
            if (acc.truncated) throw std::logic_error("substitution overflowed the polynomial cap");
        };
        for (int k = 0; k < n; ++k) {
            SparseVec img;
            if (!is_zero(images[static_cast<std::size_t>(k)].c0)) img[0] = images[static_cast<std::size_t>(k)].c0;
            for (int v = 0; v < m; ++v) {
                const Rat& c = images[static_cast<std::size_t>(k)].lin[static_cast<std::size_t>(v)];
                if (!is_zero(c)) img[var_index(v)] = c;
            }
            for (int rep = 0; rep < mono.exp[static_cast<std::size_t>(k)]; ++rep) times(img);
        }
        for (int k = 0; k < n; ++k) {
            if (!(mono.mask & (1u << k))) continue;
            SparseVec dimg;
            for (int v = 0; v < m; ++v) {
                const Rat& c = images[static_cast<std::size_t>(k)].lin[static_cast<std::size_t>(v)];
                if (!is_zero(c)) dimg[dvar_index(v)] = c;
            }
            times(dimg);
        }
        for (const auto& [i, c] : acc.value) out.set(i, static_cast<int>(j), c);
    }
    return out;
}

}  // namespace

QMatrix apl_face(int n, int i, int poly_cap) {
    if (n < 1 || n > 2) throw std::invalid_argument("apl_face: level must be 1 or 2");
    if (i < 0 || i > n) throw std::invalid_argument("apl_face: face index out of range");
    if (n == 1) {
        // eps_0: t -> 1; eps_1: t -> 0
        std::vector<Affine> images(1);
        images[0].c0 = (i == 0) ? Rat(1) : Rat(0);
        return substitution_matrix(1, 0, poly_cap, images);
    }
    std::vector<Affine> images(2);
    images[0].lin.assign(1, Rat(0));
    images[1].lin.assign(1, Rat(0));
    if (i == 0) {
        images[0].c0 = Rat(1);  // t1 -> 1 - t
        images[0].lin[0] = Rat(-1);
        images[1].lin[0] = Rat(1);  // t2 -> t
    } else if (i == 1) {
        images[0].c0 = Rat(0);      // t1 -> 0
        images[1].lin[0] = Rat(1);  // t2 -> t
    } else {
        images[0].lin[0] = Rat(1);  // t1 -> t
        images[1].c0 = Rat(0);      // t2 -> 0
    }
    return substitution_matrix(2, 1, poly_cap, images);
}

QMatrix apl_degeneracy(int n, int j, int poly_cap) {
    if (n < 0 || n > 1) throw std::invalid_argument("apl_degeneracy: level must be 0 or 1");
    if (j < 0 || j > n) throw std::invalid_argument("apl_degeneracy: index out of range");
    if (n == 0) return substitution_matrix(0, 1, poly_cap, {});
    std::vector<Affine> images(1);
    images[0].lin.assign(2, Rat(0));
    if (j == 0) {
        images[0].lin[1] = Rat(1);  // t -> t2
    } else {
        images[0].lin[0] = Rat(1);  // t -> t1 + t2
        images[0].lin[1] = Rat(1);
    }
    return substitution_matrix(1, 2, poly_cap, images);
}

AplTensor apl_tensor_abelian(const LInftyAlgebra& L, int n, int poly_cap) {
    for (const auto& [k, table] : L.brackets()) {
        if (k == 1) continue;
        for (const auto& [t, v] : table) {
            (void)t;
            if (!v.empty())
                throw std::invalid_argument("apl_tensor_abelian: the algebra has brackets beyond ell_1");
        }
    }
    Cdga forms = apl_forms(n, poly_cap);
    AplTensor T;
    std::vector<std::string> labels;
    std::vector<int> degrees;
    for (int li = 0; li < L.space().dim(); ++li)
        for (int fj = 0; fj < forms.space().dim(); ++fj) {
            labels.push_back(fj == 0 ? L.space().label(li)
                                     : L.space().label(li) + "\xE2\x8A\x97" + forms.space().label(fj));
            degrees.push_back(L.space().degree(li) - forms.space().degree(fj));
            T.pairs.push_back({li, fj});
        }
    T.space = GradedVectorSpace(labels, degrees);
    std::map<int, std::map<int, int>> index;
    for (std::size_t t = 0; t < T.pairs.size(); ++t)
        index[T.pairs[t].first][T.pairs[t].second] = static_cast<int>(t);
    QMatrix D(T.space.dim(), T.space.dim());
    for (std::size_t t = 0; t < T.pairs.size(); ++t) {
        auto [li, fj] = T.pairs[t];
        for (const auto& [lo, c] : L.ell(1, {li})) D.set(index.at(lo).at(fj), static_cast<int>(t), c);
        Rat s = ((L.space().degree(li) % 2) + 2) % 2 == 1 ? Rat(-1) : Rat(1);
        for (const auto& [rc, w] : forms.differential().entries())
            if (rc.second == fj) {
                int row = index.at(li).at(rc.first);
                D.set(row, static_cast<int>(t), D.get(row, static_cast<int>(t)) + s * w);
            }
    }
    T.differential = D;
    return T;
}

std::vector<QVec> mc_simplices_abelian(const LInftyAlgebra& L, int n, int poly_cap) {
    AplTensor T = apl_tensor_abelian(L, n, poly_cap);
    ChainComplex c(T.space, T.differential);
    std::vector<int> idx = T.space.indices_in_degree(-1);
    KernelImage ki = kernel_image(c.block(-1));
    std::vector<QVec> res;
    for (const QVec& v : ki.kernel) {
        QVec full = qvec_zero(T.space.dim());
        for (std::size_t i = 0; i < idx.size(); ++i) full[static_cast<std::size_t>(idx[i])] = v[i];
        res.push_back(qvec_primitive(full));
    }
    return res;
}

namespace {

// 1 (x) pullback on the tensor bases of two simplicial levels.
QMatrix tensor_face(const LInftyAlgebra& L, const AplTensor& src, const AplTensor& dst,
                    const QMatrix& form_map) {
    std::map<int, std::map<int, int>> dst_index;
    for (std::size_t t = 0; t < dst.pairs.size(); ++t)
        dst_index[dst.pairs[t].first][dst.pairs[t].second] = static_cast<int>(t);
    (void)L;
    QMatrix out(dst.space.dim(), src.space.dim());
    for (std::size_t t = 0; t < src.pairs.size(); ++t) {
        auto [li, fj] = src.pairs[t];
        for (const auto& [rc, w] : form_map.entries())
            if (rc.second == fj) out.set(dst_index.at(li).at(rc.first), static_cast<int>(t), w);
    }
    return out;
}

std::pair<int, int> moore_pi01(const LInftyAlgebra& L, int cap) {
    AplTensor T0 = apl_tensor_abelian(L, 0, cap);
    AplTensor T1 = apl_tensor_abelian(L, 1, cap);
    AplTensor T2 = apl_tensor_abelian(L, 2, cap);
    std::vector<QVec> mc0 = mc_simplices_abelian(L, 0, cap);
    std::vector<QVec> mc1 = mc_simplices_abelian(L, 1, cap);
    std::vector<QVec> mc2 = mc_simplices_abelian(L, 2, cap);
    QMatrix F10 = tensor_face(L, T1, T0, apl_face(1, 0, cap));
    QMatrix F11 = tensor_face(L, T1, T0, apl_face(1, 1, cap));
    QMatrix F20 = tensor_face(L, T2, T1, apl_face(2, 0, cap));
    QMatrix F21 = tensor_face(L, T2, T1, apl_face(2, 1, cap));
    QMatrix F22 = tensor_face(L, T2, T1, apl_face(2, 2, cap));

    auto combo_kernel = [](const std::vector<QMatrix>& maps, const std::vector<QVec>& vecs) {
        // vectors in the span of vecs killed by every map
        std::vector<QVec> out;
        if (vecs.empty()) return out;
        int rows = 0;
        for (const auto& m : maps) rows += m.rows();
        QMatrix stacked(rows, static_cast<int>(vecs.size()));
        int row0 = 0;
        for (const auto& m : maps) {
            for (std::size_t j = 0; j < vecs.size(); ++j) {
                QVec img = m.apply(vecs[j]);
                for (int r = 0; r < m.rows(); ++r)
                    if (!is_zero(img[static_cast<std::size_t>(r)]))
                        stacked.set(row0 + r, static_cast<int>(j), img[static_cast<std::size_t>(r)]);
            }
            row0 += m.rows();
        }
        for (const QVec& k : kernel_image(stacked).kernel) {
            QVec v = qvec_zero(static_cast<int>(vecs[0].size()));
            for (std::size_t j = 0; j < vecs.size(); ++j) v = qvec_add(v, qvec_scale(k[j], vecs[j]));
            out.push_back(v);
        }
        return out;
    };
    auto rank_under = [](const QMatrix& m, const std::vector<QVec>& vecs) {
        if (vecs.empty()) return 0;
        std::vector<QVec> imgs;
        for (const auto& v : vecs) imgs.push_back(m.apply(v));
        return rank_of(QMatrix::from_columns(m.rows(), imgs));
    };

    std::vector<QVec> n1 = combo_kernel({F11}, mc1);
    std::vector<QVec> n2 = combo_kernel({F21, F22}, mc2);
    int pi0 = static_cast<int>(mc0.size()) - rank_under(F10, n1);
    std::vector<QVec> z1 = combo_kernel({F10, F11}, mc1);
    int pi1 = static_cast<int>(z1.size()) - rank_under(F20, n2);
    return {pi0, pi1};
}

}  // namespace

SimplicialPi simplicial_pi01_abelian(const LInftyAlgebra& L, int poly_cap) {
    SimplicialPi r;
    auto [p0, p1] = moore_pi01(L, poly_cap);
    auto [q0, q1] = moore_pi01(L, poly_cap + 1);
    r.pi0 = p0;
    r.pi1 = p1;
    r.cap_used = poly_cap;
    r.stabilized = (p0 == q0 && p1 == q1);
    return r;
}

}  // namespace kappa
