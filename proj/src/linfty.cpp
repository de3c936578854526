#include "kappa/linfty.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace kappa {

SparseVec sv_add(const SparseVec& a, const SparseVec& b) {
    SparseVec r = a;
    for (const auto& [i, c] : b) {
        Rat v = r[i] + c;
        if (is_zero(v))
            r.erase(i);
        else
            r[i] = v;
    }
    return r;
}

SparseVec sv_scale(const Rat& c, const SparseVec& a) {
    SparseVec r;
    if (is_zero(c)) return r;
    for (const auto& [i, v] : a) r[i] = c * v;
    return r;
}

bool sv_is_zero(const SparseVec& a) { return a.empty(); }

QVec sv_dense(const SparseVec& a, int dim) {
    QVec r = qvec_zero(dim);
    for (const auto& [i, c] : a) r.at(static_cast<std::size_t>(i)) = c;
    return r;
}

SparseVec sv_sparse(const QVec& a) {
    SparseVec r;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!is_zero(a[i])) r[static_cast<int>(i)] = a[i];
    return r;
}

std::string sv_show(const SparseVec& a, const GradedVectorSpace& space) {
    return show_vec(sv_dense(a, space.dim()), space);
}

NormTuple normalize_tuple(const GradedVectorSpace& space, std::vector<int> tuple) {
    NormTuple r;
    r.tuple = std::move(tuple);
    for (std::size_t pass = 1; pass < r.tuple.size(); ++pass) {
        for (std::size_t i = 0; i + 1 < r.tuple.size(); ++i) {
            if (r.tuple[i] <= r.tuple[i + 1]) continue;
            int pa = ((space.degree(r.tuple[i]) % 2) + 2) % 2;
            int pb = ((space.degree(r.tuple[i + 1]) % 2) + 2) % 2;
            r.sign *= (pa == 1 && pb == 1) ? 1 : -1;
            std::swap(r.tuple[i], r.tuple[i + 1]);
        }
    }
    for (std::size_t i = 0; i + 1 < r.tuple.size(); ++i) {
        if (r.tuple[i] != r.tuple[i + 1]) continue;
        if (((space.degree(r.tuple[i]) % 2) + 2) % 2 == 0) {
            r.zero = true;
            return r;
        }
    }
    return r;
}

int skew_sign_of_permutation(const std::vector<int>& perm, const std::vector<int>& parities) {
    std::vector<int> v = perm;
    int sign = 1;
    for (std::size_t pass = 1; pass < v.size(); ++pass) {
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            if (v[i] <= v[i + 1]) continue;
            sign *= (parities.at(static_cast<std::size_t>(v[i])) == 1 &&
                     parities.at(static_cast<std::size_t>(v[i + 1])) == 1)
                        ? 1
                        : -1;
            std::swap(v[i], v[i + 1]);
        }
    }
    return sign;
}

LInftyAlgebra::LInftyAlgebra(GradedVectorSpace space, std::vector<int> weights, int arity_cap,
                             int weight_cap, std::map<int, Table> brackets, bool strict)
    : space_(std::move(space)),
      weights_(std::move(weights)),
      arity_cap_(arity_cap),
      weight_cap_(weight_cap),
      brackets_(std::move(brackets)) {
    if (strict) {
        auto v = structure_violations();
        if (!v.empty()) throw std::invalid_argument("LInftyAlgebra: " + v.front());
    }
}

std::vector<std::string> LInftyAlgebra::structure_violations() const {
    std::vector<std::string> out;
    if (arity_cap_ < 1) out.push_back("arity cap must be >= 1");
    if (weight_cap_ < 1) out.push_back("weight cap must be >= 1");
    if (static_cast<int>(weights_.size()) != space_.dim()) {
        out.push_back("filtration weight list does not match the basis");
        return out;
    }
    for (int i = 0; i < space_.dim(); ++i)
        if (weights_[i] < 1) out.push_back("filtration weight of " + space_.label(i) + " must be >= 1");
    auto tuple_name = [&](const std::vector<int>& t) {
        std::string s = "(";
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i) s += ",";
            s += space_.label(t[i]);
        }
        return s + ")";
    };
    for (const auto& [k, table] : brackets_) {
        if (k < 1 || k > arity_cap_) {
            out.push_back("bracket table of arity " + std::to_string(k) + " outside 1..arity_cap");
            continue;
        }
        for (const auto& [t, val] : table) {
            if (static_cast<int>(t.size()) != k) {
                out.push_back("ell_" + std::to_string(k) + " keyed by tuple of wrong length");
                continue;
            }
            bool bad_index = false;
            for (int i : t)
                if (i < 0 || i >= space_.dim()) bad_index = true;
            if (bad_index) {
                out.push_back("ell_" + std::to_string(k) + " tuple index out of range");
                continue;
            }
            if (!std::is_sorted(t.begin(), t.end())) {
                out.push_back("ell_" + std::to_string(k) + tuple_name(t) + ": tuple not canonical");
                continue;
            }
            bool forced_zero = false;
            for (std::size_t i = 0; i + 1 < t.size(); ++i)
                if (t[i] == t[i + 1] && ((space_.degree(t[i]) % 2) + 2) % 2 == 0) forced_zero = true;
            if (forced_zero && !val.empty()) {
                out.push_back("ell_" + std::to_string(k) + tuple_name(t) +
                              ": repeated even-degree argument forces zero");
                continue;
            }
            int deg_in = 0, wt_in = 0;
            for (int i : t) {
                deg_in += space_.degree(i);
                wt_in += weights_[static_cast<std::size_t>(i)];
            }
            if (wt_in > weight_cap_ && !val.empty()) {
                out.push_back("ell_" + std::to_string(k) + tuple_name(t) + ": input weight " +
                              std::to_string(wt_in) + " exceeds the weight cap");
                continue;
            }
            for (const auto& [o, c] : val) {
                if (is_zero(c)) continue;
                if (o < 0 || o >= space_.dim()) {
                    out.push_back("ell_" + std::to_string(k) + tuple_name(t) + ": output index out of range");
                    continue;
                }
                if (space_.degree(o) != deg_in + k - 2)
                    out.push_back("ell_" + std::to_string(k) + tuple_name(t) + ": output " + space_.label(o) +
                                  " violates the degree law");
                if (weights_[static_cast<std::size_t>(o)] < wt_in)
                    out.push_back("ell_" + std::to_string(k) + tuple_name(t) + ": output " + space_.label(o) +
                                  " violates the filtration");
            }
        }
    }
    return out;
}

SparseVec LInftyAlgebra::ell(int k, std::vector<int> tuple) const {
    if (static_cast<int>(tuple.size()) != k) throw std::invalid_argument("ell: tuple length != arity");
    if (k < 1 || k > arity_cap_) return {};
    NormTuple nt = normalize_tuple(space_, std::move(tuple));
    if (nt.zero) return {};
    auto tb = brackets_.find(k);
    if (tb == brackets_.end()) return {};
    auto it = tb->second.find(nt.tuple);
    if (it == tb->second.end()) return {};
    return sv_scale(Rat(nt.sign), it->second);
}

SparseVec LInftyAlgebra::ell_multi(int k, const std::vector<SparseVec>& args) const {
    if (static_cast<int>(args.size()) != k) throw std::invalid_argument("ell_multi: argument count != arity");
    SparseVec acc;
    std::vector<int> tuple;
    std::function<void(int, const Rat&)> rec = [&](int i, const Rat& coeff) {
        if (i == k) {
            acc = sv_add(acc, sv_scale(coeff, ell(k, tuple)));
            return;
        }
        for (const auto& [idx, c] : args[static_cast<std::size_t>(i)]) {
            tuple.push_back(idx);
            rec(i + 1, coeff * c);
            tuple.pop_back();
        }
    };
    rec(0, Rat(1));
    return acc;
}

LInftyAlgebra LInftyAlgebra::with_entry_delta(int k, const std::vector<int>& tuple, int out_index,
                                              const Rat& delta) const {
    auto brackets = brackets_;
    SparseVec& val = brackets[k][tuple];
    Rat v = val[out_index] + delta;
    if (is_zero(v))
        val.erase(out_index);
    else
        val[out_index] = v;
    return LInftyAlgebra(space_, weights_, arity_cap_, weight_cap_, std::move(brackets), false);
}

LInftyAlgebra LInftyAlgebra::from_dgl(const FreeLiePtr& L, const LieDerivation& d, int arity_cap,
                                      std::optional<int> max_degree) {
    if (!L) throw std::invalid_argument("from_dgl: null algebra");
    if (d.degree() != -1) throw std::invalid_argument("from_dgl: differential must have degree -1");
    std::vector<MonoKey> keys = L->basis(L->weight_cap(), max_degree);
    std::map<MonoKey, int> index;
    std::vector<std::string> labels;
    std::vector<int> degrees;
    std::vector<int> weights;
    for (const auto& k : keys) {
        index[k] = static_cast<int>(labels.size());
        labels.push_back(L->show_key(k));
        degrees.push_back(L->degree_of(k));
        weights.push_back(k.weight());
    }
    auto to_sparse = [&](const LieElement& e) {
        SparseVec v;
        for (const auto& [k, c] : e.terms()) {
            auto it = index.find(k);
            if (it != index.end()) v[it->second] = c;  // outside the degree window: dropped
        }
        return v;
    };
    std::map<int, Table> tables;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        SparseVec v = to_sparse(d.apply_key(keys[i]));
        if (!v.empty()) tables[1][{static_cast<int>(i)}] = v;
    }
    if (arity_cap >= 2) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            for (std::size_t j = i; j < keys.size(); ++j) {
                if (i == j && ((L->degree_of(keys[i]) % 2) + 2) % 2 == 0) continue;
                LieElement b = bracket(L->mono(keys[i]), L->mono(keys[j]));
                SparseVec v = to_sparse(b);
                if (!v.empty()) tables[2][{static_cast<int>(i), static_cast<int>(j)}] = v;
            }
        }
    }
    LInftyAlgebra A(GradedVectorSpace(labels, degrees), weights, arity_cap, L->weight_cap(),
                    std::move(tables));
    A.keys_ = std::move(keys);
    return A;
}

LInftyAlgebra LInftyAlgebra::abelian(GradedVectorSpace space, const QMatrix& d, int arity_cap) {
    if (d.rows() != space.dim() || d.cols() != space.dim())
        throw std::invalid_argument("abelian: differential shape mismatch");
    std::map<int, Table> tables;
    for (int i = 0; i < space.dim(); ++i) {
        SparseVec v = sv_sparse(d.column(i));
        if (!v.empty()) tables[1][{i}] = v;
    }
    std::vector<int> weights(static_cast<std::size_t>(space.dim()), 1);
    return LInftyAlgebra(std::move(space), std::move(weights), arity_cap, 1, std::move(tables));
}

namespace {

void canonical_tuples(const GradedVectorSpace& sp, int n, std::vector<int>& cur,
                      const std::function<void(const std::vector<int>&)>& emit, int start) {
    if (static_cast<int>(cur.size()) == n) {
        emit(cur);
        return;
    }
    for (int i = start; i < sp.dim(); ++i) {
        if (!cur.empty() && cur.back() == i && ((sp.degree(i) % 2) + 2) % 2 == 0) continue;
        cur.push_back(i);
        canonical_tuples(sp, n, cur, emit, i);
        cur.pop_back();
    }
}

}  // namespace

void for_each_canonical_tuple(const GradedVectorSpace& space, int n,
                              const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> cur;
    canonical_tuples(space, n, cur, fn, 0);
}

namespace {

void combinations(int n, int k, const std::function<void(const std::vector<int>&)>& emit) {
    std::vector<int> sel;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(sel.size()) == k) {
            emit(sel);
            return;
        }
        for (int i = start; i < n; ++i) {
            sel.push_back(i);
            rec(i + 1);
            sel.pop_back();
        }
    };
    rec(0);
}

}  // namespace

JacobiReport check_generalized_jacobi(const LInftyAlgebra& L, int n) {
    if (n < 1) throw std::invalid_argument("check_generalized_jacobi: n must be >= 1");
    if (n > L.arity_cap())
        throw std::invalid_argument("check_generalized_jacobi: n exceeds the arity cap");
    JacobiReport rep;
    rep.n = n;
    rep.weight_cap = L.weight_cap();
    rep.arity_cap = L.arity_cap();
    const GradedVectorSpace& sp = L.space();
    std::vector<int> cur;
    canonical_tuples(sp, n, cur, [&](const std::vector<int>& tuple) {
        std::vector<int> parities;
        for (int i : tuple) parities.push_back(((sp.degree(i) % 2) + 2) % 2);
        SparseVec residual;
        for (int i = 1; i <= n; ++i) {
            int j = n - i + 1;
            if (i > L.arity_cap() || j > L.arity_cap()) continue;
            int pre = ((i * (j - 1)) % 2 == 0) ? 1 : -1;
            combinations(n, i, [&](const std::vector<int>& sel) {
                std::vector<bool> in_sel(static_cast<std::size_t>(n), false);
                for (int s : sel) in_sel[static_cast<std::size_t>(s)] = true;
                std::vector<int> perm = sel;
                for (int p = 0; p < n; ++p)
                    if (!in_sel[static_cast<std::size_t>(p)]) perm.push_back(p);
                int chi = skew_sign_of_permutation(perm, parities);
                std::vector<int> inner_tuple;
                for (int s : sel) inner_tuple.push_back(tuple[static_cast<std::size_t>(s)]);
                SparseVec inner = L.ell(i, inner_tuple);
                for (const auto& [b, c] : inner) {
                    std::vector<int> outer_tuple{b};
                    for (int p = 0; p < n; ++p)
                        if (!in_sel[static_cast<std::size_t>(p)])
                            outer_tuple.push_back(tuple[static_cast<std::size_t>(p)]);
                    SparseVec outer = L.ell(j, outer_tuple);
                    residual = sv_add(residual, sv_scale(Rat(chi * pre) * c, outer));
                }
            });
        }
        if (!sv_is_zero(residual)) rep.violations.push_back({n, tuple, residual});
    }, 0);
    rep.ok = rep.violations.empty();
    return rep;
}

McVerdict is_maurer_cartan(const LInftyAlgebra& L, const SparseVec& z) {
    for (const auto& [i, c] : z) {
        (void)c;
        if (i < 0 || i >= L.space().dim()) throw std::invalid_argument("is_maurer_cartan: index out of range");
        if (L.space().degree(i) != -1)
            throw std::invalid_argument("is_maurer_cartan: element is not concentrated in degree -1");
    }
    McVerdict v;
    SparseVec acc;
    for (int k = 1; k <= L.arity_cap(); ++k) {
        std::vector<SparseVec> args(static_cast<std::size_t>(k), z);
        acc = sv_add(acc, sv_scale(Rat(1) / factorial(k), L.ell_multi(k, args)));
    }
    v.residual = std::move(acc);
    v.is_mc = sv_is_zero(v.residual);
    return v;
}

namespace {

SparseVec twisted_ell(const LInftyAlgebra& L, const SparseVec& tau, int k, const std::vector<int>& tuple) {
    SparseVec acc;
    for (int j = 0; k + j <= L.arity_cap(); ++j) {
        std::vector<SparseVec> args(static_cast<std::size_t>(j), tau);
        for (int i : tuple) args.push_back(SparseVec{{i, Rat(1)}});
        acc = sv_add(acc, sv_scale(Rat(1) / factorial(j), L.ell_multi(k + j, args)));
    }
    return acc;
}

}  // namespace

LInftyAlgebra twist(const LInftyAlgebra& L, const SparseVec& tau) {
    McVerdict mc = is_maurer_cartan(L, tau);
    if (!mc.is_mc)
        throw std::invalid_argument("twist: element does not satisfy the Maurer-Cartan equation; residual " +
                                    sv_show(mc.residual, L.space()));
    std::map<int, LInftyAlgebra::Table> tables;
    for (int k = 1; k <= L.arity_cap(); ++k) {
        std::vector<int> cur;
        canonical_tuples(L.space(), k, cur, [&](const std::vector<int>& tuple) {
            SparseVec v = twisted_ell(L, tau, k, tuple);
            if (!v.empty()) tables[k][tuple] = v;
        }, 0);
    }
    return LInftyAlgebra(L.space(), L.filtration_weights(), L.arity_cap(), L.weight_cap(),
                         std::move(tables));
}

ChainComplex twisted_complex(const LInftyAlgebra& L, const SparseVec& tau) {
    McVerdict mc = is_maurer_cartan(L, tau);
    if (!mc.is_mc)
        throw std::invalid_argument("twisted_complex: element does not satisfy the Maurer-Cartan equation");
    QMatrix d(L.space().dim(), L.space().dim());
    for (int i = 0; i < L.space().dim(); ++i) {
        SparseVec col = twisted_ell(L, tau, 1, {i});
        for (const auto& [r, c] : col) d.set(r, i, c);
    }
    return ChainComplex(L.space(), d);  // throws when d*d != 0 in the capped model
}

HomotopyGroups mc_homotopy_groups(const LInftyAlgebra& L, const SparseVec& tau) {
    HomotopyGroups hg;
    hg.weight_cap = L.weight_cap();
    hg.arity_cap = L.arity_cap();
    hg.homology_dims = homology_dims(twisted_complex(L, tau));
    return hg;
}

LieElement bch(const LieElement& x, const LieElement& y, int class_cap) {
    FreeLiePtr owner = x.owner() ? x.owner() : y.owner();
    if (!owner) throw std::invalid_argument("bch: elements have no owning algebra");
    auto ok_deg = [](const LieElement& e) { return e.is_zero() || (e.degree() && *e.degree() == 0); };
    if (!ok_deg(x) || !ok_deg(y)) throw std::invalid_argument("bch: arguments must sit in degree 0");
    if (class_cap < 1) throw std::invalid_argument("bch: class cap must be >= 1");
    if (class_cap > owner->weight_cap())
        throw std::invalid_argument("bch: class cap exceeds the algebra weight cap");

    LieElement acc = owner->zero();
    std::vector<std::pair<int, int>> seq;
    auto term = [&]() {
        int m = static_cast<int>(seq.size());
        int N = 0;
        std::vector<int> word;  // 0 = x, 1 = y
        Rat denom(1);
        for (const auto& [p, q] : seq) {
            N += p + q;
            for (int i = 0; i < p; ++i) word.push_back(0);
            for (int i = 0; i < q; ++i) word.push_back(1);
            denom *= factorial(p) * factorial(q);
        }
        denom *= Rat(m) * Rat(N);
        auto elem = [&](int letter) { return letter == 0 ? x : y; };
        LieElement r = elem(word.back());
        for (int i = static_cast<int>(word.size()) - 2; i >= 0; --i) r = bracket(elem(word[i]), r);
        Rat coeff = Rat((m - 1) % 2 == 0 ? 1 : -1) / denom;
        acc = acc + r.scaled(coeff);
    };
    std::function<void(int)> rec = [&](int total) {
        if (!seq.empty()) term();
        for (int s = 1; total + s <= class_cap; ++s) {
            for (int p = 0; p <= s; ++p) {
                seq.push_back({p, s - p});
                rec(total + s);
                seq.pop_back();
            }
        }
    };
    rec(0);
    // Discard any residue beyond the class cap (possible when inputs are inhomogeneous in weight).
    std::map<MonoKey, Rat> kept;
    for (const auto& [k, c] : acc.terms())
        if (k.weight() <= class_cap) kept[k] = c;
    return owner->element(kept).marked_truncated(acc.truncated());
}

}  // namespace kappa
