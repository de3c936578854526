#pragma once

// Free graded associative algebra on the generators of a FreeGradedLie,
// used as an independent referee for the Lie side: basis monomials embed as
// iterated graded commutators of generator words, and distinct Lie elements
// have distinct tensor expansions. None of the Lyndon rewriting is involved
// here; products are plain word concatenation.

#include "kappa/freelie.hpp"

#include <map>
#include <vector>

namespace oracle {

using kappa::FreeGradedLie;
using kappa::LieElement;
using kappa::MonoKey;
using kappa::Rat;

// word over generator indices -> coefficient
using TPoly = std::map<std::vector<int>, Rat>;

inline int word_degree(const FreeGradedLie& L, const std::vector<int>& w) {
    int d = 0;
    for (int i : w) d += L.generators().at(static_cast<std::size_t>(i)).degree;
    return d;
}

inline TPoly t_add(const TPoly& a, const TPoly& b) {
    TPoly out = a;
    for (const auto& [w, c] : b) {
        Rat v = out.count(w) ? out[w] + c : c;
        if (v == Rat(0))
            out.erase(w);
        else
            out[w] = v;
    }
    return out;
}

inline TPoly t_scale(const Rat& c, const TPoly& a) {
    TPoly out;
    if (c == Rat(0)) return out;
    for (const auto& [w, v] : a) out[w] = c * v;
    return out;
}

inline TPoly t_mul(const TPoly& a, const TPoly& b) {
    TPoly out;
    for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) {
            std::vector<int> w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            Rat v = (out.count(w) ? out[w] : Rat(0)) + ca * cb;
            if (v == Rat(0))
                out.erase(w);
            else
                out[w] = v;
        }
    return out;
}

// ab - (-1)^{|a||b|} ba on words, extended bilinearly.
inline TPoly t_commutator(const FreeGradedLie& L, const TPoly& a, const TPoly& b) {
    TPoly out;
    for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) {
            std::vector<int> ab = wa, ba = wb;
            ab.insert(ab.end(), wb.begin(), wb.end());
            ba.insert(ba.end(), wa.begin(), wa.end());
            int sign = (word_degree(L, wa) % 2 != 0 && word_degree(L, wb) % 2 != 0) ? 1 : -1;
            TPoly term;
            term[ab] = ca * cb;
            term = t_add(term, t_scale(Rat(sign) * ca * cb, TPoly{{ba, Rat(1)}}));
            out = t_add(out, term);
        }
    return out;
}

inline TPoly t_truncate(const TPoly& a, int max_len) {
    TPoly out;
    for (const auto& [w, c] : a)
        if (static_cast<int>(w.size()) <= max_len) out[w] = c;
    return out;
}

inline TPoly embed_key(const FreeGradedLie& L, const MonoKey& k) {
    if (k.weight() == 1) return TPoly{{{k.word[0]}, Rat(1)}};
    auto [l, r] = L.children(k);
    return t_commutator(L, embed_key(L, l), embed_key(L, r));
}

inline TPoly embed(const LieElement& e) {
    TPoly out;
    if (e.is_zero()) return out;
    const FreeGradedLie& L = *e.owner();
    for (const auto& [k, c] : e.terms()) out = t_add(out, t_scale(c, embed_key(L, k)));
    return out;
}

// Derivation of the tensor algebra extending the generator images of a Lie
// derivation of degree k: D(a w) = D(a) w + (-1)^{k|a|} a D(w).
inline TPoly t_derive(const kappa::LieDerivation& D, const TPoly& p) {
    const FreeGradedLie& L = *D.algebra();
    int k = D.degree();
    TPoly out;
    for (const auto& [w, c] : p) {
        int prefix_deg = 0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            TPoly dg = embed(D.apply_key(MonoKey{{w[j]}, false}));
            int sign = (k % 2 != 0 && prefix_deg % 2 != 0) ? -1 : 1;
            TPoly left{{std::vector<int>(w.begin(), w.begin() + static_cast<long>(j)), Rat(1)}};
            TPoly right{{std::vector<int>(w.begin() + static_cast<long>(j) + 1, w.end()), Rat(1)}};
            out = t_add(out, t_scale(c * Rat(sign), t_mul(t_mul(left, dg), right)));
            prefix_deg += L.generators().at(static_cast<std::size_t>(w[j])).degree;
        }
    }
    return out;
}

// exp of a constant-free element, truncated beyond max_len letters.
inline TPoly t_exp(const TPoly& a, int max_len) {
    TPoly out{{{}, Rat(1)}};
    TPoly pw{{{}, Rat(1)}};
    Rat fact(1);
    for (int k = 1; k <= max_len; ++k) {
        pw = t_truncate(t_mul(pw, a), max_len);
        fact = fact * Rat(k);
        out = t_add(out, t_scale(Rat(1) / fact, pw));
    }
    return out;
}

}  // namespace oracle
