#pragma once

// Deterministic randomness and small exact-linear-algebra oracles shared by
// the test binaries. Everything here is test-only and kept independent of the
// elimination routines it cross-checks.

#include "kappa/equivariant.hpp"
#include "kappa/qlinalg.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

namespace testutil {

using kappa::QMatrix;
using kappa::QVec;
using kappa::Rat;

using Rng = std::mt19937;

inline int rand_int(Rng& rng, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng);
}

// Small-numerator, small-denominator rationals; zero is common on purpose.
// The two-argument mpq constructor does not reduce, so canonicalize here.
inline Rat rand_rat(Rng& rng) {
    int num = rand_int(rng, -3, 3);
    int den = rand_int(rng, 1, 3);
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline QVec rand_vec(Rng& rng, int n) {
    QVec v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rand_rat(rng);
    return v;
}

inline QMatrix rand_matrix(Rng& rng, int rows, int cols) {
    QMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m.set(r, c, rand_rat(rng));
    return m;
}

// Invertible matrix as I plus a strictly upper triangular part times a
// signed permutation; exact determinant +-1 products keep it invertible.
inline QMatrix rand_invertible(Rng& rng, int n) {
    QMatrix u = QMatrix::identity(n);
    for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c) u.set(r, c, rand_rat(rng));
    QMatrix l = QMatrix::identity(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < r; ++c) l.set(r, c, rand_rat(rng));
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    QMatrix p(n, n);
    for (int i = 0; i < n; ++i)
        p.set(perm[static_cast<std::size_t>(i)], i, Rat(rand_int(rng, 0, 1) ? 1 : -1));
    return (l * u) * p;
}

// Rank through exhaustive minor expansion; independent of Gauss elimination.
// Only sensible for small matrices.
inline Rat minor_det(const QMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    std::size_t n = rows.size();
    if (n == 0) return Rat(1);
    Rat acc(0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> sub_rows;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) sub_rows.push_back(rows[j]);
        std::vector<int> sub_cols(cols.begin() + 1, cols.end());
        Rat term = m.get(rows[i], cols[0]) * minor_det(m, sub_rows, sub_cols);
        acc = acc + (i % 2 == 0 ? term : -term);
    }
    return acc;
}

inline int minor_rank(const QMatrix& m) {
    int best = 0;
    int hi = std::min(m.rows(), m.cols());
    for (int k = 1; k <= hi; ++k) {
        bool found = false;
        // enumerate k-subsets of rows and columns
        std::vector<int> ridx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) ridx[static_cast<std::size_t>(i)] = i;
        while (!found) {
            std::vector<int> cidx(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) cidx[static_cast<std::size_t>(i)] = i;
            while (!found) {
                if (minor_det(m, ridx, cidx) != Rat(0)) found = true;
                int j = k - 1;
                while (j >= 0 && cidx[static_cast<std::size_t>(j)] == m.cols() - k + j) --j;
                if (j < 0) break;
                ++cidx[static_cast<std::size_t>(j)];
                for (int t = j + 1; t < k; ++t)
                    cidx[static_cast<std::size_t>(t)] = cidx[static_cast<std::size_t>(t - 1)] + 1;
            }
            if (found) break;
            int j = k - 1;
            while (j >= 0 && ridx[static_cast<std::size_t>(j)] == m.rows() - k + j) --j;
            if (j < 0) break;
            ++ridx[static_cast<std::size_t>(j)];
            for (int t = j + 1; t < k; ++t)
                ridx[static_cast<std::size_t>(t)] = ridx[static_cast<std::size_t>(t - 1)] + 1;
        }
        if (found)
            best = k;
        else
            break;
    }
    return best;
}

inline kappa::Rat mat_trace(const kappa::QMatrix& m) {
    kappa::Rat acc(0);
    for (int i = 0; i < m.rows(); ++i) acc = acc + m.get(i, i);
    return acc;
}

// inverse via column solves; empty when singular
inline std::optional<kappa::QMatrix> mat_inverse(const kappa::QMatrix& m) {
    if (m.rows() != m.cols()) return {};
    std::vector<kappa::QVec> cols;
    for (int j = 0; j < m.cols(); ++j) {
        kappa::QVec e(static_cast<std::size_t>(m.rows()), kappa::Rat(0));
        e[static_cast<std::size_t>(j)] = kappa::Rat(1);
        std::optional<kappa::QVec> col = kappa::solve_linear(m, e);
        if (!col) return {};
        cols.push_back(*col);
    }
    return kappa::QMatrix::from_columns(m.rows(), cols);
}

// dim of the invariant subspace by the character formula: average of traces.
inline Rat character_invariant_dim(const kappa::GroupAction& act) {
    Rat acc(0);
    int ord = act.group().order();
    for (int g = 0; g < ord; ++g) {
        Rat tr(0);
        for (int i = 0; i < act.space().dim(); ++i) tr = tr + act.matrix(g).get(i, i);
        acc = acc + tr;
    }
    return acc / Rat(ord);
}

// Same formula restricted to one degree block.
inline Rat character_invariant_dim_in_degree(const kappa::GroupAction& act, int degree) {
    Rat acc(0);
    int ord = act.group().order();
    std::vector<int> idx = act.space().indices_in_degree(degree);
    for (int g = 0; g < ord; ++g) {
        Rat tr(0);
        for (int i : idx) tr = tr + act.matrix(g).get(i, i);
        acc = acc + tr;
    }
    return acc / Rat(ord);
}

}  // namespace testutil
