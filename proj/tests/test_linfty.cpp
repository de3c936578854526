#include "kappa/linfty.hpp"

#include "oracle_tensor.hpp"
#include "testutil.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

using namespace kappa;
using testutil::Rng;

TEST_CASE("sparse vector helpers") {
    SparseVec a{{0, Rat(1)}, {2, Rat(-1, 2)}};
    SparseVec b{{2, Rat(1, 2)}, {3, Rat(4)}};
    SparseVec s = sv_add(a, b);
    CHECK(s == SparseVec{{0, Rat(1)}, {3, Rat(4)}});  // cancelled entry is dropped
    CHECK(sv_scale(Rat(0), a).empty());
    CHECK(sv_is_zero(sv_add(a, sv_scale(Rat(-1), a))));
    CHECK(sv_dense(a, 4) == QVec{Rat(1), Rat(0), Rat(-1, 2), Rat(0)});
    CHECK(sv_sparse(sv_dense(a, 4)) == a);
}

TEST_CASE("tuple normalization against brute-force signs") {
    GradedVectorSpace space({"a", "b", "c", "d"}, {1, 2, 3, 4});
    Rng rng(31);
    std::vector<int> parities;
    for (int i = 0; i < 4; ++i) parities.push_back(space.degree(i) % 2 != 0 ? 1 : 0);

    for (int trial = 0; trial < 200; ++trial) {
        int n = testutil::rand_int(rng, 1, 4);
        std::vector<int> tuple;
        for (int i = 0; i < n; ++i) tuple.push_back(testutil::rand_int(rng, 0, 3));
        NormTuple nt = normalize_tuple(space, tuple);

        bool even_repeat = false;
        std::vector<int> sorted = tuple;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
            if (sorted[i] == sorted[i + 1] && space.degree(sorted[i]) % 2 == 0) even_repeat = true;
        CHECK(nt.zero == even_repeat);
        if (nt.zero) continue;
        CHECK(nt.tuple == sorted);

        // reproduce the sign by explicit adjacent transpositions
        std::vector<int> work = tuple;
        int sign = 1;
        for (std::size_t i = 0; i < work.size(); ++i)
            for (std::size_t j = work.size() - 1; j > i; --j)
                if (work[j - 1] > work[j]) {
                    int pa = space.degree(work[j - 1]) % 2 != 0;
                    int pb = space.degree(work[j]) % 2 != 0;
                    sign *= (pa && pb) ? 1 : -1;
                    std::swap(work[j - 1], work[j]);
                }
        CHECK(work == sorted);
        CHECK(nt.sign == sign);
    }
}

TEST_CASE("skew sign of permutation") {
    // all-even arguments: plain sign of the permutation
    CHECK(skew_sign_of_permutation({0, 1, 2}, {0, 0, 0}) == 1);
    CHECK(skew_sign_of_permutation({1, 0, 2}, {0, 0, 0}) == -1);
    CHECK(skew_sign_of_permutation({2, 1, 0}, {0, 0, 0}) == -1);
    // swapping two odd arguments costs nothing
    CHECK(skew_sign_of_permutation({1, 0}, {1, 1}) == 1);
    CHECK(skew_sign_of_permutation({1, 0}, {1, 0}) == -1);
}

TEST_CASE("canonical tuple enumeration") {
    GradedVectorSpace space({"a", "b"}, {1, 2});  // a odd, b even
    std::set<std::vector<int>> seen;
    for_each_canonical_tuple(space, 2, [&](const std::vector<int>& t) { seen.insert(t); });
    // (a,a) allowed since a is odd; (b,b) excluded
    CHECK(seen == std::set<std::vector<int>>{{0, 0}, {0, 1}});
}

namespace {

LInftyAlgebra dgl_on(const FreeLiePtr& L, const LieDerivation& d, int arity = 3) {
    return LInftyAlgebra::from_dgl(L, d, arity);
}

}  // namespace

TEST_CASE("from_dgl mirrors the Lie algebra") {
    auto L = FreeGradedLie::make({{"a", 3}, {"b", 7}}, 5);
    LieDerivation d = LieDerivation::make(
        L, -1, {{"a", L->zero()}, {"b", bracket(L->gen("a"), L->gen("a"))}});
    LInftyAlgebra A = dgl_on(L, d);

    CHECK(A.structure_violations().empty());
    CHECK(A.arity_cap() == 3);
    CHECK(A.weight_cap() == 5);
    CHECK(A.brackets().count(3) == 0);  // a DGL has no ternary table

    const std::vector<MonoKey>& keys = A.monomial_keys();
    REQUIRE(static_cast<int>(keys.size()) == A.space().dim());
    for (int i = 0; i < A.space().dim(); ++i) {
        CHECK(A.space().label(i) == L->show_key(keys[static_cast<std::size_t>(i)]));
        CHECK(A.space().degree(i) == L->degree_of(keys[static_cast<std::size_t>(i)]));
        CHECK(A.filtration_weights()[static_cast<std::size_t>(i)] ==
              keys[static_cast<std::size_t>(i)].weight());
    }

    // ell_1 is the differential, ell_2 is the bracket, on every basis pair
    for (int i = 0; i < A.space().dim(); ++i) {
        LieElement di = d.apply_key(keys[static_cast<std::size_t>(i)]);
        SparseVec got = A.ell(1, {i});
        LieElement back = L->zero();
        for (const auto& [j, c] : got)
            back = back + L->mono(keys[static_cast<std::size_t>(j)]).scaled(c);
        CHECK(back == di);
        for (int j = 0; j < A.space().dim(); ++j) {
            LieElement br = bracket(L->mono(keys[static_cast<std::size_t>(i)]),
                                    L->mono(keys[static_cast<std::size_t>(j)]));
            SparseVec gb = A.ell(2, {i, j});
            LieElement bb = L->zero();
            for (const auto& [t, c] : gb)
                bb = bb + L->mono(keys[static_cast<std::size_t>(t)]).scaled(c);
            CHECK(bb == br);
        }
    }
}

TEST_CASE("generalized Jacobi holds for differential graded Lie algebras") {
    auto L = FreeGradedLie::make({{"a", 3}, {"b", 7}}, 5);
    LieDerivation d = LieDerivation::make(
        L, -1, {{"a", L->zero()}, {"b", bracket(L->gen("a"), L->gen("a"))}});
    LInftyAlgebra A = dgl_on(L, d);
    for (int n = 1; n <= 3; ++n) {
        JacobiReport r = check_generalized_jacobi(A, n);
        CHECK(r.ok);
        CHECK(r.violations.empty());
    }
}

TEST_CASE("a corrupted bracket entry is caught") {
    auto L = FreeGradedLie::make({{"x", 1}, {"y", 2}}, 4);
    LieDerivation d0 = LieDerivation::make(L, -1, {{"x", L->zero()}, {"y", L->zero()}});
    LInftyAlgebra A = dgl_on(L, d0);

    // locate the (x,y) pair and the [x,y] output
    auto ix = A.space().index_of("x");
    auto iy = A.space().index_of("y");
    auto ixy = A.space().index_of("[x,y]");
    REQUIRE(ix.has_value());
    REQUIRE(iy.has_value());
    REQUIRE(ixy.has_value());

    LInftyAlgebra bad = A.with_entry_delta(2, {*ix, *iy}, *ixy, Rat(1));
    bool caught = false;
    for (int n = 1; n <= 3; ++n) {
        JacobiReport r = check_generalized_jacobi(bad, n);
        if (!r.ok) {
            caught = true;
            CHECK_FALSE(r.violations.empty());
            CHECK_FALSE(sv_is_zero(r.violations.front().residual));
        }
    }
    CHECK(caught);
}

TEST_CASE("abelian algebras and homotopy groups") {
    GradedVectorSpace s({"p", "q", "r"}, {-1, 0, 0});
    QMatrix d(3, 3);
    d.set(0, 1, Rat(1));  // d q = p
    LInftyAlgebra A = LInftyAlgebra::abelian(s, d);
    CHECK(A.structure_violations().empty());
    CHECK(A.ell(2, {0, 1}).empty());

    // H_{-1} = 0 (p bounds), H_0 = Q r
    HomotopyGroups hg = mc_homotopy_groups(A, {});
    CHECK(hg.homology_dims[-1] == 0);
    CHECK(hg.homology_dims[0] == 1);

    // curvature of an abelian algebra is just the differential
    McVerdict mc = is_maurer_cartan(A, SparseVec{{0, Rat(2)}});
    CHECK(mc.is_mc);
    // candidates must live in degree -1
    CHECK_THROWS_AS(is_maurer_cartan(A, SparseVec{{1, Rat(1)}}), std::invalid_argument);

    GradedVectorSpace s2({"s", "w"}, {-1, -2});
    QMatrix d2(2, 2);
    d2.set(1, 0, Rat(1));  // d s = w
    LInftyAlgebra B = LInftyAlgebra::abelian(s2, d2);
    McVerdict not_mc = is_maurer_cartan(B, SparseVec{{0, Rat(3)}});
    CHECK_FALSE(not_mc.is_mc);
    CHECK(not_mc.residual == SparseVec{{1, Rat(3)}});
}

TEST_CASE("twisting inserts the Maurer-Cartan element") {
    // ell_2(t,a) = b and ell_3(t,t,a) = c, everything else zero
    GradedVectorSpace s({"t", "a", "b", "c"}, {-1, 3, 2, 2});
    std::vector<int> weights{1, 1, 2, 3};
    LInftyAlgebra::Table e2{{{0, 1}, SparseVec{{2, Rat(1)}}}};
    LInftyAlgebra::Table e3{{{0, 0, 1}, SparseVec{{3, Rat(1)}}}};
    LInftyAlgebra A(s, weights, 3, 6, {{2, e2}, {3, e3}});
    CHECK(A.structure_violations().empty());

    SparseVec tau{{0, Rat(2)}};
    CHECK(is_maurer_cartan(A, tau).is_mc);

    LInftyAlgebra T = twist(A, tau);
    // twisted differential: ell_1 + ell_2(tau,-) + ell_3(tau,tau,-)/2
    CHECK(T.ell(1, {1}) == SparseVec{{2, Rat(2)}, {3, Rat(2)}});
    CHECK(T.ell(1, {0}).empty());
    CHECK(T.ell(1, {2}).empty());
    // twisted binary bracket: ell_2 + ell_3(tau,-,-)
    CHECK(T.ell(2, {0, 1}) == SparseVec{{2, Rat(1)}, {3, Rat(2)}});

    ChainComplex c = twisted_complex(A, tau);
    CHECK(homology_dims(c) == std::map<int, int>{{-1, 1}, {2, 1}});
    HomotopyGroups hg = mc_homotopy_groups(A, tau);
    CHECK(hg.homology_dims[-1] == 1);
    CHECK(hg.homology_dims[2] == 1);

    // a non-MC twist is rejected
    GradedVectorSpace s2({"x", "y"}, {-1, -2});
    QMatrix d2(2, 2);
    d2.set(1, 0, Rat(1));
    LInftyAlgebra B = LInftyAlgebra::abelian(s2, d2);
    CHECK_THROWS_AS(twist(B, SparseVec{{0, Rat(1)}}), std::invalid_argument);
    // wrong degree too
    CHECK_THROWS_AS(twist(A, SparseVec{{1, Rat(1)}}), std::invalid_argument);
}

TEST_CASE("twisted differential must square to zero") {
    // deliberately inconsistent structure, assembled without validation
    GradedVectorSpace s({"t", "a", "b", "c"}, {-1, 1, 0, -1});
    std::vector<int> weights{1, 1, 2, 3};
    LInftyAlgebra::Table e1{{{1}, SparseVec{{2, Rat(1)}}}};
    LInftyAlgebra::Table e2{{{0, 2}, SparseVec{{3, Rat(1)}}}};
    LInftyAlgebra A(s, weights, 3, 6, {{1, e1}, {2, e2}}, false);
    SparseVec tau{{0, Rat(1)}};
    CHECK(is_maurer_cartan(A, tau).is_mc);
    CHECK_THROWS_AS(twisted_complex(A, tau), std::invalid_argument);
}

TEST_CASE("ell_multi expands multilinearly") {
    auto L = FreeGradedLie::make({{"u", 4}, {"v", 6}}, 4);
    LieDerivation d = LieDerivation::make(L, -1, {{"u", L->zero()}, {"v", L->zero()}});
    LInftyAlgebra A = dgl_on(L, d);
    int iu = *A.space().index_of("u");
    int iv = *A.space().index_of("v");
    SparseVec x{{iu, Rat(2)}, {iv, Rat(1)}};
    SparseVec y{{iu, Rat(1)}};
    SparseVec got = A.ell_multi(2, {x, y});
    SparseVec expect = sv_add(sv_scale(Rat(2), A.ell(2, {iu, iu})),
                              sv_scale(Rat(1), A.ell(2, {iv, iu})));
    CHECK(got == expect);
    CHECK_THROWS_AS(A.ell_multi(2, {x}), std::invalid_argument);
}

TEST_CASE("ell handles argument order and repeats") {
    auto L = FreeGradedLie::make({{"x", 1}, {"y", 2}}, 4);
    LieDerivation d = LieDerivation::make(L, -1, {{"x", L->zero()}, {"y", L->zero()}});
    LInftyAlgebra A = dgl_on(L, d);
    int ix = *A.space().index_of("x");
    int iy = *A.space().index_of("y");
    // odd/even swap flips the sign
    CHECK(A.ell(2, {iy, ix}) == sv_scale(Rat(-1), A.ell(2, {ix, iy})));
    // repeated even argument is zero even though [y,y] is not a stored key
    CHECK(A.ell(2, {iy, iy}).empty());
    // repeated odd argument is the square class
    auto isq = A.space().index_of("[x,x]");
    REQUIRE(isq.has_value());
    CHECK(A.ell(2, {ix, ix}) == SparseVec{{*isq, Rat(1)}});
}

TEST_CASE("bch small cases and validation") {
    auto L = FreeGradedLie::make({{"x", 0}, {"y", 0}}, 4);
    LieElement x = L->gen("x"), y = L->gen("y");
    CHECK(bch(x, y, 1) == x + y);
    CHECK(bch(x, y, 2) == x + y + bracket(x, y).scaled(Rat(1, 2)));
    CHECK(bch(x, x.scaled(Rat(-1)), 4).is_zero());
    CHECK(bch(L->zero(), y, 4) == y);
    CHECK(bch(x, L->zero(), 4) == x);
    // cap must stay within the owner's weight cap
    CHECK_THROWS_AS(bch(x, y, 5), std::invalid_argument);
    // arguments must be of degree zero
    auto M = FreeGradedLie::make({{"a", 2}, {"b", 2}}, 4);
    CHECK_THROWS_AS(bch(M->gen("a"), M->gen("b"), 3), std::invalid_argument);
}

TEST_CASE("bch matches the exponential product in the tensor algebra") {
    auto L = FreeGradedLie::make({{"x", 0}, {"y", 0}}, 4);
    LieElement b = bch(L->gen("x"), L->gen("y"), 4);
    oracle::TPoly lhs = oracle::t_exp(oracle::embed(b), 4);
    oracle::TPoly rhs = oracle::t_truncate(
        oracle::t_mul(oracle::t_exp(oracle::embed(L->gen("x")), 4),
                      oracle::t_exp(oracle::embed(L->gen("y")), 4)),
        4);
    CHECK(lhs == rhs);
}
