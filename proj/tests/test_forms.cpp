#include "kappa/forms.hpp"

#include "testutil.hpp"

#include <doctest.h>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

using namespace kappa;

namespace {

int label_index(const GradedVectorSpace& sp, const std::string& label) {
    auto i = sp.index_of(label);
    REQUIRE(i.has_value());
    return *i;
}

// homological complex with cohomological degrees negated, so H_{-k} = H^k
ChainComplex flipped(const Cdga& a) {
    std::vector<std::string> labels;
    std::vector<int> degs;
    for (int i = 0; i < a.space().dim(); ++i) {
        labels.push_back(a.space().label(i));
        degs.push_back(-a.space().degree(i));
    }
    return ChainComplex(GradedVectorSpace(labels, degs), a.differential());
}

// truncated polynomial de Rham cohomology of the n-simplex at poly_cap
std::map<int, int> expected_form_cohomology(int n, int cap) {
    if (n == 0) return {{0, 1}};
    if (n == 1) return {{0, 1}, {-1, 1}};
    return {{0, 1}, {-1, cap + 2}, {-2, cap + 1}};
}

}  // namespace

TEST_CASE("form bases, labels, and the differential") {
    Cdga p0 = apl_forms(0, 3);
    CHECK(p0.space().dim() == 1);
    CHECK(p0.violations().empty());

    Cdga p1 = apl_forms(1, 2);
    CHECK(p1.violations().empty());
    CHECK(p1.space().dim() == 6);
    int i1 = label_index(p1.space(), "1");
    int it = label_index(p1.space(), "t");
    int it2 = label_index(p1.space(), "t^2");
    int idt = label_index(p1.space(), "dt");
    int itdt = label_index(p1.space(), "t*dt");
    label_index(p1.space(), "t^2*dt");
    CHECK(p1.space().degree(it2) == 0);
    CHECK(p1.space().degree(idt) == 1);
    CHECK(p1.unit_index() == i1);

    // d t = dt, d t^2 = 2 t dt
    CHECK(p1.differential().get(idt, it) == Rat(1));
    CHECK(p1.differential().get(itdt, it2) == Rat(2));
    CHECK(p1.differential().get(idt, i1) == Rat(0));

    // products: t*t = t^2 exactly, t^2*t overflows, dt*dt = 0 exactly
    CHECK(p1.mul(it, it).value == SparseVec{{it2, Rat(1)}});
    CHECK_FALSE(p1.mul(it, it).truncated);
    CHECK(p1.mul(it2, it).truncated);
    CHECK(p1.mul(idt, idt).value.empty());
    CHECK_FALSE(p1.mul(idt, idt).truncated);
    CHECK(p1.mul(it, idt).value == SparseVec{{itdt, Rat(1)}});

    Cdga p2 = apl_forms(2, 2);
    CHECK(p2.violations().empty());
    CHECK(p2.space().dim() == 6 * 4);
    int jt1 = label_index(p2.space(), "t1");
    int jt2 = label_index(p2.space(), "t2");
    int jt1t2 = label_index(p2.space(), "t1*t2");
    int jdt1 = label_index(p2.space(), "dt1");
    int jdt2 = label_index(p2.space(), "dt2");
    int jdd = label_index(p2.space(), "dt1^dt2");
    int jt1dt2 = label_index(p2.space(), "t1*dt2");
    int jt2dt1 = label_index(p2.space(), "t2*dt1");
    CHECK(p2.space().degree(jdd) == 2);
    CHECK(p2.mul(jt1, jt2).value == SparseVec{{jt1t2, Rat(1)}});
    // dt2 * dt1 = -dt1^dt2
    CHECK(p2.mul(jdt1, jdt2).value == SparseVec{{jdd, Rat(1)}});
    CHECK(p2.mul(jdt2, jdt1).value == SparseVec{{jdd, Rat(-1)}});
    // Koszul sign in d: d(t1*dt2) = dt1^dt2, d(t2*dt1) = -dt1^dt2
    CHECK(p2.differential().get(jdd, jt1dt2) == Rat(1));
    CHECK(p2.differential().get(jdd, jt2dt1) == Rat(-1));

    CHECK_THROWS_AS(apl_forms(3, 2), std::invalid_argument);
    CHECK_THROWS_AS(apl_forms(-1, 2), std::invalid_argument);
}

TEST_CASE("face and degeneracy pullbacks are cochain maps") {
    for (int cap = 1; cap <= 3; ++cap) {
        Cdga f0 = apl_forms(0, cap);
        Cdga f1 = apl_forms(1, cap);
        Cdga f2 = apl_forms(2, cap);
        for (int i = 0; i <= 1; ++i) {
            QMatrix f = apl_face(1, i, cap);
            CHECK(f * f1.differential() == f0.differential() * f);
        }
        for (int i = 0; i <= 2; ++i) {
            QMatrix f = apl_face(2, i, cap);
            CHECK(f * f2.differential() == f1.differential() * f);
        }
        QMatrix d00 = apl_degeneracy(0, 0, cap);
        CHECK(d00 * f0.differential() == f1.differential() * d00);
        for (int j = 0; j <= 1; ++j) {
            QMatrix d = apl_degeneracy(1, j, cap);
            CHECK(d * f1.differential() == f2.differential() * d);
        }
    }
    CHECK_THROWS_AS(apl_face(1, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(apl_degeneracy(1, -1, 2), std::invalid_argument);
}

TEST_CASE("the two endpoint evaluations differ") {
    int cap = 2;
    Cdga f1 = apl_forms(1, cap);
    int it = label_index(f1.space(), "t");
    int idt = label_index(f1.space(), "dt");
    QMatrix f0m = apl_face(1, 0, cap);
    QMatrix f1m = apl_face(1, 1, cap);
    // evaluation at the two vertices: t goes to 0 at one and 1 at the other
    Rat a = f0m.get(0, it), b = f1m.get(0, it);
    CHECK(((a == Rat(0) && b == Rat(1)) || (a == Rat(1) && b == Rat(0))));
    CHECK(f0m.get(0, idt) == Rat(0));
    CHECK(f1m.get(0, idt) == Rat(0));
    // constants restrict to constants
    CHECK(f0m.get(0, 0) == Rat(1));
    CHECK(f1m.get(0, 0) == Rat(1));
}

TEST_CASE("cosimplicial identities") {
    for (int cap = 1; cap <= 3; ++cap) {
        auto F1 = [&](int i) { return apl_face(1, i, cap); };
        auto F2 = [&](int i) { return apl_face(2, i, cap); };
        QMatrix D0 = apl_degeneracy(0, 0, cap);
        auto D1 = [&](int j) { return apl_degeneracy(1, j, cap); };

        // faces: F_j F_i = F_{i-1} F_j for j < i
        CHECK(F1(0) * F2(1) == F1(0) * F2(0));
        CHECK(F1(0) * F2(2) == F1(1) * F2(0));
        CHECK(F1(1) * F2(2) == F1(1) * F2(1));

        // degeneracies: D_i D_j = D_{j+1} D_i for i <= j
        CHECK(D1(0) * D0 == D1(1) * D0);

        // mixed: all the collapse-then-include composites
        int n0 = apl_forms(0, cap).space().dim();
        int n1 = apl_forms(1, cap).space().dim();
        CHECK(F1(0) * D0 == QMatrix::identity(n0));
        CHECK(F1(1) * D0 == QMatrix::identity(n0));
        CHECK(F2(0) * D1(0) == QMatrix::identity(n1));
        CHECK(F2(1) * D1(0) == QMatrix::identity(n1));
        CHECK(F2(1) * D1(1) == QMatrix::identity(n1));
        CHECK(F2(2) * D1(1) == QMatrix::identity(n1));
        CHECK(F2(2) * D1(0) == D0 * F1(1));
        CHECK(F2(0) * D1(1) == D0 * F1(0));
    }
}

TEST_CASE("truncated cohomology of the form algebras") {
    CHECK_THROWS_AS(apl_forms(1, 0), std::invalid_argument);
    for (int n = 0; n <= 2; ++n)
        for (int cap = 1; cap <= 3; ++cap) {
            Cdga f = apl_forms(n, cap);
            std::map<int, int> got = homology_dims(flipped(f));
            std::map<int, int> expect = expected_form_cohomology(n, cap);
            for (auto& [d, m] : expect)
                if (m == 0) expect.erase(d);
            CHECK(got == expect);
        }
}

TEST_CASE("tensor complexes with abelian coefficients") {
    // nonabelian input is rejected
    auto L = FreeGradedLie::make({{"u", 2}, {"v", 2}}, 3);
    std::map<std::string, LieElement> imgs{{"u", L->zero()}, {"v", L->zero()}};
    LInftyAlgebra nonab =
        LInftyAlgebra::from_dgl(L, LieDerivation::make(L, -1, imgs), 3);
    CHECK_THROWS_AS(apl_tensor_abelian(nonab, 1, 2), std::invalid_argument);

    // contractible pair: d y = z, tensor homology vanishes entirely
    {
        GradedVectorSpace sp({"y", "z"}, {3, 2});
        QMatrix d(2, 2);
        d.set(1, 0, Rat(1));
        LInftyAlgebra A = LInftyAlgebra::abelian(sp, d);
        for (int n = 0; n <= 2; ++n) {
            AplTensor T = apl_tensor_abelian(A, n, 2);
            ChainComplex c(T.space, T.differential);
            CHECK(homology_dims(c).empty());
        }
    }

    // zero differential: homology dims follow the Kunneth products
    {
        GradedVectorSpace sp({"y", "h"}, {3, 0});
        LInftyAlgebra A = LInftyAlgebra::abelian(sp, QMatrix(2, 2));
        for (int n = 1; n <= 2; ++n)
            for (int cap = 1; cap <= 2; ++cap) {
                AplTensor T = apl_tensor_abelian(A, n, cap);
                // mixed degrees and pair bookkeeping
                Cdga f = apl_forms(n, cap);
                REQUIRE(T.space.dim() == 2 * f.space().dim());
                for (int t = 0; t < T.space.dim(); ++t) {
                    auto [li, fj] = T.pairs[static_cast<std::size_t>(t)];
                    CHECK(T.space.degree(t) ==
                          A.space().degree(li) - f.space().degree(fj));
                }
                std::map<int, int> expect;
                std::map<int, int> hforms = expected_form_cohomology(n, cap);
                for (int j : {3, 0})
                    for (const auto& [mk, mv] : hforms) {
                        if (mv == 0) continue;
                        expect[j + mk] += mv;
                    }
                ChainComplex c(T.space, T.differential);
                CHECK(homology_dims(c) == expect);
            }
    }
}

TEST_CASE("Maurer-Cartan simplices of abelian algebras") {
    // a single class in degree -1: only the constant simplex survives
    {
        GradedVectorSpace sp({"y"}, {-1});
        LInftyAlgebra A = LInftyAlgebra::abelian(sp, QMatrix(1, 1));
        CHECK(mc_simplices_abelian(A, 0, 2).size() == 1);
        CHECK(mc_simplices_abelian(A, 1, 2).size() == 1);
        CHECK(mc_simplices_abelian(A, 2, 2).size() == 1);
    }
    // a single class in degree 0: no points, many loops
    {
        GradedVectorSpace sp({"h"}, {0});
        LInftyAlgebra A = LInftyAlgebra::abelian(sp, QMatrix(1, 1));
        CHECK(mc_simplices_abelian(A, 0, 2).empty());
        // h (x) q(t) dt for q of degree <= cap
        CHECK(mc_simplices_abelian(A, 1, 2).size() == 3);
    }
    // killed pair: no Maurer-Cartan simplices beyond zero
    {
        GradedVectorSpace sp({"y", "z"}, {-1, -2});
        QMatrix d(2, 2);
        d.set(1, 0, Rat(1));
        LInftyAlgebra A = LInftyAlgebra::abelian(sp, d);
        CHECK(mc_simplices_abelian(A, 0, 2).empty());
        CHECK(mc_simplices_abelian(A, 1, 2).empty());
    }
}

TEST_CASE("simplicial homotopy of abelian algebras matches twisted homology") {
    struct Case {
        std::vector<std::string> labels;
        std::vector<int> degs;
        std::vector<std::tuple<int, int, Rat>> dentries;
    };
    std::vector<Case> cases = {
        {{"y"}, {-1}, {}},
        {{"h"}, {0}, {}},
        {{"a", "b", "h"}, {-1, -1, 0}, {}},
        {{"y", "z"}, {-1, -2}, {{1, 0, Rat(1)}}},
        {{"w", "h"}, {1, 0}, {{1, 0, Rat(1)}}},
        {{"y", "h", "w"}, {-1, 0, 1}, {{1, 2, Rat(2)}}},
    };
    for (const Case& cs : cases) {
        GradedVectorSpace sp(cs.labels, cs.degs);
        QMatrix d(sp.dim(), sp.dim());
        for (auto [r, c, v] : cs.dentries) d.set(r, c, v);
        LInftyAlgebra A = LInftyAlgebra::abelian(sp, d);
        HomotopyGroups hg = mc_homotopy_groups(A, {});
        int h_minus1 = hg.homology_dims.count(-1) != 0 ? hg.homology_dims[-1] : 0;
        int h_zero = hg.homology_dims.count(0) != 0 ? hg.homology_dims[0] : 0;

        SimplicialPi pi = simplicial_pi01_abelian(A, 2);
        CHECK(pi.pi0 == h_minus1);
        CHECK(pi.pi1 == h_zero);
        CHECK(pi.cap_used == 2);
        CHECK(pi.stabilized);
    }
}
