#include "kappa/freelie.hpp"

#include "oracle_tensor.hpp"
#include "testutil.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

using namespace kappa;
using testutil::Rng;

namespace {

// Brute-force Lyndon predicate: strictly smaller than every proper suffix.
bool is_lyndon(const std::vector<int>& w) {
    for (std::size_t i = 1; i < w.size(); ++i) {
        std::vector<int> suffix(w.begin() + static_cast<long>(i), w.end());
        if (!(w < suffix)) return false;
    }
    return true;
}

// Independent basis count: Lyndon words of each weight, plus doubled words of
// odd-degree Lyndon words at twice their weight.
std::map<int, int> brute_basis_count(const FreeGradedLie& L, int max_weight) {
    int k = static_cast<int>(L.generators().size());
    std::map<int, int> count;
    std::vector<std::vector<int>> words = {{}};
    for (int len = 1; len <= max_weight; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& w : words)
            for (int g = 0; g < k; ++g) {
                std::vector<int> e = w;
                e.push_back(g);
                next.push_back(e);
            }
        words = next;
        for (const auto& w : words) {
            if (!is_lyndon(w)) continue;
            count[len] += 1;
            if (oracle::word_degree(L, w) % 2 != 0 && 2 * len <= max_weight) count[2 * len] += 1;
        }
    }
    return count;
}

LieElement rand_element(Rng& rng, const FreeLiePtr& L, int max_weight, int terms) {
    std::vector<MonoKey> basis = L->basis(max_weight);
    LieElement out = L->zero();
    for (int i = 0; i < terms; ++i) {
        const MonoKey& k = basis[static_cast<std::size_t>(
            testutil::rand_int(rng, 0, static_cast<int>(basis.size()) - 1))];
        out = out + L->mono(k).scaled(testutil::rand_rat(rng));
    }
    return out;
}

// Random homogeneous element in one degree.
LieElement rand_homogeneous(Rng& rng, const FreeLiePtr& L, int degree, int max_weight) {
    LieElement out = L->zero();
    for (const MonoKey& k : L->basis(max_weight, degree))
        if (L->degree_of(k) == degree) out = out + L->mono(k).scaled(testutil::rand_rat(rng));
    return out;
}

}  // namespace

TEST_CASE("key ordering and enumeration") {
    auto L = FreeGradedLie::make({{"a", 1}, {"b", 2}}, 6);
    std::vector<MonoKey> basis = L->basis(6);
    CHECK(std::is_sorted(basis.begin(), basis.end()));
    for (const MonoKey& k : basis) {
        CHECK(L->is_basis_key(k));
        CHECK(k.weight() <= 6);
    }
    // weight-1 keys come first and match the generators
    CHECK(basis[0].word == std::vector<int>{0});
    CHECK(basis[1].word == std::vector<int>{1});
    // the square of the odd generator a is a basis key of weight 2
    MonoKey sq{{0, 0}, true};
    CHECK(L->is_basis_key(sq));
    CHECK(L->degree_of(sq) == 2);
    CHECK(std::find(basis.begin(), basis.end(), sq) != basis.end());
    // but the plain word aa is not Lyndon and not a key
    CHECK_FALSE(L->is_basis_key(MonoKey{{0, 0}, false}));
}

TEST_CASE("basis dimensions match the brute-force Lyndon count") {
    std::vector<std::vector<LieGenerator>> shapes = {
        {{"a", 1}},
        {{"a", 2}},
        {{"a", 1}, {"b", 1}},
        {{"a", 1}, {"b", 2}},
        {{"a", 2}, {"b", 4}},
        {{"a", 1}, {"b", 2}, {"c", 3}},
        {{"a", 3}, {"b", 4}, {"c", 5}},
    };
    for (const auto& gens : shapes) {
        auto L = FreeGradedLie::make(gens, 5);
        std::map<int, int> expect = brute_basis_count(*L, 5);
        std::map<int, int> got;
        for (const MonoKey& k : L->basis(5)) got[k.weight()] += 1;
        CHECK(got == expect);
    }
}

TEST_CASE("single generator extremes") {
    // even generator: one-dimensional, no square
    auto E = FreeGradedLie::make({{"x", 2}}, 6);
    CHECK(E->basis(6).size() == 1);
    CHECK(bracket(E->gen("x"), E->gen("x")).is_zero());
    // odd generator: x and [x,x] only
    auto O = FreeGradedLie::make({{"x", 3}}, 6);
    CHECK(O->basis(6).size() == 2);
    LieElement sq = bracket(O->gen("x"), O->gen("x"));
    CHECK(sq == O->mono(MonoKey{{0, 0}, true}));
    // [x,[x,x]] = 0 in characteristic zero
    CHECK(bracket(O->gen("x"), sq).is_zero());
}

TEST_CASE("bracket agrees with the tensor-algebra commutator") {
    Rng rng(21);
    auto L = FreeGradedLie::make({{"a", 1}, {"b", 2}, {"c", 3}}, 5);
    for (int trial = 0; trial < 30; ++trial) {
        LieElement x = rand_element(rng, L, 4, 3);
        LieElement y = rand_element(rng, L, 4, 3);
        LieElement br = bracket(x, y);
        oracle::TPoly lhs = oracle::embed(br);
        oracle::TPoly rhs = oracle::t_truncate(
            oracle::t_commutator(*L, oracle::embed(x), oracle::embed(y)), 5);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("graded antisymmetry") {
    Rng rng(22);
    auto L = FreeGradedLie::make({{"a", 1}, {"b", 2}, {"c", 3}}, 5);
    for (int trial = 0; trial < 20; ++trial) {
        for (int da = 1; da <= 4; ++da)
            for (int db = 1; db <= 4; ++db) {
                LieElement x = rand_homogeneous(rng, L, da, 4);
                LieElement y = rand_homogeneous(rng, L, db, 4);
                int sign = (da % 2 != 0 && db % 2 != 0) ? 1 : -1;
                CHECK(bracket(x, y) == bracket(y, x).scaled(Rat(sign)));
            }
    }
}

TEST_CASE("weight cap truncation is marked") {
    auto L = FreeGradedLie::make({{"a", 1}, {"b", 2}}, 2);
    LieElement ab = bracket(L->gen("a"), L->gen("b"));
    CHECK_FALSE(ab.truncated());
    LieElement over = bracket(L->gen("a"), ab);  // weight 3 > cap
    CHECK(over.is_zero());
    CHECK(over.truncated());
    // truncation flag survives arithmetic but is not part of the value
    CHECK((over + L->gen("a")).truncated());
    CHECK(over + L->gen("a") == L->gen("a"));
}

TEST_CASE("element accessors") {
    auto L = FreeGradedLie::make({{"a", 1}, {"b", 2}}, 4);
    LieElement e = L->gen("a").scaled(Rat(2)) + bracket(L->gen("a"), L->gen("b"));
    CHECK_FALSE(e.is_homogeneous());
    CHECK_FALSE(e.degree().has_value());
    CHECK(e.max_weight() == 2);
    LieElement h = bracket(L->gen("a"), L->gen("b"));
    CHECK(h.is_homogeneous());
    CHECK(h.degree() == 3);
    CHECK(L->zero().is_zero());
    CHECK_FALSE(L->zero().degree().has_value());
    CHECK_THROWS_AS(L->gen("zz"), std::invalid_argument);
}

TEST_CASE("show and canonical_form round-trip") {
    Rng rng(23);
    auto L = FreeGradedLie::make({{"u", 4}, {"v", 6}}, 5);
    for (int trial = 0; trial < 25; ++trial) {
        LieElement e = rand_element(rng, L, 4, 4);
        CHECK(canonical_form(L, e.show()) == e);
    }
    CHECK(canonical_form(L, "[u,[u,v]] - [u,[u,v]]").is_zero());
    CHECK(canonical_form(L, "3/2*[v,u]") == bracket(L->gen("u"), L->gen("v")).scaled(Rat(-3, 2)));
    CHECK(canonical_form(L, "0").is_zero());
    CHECK_THROWS_AS(canonical_form(L, "[u,w]"), std::invalid_argument);
    CHECK_THROWS_AS(canonical_form(L, "[u,,v]"), std::invalid_argument);
    CHECK_THROWS_AS(canonical_form(L, "u u"), std::invalid_argument);
}

TEST_CASE("show_key parses back to the same monomial") {
    auto L = FreeGradedLie::make({{"a", 1}, {"b", 2}, {"c", 3}}, 5);
    for (const MonoKey& k : L->basis(5)) {
        LieElement parsed = canonical_form(L, L->show_key(k));
        CHECK(parsed == L->mono(k));
    }
}

TEST_CASE("morphisms preserve brackets") {
    Rng rng(24);
    auto L = FreeGradedLie::make({{"a", 2}, {"b", 3}}, 6);
    auto M = FreeGradedLie::make({{"x", 2}, {"y", 3}, {"z", 2}}, 6);
    LieMorphism f = LieMorphism::make(
        L, M, {{"a", M->gen("x") + M->gen("z").scaled(Rat(2))}, {"b", M->gen("y")}});
    for (int trial = 0; trial < 15; ++trial) {
        LieElement p = rand_element(rng, L, 3, 3);
        LieElement q = rand_element(rng, L, 3, 3);
        CHECK(f.apply(bracket(p, q)) == bracket(f.apply(p), f.apply(q)));
        CHECK(f.apply(p + q) == f.apply(p) + f.apply(q));
    }
    CHECK(f.image_of("b") == M->gen("y"));
    // image of the wrong degree is rejected
    CHECK_THROWS_AS(LieMorphism::make(L, M, {{"a", M->gen("y")}, {"b", M->gen("y")}}),
                    std::invalid_argument);
    // every generator needs an image
    CHECK_THROWS_AS(LieMorphism::make(L, M, {{"a", M->gen("x")}}), std::invalid_argument);
}

TEST_CASE("derivations satisfy the graded Leibniz rule") {
    Rng rng(25);
    auto L = FreeGradedLie::make({{"m", 3}, {"p", 7}}, 6);
    LieDerivation D = LieDerivation::make(
        L, -1, {{"m", L->zero()}, {"p", bracket(L->gen("m"), L->gen("m"))}});
    // tensor-algebra cross-check on every basis monomial; the image of p has
    // weight two, so top-weight keys overflow the cap and must say so
    for (const MonoKey& k : L->basis(6)) {
        LieElement dk = D.apply_key(k);
        oracle::TPoly full = oracle::t_derive(D, oracle::embed_key(*L, k));
        oracle::TPoly expect = oracle::t_truncate(full, 6);
        CHECK(oracle::embed(dk) == expect);
        if (full != expect) CHECK(dk.truncated());
    }
    // Leibniz on random inhomogeneous pairs
    for (int trial = 0; trial < 10; ++trial) {
        LieElement x = rand_homogeneous(rng, L, 3 * testutil::rand_int(rng, 1, 2), 5);
        LieElement y = rand_homogeneous(rng, L, 7, 5);
        int sign = (x.degree().value_or(0) % 2 != 0) ? -1 : 1;
        CHECK(D.apply(bracket(x, y)) ==
              bracket(D.apply(x), y) + bracket(x, D.apply(y)).scaled(Rat(sign)));
    }
    // degree bookkeeping is validated
    CHECK_THROWS_AS(
        LieDerivation::make(L, -1, {{"m", L->gen("p")}, {"p", L->zero()}}),
        std::invalid_argument);
}

TEST_CASE("free product") {
    auto L = FreeGradedLie::make({{"u", 4}, {"v", 6}}, 3);
    FreeProduct LL = free_product({L, L}, {"1", "2"}, 6);
    CHECK(LL.algebra->weight_cap() == 6);
    CHECK(LL.algebra->generators().size() == 4);
    CHECK(LL.algebra->generator_index("u1").has_value());
    CHECK(LL.algebra->generator_index("v2").has_value());
    // inclusions land on the tagged copies and preserve brackets
    LieElement uv = bracket(L->gen("u"), L->gen("v"));
    CHECK(LL.inclusions[0].apply(uv) ==
          bracket(LL.algebra->gen("u1"), LL.algebra->gen("v1")));
    CHECK(LL.inclusions[1].apply(uv) ==
          bracket(LL.algebra->gen("u2"), LL.algebra->gen("v2")));
    // basis of the coproduct counts like the free algebra on all four
    auto direct = FreeGradedLie::make(
        {{"u1", 4}, {"v1", 6}, {"u2", 4}, {"v2", 6}}, 6);
    CHECK(LL.algebra->basis(6).size() == direct->basis(6).size());
    CHECK_THROWS_AS(free_product({L, L}, {"1"}), std::invalid_argument);
}

TEST_CASE("lcs quotient and truncate_to") {
    auto L = FreeGradedLie::make({{"a", 1}, {"b", 2}}, 6);
    FreeLiePtr Q = lcs_quotient(L, 2);
    CHECK(Q->weight_cap() == 2);
    LieElement ab = bracket(Q->gen("a"), Q->gen("b"));
    CHECK_FALSE(ab.is_zero());
    CHECK(bracket(Q->gen("a"), ab).is_zero());  // weight 3 dies in the quotient

    LieElement deep = bracket(L->gen("a"), bracket(L->gen("a"), L->gen("b")));
    LieElement cut = truncate_to(Q, deep);
    CHECK(cut.is_zero());
    CHECK(cut.truncated());
    LieElement kept = truncate_to(Q, bracket(L->gen("a"), L->gen("b")));
    CHECK(kept == ab);
    CHECK_FALSE(kept.truncated());
}

TEST_CASE("structural equality and cross-owner bracket") {
    auto L1 = FreeGradedLie::make({{"a", 1}}, 4);
    auto L2 = FreeGradedLie::make({{"a", 1}}, 4);
    auto L3 = FreeGradedLie::make({{"a", 1}}, 5);
    CHECK(L1->structurally_equal(*L2));
    CHECK_FALSE(L1->structurally_equal(*L3));
    CHECK(bracket(L1->gen("a"), L2->gen("a")) == bracket(L1->gen("a"), L1->gen("a")));
    CHECK_THROWS_AS(bracket(L1->gen("a"), L3->gen("a")), std::invalid_argument);
}
