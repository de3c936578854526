#pragma once

#include "kappa/freelie.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kappa {

// Element of H^*(S^{n-1}) (x) (L*L): the coefficients of the unit class and
// of the top class x. Mixed degree of x (x) xi is deg(xi) - (n-1); the unit
// part carries the plain Lie degree.
struct SphereTensor {
    LieElement one_part;
    LieElement x_part;

    bool is_zero() const { return one_part.is_zero() && x_part.is_zero(); }
    bool truncated() const { return one_part.truncated() || x_part.truncated(); }
    bool operator==(const SphereTensor& o) const {
        return one_part == o.one_part && x_part == o.x_part;
    }
    std::string show() const;
};

SphereTensor st_add(const SphereTensor& a, const SphereTensor& b);
SphereTensor st_scale(const Rat& c, const SphereTensor& a);
// Bracket through the Koszul rule for the coefficient algebra H^*(S^{n-1}):
// [1(x)xi, x(x)eta] = (-1)^{|xi|(n-1)} x(x)[xi,eta], [x(x)xi, 1(x)eta] =
// x(x)[xi,eta], and the x-x bracket dies because x^2 = 0.
SphereTensor st_bracket(int n, const SphereTensor& a, const SphereTensor& b);

// Arity-2 coalgebra structure of an n-fold suspension with Quillen model L:
// each generator g is sent to 1(x)(g_1 + g_2) + x(x)kappa(g) inside
// H^*(S^{n-1}) (x) (L*L), Sigma_2-invariantly for the twisted action that
// multiplies x by (-1)^n and swaps the free-product tags.
struct CoalgebraDatum {
    int n = 0;
    FreeLiePtr L;
    FreeProduct LL;  // L*L, generators tagged "1" and "2", doubled weight cap
    std::map<std::string, SphereTensor> images;
    std::string provenance;
};

// Tag-swap morphism of L*L combined with (-1)^n on the x coefficient.
SphereTensor twisted_swap(const CoalgebraDatum& d, const SphereTensor& t);

// Structural checks: generator coverage, the mixed-degree law, the pinch
// normalization of every unit part, and twisted Sigma_2-invariance. Empty
// means valid.
std::vector<std::string> validate(const CoalgebraDatum& d);

// Bracket-preserving extension of the generator images; throws
// std::invalid_argument when the datum does not validate.
SphereTensor delta2(const CoalgebraDatum& d, const LieElement& e);

// The cooperation: the x-component of delta2 against the dual basis with
// <x; fundamental class> = +1. Raises the topological degree by n-1.
LieElement kappa(const CoalgebraDatum& d, const LieElement& e);

struct ObstructionReport {
    bool obstructed = false;
    std::string verdict;
    std::optional<std::string> witness;        // basis monomial with nonzero kappa
    std::optional<std::string> witness_value;  // its kappa value
    int degree_lo = 0;                         // scanned topological degrees
    int degree_hi = 0;
    int weight_cap = 0;  // scan is complete only up to this monomial weight
    int scanned = 0;
    bool truncated = false;  // some kappa value overflowed the target cap
};

// Scans the basis monomials of L whose topological degree (Lie degree + 1)
// lies in [lo, hi], up to the weight cap. Any nonzero kappa value yields the
// verdict "not an (n+1)-fold suspension".
ObstructionReport obstruction_report(const CoalgebraDatum& d, int lo, int hi);

// Datum with the stated pinch parts and x parts, both given as bracket
// expressions in the tagged generators of L*L. Every generator of L needs one
// entry in each map; the x entry is the image of the product cell x times g.
CoalgebraDatum from_product_model(const FreeLiePtr& L, int n,
                                  const std::map<std::string, std::string>& base_cell_images,
                                  const std::map<std::string, std::string>& x_cell_images,
                                  std::string provenance = "");

// S^n as the n-fold suspension of S^0: one generator e of Lie degree n-1,
// kappa(e) = [e1,e2] from the top cell of S^{n-1} x S^n.
CoalgebraDatum sphere_datum(int n, int weight_cap = 6);

// Pinch-only datum (kappa identically zero), valid for any free model L.
CoalgebraDatum wedge_pinch_datum(const FreeLiePtr& L, int n,
                                 std::string provenance = "pinch only");

// The triple suspension of the projective plane: L(u,v) with |u| = 4,
// |v| = 6, kappa(v) = [u1,u2] from the cell mapping x,a -> 0, u -> u1+u2,
// v -> v1+v2, b -> [u1,u2] of the product model.
CoalgebraDatum sigma3_cp2_datum(int weight_cap = 6);

}  // namespace kappa
