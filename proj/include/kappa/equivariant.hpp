#pragma once

#include "kappa/linfty.hpp"
#include "kappa/qlinalg.hpp"

#include <map>
#include <string>
#include <vector>

namespace kappa {

// Multiplication-table presentation; element 0 is the identity.
struct FiniteGroup {
    std::vector<std::string> names;
    std::vector<std::vector<int>> mult;  // mult[g][h] = g*h

    int order() const { return static_cast<int>(names.size()); }
    int identity() const { return 0; }
    int mul(int g, int h) const;
    int inverse(int g) const;
    std::optional<int> index_of(const std::string& name) const;
    // Group-axiom violations: associativity, identity, inverses, name uniqueness.
    std::vector<std::string> violations() const;

    static FiniteGroup trivial();
    static FiniteGroup cyclic(int n);
    // Permutations of {0..r-1} in lexicographic one-line order; composition
    // (g*h)(x) = g(h(x)). perms_out receives the one-line forms when non-null.
    static FiniteGroup symmetric(int r, std::vector<std::vector<int>>* perms_out = nullptr);
};

// Degree-0 linear action on a graded basis, one matrix per group element.
class GroupAction {
  public:
    GroupAction(FiniteGroup group, GradedVectorSpace space, std::vector<QMatrix> mats,
                bool strict = true);

    const FiniteGroup& group() const { return group_; }
    const GradedVectorSpace& space() const { return space_; }
    const QMatrix& matrix(int g) const { return mats_.at(static_cast<std::size_t>(g)); }
    std::vector<std::string> violations() const;
    QVec act(int g, const QVec& v) const;
    SparseVec act_sparse(int g, const SparseVec& v) const;

  private:
    FiniteGroup group_;
    GradedVectorSpace space_;
    std::vector<QMatrix> mats_;
};

struct EquivarianceReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Checks g . ell_k(x_1..x_k) == ell_k(g x_1 .. g x_k) on all stored tables.
EquivarianceReport check_equivariance(const GroupAction& act, const LInftyAlgebra& L);

// Averaging projector onto invariants; exact over Q.
QMatrix reynolds(const GroupAction& act);

// Basis of the invariant subspace: primitive vectors, deterministic order,
// each homogeneous.
std::vector<QVec> invariant_basis(const GroupAction& act);

// Labeled space for an invariant basis; labels are the printed combinations.
GradedVectorSpace invariant_space(const GroupAction& act, const std::vector<QVec>& basis);

// L-infinity structure restricted to the invariant subspace. Requires the
// action to be equivariant for L (checked; throws otherwise). When basis_out
// is non-null it receives the invariant basis in ambient coordinates.
LInftyAlgebra invariant_subalgebra(const GroupAction& act, const LInftyAlgebra& L,
                                   std::vector<QVec>* basis_out = nullptr);

// Induced action on H_degree of an equivariant complex.
GroupAction homology_action(const GroupAction& act, const ChainComplex& c, int degree);

struct CommutationVerdict {
    bool ok = false;
    std::map<int, int> homology_of_invariants;  // H_*(C^G)
    std::map<int, int> invariants_of_homology;  // (H_*(C))^G
};

// Compares dim H_*(C^G) with dim (H_* C)^G degreewise; requires an
// equivariant differential.
CommutationVerdict invariants_commute_with_homology(const GroupAction& act, const ChainComplex& c);

// Action on a from_dgl algebra induced by generator images: element g maps
// generators through images[g], extended as a Lie morphism to the monomial
// basis. Validated as a group action.
GroupAction lie_action(const FiniteGroup& G, const FreeLiePtr& L, const LInftyAlgebra& A,
                       const std::vector<std::map<std::string, LieElement>>& images);

}  // namespace kappa
