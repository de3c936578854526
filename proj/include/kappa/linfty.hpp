#pragma once

#include "kappa/freelie.hpp"
#include "kappa/qlinalg.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kappa {

// Sparse coordinate vector against a GradedVectorSpace basis.
using SparseVec = std::map<int, Rat>;

SparseVec sv_add(const SparseVec& a, const SparseVec& b);
SparseVec sv_scale(const Rat& c, const SparseVec& a);
bool sv_is_zero(const SparseVec& a);
QVec sv_dense(const SparseVec& a, int dim);
SparseVec sv_sparse(const QVec& a);
std::string sv_show(const SparseVec& a, const GradedVectorSpace& space);

// Koszul normalization of an argument tuple: sort basis indices ascending,
// tracking the sign for graded antisymmetry. zero is set when a repeated
// index has even degree.
struct NormTuple {
    std::vector<int> tuple;
    int sign = 1;
    bool zero = false;
};
NormTuple normalize_tuple(const GradedVectorSpace& space, std::vector<int> tuple);

// Sign reordering x_{perm[0]},...,x_{perm[n-1]} against x_0,...,x_n-1 where an
// adjacent swap of odd/odd arguments gives +1 and any other swap gives -1.
int skew_sign_of_permutation(const std::vector<int>& perm, const std::vector<int>& parities);

// All canonical tuples of length n over the basis: ascending indices with
// repeats only in odd degree.
void for_each_canonical_tuple(const GradedVectorSpace& space, int n,
                              const std::function<void(const std::vector<int>&)>& fn);

// Finite-dimensional L-infinity algebra over Q with homological grading:
// ell_k has degree k-2. Brackets are stored on canonical (sorted) tuples and
// only up to arity_cap; the filtration weight of each basis vector drives the
// weight-cap truncation semantics.
class LInftyAlgebra {
  public:
    using Table = std::map<std::vector<int>, SparseVec>;

    LInftyAlgebra(GradedVectorSpace space, std::vector<int> weights, int arity_cap, int weight_cap,
                  std::map<int, Table> brackets, bool strict = true);

    const GradedVectorSpace& space() const { return space_; }
    const std::vector<int>& filtration_weights() const { return weights_; }
    int arity_cap() const { return arity_cap_; }
    int weight_cap() const { return weight_cap_; }
    const std::map<int, Table>& brackets() const { return brackets_; }

    // Degree-law, canonical-tuple and filtration violations; empty when well formed.
    std::vector<std::string> structure_violations() const;

    // ell_k on basis indices in any order; zero beyond the stored tables.
    SparseVec ell(int k, std::vector<int> tuple) const;
    SparseVec ell_multi(int k, const std::vector<SparseVec>& args) const;

    // Copy with one table entry shifted by delta, built without validation.
    LInftyAlgebra with_entry_delta(int k, const std::vector<int>& tuple, int out_index,
                                   const Rat& delta) const;

    static LInftyAlgebra from_dgl(const FreeLiePtr& L, const LieDerivation& d, int arity_cap,
                                  std::optional<int> max_degree = std::nullopt);
    // Zero brackets except ell_1 = d.
    static LInftyAlgebra abelian(GradedVectorSpace space, const QMatrix& d, int arity_cap = 3);

    // Monomial key of a basis index for algebras built by from_dgl.
    const std::vector<MonoKey>& monomial_keys() const { return keys_; }

  private:
    GradedVectorSpace space_;
    std::vector<int> weights_;
    int arity_cap_ = 1;
    int weight_cap_ = 1;
    std::map<int, Table> brackets_;
    std::vector<MonoKey> keys_;  // only for from_dgl-built algebras
};

struct JacobiViolation {
    int n = 0;
    std::vector<int> tuple;
    SparseVec residual;
};

struct JacobiReport {
    bool ok = true;
    int n = 0;
    int weight_cap = 0, arity_cap = 0;
    std::vector<JacobiViolation> violations;
};

// Generalized Jacobi identity of total arity n over all canonical tuples.
JacobiReport check_generalized_jacobi(const LInftyAlgebra& L, int n);

struct McVerdict {
    bool is_mc = false;
    SparseVec residual;
};

// Curvature sum_k ell_k(z,...,z)/k! for a degree -1 element.
McVerdict is_maurer_cartan(const LInftyAlgebra& L, const SparseVec& z);

// Twisted algebra ell^tau_k(x...) = sum_j ell_{k+j}(tau^j, x...)/j!; requires
// tau Maurer-Cartan of degree -1.
LInftyAlgebra twist(const LInftyAlgebra& L, const SparseVec& tau);

// Chain complex (space, ell_1 of the tau-twist); throws when the twisted
// differential does not square to zero within the caps.
ChainComplex twisted_complex(const LInftyAlgebra& L, const SparseVec& tau);

struct HomotopyGroups {
    std::map<int, int> homology_dims;  // H_d of the twisted complex; pi_{d+1} of the MC component
    int weight_cap = 0, arity_cap = 0;
};

HomotopyGroups mc_homotopy_groups(const LInftyAlgebra& L, const SparseVec& tau);

// Baker-Campbell-Hausdorff product through the nested-commutator expansion,
// truncated beyond class_cap. Arguments must be of degree 0 (or zero) and
// class_cap must not exceed the owner's weight cap.
LieElement bch(const LieElement& x, const LieElement& y, int class_cap);

}  // namespace kappa
