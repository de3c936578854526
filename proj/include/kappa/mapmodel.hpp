#pragma once

#include "kappa/equivariant.hpp"
#include "kappa/linfty.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kappa {

// Commutative differential graded algebra over Q on a labeled basis with
// cohomological grading. A product slot may be marked overflow to model a
// polynomial-degree truncation; every computation that touches such a slot is
// flagged as truncated instead of silently returning wrong values.
class Cdga {
  public:
    struct Product {
        bool overflow = false;
        SparseVec value;
    };
    struct Eval {
        SparseVec value;
        bool truncated = false;
    };

    // products is keyed by ordered basis pairs (i <= j); the (j,i) values
    // follow by graded commutativity. Pairs involving the unit are implicit.
    Cdga(GradedVectorSpace space, int unit_index, std::map<std::pair<int, int>, Product> products,
         QMatrix d, bool strict = true);

    const GradedVectorSpace& space() const { return space_; }
    int unit_index() const { return unit_; }
    const QMatrix& differential() const { return d_; }

    Eval mul(int a, int b) const;
    Eval mul_vec(const SparseVec& a, const SparseVec& b) const;
    std::vector<std::string> violations() const;

    static Cdga rationals();
    // H^*(S^{n-1}): unit and one class x of cohomological degree n-1 with
    // x*x = 0 (for n = 1 the truncated model used by the suspension range).
    static Cdga sphere_cohomology(int n);

  private:
    GradedVectorSpace space_;
    int unit_ = 0;
    std::map<std::pair<int, int>, Product> products_;
    QMatrix d_;
};

// Sigma_2 action on sphere_cohomology(n): the swap fixes the unit and
// multiplies the top class by (-1)^n.
GroupAction sphere_swap_action(int n, const Cdga& A);

// Tensor-of-models space A (x) L with mixed degree deg(a (x) xi) =
// deg(xi) - deg(a). Bracket rule: ell_k hits the L factor, multiplying the
// CDGA coordinates, with the Koszul sign from moving each a_j across the
// x_i with i < j; ell_1 additionally carries the CDGA differential term.
struct TensorModel {
    GradedVectorSpace space;
    std::vector<std::pair<int, int>> pairs;  // basis index -> (cdga index, lie index)
    LInftyAlgebra algebra;
    bool truncated = false;  // some bracket touched a CDGA overflow slot

    int index_of(int ai, int li) const;
};

TensorModel tensor_model(const Cdga& A, const LInftyAlgebra& L);

// g . (a (x) xi) = (g a) (x) (g xi), entrywise from the two actions.
GroupAction diagonal_action(const TensorModel& T, const GroupAction& on_cdga,
                            const GroupAction& on_lie);

struct HofixedReport {
    std::map<int, int> dims;  // H_d of the invariant complex; reported as pi_{d+1}
    std::map<int, std::vector<std::string>> invariant_labels;
    int weight_cap = 0, arity_cap = 0;
    bool truncated = false;
};

// Homotopy groups of the homotopy-fixed-point mapping model: invariants of
// the tensor model under the diagonal action, twisted by tau (default 0),
// reported for degrees in [deg_lo, deg_hi].
HofixedReport hofixed_homotopy_groups(const Cdga& A, const GroupAction& on_cdga,
                                      const LInftyAlgebra& L, const GroupAction& on_lie, int deg_lo,
                                      int deg_hi, const SparseVec& tau = {});

}  // namespace kappa
