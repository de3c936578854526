#pragma once

#include "kappa/linfty.hpp"
#include "kappa/mapmodel.hpp"

#include <utility>
#include <vector>

namespace kappa {

// Polynomial de Rham forms on the n-simplex (n <= 2) in reduced barycentric
// coordinates, truncated at polynomial degree poly_cap. Basis monomials are
// t-powers times a wedge of dt's; products beyond the cap are overflow slots.
Cdga apl_forms(int n, int poly_cap);

// Pullback along the i-th face inclusion: forms on the n-simplex to forms on
// the (n-1)-simplex, as a matrix on the apl_forms bases at the same cap.
QMatrix apl_face(int n, int i, int poly_cap);

// Pullback along the j-th collapse: forms on the n-simplex to forms on the
// (n+1)-simplex.
QMatrix apl_degeneracy(int n, int j, int poly_cap);

// Tensor complex L (x) forms for an abelian L-infinity algebra (only ell_1),
// with mixed degree deg(x (x) w) = deg(x) - deg(w).
struct AplTensor {
    GradedVectorSpace space;
    std::vector<std::pair<int, int>> pairs;  // basis index -> (lie index, form index)
    QMatrix differential;                    // degree -1 on the mixed grading
};

AplTensor apl_tensor_abelian(const LInftyAlgebra& L, int n, int poly_cap);

// Basis of the Maurer-Cartan set in simplicial level n: degree -1 cycles of
// the tensor complex (a linear space since L is abelian).
std::vector<QVec> mc_simplices_abelian(const LInftyAlgebra& L, int n, int poly_cap);

struct SimplicialPi {
    int pi0 = 0;
    int pi1 = 0;
    int cap_used = 0;
    bool stabilized = false;  // dims agree at cap_used and cap_used + 1
};

// pi_0 and pi_1 of the simplicial Maurer-Cartan set of an abelian algebra,
// computed from levels <= 2 through the Moore complex.
SimplicialPi simplicial_pi01_abelian(const LInftyAlgebra& L, int poly_cap);

}  // namespace kappa
