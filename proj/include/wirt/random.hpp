#pragma once

#include <vector>

#include "wirt/complex_matrix.hpp"
#include "wirt/rng.hpp"

namespace wirt {

// Random square matrix with iid standard complex Gaussian entries scaled by
// `scale`.
ComplexMatrix random_matrix(int n, Rng& rng, double scale = 1.0);

// Random matrix lying exactly in the named structure class (the symmetrized
// combinations (G +/- G^T)/2 and (G +/- G^dagger)/2 are exact in floating
// point entry by entry).
ComplexMatrix random_structured(int n, StructureClass s, Rng& rng,
                                double scale = 1.0);

// Random density matrix: Hermitian, positive semi-definite, unit trace.
ComplexMatrix random_density(int n, Rng& rng);

// Random Hermitian positive-definite matrix with spectrum bounded away from
// zero; safe argument for log.
ComplexMatrix random_hpd(int n, Rng& rng);

std::vector<cxd> random_vector(int n, Rng& rng, double scale = 1.0);

}  // namespace wirt
