// The exact matrix-element oracle <x''| exp(-i H T) |x'> on the truncated
// space, against which the lattice and Monte Carlo path-integral evaluations
// are compared.
#pragma once

#include "cfq/coherent.hpp"

namespace cfq {

cxd exact_propagator(const FockOperator& H, double T, const PhasePoint& x_end,
                     const PhasePoint& x_start, const FockTolerances& tol = {},
                     Warnings* warnings = nullptr);

// Same, reusing a cached eigendecomposition (for sweeps).
cxd exact_propagator(const SpectralPropagator& prop, double T, const PhasePoint& x_end,
                     const PhasePoint& x_start, const FockTolerances& tol = {},
                     Warnings* warnings = nullptr);

// Closed-form overlap of two coherent states (all modes):
//   <x''|x'> = exp{ -1/4 ||x''-x'||^2 + (i/2) sum_j (p_j'+p_j'') (q_j''-q_j') }.
// Exact in the untruncated theory; used as the T=0 reference.
cxd coherent_overlap_closed_form(const PhasePoint& x_end, const PhasePoint& x_start);

}  // namespace cfq
