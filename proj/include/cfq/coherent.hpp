// Canonical coherent states on the truncated space.  The production
// construction applies the truncated unitaries exp(-i q P) exp(i p Q) to the
// vacuum, mode by mode; the closed-form ladder amplitudes (the same state
// written out analytically and projected onto the occupation window) serve as
// an independent oracle and as the sampling path for far-out quadrature
// nodes where truncated exponentials would be meaningless.
#pragma once

#include "cfq/linalg.hpp"

namespace cfq {

// exp(-i q_j P_j) exp(i p_j Q_j) |0>, tensored across modes.
StateVector coherent_state(const FockSpace& space, const PhasePoint& x,
                           const FockTolerances& tol = {}, Warnings* warnings = nullptr);

// Closed-form amplitudes of the same state: per mode, with z = (q+ip)/sqrt(2),
//   <n|p,q> = exp(-i p q / 2) exp(-|z|^2/2) z^n / sqrt(n!).
// Valid for any label size (it is the exact projection onto the window).
StateVector coherent_state_closed_form(const FockSpace& space, const PhasePoint& x);

// Norm defect 1 - ||psi|| of the truncated coherent state at x.
double coherent_norm_defect(const FockSpace& space, const PhasePoint& x);

}  // namespace cfq
