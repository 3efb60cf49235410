// The anti-Wick (antinormal-ordering) quantization map
//     h(p,q)  ->  integral  h(p,q) |p,q><p,q|  dp dq / (2 pi)   (per mode)
// with two independent backends:
//   * combinatorial: expand each monomial in (z, conj z), z = (q+ip)/sqrt2,
//     and place every annihilation factor to the LEFT of every creation
//     factor; matrix elements of a^n (adag)^m are filled from the exact
//     closed-form square-root products, so the result is the projection of
//     the untruncated operator onto the Fock window;
//   * quadrature: a positive-weight phase-space rule applied to coherent
//     projectors built from closed-form amplitudes (also an exact window
//     projection whenever the rule's exactness window covers the integrand).
// Also: lower (diagonal coherent-expectation) symbols, the resolution-of-
// identity defect report, and action-angle-labeled states carrying the
// generating-function phase.
#pragma once

#include <functional>

#include "cfq/coherent.hpp"
#include "cfq/fock_operator.hpp"
#include "cfq/poly_symbol.hpp"
#include "cfq/quadrature.hpp"

namespace cfq {

// Combinatorial backend.
FockOperator anti_wick(const FockSpace& space, const PolySymbol& h);

// Quadrature backend; the rule is applied mode by mode (the multi-mode sum
// factorizes exactly over modes for a product rule).
FockOperator anti_wick_quadrature(const FockSpace& space, const PolySymbol& h,
                                  const PhaseQuadrature& rule);

// Runs both backends with an automatically sized rule and verifies low-block
// agreement; throws DomainError with the measured deviation on mismatch.
FockOperator anti_wick_checked(const FockSpace& space, const PolySymbol& h,
                               double agreement_tol = 1e-8);

// Diagonal coherent-state expectation <x|A|x> (unit-norm production state).
cxd lower_symbol(const FockOperator& A, const PhasePoint& x,
                 const FockTolerances& tol = {}, Warnings* warnings = nullptr);

struct ResolutionReport {
    double low_block_deviation = 0.0;  // max |entry - identity| over the low block
    double full_deviation = 0.0;       // same over the whole matrix
};

// Assembles sum_k w_k |x_k><x_k| from the rule (tensored over modes) and
// reports the deviation from the identity.
ResolutionReport resolution_check(const FockSpace& space, const PhaseQuadrature& rule);

// |r,s> = e^{-iG(r,s)} |p(r,s), q(r,s)>, the coherent state relabeled by
// action-angle coordinates; G = r cos(s) sin(s).  Single mode.
StateVector transformed_state(const FockSpace& space, double r, double s,
                              const FockTolerances& tol = {}, Warnings* warnings = nullptr);

// Quantization driven by the (r,s) labels: sum over an (r = action) x
// (s = angle) grid of  w * hbar(r,s) * |r,s><r,s|  with the same Laguerre x
// uniform rule as the polar phase rule (the Jacobian dr ds = dp dq is 1).
// The G-phases are applied to the states and cancel in the projectors; the
// assembled operator must match the Cartesian construction.
FockOperator anti_wick_action_angle(const FockSpace& space,
                                    const std::function<double(double, double)>& hbar,
                                    int radial_order, int angular_points);

}  // namespace cfq
