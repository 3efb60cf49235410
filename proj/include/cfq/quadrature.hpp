// Gaussian quadrature rules built by the Golub-Welsch eigenvalue method, and
// phase-space rules tuned to integrals of the form
//     integral  F(p, q)  dp dq / (2 pi)
// where F carries the coherent-state Gaussian envelope exp(-(p^2+q^2)/2).
// Two independent constructions are provided: a polar rule (Gauss-Laguerre in
// the radial action u = (p^2+q^2)/2 times a uniform angular grid) and a
// Cartesian rule (tensor Gauss-Hermite).  Both have strictly positive weights
// and documented exactness windows so that finite sums are exact, not merely
// approximate, on the integrands that arise from a truncated Fock space.
#pragma once

#include <vector>

#include "cfq/common.hpp"

namespace cfq {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Nodes/weights for integral_0^inf e^{-x} f(x) dx, exact for deg f <= 2n-1.
GaussRule gauss_laguerre(int order);

// Nodes/weights for integral_R e^{-x^2} f(x) dx, exact for deg f <= 2n-1.
GaussRule gauss_hermite(int order);

// A single-mode phase-space rule: sum_i w_i F(p_i, q_i) for the measure
// dp dq/(2 pi), with w_i > 0.  The Gaussian envelope is folded into the
// weights (they include the exp(+u) rescaling), so F is evaluated as-is.
struct ModeRule {
    std::vector<double> p;
    std::vector<double> q;
    std::vector<double> w;
    std::size_t size() const { return w.size(); }
};

struct PhaseQuadrature {
    int radial_order = 0;    // Gauss-Laguerre points (polar) or Hermite points per axis
    int angular_points = 0;  // uniform angular grid size (polar rule only)
    ModeRule mode;

    // True when the rule integrates exactly every product
    //   e^{-u} z^m conj(z)^n  *  (monomial in p,q of total degree <= sym_degree)
    // with 0 <= m, n < fock_cutoff.
    bool exact_for_polar(int fock_cutoff, int sym_degree) const;
    bool exact_for_cartesian(int fock_cutoff, int sym_degree) const;
};

// Polar rule: u-nodes from Gauss-Laguerre, K equally spaced angles.
// Weight w = glw * e^{u} / K at (p, q) = (sqrt(2u) sin t, sqrt(2u) cos t),
// matching z = (q + i p)/sqrt(2) = sqrt(u) e^{i t}.
PhaseQuadrature polar_phase_rule(int radial_order, int angular_points);

// Cartesian rule: tensor Gauss-Hermite, node (p,q) = (sqrt2 s_i, sqrt2 t_j),
// weight ghw_i ghw_j e^{s_i^2 + t_j^2} / pi.
PhaseQuadrature cartesian_phase_rule(int order_per_axis);

// Smallest parameters guaranteed exact for the given cutoff and symbol degree.
PhaseQuadrature default_phase_rule(int fock_cutoff, int sym_degree);

}  // namespace cfq
