// Monte-Carlo evaluation of the Wiener-regularized coherent-state propagator:
// pinned Brownian bridges in both phase-space coordinates, a midpoint-rule
// phase per path, and the deterministic mass/prefactor of the pinned measure
// applied analytically,
//   raw = (e^{nu T/2} / (nu T))^N  e^{-||Delta||^2/(2 nu T)}  E[ e^{i phi} ],
//   phi = strat int p dq - sum_l h(midpoint_l) eps.
// The calibrated value divides out the exact h = 0 coincident-endpoint raw
// amplitude of the same L-step discretization (discrete_h0_normalization
// below, which tends to (1 - e^{-nu T})^{-1} per mode as L grows).  The
// lattice route calibrates against its own h = 0 diagonal, which converges
// to the same constant under grid refinement, so the two calibrated values
// estimate the same quantity up to grid bias and sampling error.
#pragma once

#include <cstdint>

#include "cfq/poly_symbol.hpp"

namespace cfq {

struct McEstimate {
    cxd mean = 0.0;          // estimated amplitude (raw or calibrated)
    double std_error = 0.0;  // standard error of the complex mean, same scale
    bool unreliable = false; // std_error exceeds half the estimated modulus
    long n_paths = 0;
};

// Path i is drawn from seed splitmix64(seed ^ i); the estimate is a pure
// function of (h, nu, T, L, endpoints, n_paths, seed).
McEstimate mc_estimate(const PolySymbol& h, double nu, double T, int L,
                       const PhasePoint& x_end, const PhasePoint& x_start,
                       long n_paths, std::uint64_t seed, bool calibrated = true,
                       Warnings* warnings = nullptr);

// Exact h = 0 coincident-endpoint raw amplitude of the L-step discretization,
// per mode.  Conditioning the midpoint phase sum(p_bar dq) on the p bridge
// leaves a Gaussian q average, and the remaining p average is a determinant:
//   N_L = (e^{nu T/2} / (nu T)) det(I + nu eps C (A - 11^T/L))^{-1/2},
// with C the pinned-bridge covariance and A = tridiag(1/4, 1/2, 1/4).
// N_L -> 1/(1 - e^{-nu T}) as L -> infinity, and the lattice h0_diagonal
// converges to N_L under grid refinement.  Cost is cubic in L (dense LU),
// negligible next to the path sampling it normalizes.
double discrete_h0_normalization(double nu, double T, int L);

}  // namespace cfq
