// Quantum side of the constraint machinery: Hermitian constraint operators
// from linear-in-momentum classical constraints (symmetrized ordering is
// built in; for antisymmetric rotation coefficients the symmetrization is
// inert because the paired factors live on different modes), the group
// averaging projector E = sum_k w_k exp(i xi_k Phi) for the compact U(1)
// direction, projected propagators in their three equivalent forms, coherent
// label transport against the classical gauge flow, and the two
// constraint-averaged propagators (deterministic label average and
// stochastic multiplier-process average).
#pragma once

#include <cstdint>

#include "cfq/classical_flow.hpp"
#include "cfq/coherent.hpp"
#include "cfq/constraints.hpp"
#include "cfq/linalg.hpp"

namespace cfq {

// ---------------------------------------------------------------------------
// Constraint operators

// coeff * (prod_k Q_k^{beta_k}) with the single momentum factor p_j (if any)
// replaced by (Q_j^{beta_j} P_j + P_j Q_j^{beta_j})/2 at its own mode.
// Momentum degree above one is rejected: the linear rule does not cover it.
SpMat quantize_linear_symbol(const FockSpace& space, const PolySymbol& phi);

struct QuantumConstraintSet {
    FockSpace space;
    ConstraintSet classical;
    std::vector<SpMat> ops;                // Hermitian constraint operators
    ClassificationReport classical_report; // classified against h = 0
    double hermiticity_defect = 0.0;       // max over operators
    double closure_defect = 0.0;  // low block: [Phi_a,Phi_b] - i c_ab^c Phi_c
    bool flagged = false;         // closure defect above tolerance, or not first class
};

QuantumConstraintSet quantize_constraints(const FockSpace& space, const ConstraintSet& set,
                                          double closure_tol = 1e-8);

// sum_a omega_a Phi_a
SpMat weighted_generator(const QuantumConstraintSet& qset, const std::vector<double>& omega);

// Low-block defect of  [Phi_a, H] - i sum_b mixing[a][b] Phi_b  (maximum over a).
double quantum_mixing_defect(const QuantumConstraintSet& qset, const Mat& H,
                             const std::vector<std::vector<double>>& mixing);

// ---------------------------------------------------------------------------
// Group averaging

struct GroupQuadrature {
    std::vector<double> nodes;    // group parameters xi_k
    std::vector<double> weights;  // positive, sum to one
};

// K-point uniform rule on [0, 2 pi): xi_k = 2 pi k / K, w_k = 1/K.
GroupQuadrature u1_quadrature(int points);

struct ProjectorResult {
    Mat E;                      // sum_k w_k exp(i xi_k Phi)
    int group_points = 0;
    int required_points = 0;    // resolves every integer charge in the spectrum
    bool sufficient = false;    // group_points >= required_points
    double idempotency_defect = 0.0;   // low block, max |(E^2 - E)_mn|
    double hermiticity_defect = 0.0;   // low block, max |(E - E^dag)_mn|
    double max_integer_distance = 0.0; // spectrum distance to integers (clipped
                                       // occupation sectors push this up; such
                                       // eigenvectors have no low-block support)
};

ProjectorResult build_projector(const FockOperator& Phi, const GroupQuadrature& quad);

// Spectral oracle: sum of eigenprojectors of Phi with |eigenvalue| < window.
Mat zero_charge_projector(const FockOperator& Phi, double window = 0.5);

// max over the shifts of the low-block defect of exp(i tau Phi) E - E.
double shift_absorption_defect(const FockOperator& Phi, const Mat& E,
                               const std::vector<double>& taus);

// ---------------------------------------------------------------------------
// Projected propagation

struct ProjectedPropagatorResult {
    cxd value = 0.0;                // <x''| exp(-iHT) E |x'>
    double form_disagreement = 0.0; // max pairwise difference of the three forms
    double commutator_defect = 0.0; // low-block max |[H, E]_mn|
};

// Evaluates <x''|exp(-iHT)E|x'> and cross-checks the equivalent forms
// E U E and E exp(-i EHE T) E; rejects generators that fail to commute with
// E on the low block (the first-class compatibility precondition).
ProjectedPropagatorResult projected_propagator(const FockOperator& H, const Mat& E,
                                               double T, const PhasePoint& x_end,
                                               const PhasePoint& x_start,
                                               double commutator_tol = 1e-8,
                                               const FockTolerances& tol = {},
                                               Warnings* warnings = nullptr);

// ---------------------------------------------------------------------------
// Coherent label transport

struct TransportResult {
    cxd overlap = 0.0;      // <flowed-label coherent | exp(i sum omega_a Phi_a) | x>
    double fidelity = 0.0;  // |overlap| with both vectors normalized
    PhasePoint flowed;      // label produced by the classical gauge flow
};

TransportResult coherent_transport_check(const QuantumConstraintSet& qset,
                                         const std::vector<double>& omega,
                                         const PhasePoint& x, int flow_steps = 4096,
                                         const FockTolerances& tol = {},
                                         Warnings* warnings = nullptr);

// ---------------------------------------------------------------------------
// Constraint-averaged propagators

// Deterministic label average  sum_k w_k <x''| exp(-iHT) |flow(xi_k) x'>
// over the group quadrature; equals <x''|exp(-iHT)E|x'> when the rule is
// exact for the spectrum.
cxd label_average_propagator(const FockOperator& H, const ConstraintSet& set,
                             const GroupQuadrature& quad, double T,
                             const PhasePoint& x_end, const PhasePoint& x_start,
                             int flow_steps = 4096, const FockTolerances& tol = {},
                             Warnings* warnings = nullptr);

struct MultiplierMeasure {
    double gamma = 1.0;       // diffusion constant of the multiplier path
    int period_multiplier = 0; // n with n*T integral; 0 = smallest such n <= 64
    int time_steps = 0;        // multiplier-path resolution; 0 = auto
    int deterministic_theta_nodes = 0;  // > 0: uniform offset grid, gamma must be 0
};

struct MultiplierAverageResult {
    cxd mean = 0.0;
    double std_error = 0.0;
    bool unreliable = false;
    long n_samples = 0;
    int period_multiplier = 0;
    int time_steps = 0;
};

// Multiplier-process average: lambda(t) = theta0 + W_gamma(t) with theta0
// uniform on [-pi n, pi n) and n T integral, so that the accumulated group
// angle tau = sum_l lambda_l eps is exactly uniform modulo 2 pi and the
// charged sectors average to zero at any path resolution.  H and Phi must
// commute: the evolution is evaluated in a simultaneous eigenbasis (built by
// re-diagonalizing H inside each Phi eigenspace) and the residual
// off-diagonal part of H is rejected above commute_tol.
MultiplierAverageResult multiplier_average_propagator(
    const FockOperator& H, const FockOperator& Phi, double T, const PhasePoint& x_end,
    const PhasePoint& x_start, long n_samples, std::uint64_t seed,
    const MultiplierMeasure& measure = {}, double commute_tol = 1e-8,
    const FockTolerances& tol = {}, Warnings* warnings = nullptr);

}  // namespace cfq
