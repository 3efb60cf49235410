// Classical flows: RK4 integration of the multiplier-extended Hamiltonian
// h + lambda^a(t) phi_a, and the finite gauge map generated by a first-class
// set (the flow dx/ds = Omega^a {phi_a, x} integrated over s in [0,1], which
// for rotation generators reproduces the closed-form rotation matrices).
#pragma once

#include <functional>

#include "cfq/constraints.hpp"

namespace cfq {

using MultiplierSchedule = std::function<double(double)>;

struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> points;
    std::vector<std::vector<double>> constraint_values;  // per node, per constraint
    std::vector<std::vector<double>> multiplier_values;  // per node, per constraint
};

struct FlowOptions {
    double blow_up_norm = 1e6;
    int record_stride = 1;  // record every k-th node (endpoints always kept)
};

Trajectory constrained_flow(const PolySymbol& h, const ConstraintSet& set,
                            const PhasePoint& x0,
                            const std::vector<MultiplierSchedule>& lambdas, double T,
                            double dt, const FlowOptions& opt = {});

// Finite gauge transformation of labels: integrate dx/ds = Omega^a {phi_a, x}
// from s=0 to s=1.  Constraints must be at most linear in every momentum.
PhasePoint gauge_flow(const ConstraintSet& set, const std::vector<double>& Omega,
                      const PhasePoint& x, int steps = 512);

// Trajectory export: one row per node, "t, p_1.., q^1.., phi_1.., lambda_1..".
void write_trajectory_csv(const Trajectory& traj, const std::string& path,
                          const std::string& header_comment = "");

}  // namespace cfq
