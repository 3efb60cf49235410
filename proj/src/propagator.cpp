#include "cfq/propagator.hpp"

#include <cmath>

#include "cfq/state_vector.hpp"

namespace cfq {

cxd exact_propagator(const FockOperator& H, double T, const PhasePoint& x_end,
                     const PhasePoint& x_start, const FockTolerances& tol,
                     Warnings* warnings) {
    const StateVector start = coherent_state(H.space(), x_start, tol, warnings);
    const StateVector end = coherent_state(H.space(), x_end, tol, warnings);
    const StateVector evolved = evolve(H, T, start, 1e-10);
    return overlap(end, evolved);
}

cxd exact_propagator(const SpectralPropagator& prop, double T, const PhasePoint& x_end,
                     const PhasePoint& x_start, const FockTolerances& tol,
                     Warnings* warnings) {
    const StateVector start = coherent_state(prop.space(), x_start, tol, warnings);
    const StateVector end = coherent_state(prop.space(), x_end, tol, warnings);
    return end.vector().dot(prop.evolve(T, start.vector()));
}

cxd coherent_overlap_closed_form(const PhasePoint& x_end, const PhasePoint& x_start) {
    if (x_end.dof() != x_start.dof())
        throw DimensionError("coherent_overlap_closed_form: dof mismatch");
    double re = 0.0, im = 0.0;
    for (int j = 0; j < x_end.dof(); ++j) {
        const double dp = x_end.p[j] - x_start.p[j];
        const double dq = x_end.q[j] - x_start.q[j];
        re += -0.25 * (dp * dp + dq * dq);
        im += 0.5 * (x_start.p[j] + x_end.p[j]) * dq;
    }
    return std::exp(cxd(re, im));
}

}  // namespace cfq
